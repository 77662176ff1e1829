#include "wicknls/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wicknls/errors.hpp"

namespace wicknls {

namespace {

constexpr char kMagic[8] = {'W', 'N', 'L', 'S', 'F', 'L', 'D', '\0'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& os, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& os, double x) {
  uint64_t v;
  std::memcpy(&v, &x, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  double x;
  std::memcpy(&x, &v, 8);
  return x;
}

}  // namespace

std::string encode_snapshot(const Field& f) {
  std::ostringstream os(std::ios::binary);
  os.write(kMagic, 8);
  put_u32(os, kVersion);
  unsigned char tag_pad[4] = {static_cast<unsigned char>(f.tag == Tag::spectral ? 1 : 0), 0, 0, 0};
  os.write(reinterpret_cast<const char*>(tag_pad), 4);
  put_u32(os, static_cast<uint32_t>(f.grid.n));
  put_f64(os, f.grid.L);
  for (const auto& z : f.v) {
    put_f64(os, z.real());
    put_f64(os, z.imag());
  }
  return os.str();
}

void write_snapshot(const std::string& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), "cannot open for write: " + path);
  std::string bytes = encode_snapshot(f);
  os.write(bytes.data(), std::streamsize(bytes.size()));
  require(os.good(), "write failed: " + path);
}

Field read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), "cannot open: " + path);
  char magic[8];
  is.read(magic, 8);
  require(is.good() && std::memcmp(magic, kMagic, 8) == 0, "not a field snapshot: " + path);
  uint32_t version = get_u32(is);
  require(version == kVersion, "unsupported snapshot version in " + path);
  unsigned char tag_pad[4];
  is.read(reinterpret_cast<char*>(tag_pad), 4);
  require(tag_pad[0] <= 1, "bad tag byte in " + path);
  uint32_t n = get_u32(is);
  double L = get_f64(is);
  GridSpec g{static_cast<int>(n), L};
  Field f(g, tag_pad[0] == 1 ? Tag::spectral : Tag::physical);
  for (auto& z : f.v) {
    double re = get_f64(is);
    double im = get_f64(is);
    z = {re, im};
  }
  require(is.good(), "truncated snapshot: " + path);
  return f;
}

std::string fmt_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path);
  require(os.good(), "cannot open for write: " + path);
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    require(row.size() == header.size(), "csv row width mismatch");
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt_full(row[i]);
    os << "\n";
  }
  require(os.good(), "write failed: " + path);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), "cannot open for write: " + path);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  require(os.good(), "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), "cannot open: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

bool file_exists(const std::string& path) { return std::filesystem::exists(path); }

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  require(!ec, "cannot create directory: " + path);
}

}  // namespace wicknls
