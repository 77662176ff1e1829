#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace wicknls {

// FIPS 180-4 SHA-256; used for manifest content hashes and resume checks.
class Sha256 {
 public:
  Sha256();
  void update(const void* data, size_t len);
  std::string hex_digest();  // finalizes; object not reusable afterwards

  static std::string of_bytes(const void* data, size_t len);
  static std::string of_string(const std::string& s);
  static std::string of_file(const std::string& path);  // throws on IO error

 private:
  void process_block(const uint8_t* p);
  uint32_t h_[8];
  uint64_t total_ = 0;
  uint8_t buf_[64];
  size_t fill_ = 0;
  bool done_ = false;
};

}  // namespace wicknls
