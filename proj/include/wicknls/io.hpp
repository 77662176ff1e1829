#pragma once
#include <string>
#include <vector>

#include "wicknls/grid.hpp"

// Field snapshot format (bit-exact round trip required):
//   bytes  0..15   magic/version header: "WNLSFLD\0", u32 version (LE),
//                  u8 tag (0 physical / 1 spectral), 3 zero bytes
//   bytes 16..19   n   as little-endian u32
//   bytes 20..27   L   as little-endian f64
//   then n*n interleaved (re, im) f64 pairs, row-major.

namespace wicknls {

std::string encode_snapshot(const Field& f);  // the exact file bytes
void write_snapshot(const std::string& path, const Field& f);
Field read_snapshot(const std::string& path);

// Minimal CSV writer: header row + data rows, numbers at full precision.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Format a double with round-trip precision (%.17g).
std::string fmt_full(double x);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
bool file_exists(const std::string& path);
void ensure_dir(const std::string& path);

}  // namespace wicknls
