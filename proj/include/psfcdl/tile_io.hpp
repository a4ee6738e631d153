#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

#include "psfcdl/grid.hpp"

namespace psfcdl {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// On-disk tile: a 64-byte-aligned text header (one `key value` pair per
// line, first line `PSFCDL-TILE 1`, terminated by a blank line), followed by
// raw little-endian float32 samples in row-major order.
struct TileFile {
  RealGrid samples;
  std::map<std::string, std::string> header;
};

void write_tile(const std::filesystem::path& path, const RealGrid& samples,
                std::map<std::string, std::string> header = {});
TileFile read_tile(const std::filesystem::path& path);

// Minimal single-HDU FITS image writer (BITPIX = -32), for interchange with
// astronomy tooling.
void write_fits(const std::filesystem::path& path, const RealGrid& samples);

// Whole-file atomic text write (temp then rename).
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace psfcdl
