#include "psfcdl/tile_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace psfcdl {
namespace {

constexpr const char* kMagic = "PSFCDL-TILE";

void rename_into_place(const std::filesystem::path& tmp,
                       const std::filesystem::path& path) {
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("rename failed for " + path.string() + ": " +
                             ec.message());
  }
}

}  // namespace

void write_tile(const std::filesystem::path& path, const RealGrid& samples,
                std::map<std::string, std::string> header) {
  std::ostringstream head;
  head << kMagic << " 1\n";
  head << "height " << samples.rows() << "\n";
  head << "width " << samples.cols() << "\n";
  head << "dtype float32le\n";
  for (const auto& [k, v] : header) {
    if (k == "height" || k == "width" || k == "dtype") continue;
    head << k << " " << v << "\n";
  }
  // Pad so the header (including the terminating blank line) is a multiple
  // of 64 bytes and the payload starts aligned.
  std::string h = head.str();
  size_t pad = (64 - (h.size() + 6) % 64) % 64;  // "pad " + padding + "\n\n"
  h += "pad " + std::string(pad, '.') + "\n\n";

  std::vector<float> payload(samples.size());
  for (Eigen::Index i = 0; i < samples.size(); ++i)
    payload[static_cast<size_t>(i)] = static_cast<float>(samples.data()[i]);

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * sizeof(float)));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  rename_into_place(tmp, path);
}

TileFile read_tile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());

  TileFile tile;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) break;
    std::istringstream ls(line);
    std::string key, value;
    ls >> key;
    std::getline(ls, value);
    if (!value.empty() && value.front() == ' ') value.erase(0, 1);
    if (first) {
      if (key != kMagic)
        throw IoError(path.string() + ": not a tile file");
      first = false;
      continue;
    }
    if (key == "pad") continue;
    tile.header[key] = value;
  }
  if (!tile.header.count("height") || !tile.header.count("width"))
    throw IoError(path.string() + ": missing dimensions");
  Eigen::Index rows = std::stol(tile.header.at("height"));
  Eigen::Index cols = std::stol(tile.header.at("width"));
  if (rows < 1 || cols < 1)
    throw IoError(path.string() + ": bad dimensions");

  std::vector<float> payload(static_cast<size_t>(rows) * cols);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(payload.size() * sizeof(float)));
  if (in.gcount() !=
      static_cast<std::streamsize>(payload.size() * sizeof(float)))
    throw IoError(path.string() + ": truncated payload");

  tile.samples.resize(rows, cols);
  for (Eigen::Index i = 0; i < tile.samples.size(); ++i)
    tile.samples.data()[i] = payload[static_cast<size_t>(i)];
  return tile;
}

void write_fits(const std::filesystem::path& path, const RealGrid& samples) {
  auto card = [](std::string text) {
    text.resize(80, ' ');
    return text;
  };
  std::ostringstream head;
  head << card("SIMPLE  =                    T");
  head << card("BITPIX  =                  -32");
  head << card("NAXIS   =                    2");
  head << card("NAXIS1  = " + std::to_string(samples.cols()));
  head << card("NAXIS2  = " + std::to_string(samples.rows()));
  head << card("END");
  std::string h = head.str();
  h.resize((h.size() + 2879) / 2880 * 2880, ' ');

  // FITS stores big-endian floats, bottom row first.
  std::vector<char> payload;
  payload.reserve(static_cast<size_t>(samples.size()) * 4);
  for (Eigen::Index r = samples.rows() - 1; r >= 0; --r) {
    for (Eigen::Index c = 0; c < samples.cols(); ++c) {
      float f = static_cast<float>(samples(r, c));
      char b[4];
      std::memcpy(b, &f, 4);
      payload.push_back(b[3]);
      payload.push_back(b[2]);
      payload.push_back(b[1]);
      payload.push_back(b[0]);
    }
  }
  payload.resize((payload.size() + 2879) / 2880 * 2880, 0);

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  }
  rename_into_place(tmp, path);
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
  }
  rename_into_place(tmp, path);
}

}  // namespace psfcdl
