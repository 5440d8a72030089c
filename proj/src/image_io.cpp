#include "lfsr/image_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace lfsr {

namespace {

std::string describe(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in, const std::filesystem::path& path) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string discard;
      std::getline(in, discard);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(c);
  }
  if (tok.empty()) throw IoError("truncated header in " + describe(path));
  return tok;
}

int header_int(std::istream& in, const std::filesystem::path& path) {
  const std::string tok = header_token(in, path);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError("malformed header value '" + tok + "' in " + describe(path));
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + describe(path));
  return out;
}

}  // namespace

PnmImage read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + describe(path));
  const std::string magic = header_token(in, path);
  int channels;
  if (magic == "P5")
    channels = 1;
  else if (magic == "P6")
    channels = 3;
  else
    throw IoError("unsupported netpbm type '" + magic + "' in " + describe(path));
  const int w = header_int(in, path);
  const int h = header_int(in, path);
  const int maxval = header_int(in, path);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) throw IoError("invalid header in " + describe(path));
  // header_token consumed exactly one whitespace byte after maxval.
  const int bytes = maxval > 255 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<unsigned char> raw(n * channels * bytes);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) throw IoError("truncated pixel data in " + describe(path));

  PnmImage img;
  img.maxval = maxval;
  for (int c = 0; c < channels; ++c) img.channels.emplace_back(w, h);
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < channels; ++c) {
      const std::size_t at = (i * channels + c) * bytes;
      const unsigned v = bytes == 2 ? (unsigned(raw[at]) << 8) | raw[at + 1] : raw[at];
      img.channels[c].samples()[i] = double(v) / maxval;
    }
  return img;
}

void write_pnm(const std::filesystem::path& path, const std::vector<ImageGrid>& channels, int bits) {
  if (channels.size() != 1 && channels.size() != 3) throw DimensionError("netpbm output needs 1 or 3 channels");
  if (bits != 8 && bits != 16) throw RangeError("netpbm bit depth must be 8 or 16");
  for (const auto& c : channels) require_same_shape(channels[0], c, "write_pnm");
  const int maxval = bits == 8 ? 255 : 65535;
  const int w = channels[0].width();
  const int h = channels[0].height();
  auto out = open_out(path);
  out << (channels.size() == 1 ? "P5" : "P6") << '\n' << w << ' ' << h << '\n' << maxval << '\n';
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<unsigned char> raw;
  raw.reserve(n * channels.size() * (bits / 8));
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& c : channels) {
      const double v = c.samples()[i];
      const double clamped = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
      const auto q = static_cast<unsigned>(std::lround(clamped * maxval));
      if (bits == 16) raw.push_back(static_cast<unsigned char>(q >> 8));
      raw.push_back(static_cast<unsigned char>(q & 0xFF));
    }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("failed writing " + describe(path));
}

void write_pgm(const std::filesystem::path& path, const ImageGrid& img, int bits) { write_pnm(path, {img}, bits); }

void write_ppm(const std::filesystem::path& path, const ColorImage& rgb, int bits) {
  rgb.validate();
  if (rgb.space != ColorSpace::Rgb) throw DimensionError("write_ppm expects an RGB image");
  write_pnm(path, {rgb.channels[0], rgb.channels[1], rgb.channels[2]}, bits);
}

ImageGrid read_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + describe(path));
  const std::string magic = header_token(in, path);
  if (magic != "Pf") throw IoError("expected a single-channel PFM ('Pf') in " + describe(path));
  const int w = header_int(in, path);
  const int h = header_int(in, path);
  const std::string scale_tok = header_token(in, path);
  double scale;
  try {
    scale = std::stod(scale_tok);
  } catch (const std::exception&) {
    throw IoError("malformed PFM scale in " + describe(path));
  }
  if (w <= 0 || h <= 0 || scale == 0.0 || !std::isfinite(scale)) throw IoError("invalid PFM header in " + describe(path));
  const bool little = scale < 0.0;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<unsigned char> raw(n * 4);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) throw IoError("truncated PFM data in " + describe(path));
  ImageGrid img(w, h);
  for (int row = 0; row < h; ++row)
    for (int x = 0; x < w; ++x) {
      const unsigned char* b = raw.data() + (static_cast<std::size_t>(row) * w + x) * 4;
      std::uint32_t bitsv = little ? (std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
                                      std::uint32_t(b[3]) << 24)
                                   : (std::uint32_t(b[3]) | std::uint32_t(b[2]) << 8 | std::uint32_t(b[1]) << 16 |
                                      std::uint32_t(b[0]) << 24);
      const float f = std::bit_cast<float>(bitsv);
      if (!std::isfinite(f)) throw IoError("non-finite sample in " + describe(path));
      img(x, h - 1 - row) = f;  // PFM rows run bottom to top
    }
  return img;
}

void write_pfm(const std::filesystem::path& path, const ImageGrid& img) {
  auto out = open_out(path);
  out << "Pf\n" << img.width() << ' ' << img.height() << "\n-1.0\n";
  std::vector<unsigned char> raw;
  raw.reserve(img.size() * 4);
  for (int row = img.height() - 1; row >= 0; --row)
    for (int x = 0; x < img.width(); ++x) {
      const auto v = std::bit_cast<std::uint32_t>(static_cast<float>(img(x, row)));
      for (int k = 0; k < 4; ++k) raw.push_back(static_cast<unsigned char>((v >> (8 * k)) & 0xFF));
    }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("failed writing " + describe(path));
}

ImageGrid normalize_for_display(const ImageGrid& img) {
  if (img.empty()) return img;
  const auto [lo, hi] = std::minmax_element(img.samples().begin(), img.samples().end());
  const double a = *lo;
  const double b = *hi;
  ImageGrid out = img;
  for (double& v : out.samples()) v = b > a ? (v - a) / (b - a) : 1.0;
  return out;
}

}  // namespace lfsr
