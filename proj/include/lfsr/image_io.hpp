#pragma once

#include <filesystem>
#include <vector>

#include "lfsr/image.hpp"

namespace lfsr {

// Binary netpbm: P5 (gray) and P6 (RGB), maxval up to 65535 (16-bit samples are big-endian).
// Samples are scaled to [0,1] by maxval on load.
struct PnmImage {
  std::vector<ImageGrid> channels;  // 1 for P5, 3 for P6
  int maxval = 255;
};

PnmImage read_pnm(const std::filesystem::path& path);
// Writes P5 for one channel, P6 for three. Values are clamped to [0,1] and rounded to bits (8 or 16).
void write_pnm(const std::filesystem::path& path, const std::vector<ImageGrid>& channels, int bits = 8);
void write_pgm(const std::filesystem::path& path, const ImageGrid& img, int bits = 8);
void write_ppm(const std::filesystem::path& path, const ColorImage& rgb, int bits = 8);

// Single-channel PFM ("Pf"). Writes little-endian (negative scale); reads either byte order.
ImageGrid read_pfm(const std::filesystem::path& path);
void write_pfm(const std::filesystem::path& path, const ImageGrid& img);

// Linear map of [lo, hi] onto [0,1] for visualizing arbitrary rasters; constant images map to 1.
ImageGrid normalize_for_display(const ImageGrid& img);

}  // namespace lfsr
