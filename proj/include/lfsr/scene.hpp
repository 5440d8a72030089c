#pragma once

#include <cstdint>

#include "lfsr/image.hpp"
#include "lfsr/lightfield.hpp"

namespace lfsr {

struct SyntheticScene {
  ColorImage color;        // RGB ground truth of the reference view
  DisparityMap disparity;  // ground-truth disparity on the same grid
};

struct SceneSettings {
  int width = 64;
  int height = 64;
  double background_disparity = 1.0;
  double foreground_disparity = 2.0;
  std::uint64_t seed = 1;
};

// Smooth background, a checkerboard patch, a ramp strip, text-like strokes and a
// foreground disk that sits at a larger disparity than the rest.
SyntheticScene generate_scene(const SceneSettings& settings);

// BT.601 luma of an RGB image.
ImageGrid luma(const ColorImage& rgb);

}  // namespace lfsr
