#include "lfsr/scene.hpp"

#include <cmath>

#include "lfsr/color.hpp"
#include "lfsr/rng.hpp"

namespace lfsr {

namespace {

struct Rgb {
  double r, g, b;
};

void put(ColorImage& img, int x, int y, Rgb c) {
  img.channels[0](x, y) = c.r;
  img.channels[1](x, y) = c.g;
  img.channels[2](x, y) = c.b;
}

}  // namespace

SyntheticScene generate_scene(const SceneSettings& s) {
  if (s.width < 16 || s.height < 16) throw DimensionError("synthetic scenes need at least 16x16 pixels");
  const int w = s.width;
  const int h = s.height;
  ColorImage img{ColorSpace::Rgb, {ImageGrid(w, h), ImageGrid(w, h), ImageGrid(w, h)}};
  ImageGrid disp(w, h, s.background_disparity);
  CounterRng rng(s.seed);

  // Background: slow diagonal color gradient.
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double t = (x + y) / double(w + h - 2);
      put(img, x, y, {0.25 + 0.4 * t, 0.45 - 0.15 * t, 0.55 - 0.3 * t});
    }

  // Checkerboard in the top-left quadrant.
  const int cell = std::max(2, w / 16);
  for (int y = h / 16; y < h / 2 - h / 16; ++y)
    for (int x = w / 16; x < w / 2 - w / 16; ++x) {
      const bool on = ((x / cell) + (y / cell)) % 2 == 0;
      put(img, x, y, on ? Rgb{0.9, 0.85, 0.8} : Rgb{0.1, 0.15, 0.2});
    }

  // Horizontal ramp strip along the bottom.
  for (int y = h - h / 8; y < h - 1; ++y)
    for (int x = 0; x < w; ++x) {
      const double t = x / double(w - 1);
      put(img, x, y, {t, t, t});
    }

  // Text-like strokes: short horizontal and vertical bars in the bottom-left block.
  const int gx0 = w / 16;
  const int gy0 = h / 2 + h / 16;
  const int glyph = std::max(4, w / 10);
  for (int gy = 0; gy < 2; ++gy)
    for (int gx = 0; gx < 3; ++gx) {
      const int ox = gx0 + gx * (glyph + 2);
      const int oy = gy0 + gy * (glyph + 2);
      const auto pattern = rng.next_u64();
      for (int bar = 0; bar < 4; ++bar) {
        if (((pattern >> bar) & 1ULL) == 0 && bar != 0) continue;
        for (int t = 0; t < glyph; ++t) {
          int x, y;
          switch (bar) {
            case 0: x = ox + t; y = oy; break;                  // top
            case 1: x = ox + t; y = oy + glyph / 2; break;      // middle
            case 2: x = ox; y = oy + t; break;                  // left
            default: x = ox + glyph - 1; y = oy + t; break;     // right
          }
          if (x < w && y < h) put(img, x, y, {0.05, 0.05, 0.1});
        }
      }
    }

  // Foreground disk, center right.
  const double cx = 0.70 * w;
  const double cy = 0.45 * h;
  const double radius = std::min(w, h) / 6.0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      const double r = std::sqrt(dx * dx + dy * dy);
      if (r <= radius) {
        const double shade = 0.6 + 0.3 * (1.0 - r / radius);
        put(img, x, y, {shade, 0.35 * shade, 0.2});
        disp(x, y) = s.foreground_disparity;
      }
    }

  return {std::move(img), DisparityMap(std::move(disp))};
}

ImageGrid luma(const ColorImage& rgb) { return ycbcr_from_rgb(rgb).channels[0]; }

}  // namespace lfsr
