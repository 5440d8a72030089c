#include "lfsr/resample.hpp"

#include <cmath>
#include <vector>

namespace lfsr {

double catmull_rom(double t) noexcept {
  constexpr double a = -0.5;
  t = std::fabs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

namespace {

struct Taps {
  int base;
  double w[4];
};

std::vector<Taps> axis_taps(int in, int out) {
  std::vector<Taps> taps(out);
  const double ratio = static_cast<double>(in) / static_cast<double>(out);
  for (int i = 0; i < out; ++i) {
    const double src = i * ratio;
    const double fl = std::floor(src);
    const double f = src - fl;
    taps[i].base = static_cast<int>(fl) - 1;
    for (int k = 0; k < 4; ++k) taps[i].w[k] = catmull_rom(f - (k - 1));
  }
  return taps;
}

}  // namespace

ImageGrid bicubic_resample(const ImageGrid& img, int out_width, int out_height) {
  if (out_width < 1 || out_height < 1) throw DimensionError("bicubic_resample: empty output size");
  if (img.empty()) throw DimensionError("bicubic_resample: empty input");
  const auto tx = axis_taps(img.width(), out_width);
  const auto ty = axis_taps(img.height(), out_height);

  // Separable: horizontal pass into an out_width x in_height buffer, then vertical.
  ImageGrid rows(out_width, img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < out_width; ++x) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += tx[x].w[k] * img.clamped(tx[x].base + k, y);
      rows(x, y) = s;
    }
  ImageGrid out(out_width, out_height);
  for (int y = 0; y < out_height; ++y)
    for (int x = 0; x < out_width; ++x) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += ty[y].w[k] * rows.clamped(x, ty[y].base + k);
      out(x, y) = s;
    }
  return out;
}

}  // namespace lfsr
