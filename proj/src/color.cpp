#include "lfsr/color.hpp"

#include <algorithm>

namespace lfsr {

namespace {
constexpr double kR = 0.299;
constexpr double kG = 0.587;
constexpr double kB = 0.114;
constexpr double kCb = 2.0 * (1.0 - kB);  // 1.772
constexpr double kCr = 2.0 * (1.0 - kR);  // 1.402
}  // namespace

ColorImage ycbcr_from_rgb(const ColorImage& rgb) {
  rgb.validate();
  if (rgb.space != ColorSpace::Rgb) throw DimensionError("ycbcr_from_rgb expects an RGB image");
  const int w = rgb.width();
  const int h = rgb.height();
  ColorImage out{ColorSpace::YCbCr, {ImageGrid(w, h), ImageGrid(w, h), ImageGrid(w, h)}};
  auto r = rgb.channels[0].samples();
  auto g = rgb.channels[1].samples();
  auto b = rgb.channels[2].samples();
  auto y = out.channels[0].samples();
  auto cb = out.channels[1].samples();
  auto cr = out.channels[2].samples();
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double luma = kR * r[i] + kG * g[i] + kB * b[i];
    y[i] = luma;
    cb[i] = 0.5 + (b[i] - luma) / kCb;
    cr[i] = 0.5 + (r[i] - luma) / kCr;
  }
  return out;
}

ColorImage rgb_from_ycbcr(const ColorImage& ycc) {
  ycc.validate();
  if (ycc.space != ColorSpace::YCbCr) throw DimensionError("rgb_from_ycbcr expects a YCbCr image");
  const int w = ycc.width();
  const int h = ycc.height();
  ColorImage out{ColorSpace::Rgb, {ImageGrid(w, h), ImageGrid(w, h), ImageGrid(w, h)}};
  auto y = ycc.channels[0].samples();
  auto cb = ycc.channels[1].samples();
  auto cr = ycc.channels[2].samples();
  auto r = out.channels[0].samples();
  auto g = out.channels[1].samples();
  auto b = out.channels[2].samples();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double red = y[i] + kCr * (cr[i] - 0.5);
    const double blue = y[i] + kCb * (cb[i] - 0.5);
    const double green = (y[i] - kR * red - kB * blue) / kG;
    r[i] = std::clamp(red, 0.0, 1.0);
    g[i] = std::clamp(green, 0.0, 1.0);
    b[i] = std::clamp(blue, 0.0, 1.0);
  }
  return out;
}

}  // namespace lfsr
