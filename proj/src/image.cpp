#include "lfsr/image.hpp"

#include <cmath>
#include <string>

namespace lfsr {

ImageGrid::ImageGrid(int width, int height, double fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw DimensionError("negative image size");
  samples_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

ImageGrid::ImageGrid(int width, int height, std::vector<double> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  if (width < 0 || height < 0) throw DimensionError("negative image size");
  if (samples_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw DimensionError("sample count does not match " + std::to_string(width) + "x" +
                         std::to_string(height));
}

bool ImageGrid::all_finite() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_shape(const ImageGrid& a, const ImageGrid& b, const char* context) {
  if (!a.same_shape(b))
    throw DimensionError(std::string(context) + ": " + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                         std::to_string(b.height()));
}

double dot(const ImageGrid& a, const ImageGrid& b) {
  require_same_shape(a, b, "dot");
  double s = 0.0;
  auto sa = a.samples();
  auto sb = b.samples();
  for (std::size_t i = 0; i < sa.size(); ++i) s += sa[i] * sb[i];
  return s;
}

double dot(std::span<const ImageGrid> a, std::span<const ImageGrid> b) {
  if (a.size() != b.size()) throw DimensionError("dot: stack length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += dot(a[k], b[k]);
  return s;
}

void axpy(double alpha, const ImageGrid& x, ImageGrid& y) {
  require_same_shape(x, y, "axpy");
  auto sx = x.samples();
  auto sy = y.samples();
  for (std::size_t i = 0; i < sx.size(); ++i) sy[i] += alpha * sx[i];
}

ImageGrid clamp01(ImageGrid img) {
  for (double& v : img.samples()) v = std::clamp(v, 0.0, 1.0);
  return img;
}

Dimensions Dimensions::from_hr(int hr_width, int hr_height, int scale) {
  if (scale < 1 || scale > 4) throw RangeError("scale factor must be in 1..4, got " + std::to_string(scale));
  if (hr_width <= 0 || hr_height <= 0) throw DimensionError("empty high-resolution grid");
  if (hr_width % scale != 0 || hr_height % scale != 0)
    throw DimensionError("high-resolution size " + std::to_string(hr_width) + "x" + std::to_string(hr_height) +
                         " is not divisible by scale " + std::to_string(scale));
  return Dimensions{hr_width / scale, hr_height / scale, scale};
}

void ColorImage::validate() const {
  if (!channels[0].same_shape(channels[1]) || !channels[0].same_shape(channels[2]))
    throw DimensionError("color channels differ in size");
}

}  // namespace lfsr
