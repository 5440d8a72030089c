#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "lfsr/errors.hpp"

namespace lfsr {

// Single-channel real image, row-major. Nominal intensity range is [0,1].
class ImageGrid {
 public:
  ImageGrid() = default;
  ImageGrid(int width, int height, double fill = 0.0);
  ImageGrid(int width, int height, std::vector<double> samples);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  double& operator()(int x, int y) { return samples_[index(x, y)]; }
  double operator()(int x, int y) const { return samples_[index(x, y)]; }
  // Replicate-border read.
  double clamped(int x, int y) const {
    return samples_[index(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1))];
  }

  std::span<double> samples() noexcept { return samples_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::vector<double>& vector() noexcept { return samples_; }

  bool same_shape(const ImageGrid& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool all_finite() const noexcept;

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> samples_;
};

void require_same_shape(const ImageGrid& a, const ImageGrid& b, const char* context);

// Elementwise helpers used by the solvers. All require equal shapes.
double dot(const ImageGrid& a, const ImageGrid& b);
double dot(std::span<const ImageGrid> a, std::span<const ImageGrid> b);
void axpy(double alpha, const ImageGrid& x, ImageGrid& y);  // y += alpha * x
ImageGrid clamp01(ImageGrid img);

// HR/LR geometry of a super-resolution problem.
struct Dimensions {
  int lr_width = 0;
  int lr_height = 0;
  int scale = 2;

  int hr_width() const noexcept { return lr_width * scale; }
  int hr_height() const noexcept { return lr_height * scale; }
  std::size_t hr_pixels() const noexcept { return std::size_t(hr_width()) * std::size_t(hr_height()); }
  std::size_t lr_pixels() const noexcept { return std::size_t(lr_width) * std::size_t(lr_height); }

  // Validates scale in {2,3,4} (1 is admitted for degenerate test chains) and positive sizes.
  static Dimensions from_hr(int hr_width, int hr_height, int scale);
};

enum class ColorSpace { Rgb, YCbCr };

struct ColorImage {
  ColorSpace space = ColorSpace::Rgb;
  ImageGrid channels[3];

  int width() const noexcept { return channels[0].width(); }
  int height() const noexcept { return channels[0].height(); }
  void validate() const;
};

}  // namespace lfsr
