#pragma once

#include "lfsr/image.hpp"

namespace lfsr {

inline constexpr int kDefaultCrop = 8;

struct QualityReport {
  double psnr = 0.0;  // dB, +inf for identical images
  double ssim = 0.0;
  int crop_border = kDefaultCrop;
};

// 10 log10(1 / MSE) over the image with `crop` pixels removed on every side. Data range [0,1].
double psnr(const ImageGrid& a, const ImageGrid& b, int crop = kDefaultCrop);

// Mean SSIM (11x11 Gaussian window, sigma 1.5, K1 = 0.01, K2 = 0.03, L = 1) over every window
// position fully inside the cropped region.
double ssim(const ImageGrid& a, const ImageGrid& b, int crop = kDefaultCrop);

QualityReport evaluate(const ImageGrid& a, const ImageGrid& b, int crop = kDefaultCrop);

}  // namespace lfsr
