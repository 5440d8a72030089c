#pragma once

#include "lfsr/image.hpp"

namespace lfsr {

// Catmull-Rom bicubic resampling (a = -0.5) with replicate borders.
//
// Sampling is corner aligned: output pixel i reads source coordinate i * in / out, so an
// integer upscale by s reproduces the input exactly at every s-th output pixel. This matches
// the top-left decimation used by the degradation model. No clamping is applied to the result.
ImageGrid bicubic_resample(const ImageGrid& img, int out_width, int out_height);

// Catmull-Rom weight for a sample at signed distance t.
double catmull_rom(double t) noexcept;

}  // namespace lfsr
