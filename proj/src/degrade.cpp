#include "lfsr/degrade.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "lfsr/color.hpp"
#include "lfsr/parallel.hpp"
#include "lfsr/resample.hpp"

namespace lfsr {

void NoiseParams::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw RangeError("noise sigma must be finite and >= 0");
  if (!(impulse_percent >= 0.0) || impulse_percent > 100.0)
    throw RangeError("impulse percentage must lie in [0, 100]");
}

ImageGrid add_gaussian_noise(const ImageGrid& x, double sigma, CounterRng& rng) {
  if (!(sigma >= 0.0)) throw RangeError("noise sigma must be >= 0");
  if (sigma == 0.0) return x;
  ImageGrid out = x;
  const double scale = sigma / 255.0;
  for (double& v : out.samples()) v = std::clamp(v + scale * rng.normal(), 0.0, 1.0);
  return out;
}

std::size_t impulse_count(std::size_t pixels, double percent) {
  return static_cast<std::size_t>(std::floor(percent * static_cast<double>(pixels) / 100.0));
}

ImageGrid add_impulse_noise(const ImageGrid& x, double percent, CounterRng& rng) {
  if (!(percent >= 0.0) || percent > 100.0) throw RangeError("impulse percentage must lie in [0, 100]");
  const std::size_t n = x.size();
  const std::size_t count = impulse_count(n, percent);
  if (count == 0) return x;
  ImageGrid out = x;
  auto s = out.samples();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `count` slots become a uniform sample without replacement.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(order[i], order[j]);
    s[order[i]] = (rng.next_u64() >> 63) ? 1.0 : 0.0;
  }
  return out;
}

ImageGrid add_mixed_noise(const ImageGrid& x, const NoiseParams& noise, CounterRng& rng) {
  noise.validate();
  return add_impulse_noise(add_gaussian_noise(x, noise.sigma, rng), noise.impulse_percent, rng);
}

ImageGrid degrade_view(const ImageGrid& x_hr, const DisparityMap& disparity, PerspectiveIndex delta, int scale,
                       const BlurKernel& kernel, const NoiseParams& noise) {
  CounterRng rng(noise.seed);
  const ImageGrid clean = downsample(blur(warp(x_hr, disparity, delta), kernel), scale);
  return clamp01(add_mixed_noise(clean, noise, rng));
}

DisparityMap prepare_disparity(const DisparityMap& ground_truth, int scale) {
  const ImageGrid& g = ground_truth.grid();
  if (scale < 1) throw RangeError("scale must be positive");
  if (g.width() % scale != 0 || g.height() % scale != 0)
    throw DimensionError("disparity size not divisible by scale " + std::to_string(scale));
  if (scale == 1) return ground_truth;
  const ImageGrid low = bicubic_resample(g, g.width() / scale, g.height() / scale);
  return DisparityMap(bicubic_resample(low, g.width(), g.height()));
}

ChannelStack degrade_lightfield(std::span<const ImageGrid> hr_channels, const DisparityMap& ground_truth,
                                      const DegradeSettings& s) {
  if (hr_channels.size() != 1 && hr_channels.size() != 3) throw DimensionError("expected 1 or 3 channels");
  for (const auto& c : hr_channels) {
    require_same_shape(hr_channels[0], c, "degrade_lightfield channels");
    require_same_shape(hr_channels[0], ground_truth.grid(), "degrade_lightfield disparity");
  }
  s.noise.validate();
  Dimensions::from_hr(hr_channels[0].width(), hr_channels[0].height(), s.scale);

  auto positions = select_views(s.grid_size, s.pattern, s.arm);
  if (s.max_views > 0 && s.max_views < positions.size()) positions.resize(s.max_views);

  ChannelStack lf;
  lf.grid_size = s.grid_size;
  lf.scale = s.scale;
  lf.reference = 0;
  lf.views.resize(positions.size());
  const DisparityMap prepared = prepare_disparity(ground_truth, s.scale);

  parallel_for(positions.size(), [&](std::size_t k) {
    ChannelView& v = lf.views[k];
    v.position = positions[k];
    v.theta = perspective_of(positions[k], s.grid_size);
    v.disparity = prepared;
    CounterRng rng(s.noise.seed ^ static_cast<std::uint64_t>(k));
    for (const auto& c : hr_channels) {
      const ImageGrid clean = downsample(blur(warp(c, ground_truth, v.theta), s.kernel), s.scale);
      v.channels.push_back(clamp01(add_mixed_noise(clean, s.noise, rng)));
    }
  });
  return lf;
}

LightFieldStack luma_stack(const ChannelStack& lf) {
  LightFieldStack stack;
  stack.grid_size = lf.grid_size;
  stack.scale = lf.scale;
  stack.reference = lf.reference;
  for (const auto& v : lf.views) {
    ImageGrid y;
    if (v.channels.size() == 1) {
      y = v.channels[0];
    } else if (v.channels.size() == 3) {
      ColorImage rgb{ColorSpace::Rgb, {v.channels[0], v.channels[1], v.channels[2]}};
      y = std::move(ycbcr_from_rgb(rgb).channels[0]);
    } else {
      throw DimensionError("views must have 1 or 3 channels");
    }
    stack.views.push_back({v.position, v.theta, std::move(y), v.disparity});
  }
  stack.validate();
  return stack;
}

}  // namespace lfsr
