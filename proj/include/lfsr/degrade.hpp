#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lfsr/image.hpp"
#include "lfsr/lightfield.hpp"
#include "lfsr/operators.hpp"
#include "lfsr/rng.hpp"

namespace lfsr {

struct NoiseParams {
  double sigma = 0.0;            // Gaussian std on the 0-255 scale
  double impulse_percent = 0.0;  // salt-and-pepper fraction, percent of pixels
  std::uint64_t seed = 0;

  void validate() const;
};

// x + n/255 with n ~ N(0, sigma^2), clamped to [0,1]. sigma = 0 returns x untouched.
ImageGrid add_gaussian_noise(const ImageGrid& x, double sigma, CounterRng& rng);
// floor(percent * n / 100) distinct pixels, each set to 0 or 1 with probability 1/2.
ImageGrid add_impulse_noise(const ImageGrid& x, double percent, CounterRng& rng);
std::size_t impulse_count(std::size_t pixels, double percent);

// Gaussian then impulse noise, drawn from a single stream.
ImageGrid add_mixed_noise(const ImageGrid& x, const NoiseParams& noise, CounterRng& rng);

// D B W_k x followed by mixed noise (stream seeded with noise.seed as given).
ImageGrid degrade_view(const ImageGrid& x_hr, const DisparityMap& disparity, PerspectiveIndex delta, int scale,
                       const BlurKernel& kernel, const NoiseParams& noise);

// Bicubic down by scale then back up, emulating disparity estimated at low resolution.
DisparityMap prepare_disparity(const DisparityMap& ground_truth, int scale);

struct DegradeSettings {
  int grid_size = 3;
  ViewPattern pattern = ViewPattern::Star;
  int arm = 1;
  std::size_t max_views = 0;  // 0 keeps the whole pattern; otherwise its first max_views
  int scale = 2;
  BlurKernel kernel = gaussian_psf(2);
  NoiseParams noise;
};

// A stack whose views keep all color channels (1 gray or 3 RGB). This is what lives on disk.
struct ChannelView {
  GridPosition position;
  PerspectiveIndex theta;
  std::vector<ImageGrid> channels;  // LR
  DisparityMap disparity;           // HR, handed to the solver
};

struct ChannelStack {
  int grid_size = 1;
  int scale = 1;
  std::size_t reference = 0;
  std::vector<ChannelView> views;

  std::size_t channel_count() const { return views.empty() ? 0 : views.front().channels.size(); }
};

// Simulates every selected view from the HR reference channels and the true disparity; the
// stored disparity is prepare_disparity(ground_truth). View k (selection order, reference
// first) draws its noise from CounterRng(seed ^ k); channels are processed in order.
ChannelStack degrade_lightfield(std::span<const ImageGrid> hr_channels, const DisparityMap& ground_truth,
                                      const DegradeSettings& settings);

// Single-channel solver stack: the gray channel, or the BT.601 luma of RGB views.
LightFieldStack luma_stack(const ChannelStack& stack);

}  // namespace lfsr
