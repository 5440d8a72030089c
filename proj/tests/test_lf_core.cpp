#include <gtest/gtest.h>

#include <fstream>

#include "lfsr/color.hpp"
#include "lfsr/errors.hpp"
#include "lfsr/image_io.hpp"
#include "lfsr/lightfield.hpp"
#include "lfsr/resample.hpp"
#include "lfsr/stack_io.hpp"
#include "support.hpp"

using namespace lfsr;
using namespace lfsr::test;

namespace {

ColorImage rgb_pixel(double r, double g, double b) {
  return {ColorSpace::Rgb, {ImageGrid(1, 1, r), ImageGrid(1, 1, g), ImageGrid(1, 1, b)}};
}

}  // namespace

TEST(Dimensions, HrSizeIsScaledLrSize) {
  const Dimensions d = Dimensions::from_hr(64, 48, 2);
  EXPECT_EQ(d.lr_width, 32);
  EXPECT_EQ(d.lr_height, 24);
  EXPECT_EQ(d.hr_width(), 64);
  EXPECT_EQ(d.hr_pixels(), 64u * 48u);
  EXPECT_THROW(Dimensions::from_hr(63, 48, 2), DimensionError);
  EXPECT_THROW(Dimensions::from_hr(64, 48, 5), RangeError);
}

TEST(ImageGrid, RejectsMismatchedSampleCount) {
  EXPECT_THROW(ImageGrid(2, 2, std::vector<double>(3)), DimensionError);
  ImageGrid a(2, 2), b(3, 2);
  EXPECT_THROW(dot(a, b), DimensionError);
}

TEST(Color, WhiteAndBlack) {
  const ColorImage w = ycbcr_from_rgb(rgb_pixel(1, 1, 1));
  EXPECT_NEAR(w.channels[0](0, 0), 1.0, 1e-12);
  EXPECT_NEAR(w.channels[1](0, 0), 0.5, 1e-12);
  EXPECT_NEAR(w.channels[2](0, 0), 0.5, 1e-12);
  const ColorImage k = ycbcr_from_rgb(rgb_pixel(0, 0, 0));
  EXPECT_NEAR(k.channels[0](0, 0), 0.0, 1e-12);
  EXPECT_NEAR(k.channels[1](0, 0), 0.5, 1e-12);
  EXPECT_NEAR(k.channels[2](0, 0), 0.5, 1e-12);
}

TEST(Color, InverseOfNeutralValues) {
  for (double y : {1.0, 0.5}) {
    const ColorImage ycc{ColorSpace::YCbCr, {ImageGrid(1, 1, y), ImageGrid(1, 1, 0.5), ImageGrid(1, 1, 0.5)}};
    const ColorImage rgb = rgb_from_ycbcr(ycc);
    for (const auto& c : rgb.channels) EXPECT_NEAR(c(0, 0), y, 1e-12);
  }
}

TEST(Color, RoundTripRandomImages) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 100; ++i) {
    const ColorImage rgb{ColorSpace::Rgb,
                         {random_image(7, 5, gen), random_image(7, 5, gen), random_image(7, 5, gen)}};
    const ColorImage back = rgb_from_ycbcr(ycbcr_from_rgb(rgb));
    for (int c = 0; c < 3; ++c)
      for (std::size_t j = 0; j < rgb.channels[c].size(); ++j)
        ASSERT_NEAR(back.channels[c].samples()[j], rgb.channels[c].samples()[j], 1e-6);
  }
}

TEST(Color, MismatchedChannelsThrow) {
  const ColorImage bad{ColorSpace::Rgb, {ImageGrid(2, 2), ImageGrid(2, 2), ImageGrid(3, 2)}};
  EXPECT_THROW(ycbcr_from_rgb(bad), DimensionError);
}

TEST(Bicubic, ConstantStaysConstant) {
  const ImageGrid c(9, 7, 0.37);
  for (auto [w, h] : {std::pair{18, 14}, std::pair{5, 3}, std::pair{27, 7}}) {
    const ImageGrid out = bicubic_resample(c, w, h);
    for (double v : values(out)) ASSERT_NEAR(v, 0.37, 1e-12);
  }
}

TEST(Bicubic, InterpolatesAtKnots) {
  std::mt19937_64 gen(3);
  const ImageGrid x = random_image(8, 8, gen);
  for (int z : {2, 3, 4}) {
    const ImageGrid up = bicubic_resample(x, 8 * z, 8 * z);
    // Corner-aligned: HR sample j sits at LR coordinate j * 8 / (8 z).
    for (int y = 1; y < 7; ++y)
      for (int xx = 1; xx < 7; ++xx) ASSERT_NEAR(up(xx * z, y * z), x(xx, y), 1e-6);
  }
}

TEST(Bicubic, ReproducesLinearRamp) {
  const ImageGrid lr = ramp_x(16, 8, 0.05, 0.1);
  const ImageGrid up = bicubic_resample(lr, 32, 16);
  for (int y = 2; y < 14; ++y)
    for (int x = 2; x < 28; ++x) ASSERT_NEAR(up(x, y), 0.1 + 0.05 * (x * 16.0 / 32.0), 1e-3);
}

TEST(Bicubic, EmptyOutputThrows) { EXPECT_THROW(bicubic_resample(ImageGrid(4, 4), 0, 4), DimensionError); }

TEST(SelectViews, Counts) {
  EXPECT_EQ(select_views(3, ViewPattern::Star, 1).size(), 9u);
  EXPECT_EQ(select_views(5, ViewPattern::Star, 2).size(), 17u);
  EXPECT_EQ(select_views(5, ViewPattern::Full, 0).size(), 25u);
  EXPECT_EQ(select_views(5, ViewPattern::Cross, 2).size(), 9u);
  EXPECT_EQ(select_views(1, ViewPattern::Star, 0).size(), 1u);
}

TEST(SelectViews, CenterFirstThenAxes) {
  const auto v = select_views(3, ViewPattern::Star, 1);
  EXPECT_EQ(v[0], (GridPosition{1, 1}));
  EXPECT_EQ(v[1], (GridPosition{1, 0}));
  EXPECT_EQ(v[2], (GridPosition{1, 2}));
  EXPECT_EQ(perspective_of(v[1], 3), (PerspectiveIndex{-1, 0}));
  EXPECT_EQ(perspective_of(v[3], 3), (PerspectiveIndex{0, -1}));
}

TEST(SelectViews, NoDuplicates) {
  for (auto p : {ViewPattern::Full, ViewPattern::Star, ViewPattern::Cross}) {
    auto v = select_views(7, p, 3);
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) ASSERT_FALSE(v[i] == v[j]);
  }
}

TEST(SelectViews, ArmBeyondRadiusThrows) {
  EXPECT_THROW(select_views(3, ViewPattern::Star, 2), RangeError);
  EXPECT_THROW(select_views(4, ViewPattern::Full, 0), RangeError);
  EXPECT_THROW(parse_view_pattern("ring"), RangeError);
}

TEST(LightFieldStack, ValidateCatchesInconsistentViews) {
  LightFieldStack s = tiny_stack(8, 2, 2, 1);
  EXPECT_NO_THROW(s.validate());
  s.views[1].image = ImageGrid(3, 4);
  EXPECT_THROW(s.validate(), DimensionError);
  s = tiny_stack(8, 2, 2, 1);
  s.views[0].theta = {1, 0};
  EXPECT_THROW(s.validate(), RangeError);
}

TEST(DisparityMap, RejectsNonFinite) {
  ImageGrid d(2, 2);
  d(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(DisparityMap{d}, RangeError);
}

TEST(ImageIo, PnmRoundTrip) {
  const auto dir = scratch_dir("pnm");
  std::mt19937_64 gen(5);
  const ImageGrid g = random_image(6, 4, gen);
  write_pgm(dir / "a.pgm", g, 16);
  const PnmImage back = read_pnm(dir / "a.pgm");
  ASSERT_EQ(back.channels.size(), 1u);
  EXPECT_EQ(back.maxval, 65535);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(back.channels[0].samples()[i], g.samples()[i], 1.0 / 65535);

  const ColorImage rgb{ColorSpace::Rgb, {random_image(5, 3, gen), random_image(5, 3, gen), random_image(5, 3, gen)}};
  write_ppm(dir / "b.ppm", rgb, 8);
  const PnmImage c = read_pnm(dir / "b.ppm");
  ASSERT_EQ(c.channels.size(), 3u);
  for (int k = 0; k < 3; ++k)
    for (std::size_t i = 0; i < 15; ++i)
      EXPECT_NEAR(c.channels[k].samples()[i], rgb.channels[k].samples()[i], 0.5 / 255 + 1e-12);
}

TEST(ImageIo, PfmRoundTripIsExactForFloats) {
  const auto dir = scratch_dir("pfm");
  ImageGrid d(4, 3);
  for (std::size_t i = 0; i < d.size(); ++i) d.samples()[i] = 0.25 * double(i) - 1.5;
  write_pfm(dir / "d.pfm", d);
  EXPECT_EQ(read_pfm(dir / "d.pfm"), d);
}

TEST(ImageIo, MissingOrMalformedFilesThrowIo) {
  const auto dir = scratch_dir("io_bad");
  EXPECT_THROW(read_pnm(dir / "nope.pgm"), IoError);
  std::ofstream(dir / "bad.pgm") << "P2\n2 2\n255\n0 0 0 0\n";
  EXPECT_THROW(read_pnm(dir / "bad.pgm"), IoError);
  std::ofstream(dir / "short.pgm", std::ios::binary) << "P5\n4 4\n255\n\x01\x02";
  EXPECT_THROW(read_pnm(dir / "short.pgm"), IoError);
}

TEST(StackIo, RoundTrip) {
  const auto dir = scratch_dir("stack");
  std::mt19937_64 gen(9);
  DegradeSettings s;
  s.max_views = 3;
  s.noise = {3.0, 1.0, 4};
  const ImageGrid hr[] = {random_image(16, 16, gen), random_image(16, 16, gen), random_image(16, 16, gen)};
  const ChannelStack stack = degrade_lightfield(hr, wavy_disparity(16, 16), s);
  write_stack(dir, stack, 16);
  const ChannelStack back = read_stack(dir);
  ASSERT_EQ(back.views.size(), 3u);
  EXPECT_EQ(back.scale, 2);
  EXPECT_EQ(back.grid_size, 3);
  EXPECT_EQ(back.channel_count(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(back.views[k].position, stack.views[k].position);
    EXPECT_EQ(back.views[k].theta, stack.views[k].theta);
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < back.views[k].channels[c].size(); ++i)
        ASSERT_NEAR(back.views[k].channels[c].samples()[i], stack.views[k].channels[c].samples()[i], 1.0 / 65535);
    // Disparity is stored as 32-bit float.
    for (std::size_t i = 0; i < back.views[k].disparity.grid().size(); ++i)
      ASSERT_NEAR(back.views[k].disparity.grid().samples()[i], stack.views[k].disparity.grid().samples()[i], 1e-6);
  }
}

TEST(StackIo, MalformedManifestIsIoError) {
  const auto dir = scratch_dir("stack_bad");
  std::ofstream(dir / "stack.txt") << "grid 3\nscale 2\nchannels 1\nreference 1 1\nbogus 1\n";
  EXPECT_THROW(read_stack(dir), IoError);
  std::ofstream(dir / "stack.txt") << "grid 3\nscale 2\nchannels 1\nreference 1 1\nview 1 1\n";
  EXPECT_THROW(read_stack(dir), IoError);  // view files missing
  EXPECT_THROW(read_stack(dir / "absent"), IoError);
}
