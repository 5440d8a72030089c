#include "lfsr/lightfield.hpp"

#include <algorithm>
#include <cmath>

namespace lfsr {

DisparityMap::DisparityMap(ImageGrid values) : values_(std::move(values)) {
  if (!values_.all_finite()) throw RangeError("disparity map contains non-finite values");
}

Dimensions LightFieldStack::dimensions() const {
  if (views.empty()) throw DimensionError("light field stack has no views");
  const auto& ref = reference_view();
  return Dimensions::from_hr(ref.image.width() * scale, ref.image.height() * scale, scale);
}

void LightFieldStack::validate() const {
  if (views.empty()) throw DimensionError("light field stack has no views");
  if (reference >= views.size()) throw RangeError("reference index out of range");
  if (reference_view().theta != PerspectiveIndex{}) throw RangeError("reference view must sit at the grid center");
  const Dimensions dims = dimensions();
  for (const auto& v : views) {
    if (v.image.width() != dims.lr_width || v.image.height() != dims.lr_height)
      throw DimensionError("views differ in low-resolution size");
    if (v.disparity.width() != dims.hr_width() || v.disparity.height() != dims.hr_height())
      throw DimensionError("disparity map does not match the high-resolution size");
    if (!v.image.all_finite()) throw RangeError("view contains non-finite samples");
    if (!std::isfinite(v.theta.u) || !std::isfinite(v.theta.v)) throw RangeError("non-finite perspective index");
  }
}

ViewPattern parse_view_pattern(const std::string& name) {
  if (name == "full") return ViewPattern::Full;
  if (name == "star") return ViewPattern::Star;
  if (name == "cross") return ViewPattern::Cross;
  throw RangeError("unknown view pattern '" + name + "' (expected full, star or cross)");
}

std::string to_string(ViewPattern pattern) {
  switch (pattern) {
    case ViewPattern::Full: return "full";
    case ViewPattern::Star: return "star";
    case ViewPattern::Cross: return "cross";
  }
  return "?";
}

std::vector<GridPosition> select_views(int grid_size, ViewPattern pattern, int arm) {
  if (grid_size < 1 || grid_size % 2 == 0) throw RangeError("angular grid must be odd-sided");
  const int c = grid_size / 2;
  if (pattern != ViewPattern::Full && (arm < 0 || arm > c))
    throw RangeError("arm " + std::to_string(arm) + " exceeds grid radius " + std::to_string(c));

  std::vector<GridPosition> out{{c, c}};
  const bool axes = pattern != ViewPattern::Full;
  if (axes) {
    for (int s = 1; s <= arm; ++s) {
      out.push_back({c, c - s});
      out.push_back({c, c + s});
      out.push_back({c - s, c});
      out.push_back({c + s, c});
    }
  }
  if (pattern == ViewPattern::Star) {
    for (int s = 1; s <= arm; ++s) {
      out.push_back({c - s, c - s});
      out.push_back({c - s, c + s});
      out.push_back({c + s, c - s});
      out.push_back({c + s, c + s});
    }
  }
  if (pattern == ViewPattern::Full) {
    for (int r = 0; r < grid_size; ++r)
      for (int col = 0; col < grid_size; ++col)
        if (r != c || col != c) out.push_back({r, col});
  }
  return out;
}

PerspectiveIndex perspective_of(GridPosition pos, int grid_size) {
  const int c = grid_size / 2;
  return {static_cast<double>(pos.col - c), static_cast<double>(pos.row - c)};
}

}  // namespace lfsr
