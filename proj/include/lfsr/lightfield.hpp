#pragma once

#include <string>
#include <vector>

#include "lfsr/image.hpp"

namespace lfsr {

// Angular coordinates of a view in baseline steps relative to the grid center.
// u is horizontal (grid column), v is vertical (grid row).
struct PerspectiveIndex {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const PerspectiveIndex&, const PerspectiveIndex&) = default;
  PerspectiveIndex operator-(const PerspectiveIndex& o) const { return {u - o.u, v - o.v}; }
};

// Per-pixel disparity in HR pixels per unit baseline step, stored on the HR grid.
class DisparityMap {
 public:
  DisparityMap() = default;
  explicit DisparityMap(ImageGrid values);

  int width() const noexcept { return values_.width(); }
  int height() const noexcept { return values_.height(); }
  double operator()(int x, int y) const { return values_(x, y); }
  const ImageGrid& grid() const noexcept { return values_; }

  friend bool operator==(const DisparityMap&, const DisparityMap&) = default;

 private:
  ImageGrid values_;
};

// A view slot on the angular grid.
struct GridPosition {
  int row = 0;
  int col = 0;
  friend bool operator==(const GridPosition&, const GridPosition&) = default;
};

struct LightFieldView {
  GridPosition position;
  PerspectiveIndex theta;
  ImageGrid image;         // LR observation
  DisparityMap disparity;  // HR grid
};

// The solver input: LR views of one scene, the first-class reference among them.
struct LightFieldStack {
  int grid_size = 1;  // odd side of the angular grid
  int scale = 1;
  std::size_t reference = 0;
  std::vector<LightFieldView> views;

  const LightFieldView& reference_view() const { return views.at(reference); }
  Dimensions dimensions() const;
  // Throws DimensionError/RangeError when the invariants do not hold.
  void validate() const;
};

enum class ViewPattern { Full, Star, Cross };

ViewPattern parse_view_pattern(const std::string& name);
std::string to_string(ViewPattern pattern);

// Views of an odd-sided square grid. The center view comes first, then axis arms
// (left, right, up, down) by increasing distance, then diagonals. `full` appends the
// remaining slots in raster order. arm must not exceed the grid radius.
std::vector<GridPosition> select_views(int grid_size, ViewPattern pattern, int arm);

PerspectiveIndex perspective_of(GridPosition pos, int grid_size);

}  // namespace lfsr
