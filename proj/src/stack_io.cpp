#include "lfsr/stack_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "lfsr/image_io.hpp"

namespace lfsr {

namespace {

std::string stem(const char* prefix, GridPosition p) {
  return std::string(prefix) + "_" + std::to_string(p.row) + "_" + std::to_string(p.col);
}

std::string view_file(GridPosition p, std::size_t channels) {
  return stem("view", p) + (channels == 1 ? ".pgm" : ".ppm");
}

}  // namespace

void write_stack(const std::filesystem::path& dir, const ChannelStack& stack, int bits) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create stack directory '" + dir.string() + "': " + ec.message());
  if (stack.views.empty()) throw DimensionError("cannot write an empty stack");
  const std::size_t channels = stack.channel_count();

  std::ofstream manifest(dir / "stack.txt");
  if (!manifest) throw IoError("cannot write manifest in '" + dir.string() + "'");
  const GridPosition ref = stack.views.at(stack.reference).position;
  manifest << "# light field stack\n"
           << "grid " << stack.grid_size << '\n'
           << "scale " << stack.scale << '\n'
           << "channels " << channels << '\n'
           << "reference " << ref.row << ' ' << ref.col << '\n';
  for (const auto& v : stack.views) {
    if (v.channels.size() != channels) throw DimensionError("views differ in channel count");
    manifest << "view " << v.position.row << ' ' << v.position.col << '\n';
    write_pnm(dir / view_file(v.position, channels), v.channels, bits);
    write_pfm(dir / (stem("disp", v.position) + ".pfm"), v.disparity.grid());
  }
  if (!manifest) throw IoError("failed writing manifest in '" + dir.string() + "'");
}

ChannelStack read_stack(const std::filesystem::path& dir) {
  std::ifstream manifest(dir / "stack.txt");
  if (!manifest) throw IoError("missing manifest '" + (dir / "stack.txt").string() + "'");

  ChannelStack stack;
  int channels = 0;
  bool have_grid = false, have_scale = false, have_ref = false;
  GridPosition ref;
  std::vector<GridPosition> positions;
  std::string line;
  int line_no = 0;
  while (std::getline(manifest, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    const auto bad = [&] {
      return IoError("malformed manifest line " + std::to_string(line_no) + " in '" + dir.string() + "': " + line);
    };
    std::string rest;
    if (key == "grid") {
      if (!(ls >> stack.grid_size)) throw bad();
      have_grid = true;
    } else if (key == "scale") {
      if (!(ls >> stack.scale)) throw bad();
      have_scale = true;
    } else if (key == "channels") {
      if (!(ls >> channels) || (channels != 1 && channels != 3)) throw bad();
    } else if (key == "reference") {
      if (!(ls >> ref.row >> ref.col)) throw bad();
      have_ref = true;
    } else if (key == "view") {
      GridPosition p;
      if (!(ls >> p.row >> p.col)) throw bad();
      positions.push_back(p);
    } else {
      throw IoError("unknown manifest key '" + key + "' in '" + dir.string() + "'");
    }
    if (ls >> rest) throw bad();
  }
  if (!have_grid || !have_scale || !have_ref || channels == 0 || positions.empty())
    throw IoError("manifest in '" + dir.string() + "' is missing grid, scale, channels, reference or views");
  if (stack.grid_size < 1 || stack.grid_size % 2 == 0) throw IoError("manifest grid size must be odd");
  if (stack.scale < 1 || stack.scale > 4) throw IoError("manifest scale must be in 1..4");

  bool found_ref = false;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const GridPosition p = positions[k];
    if (p.row < 0 || p.col < 0 || p.row >= stack.grid_size || p.col >= stack.grid_size)
      throw IoError("view position outside the angular grid in '" + dir.string() + "'");
    if (p == ref) {
      stack.reference = k;
      found_ref = true;
    }
    PnmImage img = read_pnm(dir / view_file(p, static_cast<std::size_t>(channels)));
    if (img.channels.size() != static_cast<std::size_t>(channels))
      throw IoError("view channel count disagrees with manifest in '" + dir.string() + "'");
    DisparityMap disp(read_pfm(dir / (stem("disp", p) + ".pfm")));
    stack.views.push_back({p, perspective_of(p, stack.grid_size), std::move(img.channels), std::move(disp)});
  }
  if (!found_ref) throw IoError("reference view is not listed in '" + dir.string() + "'");
  // Perspective indices are relative to the reference view.
  const PerspectiveIndex origin = stack.views[stack.reference].theta;
  for (auto& v : stack.views) v.theta = v.theta - origin;
  try {
    luma_stack(stack);
  } catch (const std::exception& e) {
    throw IoError("inconsistent stack in '" + dir.string() + "': " + e.what());
  }
  return stack;
}

}  // namespace lfsr
