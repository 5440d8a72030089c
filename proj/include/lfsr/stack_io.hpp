#pragma once

#include <filesystem>

#include "lfsr/degrade.hpp"

namespace lfsr {

// On-disk stack layout:
//   stack.txt              manifest (see below)
//   view_<row>_<col>.pgm   gray views, or .ppm for RGB
//   disp_<row>_<col>.pfm   HR disparity for that view
//
// Manifest, one `key value...` entry per line, '#' starts a comment:
//   grid <odd size>
//   scale <factor>
//   channels <1|3>
//   reference <row> <col>
//   view <row> <col>       (one line per view, in stack order)
void write_stack(const std::filesystem::path& dir, const ChannelStack& stack, int bits = 16);
ChannelStack read_stack(const std::filesystem::path& dir);

}  // namespace lfsr
