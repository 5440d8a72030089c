#pragma once

#include "lfsr/image.hpp"

namespace lfsr {

// ITU-R BT.601 full-range (JFIF) conversion; chroma is offset by 0.5 so all channels live in [0,1].
ColorImage ycbcr_from_rgb(const ColorImage& rgb);
// Inverse of ycbcr_from_rgb, clamped to [0,1].
ColorImage rgb_from_ycbcr(const ColorImage& ycc);

}  // namespace lfsr
