#pragma once

#include "foghorn/image.hpp"

namespace foghorn {

/// Result of SLIC clustering. Ids are dense in [0,k); every pixel is
/// assigned and each id's pixel set is 4-connected.
struct SuperpixelSegmentation {
  int width = 0;
  int height = 0;
  int k = 0;
  std::vector<std::int32_t> ids;

  std::int32_t at(int x, int y) const { return ids[static_cast<std::size_t>(y) * width + x]; }
};

/// SLIC: k-means in (L*,a*,b*,x,y) with the spatial term weighted by
/// compactness / S, S = sqrt(N/k). Orphan fragments are merged into an
/// adjacent superpixel afterwards, so the returned k may be smaller than
/// requested. Deterministic.
SuperpixelSegmentation slic_superpixels(const ImageLab& img, int k, double compactness);

}  // namespace foghorn
