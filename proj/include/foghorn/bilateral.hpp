#pragma once

#include "foghorn/image.hpp"

#include <cstddef>

namespace foghorn {

/// Parameters of the dual-reference cross-bilateral filter: the filter
/// weight at q for center p is
///   Gs(|q-p|) * [ delta(h(q) == h(p)) + mu * Gc(|J(q)-J(p)|) ]
/// with unnormalized Gaussians Gs, Gc (normalization cancels in the
/// ratio) and Euclidean norms in space and CIELAB.
struct FilterParams {
  double mu = 5.0;
  double sigma_s = 20.0;  // pixels
  double sigma_c = 10.0;  // CIELAB distance
  int window_radius = 60; // defaults to ceil(3 * sigma_s)

  static FilterParams with_sigmas(double mu, double sigma_s, double sigma_c);
  void validate() const;
};

/// Grid sampling for the accelerated path. Zero cell sizes select the
/// defaults sigma_s/2 (spatial, both grids) and sigma_c/2 (per color
/// axis). semantic_cell tunes the per-label layers independently; they
/// are 2D, so finer sampling there is cheap.
struct GridOptions {
  double spatial_cell = 0.0;
  double color_cell = 0.0;
  double semantic_cell = 0.0;
  std::size_t memory_cap_bytes = std::size_t{4} << 30;
};

/// Direct evaluation over the square window of radius window_radius.
/// Reference implementation; quadratic in the window size.
TransmittanceMap filter_exact(const TransmittanceMap& t_hat, const ImageLab& lab,
                              const SemanticLabeling& h, const FilterParams& p);

/// Accelerated evaluation via two bilateral grids: a 3D (x, y, label) grid
/// for the semantic term, processed one label layer at a time with no
/// blurring across the categorical label axis, and a 5D (x, y, L*, a*, b*)
/// grid for the color term. Each grid holds homogeneous (sum, weight)
/// pairs; the final output is (N_sem + mu*N_col) / (D_sem + mu*D_col).
/// Throws when the 5D grid would exceed opts.memory_cap_bytes.
TransmittanceMap filter_grid(const TransmittanceMap& t_hat, const ImageLab& lab,
                             const SemanticLabeling& h, const FilterParams& p,
                             const GridOptions& opts = {});

}  // namespace foghorn
