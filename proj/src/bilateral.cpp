#include "foghorn/bilateral.hpp"

#include "foghorn/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <vector>

namespace foghorn {

namespace {

std::vector<double> gaussian_taps(double sigma, double cell) {
  // Multilinear splatting and slicing each act like an extra triangle
  // kernel of variance cell^2/12 per axis; shrinking the blur variance by
  // 2 * cell^2/12 keeps the effective kernel at the requested sigma.
  const double adjusted = std::sqrt(std::max(sigma * sigma - cell * cell / 3.0,
                                             0.09 * sigma * sigma));
  const int radius = static_cast<int>(std::ceil(3.0 * sigma / cell));
  std::vector<double> taps(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) {
    const double d = i * cell;
    taps[i + radius] = std::exp(-d * d / (2.0 * adjusted * adjusted));
  }
  return taps;
}

// In-place separable blur of a homogeneous (value, weight) grid along one
// axis. Cells outside the grid carry no mass, so no renormalization at the
// borders; that matches the clipped window of the exact filter.
void blur_axis(std::vector<double>& grid, std::vector<double>& scratch,
               const std::vector<std::size_t>& dims, const std::vector<std::size_t>& strides,
               std::size_t axis, const std::vector<double>& taps) {
  const std::int64_t total = static_cast<std::int64_t>(grid.size() / 2);
  const std::int64_t radius = (static_cast<std::int64_t>(taps.size()) - 1) / 2;
  const std::int64_t n = static_cast<std::int64_t>(dims[axis]);
  const std::int64_t stride = static_cast<std::int64_t>(strides[axis]);
  scratch.assign(grid.size(), 0.0);
  parallel_for(total, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t cell = begin; cell < end; ++cell) {
      const std::int64_t pos = (cell / stride) % n;
      double v = 0.0, w = 0.0;
      const std::int64_t lo = std::max<std::int64_t>(-radius, -pos);
      const std::int64_t hi = std::min<std::int64_t>(radius, n - 1 - pos);
      for (std::int64_t t = lo; t <= hi; ++t) {
        const double tap = taps[t + radius];
        const std::int64_t src = 2 * (cell + t * stride);
        v += tap * grid[src];
        w += tap * grid[src + 1];
      }
      scratch[2 * cell] = v;
      scratch[2 * cell + 1] = w;
    }
  });
  grid.swap(scratch);
}

struct LabeledPixels {
  std::int32_t label;
  std::vector<std::size_t> pixels;
};

std::vector<LabeledPixels> group_by_label(const std::vector<std::int32_t>& ids) {
  std::map<std::int32_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ids.size(); ++i) groups[ids[i]].push_back(i);
  std::vector<LabeledPixels> out;
  out.reserve(groups.size());
  for (auto& [label, pixels] : groups) out.push_back({label, std::move(pixels)});
  return out;
}

}  // namespace

FilterParams FilterParams::with_sigmas(double mu, double sigma_s, double sigma_c) {
  FilterParams p;
  p.mu = mu;
  p.sigma_s = sigma_s;
  p.sigma_c = sigma_c;
  p.window_radius = static_cast<int>(std::ceil(3.0 * sigma_s));
  return p;
}

void FilterParams::validate() const {
  if (mu < 0) throw std::invalid_argument("mu must be non-negative");
  if (!(sigma_s > 0)) throw std::invalid_argument("sigma_s must be positive");
  if (!(sigma_c > 0)) throw std::invalid_argument("sigma_c must be positive");
  if (window_radius < 1) throw std::invalid_argument("window radius must be at least 1");
}

TransmittanceMap filter_exact(const TransmittanceMap& t_hat, const ImageLab& lab,
                              const SemanticLabeling& h, const FilterParams& p) {
  p.validate();
  require_same_size(t_hat, lab, "dual-reference filter");
  require_same_size(t_hat, h, "dual-reference filter");

  const std::vector<std::int32_t> ids = h.filter_ids();
  const int w = t_hat.width, ht = t_hat.height;
  const int radius = p.window_radius;
  const double inv_2ss = 1.0 / (2.0 * p.sigma_s * p.sigma_s);
  const double inv_2sc = 1.0 / (2.0 * p.sigma_c * p.sigma_c);

  TransmittanceMap out(w, ht);
  parallel_for(ht, [&](std::int64_t y0, std::int64_t y1) {
    for (std::int64_t yy = y0; yy < y1; ++yy) {
      const int y = static_cast<int>(yy);
      for (int x = 0; x < w; ++x) {
        const std::size_t pi = static_cast<std::size_t>(y) * w + x;
        const std::int32_t label = ids[pi];
        const double l0 = lab.data[3 * pi + 0];
        const double a0 = lab.data[3 * pi + 1];
        const double b0 = lab.data[3 * pi + 2];
        const int qy0 = std::max(0, y - radius), qy1 = std::min(ht - 1, y + radius);
        const int qx0 = std::max(0, x - radius), qx1 = std::min(w - 1, x + radius);
        double num = 0.0, den = 0.0;
        for (int qy = qy0; qy <= qy1; ++qy) {
          const double dy2 = static_cast<double>(qy - y) * (qy - y);
          for (int qx = qx0; qx <= qx1; ++qx) {
            const std::size_t qi = static_cast<std::size_t>(qy) * w + qx;
            const double dx2 = static_cast<double>(qx - x) * (qx - x);
            const double gs = std::exp(-(dx2 + dy2) * inv_2ss);
            double weight = ids[qi] == label ? 1.0 : 0.0;
            if (p.mu > 0) {
              const double dl = lab.data[3 * qi + 0] - l0;
              const double da = lab.data[3 * qi + 1] - a0;
              const double db = lab.data[3 * qi + 2] - b0;
              weight += p.mu * std::exp(-(dl * dl + da * da + db * db) * inv_2sc);
            }
            num += gs * weight * t_hat.data[qi];
            den += gs * weight;
          }
        }
        out.data[pi] = num / den;
      }
    }
  });
  return out;
}

TransmittanceMap filter_grid(const TransmittanceMap& t_hat, const ImageLab& lab,
                             const SemanticLabeling& h, const FilterParams& p,
                             const GridOptions& opts) {
  p.validate();
  require_same_size(t_hat, lab, "dual-reference filter");
  require_same_size(t_hat, h, "dual-reference filter");

  const int w = t_hat.width, ht = t_hat.height;
  const std::size_t n = t_hat.pixel_count();
  const double hs = opts.spatial_cell > 0 ? opts.spatial_cell : p.sigma_s / 2.0;
  const double hc = opts.color_cell > 0 ? opts.color_cell : p.sigma_c / 2.0;
  const double hsem = opts.semantic_cell > 0 ? opts.semantic_cell : p.sigma_s / 2.0;

  const std::vector<double> spatial_taps = gaussian_taps(p.sigma_s, hs);
  const std::vector<double> color_taps = gaussian_taps(p.sigma_c, hc);
  const std::vector<double> semantic_taps = gaussian_taps(p.sigma_s, hsem);

  // --- semantic term: 3D grid (x, y, label), one layer at a time over
  // the label's bounding box ---------------------------------------------
  const std::vector<std::int32_t> ids = h.filter_ids();
  const std::vector<LabeledPixels> layers = group_by_label(ids);

  std::vector<double> num_sem(n, 0.0), den_sem(n, 0.0);
  {
    std::vector<double> grid, scratch;
    for (const LabeledPixels& layer : layers) {
      int x0 = w, x1 = -1, y0 = ht, y1 = -1;
      for (const std::size_t pi : layer.pixels) {
        const int x = static_cast<int>(pi % w), y = static_cast<int>(pi / w);
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
      // local grid covering the bounding box; outside cells hold no mass
      const std::size_t cx0 = static_cast<std::size_t>(x0 / hsem);
      const std::size_t cy0 = static_cast<std::size_t>(y0 / hsem);
      const std::size_t gw = static_cast<std::size_t>(x1 / hsem) - cx0 + 2;
      const std::size_t gh = static_cast<std::size_t>(y1 / hsem) - cy0 + 2;
      const std::vector<std::size_t> dims = {gh, gw};
      const std::vector<std::size_t> strides = {gw, 1};

      grid.assign(gw * gh * 2, 0.0);
      for (const std::size_t pi : layer.pixels) {
        const double gx = static_cast<double>(pi % w) / hsem - cx0;
        const double gy = static_cast<double>(pi / w) / hsem - cy0;
        const std::size_t ix = static_cast<std::size_t>(gx);
        const std::size_t iy = static_cast<std::size_t>(gy);
        const double fx = gx - ix, fy = gy - iy;
        const double v = t_hat.data[pi];
        for (int cy = 0; cy <= 1; ++cy) {
          for (int cx = 0; cx <= 1; ++cx) {
            const double wt = (cy ? fy : 1.0 - fy) * (cx ? fx : 1.0 - fx);
            const std::size_t cell = 2 * ((iy + cy) * gw + ix + cx);
            grid[cell] += wt * v;
            grid[cell + 1] += wt;
          }
        }
      }
      blur_axis(grid, scratch, dims, strides, 0, semantic_taps);
      blur_axis(grid, scratch, dims, strides, 1, semantic_taps);
      parallel_for(static_cast<std::int64_t>(layer.pixels.size()),
                   [&](std::int64_t begin, std::int64_t end) {
                     for (std::int64_t i = begin; i < end; ++i) {
                       const std::size_t pi = layer.pixels[i];
                       const double gx = static_cast<double>(pi % w) / hsem - cx0;
                       const double gy = static_cast<double>(pi / w) / hsem - cy0;
                       const std::size_t ix = static_cast<std::size_t>(gx);
                       const std::size_t iy = static_cast<std::size_t>(gy);
                       const double fx = gx - ix, fy = gy - iy;
                       double v = 0.0, wt_sum = 0.0;
                       for (int cy = 0; cy <= 1; ++cy) {
                         for (int cx = 0; cx <= 1; ++cx) {
                           const double wt = (cy ? fy : 1.0 - fy) * (cx ? fx : 1.0 - fx);
                           const std::size_t cell = 2 * ((iy + cy) * gw + ix + cx);
                           v += wt * grid[cell];
                           wt_sum += wt * grid[cell + 1];
                         }
                       }
                       num_sem[pi] = v;
                       den_sem[pi] = wt_sum;
                     }
                   });
    }
  }

  TransmittanceMap out(w, ht);

  if (p.mu == 0.0) {
    parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
      for (std::int64_t i = begin; i < end; ++i) out.data[i] = num_sem[i] / den_sem[i];
    });
    return out;
  }

  // --- color term: 5D grid (x, y, L*, a*, b*) --------------------------
  std::array<double, 3> cmin{}, cmax{};
  for (int c = 0; c < 3; ++c) {
    cmin[c] = cmax[c] = lab.data[c];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      cmin[c] = std::min(cmin[c], lab.data[3 * i + c]);
      cmax[c] = std::max(cmax[c], lab.data[3 * i + c]);
    }
  }
  const std::size_t gw = static_cast<std::size_t>((w - 1) / hs) + 2;
  const std::size_t gh = static_cast<std::size_t>((ht - 1) / hs) + 2;
  std::vector<std::size_t> dims = {gh, gw, 0, 0, 0};
  for (int c = 0; c < 3; ++c) {
    dims[2 + c] = static_cast<std::size_t>((cmax[c] - cmin[c]) / hc) + 2;
  }
  const std::size_t cells = dims[0] * dims[1] * dims[2] * dims[3] * dims[4];
  const std::size_t bytes = cells * 2 * sizeof(double) * 2;  // grid + blur scratch
  if (bytes > opts.memory_cap_bytes) {
    throw std::runtime_error("color bilateral grid needs " + std::to_string(bytes) +
                             " bytes, above the configured cap of " +
                             std::to_string(opts.memory_cap_bytes) +
                             "; raise the cap or coarsen the grid cells");
  }
  std::vector<std::size_t> strides(5);
  strides[4] = 1;
  for (int d = 3; d >= 0; --d) strides[d] = strides[d + 1] * dims[d + 1];

  std::vector<double> grid(cells * 2, 0.0), scratch;

  auto coords_of = [&](std::size_t pi, std::size_t idx[5], double frac[5]) {
    const double g[5] = {static_cast<double>(pi / w) / hs,
                         static_cast<double>(pi % w) / hs,
                         (lab.data[3 * pi + 0] - cmin[0]) / hc,
                         (lab.data[3 * pi + 1] - cmin[1]) / hc,
                         (lab.data[3 * pi + 2] - cmin[2]) / hc};
    for (int d = 0; d < 5; ++d) {
      idx[d] = static_cast<std::size_t>(g[d]);
      frac[d] = g[d] - idx[d];
    }
  };

  for (std::size_t pi = 0; pi < n; ++pi) {
    std::size_t idx[5];
    double frac[5];
    coords_of(pi, idx, frac);
    const double v = t_hat.data[pi];
    for (int corner = 0; corner < 32; ++corner) {
      double wt = 1.0;
      std::size_t cell = 0;
      for (int d = 0; d < 5; ++d) {
        const int bit = (corner >> d) & 1;
        wt *= bit ? frac[d] : 1.0 - frac[d];
        cell += (idx[d] + bit) * strides[d];
      }
      grid[2 * cell] += wt * v;
      grid[2 * cell + 1] += wt;
    }
  }

  blur_axis(grid, scratch, dims, strides, 0, spatial_taps);
  blur_axis(grid, scratch, dims, strides, 1, spatial_taps);
  for (int c = 0; c < 3; ++c) blur_axis(grid, scratch, dims, strides, 2 + c, color_taps);

  parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      const std::size_t pi = static_cast<std::size_t>(i);
      std::size_t idx[5];
      double frac[5];
      coords_of(pi, idx, frac);
      double num_col = 0.0, den_col = 0.0;
      for (int corner = 0; corner < 32; ++corner) {
        double wt = 1.0;
        std::size_t cell = 0;
        for (int d = 0; d < 5; ++d) {
          const int bit = (corner >> d) & 1;
          wt *= bit ? frac[d] : 1.0 - frac[d];
          cell += (idx[d] + bit) * strides[d];
        }
        num_col += wt * grid[2 * cell];
        den_col += wt * grid[2 * cell + 1];
      }
      out.data[pi] = (num_sem[pi] + p.mu * num_col) / (den_sem[pi] + p.mu * den_col);
    }
  });
  return out;
}

}  // namespace foghorn
