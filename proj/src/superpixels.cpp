#include "foghorn/superpixels.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace foghorn {

namespace {

constexpr int kIterations = 10;

struct Cluster {
  double l = 0, a = 0, b = 0, x = 0, y = 0;
};

double color_gradient(const ImageLab& img, int x, int y) {
  const int xm = std::max(x - 1, 0), xp = std::min(x + 1, img.width - 1);
  const int ym = std::max(y - 1, 0), yp = std::min(y + 1, img.height - 1);
  double g = 0;
  for (int c = 0; c < 3; ++c) {
    const double dx = img.at(xp, y, c) - img.at(xm, y, c);
    const double dy = img.at(x, yp, c) - img.at(x, ym, c);
    g += dx * dx + dy * dy;
  }
  return g;
}

// Grid that yields exactly k seeds: ny rows chosen to roughly match the
// image aspect, first k cells of the nx-by-ny grid in row-major order.
std::vector<Cluster> initial_clusters(const ImageLab& img, int k) {
  const int w = img.width, h = img.height;
  int ny = std::clamp(static_cast<int>(std::lround(std::sqrt(static_cast<double>(k) * h / w))),
                      1, k);
  const int nx = (k + ny - 1) / ny;
  std::vector<Cluster> clusters;
  clusters.reserve(k);
  for (int j = 0; j < ny && static_cast<int>(clusters.size()) < k; ++j) {
    for (int i = 0; i < nx && static_cast<int>(clusters.size()) < k; ++i) {
      Cluster c;
      c.x = (i + 0.5) * w / nx;
      c.y = (j + 0.5) * h / ny;
      clusters.push_back(c);
    }
  }
  // Move each seed to the lowest-gradient spot in its 3x3 neighborhood.
  for (auto& c : clusters) {
    int bx = std::clamp(static_cast<int>(c.x), 0, w - 1);
    int by = std::clamp(static_cast<int>(c.y), 0, h - 1);
    double best = std::numeric_limits<double>::infinity();
    int sx = bx, sy = by;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int x = bx + dx, y = by + dy;
        if (x < 0 || y < 0 || x >= w || y >= h) continue;
        const double g = color_gradient(img, x, y);
        if (g < best) {
          best = g;
          sx = x;
          sy = y;
        }
      }
    }
    c.x = sx;
    c.y = sy;
    c.l = img.at(sx, sy, 0);
    c.a = img.at(sx, sy, 1);
    c.b = img.at(sx, sy, 2);
  }
  return clusters;
}

// Keep the largest 4-connected component of every id; relabel the rest
// into an adjacent finalized region, smallest adjacent id first. Iterates
// until every fragment touches finalized ground.
void enforce_connectivity(std::vector<std::int32_t>& ids, int w, int h) {
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<std::int32_t> comp(n, -1);
  std::vector<std::vector<std::size_t>> comp_pixels;
  std::vector<std::int32_t> comp_id;

  std::deque<std::size_t> queue;
  for (std::size_t start = 0; start < n; ++start) {
    if (comp[start] != -1) continue;
    const std::int32_t id = ids[start];
    const std::int32_t c = static_cast<std::int32_t>(comp_pixels.size());
    comp_pixels.emplace_back();
    comp_id.push_back(id);
    comp[start] = c;
    queue.push_back(start);
    while (!queue.empty()) {
      const std::size_t p = queue.front();
      queue.pop_front();
      comp_pixels[c].push_back(p);
      const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
      const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
      for (const auto& q : nb) {
        if (q[0] < 0 || q[1] < 0 || q[0] >= w || q[1] >= h) continue;
        const std::size_t qi = static_cast<std::size_t>(q[1]) * w + q[0];
        if (comp[qi] == -1 && ids[qi] == id) {
          comp[qi] = c;
          queue.push_back(qi);
        }
      }
    }
  }

  // Largest component per id is final; ties go to the earlier component.
  std::vector<std::int32_t> largest;
  for (std::size_t c = 0; c < comp_pixels.size(); ++c) {
    const std::int32_t id = comp_id[c];
    if (id >= static_cast<std::int32_t>(largest.size())) {
      largest.resize(id + 1, -1);
    }
    if (largest[id] == -1 || comp_pixels[c].size() > comp_pixels[largest[id]].size()) {
      largest[id] = static_cast<std::int32_t>(c);
    }
  }
  std::vector<char> final_comp(comp_pixels.size(), 0);
  for (std::int32_t c : largest) {
    if (c >= 0) final_comp[c] = 1;
  }

  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (std::size_t c = 0; c < comp_pixels.size(); ++c) {
      if (final_comp[c]) continue;
      std::int32_t target = -1;
      for (const std::size_t p : comp_pixels[c]) {
        const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
        const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
        for (const auto& q : nb) {
          if (q[0] < 0 || q[1] < 0 || q[0] >= w || q[1] >= h) continue;
          const std::size_t qi = static_cast<std::size_t>(q[1]) * w + q[0];
          if (final_comp[comp[qi]] && (target == -1 || ids[qi] < target)) target = ids[qi];
        }
      }
      if (target != -1) {
        for (const std::size_t p : comp_pixels[c]) ids[p] = target;
        // Absorb into the target's final component so later fragments can
        // attach through this one.
        for (const std::size_t p : comp_pixels[c]) comp[p] = largest[target];
        final_comp[c] = 1;
        progressed = true;
      }
    }
  }
}

}  // namespace

SuperpixelSegmentation slic_superpixels(const ImageLab& img, int k, double compactness) {
  const std::size_t n = img.pixel_count();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw std::invalid_argument("superpixel count must be in [1, pixel count]");
  }
  if (!(compactness > 0)) throw std::invalid_argument("compactness must be positive");

  const int w = img.width, h = img.height;
  const double step = std::sqrt(static_cast<double>(n) / k);
  const double spatial_scale = compactness * compactness / (step * step);
  std::vector<Cluster> clusters = initial_clusters(img, k);

  std::vector<std::int32_t> ids(n, -1);
  std::vector<double> best(n);
  const int reach = std::max(1, static_cast<int>(std::lround(2 * step)));

  for (int iter = 0; iter < kIterations; ++iter) {
    std::fill(best.begin(), best.end(), std::numeric_limits<double>::infinity());
    // Sequential scatter: with a fixed cluster order and strict-less
    // updates the assignment is deterministic.
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
      const Cluster& c = clusters[ci];
      const int x0 = std::max(0, static_cast<int>(c.x) - reach);
      const int x1 = std::min(w - 1, static_cast<int>(c.x) + reach);
      const int y0 = std::max(0, static_cast<int>(c.y) - reach);
      const int y1 = std::min(h - 1, static_cast<int>(c.y) + reach);
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const std::size_t p = static_cast<std::size_t>(y) * w + x;
          const double dl = img.data[3 * p + 0] - c.l;
          const double da = img.data[3 * p + 1] - c.a;
          const double db = img.data[3 * p + 2] - c.b;
          const double dx = x - c.x;
          const double dy = y - c.y;
          const double dist =
              dl * dl + da * da + db * db + (dx * dx + dy * dy) * spatial_scale;
          if (dist < best[p]) {
            best[p] = dist;
            ids[p] = static_cast<std::int32_t>(ci);
          }
        }
      }
    }
    // Pixels outside every search window (possible for extreme aspect
    // ratios) fall back to the nearest cluster spatially.
    for (std::size_t p = 0; p < n; ++p) {
      if (ids[p] != -1) continue;
      const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
        const double dx = x - clusters[ci].x, dy = y - clusters[ci].y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < nearest) {
          nearest = d2;
          ids[p] = static_cast<std::int32_t>(ci);
        }
      }
    }

    std::vector<Cluster> sums(clusters.size());
    std::vector<std::size_t> counts(clusters.size(), 0);
    for (std::size_t p = 0; p < n; ++p) {
      Cluster& s = sums[ids[p]];
      s.l += img.data[3 * p + 0];
      s.a += img.data[3 * p + 1];
      s.b += img.data[3 * p + 2];
      s.x += static_cast<double>(p % w);
      s.y += static_cast<double>(p / w);
      ++counts[ids[p]];
    }
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
      if (counts[ci] == 0) continue;  // keep the stale center
      const double inv = 1.0 / counts[ci];
      clusters[ci] = {sums[ci].l * inv, sums[ci].a * inv, sums[ci].b * inv, sums[ci].x * inv,
                      sums[ci].y * inv};
    }
  }

  enforce_connectivity(ids, w, h);

  // Compact ids: clusters emptied by the merge disappear.
  std::vector<std::int32_t> remap(clusters.size(), -1);
  std::int32_t next = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (remap[ids[p]] == -1) remap[ids[p]] = -2;  // mark as present
  }
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    if (remap[ci] == -2) remap[ci] = next++;
  }
  for (std::size_t p = 0; p < n; ++p) ids[p] = remap[ids[p]];

  SuperpixelSegmentation seg;
  seg.width = w;
  seg.height = h;
  seg.k = next;
  seg.ids = std::move(ids);
  return seg;
}

}  // namespace foghorn
