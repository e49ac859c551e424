#include "foghorn/plane_fit.hpp"

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

namespace foghorn {

namespace {

// Solves the 3x3 system M p = r by Gaussian elimination with partial
// pivoting. Returns false when M is singular.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> r,
            std::array<double, 3>& out) {
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::fabs(m[row][col]) > std::fabs(m[pivot][col])) pivot = row;
    }
    if (std::fabs(m[pivot][col]) < 1e-12) return false;
    std::swap(m[col], m[pivot]);
    std::swap(r[col], r[pivot]);
    for (int row = col + 1; row < 3; ++row) {
      const double f = m[row][col] / m[col][col];
      for (int c = col; c < 3; ++c) m[row][c] -= f * m[col][c];
      r[row] -= f * r[col];
    }
  }
  for (int row = 2; row >= 0; --row) {
    double v = r[row];
    for (int c = row + 1; c < 3; ++c) v -= m[row][c] * out[c];
    out[row] = v / m[row][row];
  }
  return true;
}

bool plane_through(const DepthSample& p0, const DepthSample& p1, const DepthSample& p2,
                   Plane& out) {
  // Degenerate when the (x, y) projections are collinear.
  const double area = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  if (std::fabs(area) < 1e-9) return false;
  std::array<std::array<double, 3>, 3> m = {{{p0.x, p0.y, 1.0},
                                             {p1.x, p1.y, 1.0},
                                             {p2.x, p2.y, 1.0}}};
  std::array<double, 3> rhs = {p0.depth, p1.depth, p2.depth};
  std::array<double, 3> coeffs{};
  if (!solve3(m, rhs, coeffs)) return false;
  out = {coeffs[0], coeffs[1], coeffs[2]};
  return true;
}

Plane least_squares(const std::vector<DepthSample>& samples, const std::vector<char>* mask) {
  std::array<std::array<double, 3>, 3> m{};
  std::array<double, 3> rhs{};
  std::size_t used = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    const DepthSample& s = samples[i];
    m[0][0] += s.x * s.x;
    m[0][1] += s.x * s.y;
    m[0][2] += s.x;
    m[1][1] += s.y * s.y;
    m[1][2] += s.y;
    m[2][2] += 1.0;
    rhs[0] += s.x * s.depth;
    rhs[1] += s.y * s.depth;
    rhs[2] += s.depth;
    ++used;
  }
  m[1][0] = m[0][1];
  m[2][0] = m[0][2];
  m[2][1] = m[1][2];
  if (used < 3) throw std::invalid_argument("plane fit requires at least 3 samples");
  std::array<double, 3> coeffs{};
  if (!solve3(m, rhs, coeffs)) {
    throw std::runtime_error("plane fit is degenerate: samples are collinear");
  }
  return {coeffs[0], coeffs[1], coeffs[2]};
}

}  // namespace

Plane fit_plane_least_squares(const std::vector<DepthSample>& samples) {
  return least_squares(samples, nullptr);
}

Plane fit_plane_ransac(const std::vector<DepthSample>& samples, int iters, double tol,
                       std::uint64_t seed) {
  const std::size_t n = samples.size();
  if (n < 3) throw std::invalid_argument("plane fit requires at least 3 samples");
  if (iters < 1) throw std::invalid_argument("ransac iteration count must be positive");
  if (!(tol >= 0)) throw std::invalid_argument("inlier tolerance must be non-negative");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  Plane best_plane;
  std::size_t best_count = 0;
  std::vector<char> best_mask(n, 0), mask(n, 0);

  for (int it = 0; it < iters; ++it) {
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    std::size_t k = pick(rng);
    while (k == i || k == j) k = pick(rng);

    Plane candidate;
    if (!plane_through(samples[i], samples[j], samples[k], candidate)) continue;

    std::size_t count = 0;
    for (std::size_t s = 0; s < n; ++s) {
      const double r = candidate.eval(samples[s].x, samples[s].y) - samples[s].depth;
      mask[s] = std::fabs(r) <= tol;
      count += mask[s];
    }
    if (count > best_count) {
      best_count = count;
      best_plane = candidate;
      best_mask = mask;
    }
  }

  if (best_count < 3) {
    throw std::runtime_error("ransac failed: no non-collinear sample triple found");
  }
  try {
    return least_squares(samples, &best_mask);
  } catch (const std::runtime_error&) {
    return best_plane;  // inlier set degenerate under least squares; keep the model
  }
}

}  // namespace foghorn
