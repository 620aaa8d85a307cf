#include "mzc/kernels.hpp"

#include <array>
#include <numbers>
#include <stdexcept>

namespace mzc::kernels {

std::int64_t TorusGrid::size() const { return detail::ipow(points, dim); }

bool TorusGrid::reflection_symmetric() const {
  return shift == 0.0 || shift == 0.5;
}

bool TorusGrid::foldable() const { return shift == 0.5 && points % 2 == 0; }

TorusGrid make_grid(int dim, int points, double shift) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("grid dimension out of range");
  if (points < 1) throw std::invalid_argument("grid needs at least one point per axis");
  TorusGrid g{dim, points, shift, {}};
  g.angles.resize(static_cast<std::size_t>(points));
  const double h = 2.0 * std::numbers::pi / points;
  for (int k = 0; k < points; ++k) g.angles[static_cast<std::size_t>(k)] = h * (k + shift);
  return g;
}

namespace {

inline void step_site(int dim, int side, std::int64_t s, const cplx* coin,
                      const cplx* in, cplx* out) {
  const int n = 2 * dim;
  std::int64_t stride = 1;
  std::int64_t rest = s;
  for (int j = 0; j < dim; ++j) {
    const int xj = static_cast<int>(rest % side);
    rest /= side;
    const std::int64_t base = s - xj * stride;
    const std::int64_t plus = base + ((xj + 1) % side) * stride;
    const std::int64_t minus = base + ((xj + side - 1) % side) * stride;
    // row 2j pulls from x+e_j, row 2j+1 from x-e_j
    const cplx* row_a = coin + (2 * j) * n;
    const cplx* row_b = coin + (2 * j + 1) * n;
    const cplx* psi_p = in + plus * n;
    const cplx* psi_m = in + minus * n;
    cplx acc_a = 0, acc_b = 0;
    for (int c = 0; c < n; ++c) {
      acc_a += row_a[c] * psi_p[c];
      acc_b += row_b[c] * psi_m[c];
    }
    out[s * n + 2 * j] = acc_a;
    out[s * n + 2 * j + 1] = acc_b;
    stride *= side;
  }
}

void check_step_args(int dim, int side, std::span<const cplx> coin,
                     std::span<const cplx> in, std::span<cplx> out) {
  const auto n = static_cast<std::size_t>(2 * dim);
  const auto sites = static_cast<std::size_t>(detail::ipow(side, dim));
  if (coin.size() != n * n || in.size() != sites * n || out.size() != sites * n)
    throw std::invalid_argument("walk_step: buffer sizes do not match dim/side");
}

}  // namespace

void walk_step(int dim, int side, std::span<const cplx> coin,
               std::span<const cplx> in, std::span<cplx> out) {
  check_step_args(dim, side, coin, in, out);
  const std::int64_t sites = detail::ipow(side, dim);
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < sites; ++s)
    step_site(dim, side, s, coin.data(), in.data(), out.data());
}

void walk_step_serial(int dim, int side, std::span<const cplx> coin,
                      std::span<const cplx> in, std::span<cplx> out) {
  check_step_args(dim, side, coin, in, out);
  const std::int64_t sites = detail::ipow(side, dim);
  for (std::int64_t s = 0; s < sites; ++s)
    step_site(dim, side, s, coin.data(), in.data(), out.data());
}

cplx det_small(int n, cplx* a) {
  switch (n) {
    case 1:
      return a[0];
    case 2:
      return a[0] * a[3] - a[1] * a[2];
    case 4: {
      // Laplace expansion along the first two rows.
      auto m = [a](int r, int i, int j) { return a[r * 4 + i] * a[(r + 1) * 4 + j] - a[r * 4 + j] * a[(r + 1) * 4 + i]; };
      const cplx s01 = m(0, 0, 1), s02 = m(0, 0, 2), s03 = m(0, 0, 3);
      const cplx s12 = m(0, 1, 2), s13 = m(0, 1, 3), s23 = m(0, 2, 3);
      const cplx c01 = m(2, 0, 1), c02 = m(2, 0, 2), c03 = m(2, 0, 3);
      const cplx c12 = m(2, 1, 2), c13 = m(2, 1, 3), c23 = m(2, 2, 3);
      return s01 * c23 - s02 * c13 + s03 * c12 + s12 * c03 - s13 * c02 + s23 * c01;
    }
    default:
      break;
  }
  // LU with partial pivoting, in place.
  cplx det = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a[k * n + k]);
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a[i * n + k]);
      if (v > best) best = v, piv = i;
    }
    if (best == 0.0) return 0.0;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      det = -det;
    }
    const cplx d = a[k * n + k];
    det *= d;
    for (int i = k + 1; i < n; ++i) {
      const cplx f = a[i * n + k] / d;
      if (f == cplx(0.0)) continue;
      for (int j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
    }
  }
  return det;
}

cplx trace_power(int n, const cplx* a, int r, cplx* scratch) {
  if (r == 0) return static_cast<double>(n);
  cplx* p = scratch;
  cplx* q = scratch + n * n;
  std::copy(a, a + n * n, p);
  for (int step = 1; step < r; ++step) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cplx s = 0;
        for (int k = 0; k < n; ++k) s += p[i * n + k] * a[k * n + j];
        q[i * n + j] = s;
      }
    std::swap(p, q);
  }
  cplx tr = 0;
  for (int i = 0; i < n; ++i) tr += p[i * n + i];
  return tr;
}

void set_threads(int n) {
  if (n > 0)
    omp_set_num_threads(n);
  else
    omp_set_num_threads(omp_get_num_procs());
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace mzc::kernels
