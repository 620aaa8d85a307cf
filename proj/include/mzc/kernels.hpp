#pragma once

// Data-parallel inner loops. Every OpenMP kernel here has a serial twin with
// the same signature; the serial versions are the reference the tests and the
// benchmark compare against.

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace mzc {

using cplx = std::complex<double>;

namespace kernels {

// Tensor grid on [0,2pi)^dim with nodes 2pi(k+shift)/points in every axis.
struct TorusGrid {
  int dim = 1;
  int points = 1;
  double shift = 0.5;
  std::vector<double> angles;

  std::int64_t size() const;
  // Reflection theta -> 2pi - theta maps the node set onto itself.
  bool reflection_symmetric() const;
  // Reflection symmetric without fixed nodes, so the half box is a fundamental domain.
  bool foldable() const;
};

TorusGrid make_grid(int dim, int points, double shift);

// Nodes per chunk. The reduction order depends only on this constant, never
// on the thread count.
inline constexpr std::int64_t kChunk = 4096;

// Compensated (Neumaier) complex sum.
struct SumAcc {
  using input = cplx;
  double re = 0, re_c = 0, im = 0, im_c = 0;
  std::int64_t count = 0;

  void push(cplx z) {
    add(re, re_c, z.real());
    add(im, im_c, z.imag());
    ++count;
  }
  void merge(const SumAcc& o) {
    add(re, re_c, o.re + o.re_c);
    add(im, im_c, o.im + o.im_c);
    count += o.count;
  }
  cplx sum() const { return {re + re_c, im + im_c}; }

 private:
  static void add(double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
};

// Sum of log|z| together with min |z| over the visited nodes.
struct LogModAcc {
  using input = cplx;
  SumAcc logs;
  double min_abs = std::numeric_limits<double>::infinity();

  void push(cplx z) {
    const double a = std::abs(z);
    min_abs = std::min(min_abs, a);
    logs.push(cplx(std::log(a), 0.0));
  }
  void merge(const LogModAcc& o) {
    logs.merge(o.logs);
    min_abs = std::min(min_abs, o.min_abs);
  }
  cplx sum() const { return logs.sum(); }
  std::int64_t count() const { return logs.count; }
};

inline constexpr int kMaxDim = 16;

namespace detail {

inline std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Decodes a flat index (axis 0 fastest) over a box of `extent` per axis.
inline void decode(std::int64_t flat, int dim, int extent, int* idx) {
  for (int j = 0; j < dim; ++j) {
    idx[j] = static_cast<int>(flat % extent);
    flat /= extent;
  }
}

inline void advance(int dim, int extent, int* idx) {
  for (int j = 0; j < dim; ++j) {
    if (++idx[j] < extent) return;
    idx[j] = 0;
  }
}

template <class Acc>
Acc pairwise_merge(std::vector<Acc>& parts) {
  if (parts.empty()) return Acc{};
  std::size_t n = parts.size();
  while (n > 1) {
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i + half < n; ++i) parts[i].merge(parts[i + half]);
    n = half;
  }
  return parts[0];
}

// Shared body for the full and the folded (even-integrand) reductions.
template <class Acc, class F>
Acc reduce_box(int dim, int extent, F& f, bool parallel) {
  const std::int64_t total = ipow(extent, dim);
  const std::int64_t nchunks = (total + kChunk - 1) / kChunk;
  std::vector<Acc> parts(static_cast<std::size_t>(nchunks));

#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t c = 0; c < nchunks; ++c) {
    int idx[kMaxDim];
    const std::int64_t begin = c * kChunk;
    const std::int64_t end = std::min(total, begin + kChunk);
    decode(begin, dim, extent, idx);
    Acc acc{};
    for (std::int64_t i = begin; i < end; ++i) {
      acc.push(f(std::span<const int>(idx, static_cast<std::size_t>(dim))));
      advance(dim, extent, idx);
    }
    parts[static_cast<std::size_t>(c)] = acc;
  }
  return pairwise_merge(parts);
}

}  // namespace detail

// Reduces f(node index span) over every node of the grid.
template <class Acc, class F>
Acc torus_reduce(const TorusGrid& g, F&& f) {
  return detail::reduce_box<Acc>(g.dim, g.points, f, true);
}

// Reduces over the half box k_j < points/2 (one representative per reflection
// orbit in every axis). Valid when f is even in every coordinate and the grid
// is reflection symmetric with no fixed nodes.
template <class Acc, class F>
Acc torus_reduce_even(const TorusGrid& g, F&& f) {
  return detail::reduce_box<Acc>(g.dim, g.points / 2, f, true);
}

// Serial reference: one accumulator, plain odometer over the whole grid.
template <class Acc, class F>
Acc torus_reduce_serial(const TorusGrid& g, F&& f) {
  Acc acc{};
  int idx[kMaxDim] = {};
  const std::int64_t total = g.size();
  for (std::int64_t i = 0; i < total; ++i) {
    acc.push(f(std::span<const int>(idx, static_cast<std::size_t>(g.dim))));
    detail::advance(g.dim, g.points, idx);
  }
  return acc;
}

// One step of the shift-coin evolution on the N^dim torus.
// coin: row-major (2dim x 2dim); state: site-major, 2dim components per site,
// sites enumerated with axis 0 fastest.
void walk_step(int dim, int side, std::span<const cplx> coin,
               std::span<const cplx> in, std::span<cplx> out);
void walk_step_serial(int dim, int side, std::span<const cplx> coin,
                      std::span<const cplx> in, std::span<cplx> out);

// det of an n x n row-major matrix. Destroys `a` for n > 4.
cplx det_small(int n, cplx* a);

// Tr(a^r) for an n x n row-major matrix; scratch needs 2 n^2 entries.
cplx trace_power(int n, const cplx* a, int r, cplx* scratch);

// Threads used by the parallel kernels; n <= 0 restores the OpenMP default.
void set_threads(int n);
int max_threads();

}  // namespace kernels
}  // namespace mzc
