#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "mzc/error.hpp"
#include "mzc/kernels.hpp"

namespace mzc {

// Tensor midpoint/trapezoid rule on [0,2pi)^d with the uniform measure.
// Nodes sit at 2pi(k + node_shift)/points_per_dim; each refinement doubles
// points_per_dim until two successive values differ by less than tol.
struct QuadratureSpec {
  int points_per_dim = 64;
  double node_shift = 0.5;
  double tol = 1e-12;
  int max_refinements = 8;

  void validate() const;
  // Fixed grid; the error estimate then comes from the half-resolution grid.
  static QuadratureSpec fixed(int points, double tol = 1e-12);
};

template <class Acc>
struct QuadratureOutcome {
  cplx mean{};
  Acc acc{};
  double error_estimate = 0.0;
  int points = 0;
  int refinements = 0;
  bool converged = false;
};

namespace detail {

template <class Acc, class Factory>
Acc run_grid(int dim, int points, double shift, Factory& factory, bool fold) {
  const auto grid = kernels::make_grid(dim, points, shift);
  auto f = factory(grid);
  if (fold && grid.foldable()) return kernels::torus_reduce_even<Acc>(grid, f);
  return kernels::torus_reduce<Acc>(grid, f);
}

template <class Acc>
cplx mean_of(const Acc& acc) {
  if constexpr (requires { acc.count(); })
    return acc.sum() / static_cast<double>(acc.count());
  else
    return acc.sum() / static_cast<double>(acc.count);
}

}  // namespace detail

// Drives the refinement loop. `factory(const TorusGrid&)` returns the node
// functor for one grid. With fold = true the integrand must be even in every
// coordinate; the half box is then reduced.
template <class Acc, class Factory>
QuadratureOutcome<Acc> refine_torus(int dim, const QuadratureSpec& spec, Factory&& factory,
                                    bool fold = false) {
  spec.validate();
  QuadratureOutcome<Acc> out;
  int m = spec.points_per_dim;
  out.acc = detail::run_grid<Acc>(dim, m, spec.node_shift, factory, fold);
  out.mean = detail::mean_of(out.acc);
  out.points = m;
  out.error_estimate = std::numeric_limits<double>::infinity();

  if (spec.max_refinements == 0) {
    if (m >= 4) {
      const Acc coarse = detail::run_grid<Acc>(dim, m / 2, spec.node_shift, factory, fold);
      out.error_estimate = std::abs(out.mean - detail::mean_of(coarse));
    }
    out.converged = out.error_estimate < spec.tol;
    return out;
  }

  for (int r = 1; r <= spec.max_refinements; ++r) {
    if (m > (1 << 29)) break;
    m *= 2;
    Acc acc = detail::run_grid<Acc>(dim, m, spec.node_shift, factory, fold);
    const cplx mean = detail::mean_of(acc);
    out.error_estimate = std::abs(mean - out.mean);
    out.acc = acc;
    out.mean = mean;
    out.points = m;
    out.refinements = r;
    if (out.error_estimate < spec.tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

// Adapts a functor of the node angles to the node-index interface.
template <class F>
auto angle_integrand(F f) {
  return [f](const kernels::TorusGrid& g) {
    return [f, &g](std::span<const int> idx) {
      double theta[kernels::kMaxDim];
      for (std::size_t j = 0; j < idx.size(); ++j)
        theta[j] = g.angles[static_cast<std::size_t>(idx[j])];
      return f(std::span<const double>(theta, idx.size()));
    };
  };
}

}  // namespace mzc
