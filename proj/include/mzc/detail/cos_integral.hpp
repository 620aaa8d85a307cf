#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace mzc {

template <class G>
CosIntegral cos_sum_integral(int d, G g, const QuadratureSpec& quad, bool adaptive_1d) {
  CosIntegral out;
  if (d == 1 && adaptive_1d) {
    double err = 0.0;
    const double pi = std::numbers::pi;
    boost::math::quadrature::tanh_sinh<double> integrator;
    // The integrands are logarithms; a node so close to a zero that the
    // argument rounds to 0 is clamped at log(eps).
    const double clamp = std::log(std::numeric_limits<double>::epsilon());
    const double v = integrator.integrate(
        [&](double t) {
          const double y = g(std::cos(t));
          return std::isfinite(y) ? y : clamp;
        },
        0.0, pi, 1e-13, &err);
    out.value = v / pi;
    out.error_estimate = err / pi;
    out.converged = out.error_estimate < std::max(quad.tol, 1e-12);
    out.method = "tanh_sinh";
    return out;
  }
  auto factory = [&](const kernels::TorusGrid& grid) {
    std::vector<double> c(grid.angles.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::cos(grid.angles[k]);
    return [c = std::move(c), &g, d](std::span<const int> idx) {
      double e = 0.0;
      for (int j = 0; j < d; ++j) e += c[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
      return cplx(g(e), 0.0);
    };
  };
  const auto r = refine_torus<kernels::SumAcc>(d, quad, factory, true);
  out.value = r.mean.real();
  out.error_estimate = r.error_estimate;
  out.points = r.points;
  out.converged = r.converged;
  out.method = "midpoint_folded";
  return out;
}

}  // namespace mzc
