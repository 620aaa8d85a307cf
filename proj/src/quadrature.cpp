#include "mzc/quadrature.hpp"

namespace mzc {

void QuadratureSpec::validate() const {
  if (points_per_dim < 2) throw DomainError("quadrature: points_per_dim must be >= 2");
  if (!(node_shift >= 0.0 && node_shift < 1.0))
    throw DomainError("quadrature: node_shift must lie in [0,1)");
  if (!(tol > 0.0)) throw DomainError("quadrature: tol must be positive");
  if (max_refinements < 0) throw DomainError("quadrature: max_refinements must be >= 0");
}

QuadratureSpec QuadratureSpec::fixed(int points, double tol) {
  return QuadratureSpec{points, 0.5, tol, 0};
}

}  // namespace mzc
