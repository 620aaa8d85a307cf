#pragma once

// Logarithmic Mahler measures: torus quadrature, Jensen's formula, the
// closed forms used by the walk correspondences, and the special constants
// that appear on their right-hand sides.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "mzc/laurent.hpp"
#include "mzc/quadrature.hpp"
#include "mzc/walk.hpp"

namespace mzc {

enum class MahlerMethod { quadrature, jensen, closed_form, hypergeometric };
std::string to_string(MahlerMethod m);

struct MahlerResult {
  double value = 0.0;
  MahlerMethod method = MahlerMethod::quadrature;
  double error_estimate = 0.0;
  // min |f| over the sampling grid is below max(1e-6, the grid's Lipschitz
  // radius), so f very likely vanishes on the torus.
  bool singular_on_torus = false;
  bool converged = true;
  int points = 0;  // per axis; 0 for non-grid methods
  int refinements = 0;
  double min_abs = 0.0;
  std::vector<std::string> notes;
};

// Default grid for an n-variable polynomial (64/256 start points and a
// refinement budget that ends at 4096, 4096 and 256 per axis for n = 1, 2, 3).
QuadratureSpec default_mahler_spec(int n_vars);
// Convergence tolerance applied once the integrand is flagged singular.
double singular_tolerance(int n_vars);

// Tensor midpoint quadrature of log|f| over the unit torus. Without an explicit
// spec the default grid is used and singular integrands get the relaxed
// tolerance. One-variable singular integrands switch to tanh-sinh on the arcs
// between near-circle roots. Non-convergence is reported through `converged`.
MahlerResult mahler_quadrature(const LaurentPolynomial& poly,
                               const std::optional<QuadratureSpec>& quad = std::nullopt);

// Roots of a0 + a1 x + ... + an x^n (coefficients in increasing degree, an != 0)
// from the balanced companion matrix, with one Newton polish per root.
std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs);

// Jensen: log|leading coefficient| + sum log max(|alpha|, 1).
MahlerResult mahler_univariate(const LaurentPolynomial& poly);

// m(X - X^-1 + c)
double mahler_closed_mtype(double c);
// m(X + X^-1 + c), |c| >= 2
double mahler_closed_ftype(double c);

// Coefficient c^(s)(xi, u) mapping the 1D QW onto the two closed forms above.
double lemma5_coefficient(double xi, double u, ShiftType shift);
// Direct form of m(X -+ X^-1 + c^(s)) in xi and u.
double mahler_lemma5(double xi, double u, ShiftType shift);

// m(X1 + X1^-1 + X2 + X2^-1 + c) for c > 4 via 4F3.
double mahler_rv(double c);

// int log(1 - r cos theta) dtheta/2pi for |r| <= 1.
double log_cos_identity(double r);

struct SpecialConstants {
  double l_chi3_2 = 0.0;   // L(chi_-3, 2)
  double zeta3 = 0.0;      // zeta(3)
  double catalan_g = 0.0;  // sum (-1)^n / (2n+1)^2
};
const SpecialConstants& special_constants();

// Right-hand sides of the two Smyth identities.
double smyth_two_variable();
double smyth_three_variable();

// int |f|^s over the torus.
double zeta_mahler(const LaurentPolynomial& poly, double s,
                   const std::optional<QuadratureSpec>& quad = std::nullopt);

}  // namespace mzc
