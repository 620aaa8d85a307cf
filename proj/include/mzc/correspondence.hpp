#pragma once

// Cross-checks of the walk/Mahler identities. Each report compares values
// obtained along independent routes: torus quadrature of the determinant,
// Mahler quadrature, closed forms, hypergeometric and path-count series.

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "mzc/mahler.hpp"
#include "mzc/quadrature.hpp"
#include "mzc/walk.hpp"
#include "mzc/zeta.hpp"

namespace mzc {

using Json = nlohmann::ordered_json;

struct CorrespondenceReport {
  std::string identity_name;
  double lhs = 0.0;
  double rhs = 0.0;
  // Largest pairwise difference over every route the report evaluated.
  double abs_diff = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  Json inputs = Json::object();
  Json diagnostics = Json::object();

  // passed = tolerance > 0 && abs_diff <= tolerance
  void settle();
};

// M-type: u in (cos xi - sqrt(cos^2 xi + 1), 0). F-type: u < 0.
UInterval qw_u_range(double xi, ShiftType shift);

// log((1 -+ u^2 + sqrt(1 + 2 cos(2xi) u^2 + u^4)) / 2), minus sign for M-type.
double qw_log_zeta_closed(double xi, double u, ShiftType shift);

// Quadrature vs log(-u cos xi) + m(...) (resp. sin xi for F-type) vs the
// closed form.
CorrespondenceReport verify_1d_qw(double xi, double u, ShiftType shift, double tol = 1e-9,
                                  const QuadratureSpec& quad = QuadratureSpec::fixed(4096));

// Integral of g(Sigma_j cos theta_j) over T^d. The integrand is even, so the
// half box is reduced. With `adaptive_1d`, d = 1 uses tanh-sinh on [0, pi].
struct CosIntegral {
  double value = 0.0;
  double error_estimate = 0.0;
  int points = 0;
  bool converged = false;
  std::string method;
};
template <class G>
CosIntegral cos_sum_integral(int d, G g, const QuadratureSpec& quad, bool adaptive_1d);

// Grid used for d-dimensional cos-sum integrals when nothing else is given.
QuadratureSpec default_cos_spec(int d, bool singular);

// Grover F-type: (d-1) log(1-u^2) + int log(1 - (2e/d) u + u^2) against
// (d-1) log(1-u^2) + log(-u/d) + m(sum(X_j + X_j^-1) + c), c = -d(u + 1/u).
// d = 2 adds log(1-u^4) - (2/c^2) 4F3(...; 16/c^2).
CorrespondenceReport verify_grover(int d, double u, double tol = 1e-6,
                                   const std::optional<QuadratureSpec>& quad = std::nullopt);

// Simple RW: int log(1 - (e/d) u) against log(-u/2d) + m(sum(X_j + X_j^-1) - 2d/u);
// d = 1 adds the closed form and the B_2n series, d = 2 the 4F3 form and the
// (B_2n)^2 series.
CorrespondenceReport verify_rw(int d, double u, double tol = 1e-8,
                               const std::optional<QuadratureSpec>& quad = std::nullopt);

// Return probability of the simple RW on Z^d after 2n steps as an exact
// fraction num/den with den = (2d)^{2n}, from integer path counts.
struct ExactFraction {
  unsigned __int128 num = 0;
  unsigned __int128 den = 1;
};
ExactFraction rw_return_fraction(int d, int n);
std::string to_string(unsigned __int128 v);

// log(2d) + int log(1/u - e/d), 0 < u <= 1.
double stgf(int d, double u, const std::optional<QuadratureSpec>& quad = std::nullopt);

// T(1); d = 1 gives log 2 + log(1/2) = 0.
double spanning_tree_constant(int d, const std::optional<QuadratureSpec>& quad = std::nullopt);

struct TransienceProbe {
  int d = 1;
  int grid_points = 0;
  double h = 1e-5;
  std::vector<double> u_values;
  std::vector<double> u_dl;   // u dL/du
  std::vector<double> green;  // -u dL/du + 1 = sum_n P_n(0,0) u^n
  std::vector<double> increments;
  bool bounded = false;
  std::optional<double> extrapolated;  // d >= 3: fit G(1) - c sqrt(1-u)
  // Independent path-count series at the last u value.
  double path_count_green = 0.0;
  // Bridge check at u = 0.3: probe vs sum_{n<=12} C_n u^n from the path sum.
  double bridge_u = 0.3;
  double bridge_probe = 0.0;
  double bridge_pathsum = 0.0;
};

TransienceProbe transience_probe(int d, const std::vector<double>& u_values);

// sum_n P_n(0,0) u^n for the simple RW from exact path counts (n <= 40) and a
// fitted power-law tail.
double green_path_count(int d, double u);

struct SuiteTolerances {
  double qw = 1e-9;
  double hadamard = 1e-10;
  double cr = 1e-9;
  double factorisation = 1e-10;
  double grover = 1e-6;
  double grover_d3 = 1e-4;
  double rw_d1 = 1e-8;
  double rw_d2 = 1e-7;
  double rw = 1e-6;
  double mahler_closed = 1e-8;
  double smyth2 = 1e-4;
  double smyth3 = 1e-3;
  double spanning = 1e-4;
  double stgf_shift = 1e-9;
  double transience = 2e-2;

  // Overrides from a flat JSON object; unknown keys are an error.
  static SuiteTolerances from_json(const Json& j);
  Json to_json() const;
};

struct SuiteConfig {
  SuiteTolerances tol;
  std::vector<double> qw_xi;
  std::vector<double> qw_m_fractions;  // u = fraction * (cos xi - sqrt(cos^2 xi + 1))
  std::vector<double> qw_f_u;
  std::vector<std::pair<ShiftType, double>> hadamard_cases;
  std::vector<CoinSpec> cr_coins;
  int cr_r_max = 8;
  std::vector<std::pair<int, int>> factorisation_sizes;  // (d, N)
  std::vector<double> factorisation_u;
  std::vector<double> closed_m_c;
  std::vector<double> closed_f_c;
  std::vector<int> grover_d;
  std::vector<double> grover_u;
  std::vector<int> rw_d;
  std::vector<double> rw_u;
  std::vector<int> smyth_vars;
  std::vector<int> spanning_d;
  std::vector<int> stgf_d;
  std::vector<double> stgf_u;
  std::vector<int> transience_d;
  std::vector<double> transience_u;

  // The canonical grids.
  static SuiteConfig canonical();
  // Canonical grids restricted to one group: qw, hadamard, cr, factorisation,
  // mahler_closed, grover, rw, smyth, spanning, stgf, transience or all.
  static SuiteConfig group(const std::string& name);
  static std::vector<std::string> group_names();
};

// Runs every configured check; computation failures become failed reports.
// Sorted by identity_name; equal names keep configuration order.
std::vector<CorrespondenceReport> run_suite(const SuiteConfig& config);

Json to_json(const CorrespondenceReport& r);

}  // namespace mzc

#include "mzc/detail/cos_integral.hpp"
