#pragma once

// Walk-type zeta functions on T^d_N, the series coefficients C_r and the
// logarithmic zeta function L(A, T^d_inf, u).

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mzc/quadrature.hpp"
#include "mzc/walk.hpp"

namespace mzc {

struct FiniteZeta {
  double value = 0.0;
  // Distance of Im(sum of log-determinants) to the nearest multiple of 2pi.
  double imag_residual = 0.0;
  std::int64_t factors = 0;
};

// zeta(A, T^d_N, u) from the momentum factorisation:
// exp(-(1/N^d) sum_k log det(I - u M_A(k))).
FiniteZeta zeta_finite(const CoinMatrix& coin, int n, double u);

// Largest 2d N^d accepted by the dense route.
inline constexpr std::int64_t kDenseMaxSize = 4096;

// det(I - u M_A)^{-1/N^d} from the assembled 2dN^d x 2dN^d walk operator.
FiniteZeta zeta_finite_dense(const CoinMatrix& coin, int n, double u);

// The full walk operator M_A on T^d_N (column index = site * 2d + component).
Eigen::MatrixXcd walk_operator(const CoinMatrix& coin, int n);

struct TraceAverage {
  double value = 0.0;
  double imag_residual = 0.0;
  double error_estimate = 0.0;
  int points = 0;
};

// (1/N^d) sum_k Tr(M_A(k)^r) over the finite momentum grid.
TraceAverage cr_finite(const CoinMatrix& coin, int n, int r);

// Quadrature of Tr(M_A(Theta)^r) over the torus.
TraceAverage cr_limit(const CoinMatrix& coin, int r, const QuadratureSpec& quad = {});

// Tr Phi_r(0) on Z^d.
double cr_limit_pathsum(const CoinMatrix& coin, int r);

// C_1..C_{r_max} from one matrix-weight recursion (index 0 holds C_1).
std::vector<double> cr_pathsum_sequence(const CoinMatrix& coin, int r_max);

// C_{2l} for the one-dimensional QW coin with parameter xi in (0, pi/2), as
// the terminating finite sum.
double cr_closed_1d_qw(double xi, int l, ShiftType shift);
// Same coefficient through the terminating 2F1(1-l, 1-l; 2; .) form.
double cr_closed_1d_qw_2f1(double xi, int l, ShiftType shift);

enum class CrMethod { trace_finite, quad_limit, path_sum, closed_form };
std::string to_string(CrMethod m);

struct SeriesCoefficients {
  std::string coin;
  CrMethod method = CrMethod::path_sum;
  std::vector<std::pair<int, double>> values;
};

// C_1..C_{r_max} by the requested route. `n` is used by trace_finite only,
// `quad` by quad_limit only. closed_form needs a hadamard-type coin.
SeriesCoefficients cr_series(const CoinMatrix& coin, int r_max, CrMethod method, int n = 0,
                             const QuadratureSpec& quad = {});

std::string describe(const CoinMatrix& coin);

// Real interval of u on which log det(I - u M_A(Theta)) stays off the branch
// cut for the given model.
struct UInterval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double u) const;
  std::string describe() const;
};

UInterval log_zeta_validity(const CoinMatrix& coin);

struct LogZeta {
  double value = 0.0;
  double imag_residual = 0.0;
  double error_estimate = 0.0;
  int points = 0;
  int refinements = 0;
};

// int log det(I - u M_A(Theta)) dTheta_unif with the principal branch.
LogZeta log_zeta(const CoinMatrix& coin, double u, const QuadratureSpec& quad = {});

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

// -sum_{r<=r_max} C_r u^r / r with C_r from the matrix-weight recursion.
SeriesValue log_zeta_series(const CoinMatrix& coin, double u, int r_max);

}  // namespace mzc
