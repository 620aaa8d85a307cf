#include "mzc/zeta.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <sstream>

#include "mzc/hypergeometric.hpp"

namespace mzc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_to_2pi_residual(double phase) {
  return std::abs(phase - kTwoPi * std::round(phase / kTwoPi));
}

// Sum of principal log det values plus branch diagnostics.
struct LogDetAcc {
  using input = cplx;
  kernels::SumAcc logs;
  std::int64_t non_positive = 0;  // nodes with Re det <= 0
  double min_abs = std::numeric_limits<double>::infinity();

  void push(cplx det) {
    if (!(det.real() > 0.0)) ++non_positive;
    min_abs = std::min(min_abs, std::abs(det));
    logs.push(std::log(det));
  }
  void merge(const LogDetAcc& o) {
    logs.merge(o.logs);
    non_positive += o.non_positive;
    min_abs = std::min(min_abs, o.min_abs);
  }
  cplx sum() const { return logs.sum(); }
  std::int64_t count() const { return logs.count; }
};

// det(I - u M_A(theta)) at one node, using the row-major coin.
inline cplx node_det(const std::vector<cplx>& coin_rm, int dim, const double* theta, double u) {
  const int n = 2 * dim;
  cplx buf[kernels::kMaxDim * kernels::kMaxDim * 4];
  momentum_matrix_into(coin_rm, dim, theta, buf);
  for (int i = 0; i < n * n; ++i) buf[i] *= -u;
  for (int i = 0; i < n; ++i) buf[i * n + i] += 1.0;
  return kernels::det_small(n, buf);
}

void check_u(double u) {
  if (!std::isfinite(u)) throw DomainError("u must be finite");
}

void check_side(int n) {
  if (n < 1) throw DomainError("torus side N must be >= 1");
}

}  // namespace

FiniteZeta zeta_finite(const CoinMatrix& coin, int n, double u) {
  check_side(n);
  check_u(u);
  const int d = coin.dim();
  if (std::pow(static_cast<double>(n), d) > 1e10) throw DomainError("zeta_finite: N^d too large");
  const auto grid = kernels::make_grid(d, n, 0.0);
  const auto& rm = coin.row_major();
  LogDetAcc acc = kernels::torus_reduce<LogDetAcc>(grid, [&](std::span<const int> idx) {
    double theta[kernels::kMaxDim];
    for (int j = 0; j < d; ++j) theta[j] = grid.angles[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    return node_det(rm, d, theta, u);
  });
  if (!(acc.min_abs > 1e-300)) throw ComputationError("zeta_finite: singular factor 1 - u lambda_j(k) = 0");
  const cplx s = acc.sum();
  FiniteZeta z;
  z.factors = acc.count();
  z.imag_residual = wrap_to_2pi_residual(s.imag());
  if (z.imag_residual >= 1e-10) {
    std::ostringstream msg;
    msg << "zeta_finite: det(I - u M_A) is not positive (imaginary log residual " << z.imag_residual << ")";
    throw ComputationError(msg.str());
  }
  z.value = std::exp(-s.real() / static_cast<double>(z.factors));
  return z;
}

Eigen::MatrixXcd walk_operator(const CoinMatrix& coin, int n) {
  check_side(n);
  const int d = coin.dim();
  const int c = coin.size();
  const std::int64_t sites = kernels::detail::ipow(n, d);
  const std::int64_t size = sites * c;
  if (size > kDenseMaxSize) throw DomainError("walk_operator: 2d N^d exceeds the dense size cap");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size, size);
  const auto& a = coin.entries();
  for (std::int64_t s = 0; s < sites; ++s) {
    std::int64_t stride = 1, rest = s;
    for (int j = 0; j < d; ++j) {
      const int xj = static_cast<int>(rest % n);
      rest /= n;
      const std::int64_t base = s - xj * stride;
      const std::int64_t plus = base + ((xj + 1) % n) * stride;
      const std::int64_t minus = base + ((xj + n - 1) % n) * stride;
      for (int col = 0; col < c; ++col) {
        m(s * c + 2 * j, plus * c + col) += a(2 * j, col);
        m(s * c + 2 * j + 1, minus * c + col) += a(2 * j + 1, col);
      }
      stride *= n;
    }
  }
  return m;
}

FiniteZeta zeta_finite_dense(const CoinMatrix& coin, int n, double u) {
  check_u(u);
  const Eigen::MatrixXcd m = walk_operator(coin, n);
  const Eigen::Index size = m.rows();
  const Eigen::MatrixXcd f = Eigen::MatrixXcd::Identity(size, size) - u * m;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(f);
  const Eigen::MatrixXcd& packed = lu.matrixLU();
  cplx log_det = lu.permutationP().determinant() < 0 ? cplx(0.0, std::numbers::pi) : cplx(0.0);
  for (Eigen::Index i = 0; i < size; ++i) {
    if (packed(i, i) == cplx(0.0)) throw ComputationError("zeta_finite_dense: singular determinant");
    log_det += std::log(packed(i, i));
  }
  FiniteZeta z;
  z.factors = size;
  z.imag_residual = wrap_to_2pi_residual(log_det.imag());
  if (z.imag_residual >= 1e-8) throw ComputationError("zeta_finite_dense: determinant is not positive");
  const double sites = static_cast<double>(size / coin.size());
  z.value = std::exp(-log_det.real() / sites);
  return z;
}

TraceAverage cr_finite(const CoinMatrix& coin, int n, int r) {
  check_side(n);
  if (r < 1) throw DomainError("cr_finite: r must be >= 1");
  const int d = coin.dim();
  const int c = coin.size();
  const auto grid = kernels::make_grid(d, n, 0.0);
  const auto& rm = coin.row_major();
  auto acc = kernels::torus_reduce<kernels::SumAcc>(grid, [&](std::span<const int> idx) {
    double theta[kernels::kMaxDim];
    for (int j = 0; j < d; ++j) theta[j] = grid.angles[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    std::vector<cplx> buf(static_cast<std::size_t>(3 * c * c));
    momentum_matrix_into(rm, d, theta, buf.data());
    return kernels::trace_power(c, buf.data(), r, buf.data() + c * c);
  });
  const cplx mean = acc.sum() / static_cast<double>(acc.count);
  if (std::abs(mean.imag()) >= 1e-10) throw ComputationError("cr_finite: trace average is not real");
  return {mean.real(), std::abs(mean.imag()), 0.0, n};
}

TraceAverage cr_limit(const CoinMatrix& coin, int r, const QuadratureSpec& quad) {
  if (r < 1) throw DomainError("cr_limit: r must be >= 1");
  const int d = coin.dim();
  const int c = coin.size();
  const auto& rm = coin.row_major();
  auto out = refine_torus<kernels::SumAcc>(d, quad, angle_integrand([&, c, d](std::span<const double> theta) {
    cplx buf[3 * kernels::kMaxDim * kernels::kMaxDim * 4];
    momentum_matrix_into(rm, d, theta.data(), buf);
    return kernels::trace_power(c, buf, r, buf + c * c);
  }));
  if (!out.converged) {
    std::ostringstream msg;
    msg << "cr_limit: no convergence after " << out.refinements << " refinements (delta "
        << out.error_estimate << ")";
    throw ComputationError(msg.str());
  }
  if (std::abs(out.mean.imag()) >= 1e-10) throw ComputationError("cr_limit: trace integral is not real");
  return {out.mean.real(), std::abs(out.mean.imag()), out.error_estimate, out.points};
}

std::vector<double> cr_pathsum_sequence(const CoinMatrix& coin, int r_max) {
  if (r_max < 1) throw DomainError("r must be >= 1");
  const auto tr = origin_trace_sequence(coin, r_max);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(r_max));
  for (int r = 1; r <= r_max; ++r) {
    const cplx t = tr[static_cast<std::size_t>(r)];
    if (std::abs(t.imag()) >= 1e-12) throw ComputationError("path-sum trace is not real");
    out.push_back(t.real());
  }
  return out;
}

double cr_limit_pathsum(const CoinMatrix& coin, int r) {
  if (r < 1) throw DomainError("cr_limit_pathsum: r must be >= 1");
  const MatrixWeight w = matrix_weight_origin(coin, r);
  const cplx t = w.matrix.trace();
  if (std::abs(t.imag()) >= 1e-12) throw ComputationError("path-sum trace is not real");
  return t.real();
}

namespace {

void check_xi_open(double xi) {
  if (!(xi > 0.0 && xi < std::numbers::pi / 2))
    throw DomainError("xi must lie in the open interval (0, pi/2)");
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double cr_closed_1d_qw(double xi, int l, ShiftType shift) {
  check_xi_open(xi);
  if (l < 1) throw DomainError("l must be >= 1");
  const double c2 = std::cos(xi) * std::cos(xi);
  const double s2 = std::sin(xi) * std::sin(xi);
  const double y = shift == ShiftType::m_type ? -s2 / c2 : -c2 / s2;
  double sum = 0.0, ym = 1.0;
  for (int m = 1; m <= l; ++m) {
    ym *= y;
    const double b = binom(l - 1, m - 1);
    sum += b * b * ym / m;
  }
  const double scale = shift == ShiftType::m_type ? std::pow(-c2, l) : std::pow(s2, l);
  return 2.0 * l * scale * sum;
}

double cr_closed_1d_qw_2f1(double xi, int l, ShiftType shift) {
  check_xi_open(xi);
  if (l < 1) throw DomainError("l must be >= 1");
  const double c2 = std::cos(xi) * std::cos(xi);
  const double s2 = std::sin(xi) * std::sin(xi);
  const double a[2] = {1.0 - l, 1.0 - l};
  const double b[1] = {2.0};
  if (shift == ShiftType::m_type)
    return 2.0 * l * std::pow(-c2, l - 1) * s2 * hyper_pfq(a, b, -s2 / c2);
  return 2.0 * l * std::pow(s2, l - 1) * (-c2) * hyper_pfq(a, b, -c2 / s2);
}

std::string to_string(CrMethod m) {
  switch (m) {
    case CrMethod::trace_finite: return "trace_finite";
    case CrMethod::quad_limit: return "quad_limit";
    case CrMethod::path_sum: return "path_sum";
    case CrMethod::closed_form: return "closed_form";
  }
  return "unknown";
}

std::string describe(const CoinMatrix& coin) {
  std::ostringstream os;
  os << to_string(coin.kind()) << "(d=" << coin.dim();
  if (coin.xi()) os << ",xi=" << *coin.xi();
  os << "," << to_string(coin.shift_type()) << ")";
  return os.str();
}

SeriesCoefficients cr_series(const CoinMatrix& coin, int r_max, CrMethod method, int n,
                             const QuadratureSpec& quad) {
  if (r_max < 1) throw DomainError("r_max must be >= 1");
  SeriesCoefficients s{describe(coin), method, {}};
  switch (method) {
    case CrMethod::trace_finite:
      for (int r = 1; r <= r_max; ++r) s.values.emplace_back(r, cr_finite(coin, n, r).value);
      break;
    case CrMethod::quad_limit:
      for (int r = 1; r <= r_max; ++r) s.values.emplace_back(r, cr_limit(coin, r, quad).value);
      break;
    case CrMethod::path_sum: {
      const auto seq = cr_pathsum_sequence(coin, r_max);
      for (int r = 1; r <= r_max; ++r) s.values.emplace_back(r, seq[static_cast<std::size_t>(r - 1)]);
      break;
    }
    case CrMethod::closed_form:
      if (coin.kind() != CoinKind::hadamard_type)
        throw DomainError("closed-form C_r is available for hadamard-type coins only");
      for (int r = 1; r <= r_max; ++r)
        s.values.emplace_back(r, r % 2 ? 0.0 : cr_closed_1d_qw(*coin.xi(), r / 2, coin.shift_type()));
      break;
  }
  return s;
}

bool UInterval::contains(double u) const {
  const bool above = lo_closed ? u >= lo : u > lo;
  const bool below = hi_closed ? u <= hi : u < hi;
  return above && below;
}

std::string UInterval::describe() const {
  std::ostringstream os;
  os << (lo_closed ? "[" : "(") << lo << ", " << hi << (hi_closed ? "]" : ")");
  return os.str();
}

UInterval log_zeta_validity(const CoinMatrix& coin) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (coin.kind()) {
    case CoinKind::simple_rw:
      // u = 1 leaves an integrable log singularity at Theta = 0 only.
      return {-1.0, 1.0, true, true};
    case CoinKind::hadamard_type:
      if (coin.shift_type() == ShiftType::f_type && std::abs(std::sin(*coin.xi())) < 1.0)
        return {-inf, inf, false, false};
      return {-1.0, 1.0, false, false};
    case CoinKind::grover:
      return {-1.0, 1.0, false, false};
    case CoinKind::custom: {
      const CoinClass c = classify_coin(coin, 1e-12);
      if (c.unitary || c.crw) return {-1.0, 1.0, false, false};
      return {-inf, inf, false, false};
    }
  }
  return {};
}

LogZeta log_zeta(const CoinMatrix& coin, double u, const QuadratureSpec& quad) {
  check_u(u);
  const UInterval valid = log_zeta_validity(coin);
  if (!valid.contains(u)) {
    std::ostringstream msg;
    msg << "log_zeta: u = " << u << " outside the validity interval " << valid.describe() << " of "
        << describe(coin);
    throw DomainError(msg.str());
  }
  const int d = coin.dim();
  const auto& rm = coin.row_major();
  const bool paired = !(quad.node_shift == 0.0 || quad.node_shift == 0.5);
  auto integrand = angle_integrand([&, d, u, paired](std::span<const double> theta) {
    const cplx det = node_det(rm, d, theta.data(), u);
    if (!paired) return det;
    // Off-symmetric grids: return the det at the reflected node as well, folded
    // into one value whose log is the mean of the pair's logs.
    double reflected[kernels::kMaxDim];
    for (int j = 0; j < d; ++j) reflected[j] = kTwoPi - theta[static_cast<std::size_t>(j)];
    const cplx det2 = node_det(rm, d, reflected, u);
    return std::exp(0.5 * (std::log(det) + std::log(det2)));
  });
  auto out = refine_torus<LogDetAcc>(d, quad, integrand);
  if (out.acc.non_positive > 0) {
    std::ostringstream msg;
    msg << "log_zeta: det(I - u M_A) has non-positive real part at " << out.acc.non_positive
        << " node(s) of the " << out.points << "^" << d << " grid (u = " << u << ")";
    throw ComputationError(msg.str());
  }
  if (!out.converged) {
    std::ostringstream msg;
    msg << "log_zeta: no convergence after " << out.refinements << " refinements (delta "
        << out.error_estimate << ", tol " << quad.tol << ")";
    throw ComputationError(msg.str());
  }
  LogZeta z;
  z.imag_residual = std::abs(out.mean.imag());
  if (z.imag_residual >= 1e-9) throw ComputationError("log_zeta: imaginary part did not cancel");
  z.value = out.mean.real();
  z.error_estimate = out.error_estimate;
  z.points = out.points;
  z.refinements = out.refinements;
  return z;
}

SeriesValue log_zeta_series(const CoinMatrix& coin, double u, int r_max) {
  check_u(u);
  if (!(std::abs(u) < 1.0)) throw DomainError("log_zeta_series: needs |u| < 1");
  if (r_max < 1) throw DomainError("log_zeta_series: r_max must be >= 1");
  SeriesValue s;
  if (u == 0.0) return s;
  const auto c = cr_pathsum_sequence(coin, r_max);
  double up = 1.0;
  for (int r = 1; r <= r_max; ++r) {
    up *= u;
    s.value -= c[static_cast<std::size_t>(r - 1)] * up / r;
  }
  const double au = std::abs(u);
  s.tail_bound = coin.size() * std::pow(au, r_max + 1) / ((r_max + 1) * (1.0 - au));
  return s;
}

}  // namespace mzc
