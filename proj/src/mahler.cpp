#include "mzc/mahler.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "mzc/hypergeometric.hpp"

namespace mzc {

std::string to_string(MahlerMethod m) {
  switch (m) {
    case MahlerMethod::quadrature: return "quadrature";
    case MahlerMethod::jensen: return "jensen";
    case MahlerMethod::closed_form: return "closed_form";
    case MahlerMethod::hypergeometric: return "hypergeometric";
  }
  return "unknown";
}

QuadratureSpec default_mahler_spec(int n_vars) {
  QuadratureSpec s;
  s.node_shift = 0.5;
  s.tol = 1e-12;
  switch (n_vars) {
    case 1: s.points_per_dim = 256; s.max_refinements = 4; break;
    case 2: s.points_per_dim = 64; s.max_refinements = 6; break;
    case 3: s.points_per_dim = 16; s.max_refinements = 4; break;
    default: s.points_per_dim = 8; s.max_refinements = 3; break;
  }
  return s;
}

double singular_tolerance(int n_vars) {
  switch (n_vars) {
    case 1: return 1e-8;
    case 2: return 1e-4;
    case 3: return 1e-3;
    default: return 1e-2;
  }
}

namespace {

// Term data laid out for table lookups: every variable gets a table of
// e^{i e theta_k} for each distinct exponent e it carries.
struct Compiled {
  int n = 1;
  std::vector<cplx> coeff;
  std::vector<int> slot;                   // term-major, n entries per term, -1 = exponent 0
  std::vector<std::vector<int>> exponents;  // distinct nonzero exponents per variable
  double lipschitz = 0.0;                  // sum |c| |e|_1
};

Compiled compile(const LaurentPolynomial& p) {
  Compiled c;
  c.n = p.n_vars();
  c.exponents.resize(static_cast<std::size_t>(c.n));
  for (const auto& [e, a] : p.terms()) {
    c.coeff.push_back(a);
    long deg = 0;
    for (int j = 0; j < c.n; ++j) {
      const int x = e[static_cast<std::size_t>(j)];
      deg += std::abs(x);
      if (x == 0) {
        c.slot.push_back(-1);
        continue;
      }
      auto& ex = c.exponents[static_cast<std::size_t>(j)];
      auto it = std::find(ex.begin(), ex.end(), x);
      if (it == ex.end()) {
        ex.push_back(x);
        it = ex.end() - 1;
      }
      c.slot.push_back(static_cast<int>(it - ex.begin()));
    }
    c.lipschitz += std::abs(a) * static_cast<double>(deg);
  }
  return c;
}

struct Evaluator {
  std::shared_ptr<const Compiled> poly;
  int points = 0;
  std::vector<std::vector<cplx>> tables;  // per variable: slot * points + k

  Evaluator(std::shared_ptr<const Compiled> p, const kernels::TorusGrid& g) : poly(std::move(p)), points(g.points) {
    tables.resize(static_cast<std::size_t>(poly->n));
    for (int j = 0; j < poly->n; ++j) {
      const auto& ex = poly->exponents[static_cast<std::size_t>(j)];
      auto& t = tables[static_cast<std::size_t>(j)];
      t.resize(ex.size() * static_cast<std::size_t>(points));
      for (std::size_t s = 0; s < ex.size(); ++s)
        for (int k = 0; k < points; ++k)
          t[s * static_cast<std::size_t>(points) + static_cast<std::size_t>(k)] =
              std::polar(1.0, ex[s] * g.angles[static_cast<std::size_t>(k)]);
    }
  }

  cplx operator()(std::span<const int> idx) const {
    const int n = poly->n;
    cplx sum = 0.0;
    const int* slot = poly->slot.data();
    for (const cplx& c : poly->coeff) {
      cplx term = c;
      for (int j = 0; j < n; ++j, ++slot)
        if (*slot >= 0)
          term *= tables[static_cast<std::size_t>(j)]
                        [static_cast<std::size_t>(*slot) * static_cast<std::size_t>(points) +
                         static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
      sum += term;
    }
    return sum;
  }
};

void check_grid_size(int n, const QuadratureSpec& spec) {
  double final_points = spec.points_per_dim * std::ldexp(1.0, spec.max_refinements);
  if (std::pow(final_points, n) > 1.2e11)
    throw DomainError("quadrature grid of " + std::to_string(static_cast<long long>(final_points)) + "^" +
                      std::to_string(n) + " nodes is too large");
}

bool flag_singular(const Compiled& c, double min_abs, int points) {
  const double h = 2.0 * std::numbers::pi / points;
  const double radius = c.lipschitz * h * std::sqrt(static_cast<double>(c.n)) / 2.0;
  return min_abs < std::max(1e-6, radius);
}

// Node values arrive packed as (|f|^s, |f|).
struct PowAcc {
  using input = cplx;
  kernels::SumAcc sum;
  double min_abs = std::numeric_limits<double>::infinity();
  void push(cplx z) {
    min_abs = std::min(min_abs, z.imag());
    sum.push(cplx(z.real(), 0.0));
  }
  void merge(const PowAcc& o) {
    sum.merge(o.sum);
    min_abs = std::min(min_abs, o.min_abs);
  }
};

// Shared refinement loop for log|f| and |f|^s; `map` turns f at a node into
// the accumulator input.
template <class Acc, class Map>
MahlerResult refine_mahler(const LaurentPolynomial& poly, const std::optional<QuadratureSpec>& quad, Map map,
                           double (*mean_of)(const Acc&)) {
  const int n = poly.n_vars();
  const QuadratureSpec spec = quad.value_or(default_mahler_spec(n));
  spec.validate();
  check_grid_size(n, spec);
  auto compiled = std::make_shared<const Compiled>(compile(poly));

  auto run = [&](int m) {
    const auto grid = kernels::make_grid(n, m, spec.node_shift);
    const Evaluator ev(compiled, grid);
    Acc acc = kernels::torus_reduce<Acc>(grid, [&](std::span<const int> idx) { return map(ev(idx)); });
    if (acc.min_abs == 0.0)
      throw ComputationError("polynomial vanishes exactly at a quadrature node; change node_shift");
    return acc;
  };

  MahlerResult r;
  r.method = MahlerMethod::quadrature;
  int m = spec.points_per_dim;
  Acc acc = run(m);
  double mean = mean_of(acc);
  double delta = std::numeric_limits<double>::infinity();
  bool singular = flag_singular(*compiled, acc.min_abs, m);
  auto tol_now = [&] { return quad || !singular ? spec.tol : std::max(spec.tol, singular_tolerance(n)); };
  bool converged = false;
  int refinements = 0;

  if (spec.max_refinements == 0) {
    if (m >= 4) delta = std::abs(mean - mean_of(run(m / 2)));
    converged = delta < tol_now();
  } else {
    for (int k = 1; k <= spec.max_refinements; ++k) {
      m *= 2;
      Acc next = run(m);
      const double v = mean_of(next);
      delta = std::abs(v - mean);
      mean = v;
      acc = next;
      refinements = k;
      singular = flag_singular(*compiled, acc.min_abs, m);
      if (delta < tol_now()) {
        converged = true;
        break;
      }
    }
  }
  r.value = mean;
  r.error_estimate = std::isfinite(delta) ? delta : 0.0;
  r.converged = converged;
  r.singular_on_torus = singular;
  r.points = m;
  r.refinements = refinements;
  r.min_abs = acc.min_abs;
  if (!std::isfinite(delta)) r.notes.push_back("no error estimate: single grid below 4 points");
  return r;
}

// One variable with a log singularity: split [0, 2pi) at the arguments of the
// roots close to the unit circle and integrate each piece with tanh-sinh,
// which clusters nodes at the (singular) endpoints.
MahlerResult mahler_1d_adaptive(const LaurentPolynomial& poly, MahlerResult grid_result) {
  const double two_pi = 2.0 * std::numbers::pi;
  const auto& terms = poly.terms();
  const int lo = terms.begin()->first[0];
  const int hi = terms.rbegin()->first[0];
  std::vector<double> cuts{0.0, two_pi};
  if (hi > lo) {
    std::vector<cplx> coeffs(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (const auto& [e, c] : terms) coeffs[static_cast<std::size_t>(e[0] - lo)] = c;
    for (const cplx& z : polynomial_roots(coeffs))
      if (std::abs(std::abs(z) - 1.0) < 1e-3) {
        double t = std::arg(z);
        if (t < 0.0) t += two_pi;
        cuts.push_back(t);
      }
  }
  std::sort(cuts.begin(), cuts.end());
  // Long double evaluation; below the rounding floor |f| carries no digits, so
  // it is clamped there rather than at an arbitrary tiny value.
  long double scale = 0.0L;
  for (const auto& [e, c] : terms) scale += std::abs(c) * (1.0L + std::abs(e[0]));
  const long double floor = 4.0L * std::numeric_limits<long double>::epsilon() * scale;
  auto f = [&](double theta) {
    long double re = 0.0L, im = 0.0L;
    for (const auto& [e, c] : terms) {
      const long double ph = static_cast<long double>(e[0]) * theta;
      const long double cr = c.real(), ci = c.imag();
      const long double co = std::cos(ph), si = std::sin(ph);
      re += cr * co - ci * si;
      im += cr * si + ci * co;
    }
    return static_cast<double>(std::log(std::max(std::hypot(re, im), floor)));
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-14) continue;
    double e = 0.0;
    total += integrator.integrate(f, cuts[i], cuts[i + 1], 1e-12, &e);
    err += e;
  }
  MahlerResult r = grid_result;
  r.value = total / two_pi;
  r.error_estimate = err / two_pi;
  r.converged = r.error_estimate < 1e-8;
  r.points = 0;
  r.refinements = 0;
  r.notes.push_back("singular one-variable integrand: tanh-sinh on arcs between near-circle roots");
  return r;
}

double log_mean(const kernels::LogModAcc& a) { return a.sum().real() / static_cast<double>(a.count()); }
double pow_mean(const PowAcc& a) { return a.sum.sum().real() / static_cast<double>(a.sum.count); }

}  // namespace

MahlerResult mahler_quadrature(const LaurentPolynomial& poly, const std::optional<QuadratureSpec>& quad) {
  if (poly.is_zero()) throw DomainError("Mahler measure of the zero polynomial is undefined");
  MahlerResult r = refine_mahler<kernels::LogModAcc>(poly, quad, [](cplx f) { return f; }, &log_mean);
  if (poly.n_vars() == 1 && !quad && (r.singular_on_torus || !r.converged)) return mahler_1d_adaptive(poly, r);
  if (r.singular_on_torus) r.notes.push_back("integrand has a log singularity on the torus; algebraic convergence");
  return r;
}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
  if (coeffs.size() < 2) return {};
  const int n = static_cast<int>(coeffs.size()) - 1;
  const cplx lead = coeffs.back();
  if (lead == cplx(0.0)) throw DomainError("polynomial_roots: leading coefficient is zero");

  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) c(i, n - 1) = -coeffs[static_cast<std::size_t>(i)] / lead;

  // Parlett-Reinsch balancing with powers of two (exact similarity).
  for (bool done = false; !done;) {
    done = true;
    for (int i = 0; i < n; ++i) {
      const double col = c.col(i).cwiseAbs().sum() - std::abs(c(i, i));
      const double row = c.row(i).cwiseAbs().sum() - std::abs(c(i, i));
      if (col == 0.0 || row == 0.0) continue;
      double f = 1.0;
      double cc = col, rr = row;
      const double s = cc + rr;
      while (cc < rr / 2.0) { cc *= 2.0; rr /= 2.0; f *= 2.0; }
      while (cc >= rr * 2.0) { cc /= 2.0; rr *= 2.0; f /= 2.0; }
      if (cc + rr < 0.95 * s) {
        done = false;
        c.col(i) *= f;
        c.row(i) /= f;
      }
    }
  }

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c, false);
  if (es.info() != Eigen::Success) throw ComputationError("companion-matrix eigenvalue iteration did not converge");
  std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);

  auto horner = [&](cplx x, cplx& dp) {
    cplx p = coeffs.back();
    dp = 0.0;
    for (int k = n - 1; k >= 0; --k) {
      dp = dp * x + p;
      p = p * x + coeffs[static_cast<std::size_t>(k)];
    }
    return p;
  };
  for (cplx& z : roots) {
    cplx dp;
    const cplx p = horner(z, dp);
    if (dp == cplx(0.0)) continue;
    const cplx z1 = z - p / dp;
    cplx dp1;
    if (std::abs(horner(z1, dp1)) < std::abs(p)) z = z1;
  }
  return roots;
}

MahlerResult mahler_univariate(const LaurentPolynomial& poly) {
  if (poly.n_vars() != 1) throw DomainError("Jensen route needs a one-variable polynomial");
  if (poly.is_zero()) throw DomainError("Mahler measure of the zero polynomial is undefined");
  const auto& terms = poly.terms();
  const int lo = terms.begin()->first[0];
  const int hi = terms.rbegin()->first[0];
  if (hi - lo > 4096) throw DomainError("Jensen route limited to degree 4096");
  std::vector<cplx> coeffs(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (const auto& [e, c] : terms) coeffs[static_cast<std::size_t>(e[0] - lo)] = c;

  MahlerResult r;
  r.method = MahlerMethod::jensen;
  double v = std::log(std::abs(coeffs.back()));
  if (hi > lo) {
    const auto roots = polynomial_roots(coeffs);
    int close = 0;
    for (const cplx& z : roots) {
      const double a = std::abs(z);
      if (a > 1.0) v += std::log(a);
      if (std::abs(a - 1.0) < 1e-3) ++close;
    }
    if (close) {
      r.notes.push_back(std::to_string(close) + " root(s) within 1e-3 of the unit circle; max{|alpha|,1} is ill-conditioned");
      r.singular_on_torus = true;
    }
  }
  r.value = v;
  return r;
}

double mahler_closed_mtype(double c) {
  if (!std::isfinite(c)) throw DomainError("c must be finite");
  return std::log((std::abs(c) + std::sqrt(c * c + 4.0)) / 2.0);
}

double mahler_closed_ftype(double c) {
  if (!std::isfinite(c)) throw DomainError("c must be finite");
  if (std::abs(c) < 2.0) throw DomainError("m(X + X^-1 + c) closed form needs |c| >= 2");
  return std::log((std::abs(c) + std::sqrt(c * c - 4.0)) / 2.0);
}

namespace {

void check_lemma5(double xi, double u, ShiftType shift) {
  if (!(xi > 0.0 && xi < std::numbers::pi / 2)) throw DomainError("xi must lie in (0, pi/2)");
  if (shift == ShiftType::m_type && !(u > -1.0 && u < 0.0)) throw DomainError("M-type needs -1 < u < 0");
  if (shift == ShiftType::f_type && !(u < 0.0 && std::isfinite(u))) throw DomainError("F-type needs u < 0");
}

}  // namespace

double lemma5_coefficient(double xi, double u, ShiftType shift) {
  check_lemma5(xi, u, shift);
  if (shift == ShiftType::m_type) return (u - 1.0 / u) / std::cos(xi);
  return -(u + 1.0 / u) / std::sin(xi);
}

double mahler_lemma5(double xi, double u, ShiftType shift) {
  check_lemma5(xi, u, shift);
  const double root = std::sqrt(u * u + 2.0 * std::cos(2.0 * xi) + 1.0 / (u * u));
  if (shift == ShiftType::m_type) return std::log((u - 1.0 / u + root) / (2.0 * std::cos(xi)));
  return std::log((-(u + 1.0 / u) + root) / (2.0 * std::sin(xi)));
}

double mahler_rv(double c) {
  if (!(c > 4.0) || !std::isfinite(c)) throw DomainError("m(X1+X1^-1+X2+X2^-1+c) series needs c > 4");
  const double a[4] = {1.5, 1.5, 1.0, 1.0};
  const double b[3] = {2.0, 2.0, 2.0};
  return std::log(c) - 2.0 / (c * c) * hyper_pfq(a, b, 16.0 / (c * c));
}

double log_cos_identity(double r) {
  if (!(std::abs(r) <= 1.0)) throw DomainError("log_cos_identity needs |r| <= 1");
  return std::log((1.0 + std::sqrt(1.0 - r * r)) / 2.0);
}

double zeta_mahler(const LaurentPolynomial& poly, double s, const std::optional<QuadratureSpec>& quad) {
  if (poly.is_zero()) throw DomainError("zeta Mahler measure of the zero polynomial is undefined");
  if (!std::isfinite(s)) throw DomainError("s must be finite");
  if (s == 0.0) return 1.0;
  const MahlerResult r = refine_mahler<PowAcc>(
      poly, quad, [s](cplx f) { const double a = std::abs(f); return cplx(std::pow(a, s), a); }, &pow_mean);
  if (r.singular_on_torus && s <= -1.0)
    throw DomainError("|f|^s is not integrable for s <= -1 when f vanishes on the torus");
  if (!r.converged) {
    std::ostringstream msg;
    msg << "zeta_mahler: no convergence (delta " << r.error_estimate << " at " << r.points << " points per axis)";
    throw ComputationError(msg.str());
  }
  return r.value;
}

}  // namespace mzc
