#include "mzc/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mzc/hypergeometric.hpp"

namespace mzc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double max_pairwise(const std::vector<double>& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const double d = std::abs(v[i] - v[j]);
      if (!(d <= m)) m = d;  // NaN propagates
    }
  return m;
}

void check_u_negative_unit(double u, const char* what) {
  if (!(u > -1.0 && u < 0.0)) throw DomainError(std::string(what) + ": u must lie in (-1, 0)");
}

void check_d(int d) {
  if (d < 1 || d > 6) throw DomainError("dimension d must lie in [1, 6]");
}

// sum_j (X_j + X_j^-1) + c
LaurentPolynomial cos_sum_poly(int d, double c) {
  LaurentPolynomial p(d);
  for (int j = 0; j < d; ++j) {
    Exponents e(static_cast<std::size_t>(d), 0);
    e[static_cast<std::size_t>(j)] = 1;
    p.add_term(e, 1.0);
    e[static_cast<std::size_t>(j)] = -1;
    p.add_term(e, 1.0);
  }
  p.add_term(Exponents(static_cast<std::size_t>(d), 0), c);
  return p;
}

// Mahler grid for the cos-sum polynomials; these never vanish on the torus
// for the parameters used here, so the integrand is analytic.
QuadratureSpec cos_poly_mahler_spec(int d) {
  if (d == 3) return QuadratureSpec{32, 0.5, 1e-10, 3};
  return default_mahler_spec(d);
}

Json mahler_diag(const MahlerResult& m) {
  return Json{{"value", m.value},
              {"error_estimate", m.error_estimate},
              {"points", m.points},
              {"converged", m.converged},
              {"singular_on_torus", m.singular_on_torus}};
}

Json cos_diag(const CosIntegral& c) {
  return Json{{"value", c.value},
              {"error_estimate", c.error_estimate},
              {"points", c.points},
              {"converged", c.converged},
              {"method", c.method}};
}

double four_f_three(double x) {
  const double a[4] = {1.5, 1.5, 1.0, 1.0};
  const double b[3] = {2.0, 2.0, 2.0};
  return hyper_pfq(a, b, x);
}

}  // namespace

void CorrespondenceReport::settle() {
  passed = tolerance > 0.0 && std::isfinite(lhs) && std::isfinite(rhs) && abs_diff <= tolerance;
}

UInterval qw_u_range(double xi, ShiftType shift) {
  if (shift == ShiftType::m_type) {
    const double c = std::cos(xi);
    return {c - std::sqrt(c * c + 1.0), 0.0, false, false};
  }
  return {-std::numeric_limits<double>::infinity(), 0.0, false, false};
}

double qw_log_zeta_closed(double xi, double u, ShiftType shift) {
  const double s = shift == ShiftType::m_type ? -1.0 : 1.0;
  const double u2 = u * u;
  return std::log((1.0 + s * u2 + std::sqrt(1.0 + 2.0 * std::cos(2.0 * xi) * u2 + u2 * u2)) / 2.0);
}

QuadratureSpec default_cos_spec(int d, bool singular) {
  switch (d) {
    case 1: return {1024, 0.5, 1e-12, 6};
    case 2: return {64, 0.5, singular ? 1e-6 : 1e-12, 6};
    case 3: return {16, 0.5, singular ? 1e-4 : 1e-10, 4};
    default: return {8, 0.5, singular ? 1e-3 : 1e-8, 3};
  }
}

CorrespondenceReport verify_1d_qw(double xi, double u, ShiftType shift, double tol, const QuadratureSpec& quad) {
  if (!(xi > 0.0 && xi < kPi / 2)) throw DomainError("verify_1d_qw: xi must lie in (0, pi/2)");
  const UInterval range = qw_u_range(xi, shift);
  if (!range.contains(u)) {
    std::ostringstream msg;
    msg << "verify_1d_qw: u = " << u << " outside " << range.describe() << " for " << to_string(shift);
    throw DomainError(msg.str());
  }
  CorrespondenceReport r;
  r.identity_name = "qw1d_log_zeta";
  r.tolerance = tol;
  r.inputs = Json{{"xi", xi}, {"u", u}, {"shift", to_string(shift)}};

  const CoinMatrix coin = CoinSpec{CoinKind::hadamard_type, 1, xi, shift}.build();
  const LogZeta lz = log_zeta(coin, u, quad);
  const double prefactor = std::log(-u * (shift == ShiftType::m_type ? std::cos(xi) : std::sin(xi)));
  const double lemma5 = mahler_lemma5(xi, u, shift);
  const double c = lemma5_coefficient(xi, u, shift);
  LaurentPolynomial poly(1);
  poly.add_term({1}, 1.0);
  poly.add_term({-1}, shift == ShiftType::m_type ? -1.0 : 1.0);
  poly.add_term({0}, c);
  const MahlerResult mq = mahler_quadrature(poly);
  const double closed = qw_log_zeta_closed(xi, u, shift);

  r.lhs = lz.value;
  r.rhs = prefactor + lemma5;
  r.abs_diff = max_pairwise({r.lhs, r.rhs, closed, prefactor + mq.value});
  r.diagnostics = Json{{"closed_form", closed},
                       {"mahler_coefficient_c", c},
                       {"mahler_lemma5", lemma5},
                       {"mahler_quadrature", mahler_diag(mq)},
                       {"grid_points", lz.points},
                       {"quadrature_error_estimate", lz.error_estimate},
                       {"imag_residual", lz.imag_residual}};
  if (shift == ShiftType::m_type && std::abs(u - range.lo) < 1e-8)
    r.diagnostics["warning"] = "u within 1e-8 of the open endpoint; conditioning is poor";
  r.settle();
  return r;
}

CorrespondenceReport verify_grover(int d, double u, double tol, const std::optional<QuadratureSpec>& quad) {
  check_d(d);
  check_u_negative_unit(u, "verify_grover");
  CorrespondenceReport r;
  r.identity_name = "grover_log_zeta";
  r.tolerance = tol;
  r.inputs = Json{{"d", d}, {"u", u}};

  const double dd = d;
  const double base = (dd - 1.0) * std::log(1.0 - u * u);
  const QuadratureSpec spec = quad.value_or(default_cos_spec(d, false));
  const CosIntegral lf = cos_sum_integral(
      d, [u, dd](double e) { return std::log(1.0 - 2.0 * e / dd * u + u * u); }, spec, false);
  const double c = -dd * (u + 1.0 / u);
  const MahlerResult m = mahler_quadrature(cos_sum_poly(d, c), quad ? quad : cos_poly_mahler_spec(d));

  r.lhs = base + lf.value;
  r.rhs = base + std::log(-u / dd) + m.value;
  std::vector<double> routes{r.lhs, r.rhs};
  r.diagnostics = Json{{"c", c}, {"log_f_quadrature", cos_diag(lf)}, {"mahler_quadrature", mahler_diag(m)}};
  if (d == 2) {
    const double hyp = std::log(1.0 - u * u * u * u) - 2.0 / (c * c) * four_f_three(16.0 / (c * c));
    routes.push_back(hyp);
    r.diagnostics["hypergeometric_form"] = hyp;
  }
  if (d == 1) r.diagnostics["note"] = "d = 1 Grover coin is the swap matrix; its F-type form is the identity";

  // The determinant route through the full 2d x 2d momentum matrix.
  try {
    const QuadratureSpec det_spec = d == 1 ? QuadratureSpec{256, 0.5, 1e-12, 4}
                                           : d == 2 ? QuadratureSpec{32, 0.5, 1e-10, 3}
                                                    : QuadratureSpec{16, 0.5, 1e-6, 2};
    const LogZeta lz = log_zeta(flip_flop(build_coin(CoinKind::grover, d)), u, det_spec);
    r.diagnostics["determinant_route"] = Json{{"value", lz.value},
                                              {"diff_to_lhs", std::abs(lz.value - r.lhs)},
                                              {"points", lz.points},
                                              {"imag_residual", lz.imag_residual}};
  } catch (const Error& e) {
    r.diagnostics["determinant_route"] = Json{{"error", e.what()}};
  }

  r.abs_diff = max_pairwise(routes);
  r.settle();
  return r;
}

CorrespondenceReport verify_rw(int d, double u, double tol, const std::optional<QuadratureSpec>& quad) {
  check_d(d);
  check_u_negative_unit(u, "verify_rw");
  CorrespondenceReport r;
  r.identity_name = "rw_log_zeta";
  r.tolerance = tol;
  r.inputs = Json{{"d", d}, {"u", u}};

  const double dd = d;
  const QuadratureSpec spec = quad.value_or(default_cos_spec(d, false));
  const CosIntegral lz = cos_sum_integral(d, [u, dd](double e) { return std::log(1.0 - e / dd * u); }, spec, false);
  const double c = -2.0 * dd / u;
  const MahlerResult m = mahler_quadrature(cos_sum_poly(d, c), quad ? quad : cos_poly_mahler_spec(d));

  r.lhs = lz.value;
  r.rhs = std::log(-u / (2.0 * dd)) + m.value;
  std::vector<double> routes{r.lhs, r.rhs};
  r.diagnostics = Json{{"c", c}, {"log_f_quadrature", cos_diag(lz)}, {"mahler_quadrature", mahler_diag(m)}};

  constexpr int kSeriesTerms = 30;  // r_max = 60
  if (d == 1 || d == 2) {
    double b = 1.0, series = 0.0, u2n = 1.0;
    for (int n = 1; n <= kSeriesTerms; ++n) {
      b *= (2.0 * n - 1.0) / (2.0 * n);
      u2n *= u * u;
      const double coef = d == 1 ? b : b * b;
      series -= coef * u2n / (2.0 * n);
    }
    const double tail = std::pow(u * u, kSeriesTerms + 1) / ((2.0 * kSeriesTerms + 2.0) * (1.0 - u * u));
    routes.push_back(series);
    r.diagnostics[d == 1 ? "b2n_series" : "b2n_squared_series"] = Json{{"value", series}, {"r_max", 2 * kSeriesTerms}, {"tail_bound", tail}};
    if (d == 1) {
      const double closed = log_cos_identity(u);
      routes.push_back(closed);
      r.diagnostics["closed_form"] = closed;
    } else {
      const double hyp = -(u * u / 8.0) * four_f_three(u * u);
      routes.push_back(hyp);
      r.diagnostics["hypergeometric_form"] = hyp;
    }
  }
  try {
    const SeriesValue ps = log_zeta_series(build_coin(CoinKind::simple_rw, d), u, 2 * kSeriesTerms);
    r.diagnostics["pathsum_series"] = Json{{"value", ps.value}, {"tail_bound", ps.tail_bound}};
  } catch (const Error& e) {
    r.diagnostics["pathsum_series"] = Json{{"error", e.what()}};
  }

  r.abs_diff = max_pairwise(routes);
  r.settle();
  return r;
}

std::string to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

namespace {

// sum over n_1 + ... + n_d = m of prod 1/(n_j!)^2, times (2m)!, exactly.
unsigned __int128 closed_walks(int d, int m) {
  std::vector<unsigned __int128> fact(static_cast<std::size_t>(2 * m + 1), 1);
  for (int k = 1; k <= 2 * m; ++k) fact[static_cast<std::size_t>(k)] = fact[static_cast<std::size_t>(k - 1)] * static_cast<unsigned>(k);
  unsigned __int128 total = 0;
  std::vector<int> n(static_cast<std::size_t>(d), 0);
  // Enumerate compositions of m into d parts.
  auto rec = [&](auto&& self, int j, int left, unsigned __int128 value) -> void {
    if (j == d - 1) {
      const unsigned __int128 f = fact[static_cast<std::size_t>(left)];
      total += value / (f * f);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      const unsigned __int128 f = fact[static_cast<std::size_t>(k)];
      self(self, j + 1, left - k, value / (f * f));
    }
  };
  // Dividing step by step stays exact because every partial quotient is a
  // multinomial coefficient.
  rec(rec, 0, m, fact[static_cast<std::size_t>(2 * m)]);
  return total;
}

}  // namespace

ExactFraction rw_return_fraction(int d, int n) {
  if (d < 1 || d > 6) throw DomainError("rw_return_fraction: d must lie in [1, 6]");
  if (n < 0 || n > 15) throw DomainError("rw_return_fraction: n must lie in [0, 15]");
  ExactFraction f;
  f.num = closed_walks(d, n);
  f.den = 1;
  for (int k = 0; k < 2 * n; ++k) f.den *= static_cast<unsigned>(2 * d);
  return f;
}

double stgf(int d, double u, const std::optional<QuadratureSpec>& quad) {
  check_d(d);
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("stgf: u must lie in (0, 1]");
  const double dd = d;
  const bool singular = u == 1.0;
  const QuadratureSpec spec = quad.value_or(default_cos_spec(d, singular));
  const CosIntegral ci = cos_sum_integral(
      d, [u, dd](double e) { return std::log(1.0 / u - e / dd); }, spec, !quad.has_value());
  if (!ci.converged) {
    std::ostringstream msg;
    msg << "stgf: quadrature did not converge (delta " << ci.error_estimate << " at " << ci.points << " points)";
    throw ComputationError(msg.str());
  }
  return std::log(2.0 * dd) + ci.value;
}

double spanning_tree_constant(int d, const std::optional<QuadratureSpec>& quad) {
  check_d(d);
  if (d == 1) return std::log(2.0) + log_cos_identity(1.0);
  return stgf(d, 1.0, quad);
}

double green_path_count(int d, double u) {
  check_d(d);
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("green_path_count: u must lie in (0, 1]");
  if (u == 1.0 && d <= 2) throw DomainError("green_path_count: the series diverges at u = 1 for d <= 2");
  constexpr int kExact = 20;  // P_n for n <= 40
  std::vector<long double> p(kExact + 1);
  for (int m = 0; m <= kExact; ++m) {
    if (m <= 15) {
      const ExactFraction f = rw_return_fraction(d, m);
      p[static_cast<std::size_t>(m)] = static_cast<long double>(f.num) / static_cast<long double>(f.den);
      continue;
    }
    // Past the exact integer range: (2m)!/(2d)^{2m} sum prod 1/(n_j!)^2 in long double.
    long double sum = 0.0L;
    auto rec = [&](auto&& self, int j, int left, long double value) -> void {
      if (j == d - 1) {
        sum += value / (std::tgamma(static_cast<long double>(left) + 1.0L) * std::tgamma(static_cast<long double>(left) + 1.0L));
        return;
      }
      for (int k = 0; k <= left; ++k) {
        const long double fk = std::tgamma(static_cast<long double>(k) + 1.0L);
        self(self, j + 1, left - k, value / (fk * fk));
      }
    };
    rec(rec, 0, m, 1.0L);
    p[static_cast<std::size_t>(m)] = sum * std::exp(std::lgamma(2.0L * m + 1.0L) - 2.0L * m * std::log(2.0L * d));
  }

  const long double uu = static_cast<long double>(u) * u;
  long double g = 0.0L, pw = 1.0L;
  for (int m = 0; m <= kExact; ++m) {
    g += p[static_cast<std::size_t>(m)] * pw;
    pw *= uu;
  }
  // P_2m ~ a m^-alpha + b m^-(alpha+1), fitted at m = 19, 20.
  const long double alpha = d / 2.0L;
  const long double m1 = kExact - 1, m2 = kExact;
  const long double x1 = std::pow(m1, -alpha), y1 = std::pow(m1, -alpha - 1);
  const long double x2 = std::pow(m2, -alpha), y2 = std::pow(m2, -alpha - 1);
  const long double det = x1 * y2 - x2 * y1;
  const long double a = (p[kExact - 1] * y2 - p[kExact] * y1) / det;
  const long double b = (x1 * p[kExact] - x2 * p[kExact - 1]) / det;
  constexpr long kTailCap = 20'000'000;
  long m = kExact + 1;
  for (; m < kTailCap; ++m) {
    const long double mm = m;
    const long double t = (a * std::pow(mm, -alpha) + b * std::pow(mm, -alpha - 1)) * pw;
    g += t;
    pw *= uu;
    if (std::abs(t) < 1e-19L * g) break;
  }
  if (m >= kTailCap && u == 1.0) {
    // Remainder of the power-law tail beyond the cap, by the integral.
    const long double mm = kTailCap;
    g += a * std::pow(mm, 1 - alpha) / (alpha - 1) + b * std::pow(mm, -alpha) / alpha;
  }
  return static_cast<double>(g);
}

TransienceProbe transience_probe(int d, const std::vector<double>& u_values) {
  check_d(d);
  TransienceProbe t;
  t.d = d;
  if (u_values.size() < 3) throw DomainError("transience_probe: needs at least 3 u values");
  for (std::size_t i = 0; i < u_values.size(); ++i) {
    const double u = u_values[i];
    if (!(u > 0.0 && u < 1.0)) throw DomainError("transience_probe: u values must lie in (0, 1)");
    if (u > 1.0 - 10.0 * t.h) throw DomainError("transience_probe: u too close to 1 for central differences with h = 1e-5");
    if (i && !(u > u_values[i - 1])) throw DomainError("transience_probe: u values must be strictly ascending");
  }
  t.u_values = u_values;
  t.grid_points = d == 1 ? 65536 : d == 2 ? 2048 : d == 3 ? 512 : 64;
  const double dd = d;
  const QuadratureSpec spec{t.grid_points, 0.5, 1.0, 0};
  auto big_l = [&](double u) {
    return cos_sum_integral(d, [u, dd](double e) { return std::log(1.0 - e / dd * u); }, spec, false).value;
  };
  auto u_dl = [&](double u) { return u * (big_l(u + t.h) - big_l(u - t.h)) / (2.0 * t.h); };

  for (double u : u_values) {
    const double v = u_dl(u);
    t.u_dl.push_back(v);
    t.green.push_back(1.0 - v);
  }
  for (std::size_t i = 1; i < t.green.size(); ++i) t.increments.push_back(t.green[i] - t.green[i - 1]);
  const std::size_t k = t.increments.size();
  t.bounded = t.increments[k - 1] < t.increments[k - 2] / 2.0;
  if (d >= 3) {
    const std::size_t n = t.green.size();
    const double s1 = std::sqrt(1.0 - u_values[n - 2]), s2 = std::sqrt(1.0 - u_values[n - 1]);
    const double c = (t.green[n - 1] - t.green[n - 2]) / (s1 - s2);
    t.extrapolated = t.green[n - 1] + c * s2;
  }
  t.path_count_green = green_path_count(d, u_values.back());

  t.bridge_probe = 1.0 - u_dl(t.bridge_u);
  const auto c = cr_pathsum_sequence(build_coin(CoinKind::simple_rw, d), 12);
  double s = 1.0, pw = 1.0;
  for (int n = 1; n <= 12; ++n) {
    pw *= t.bridge_u;
    s += c[static_cast<std::size_t>(n - 1)] * pw;
  }
  t.bridge_pathsum = s;
  return t;
}

SuiteTolerances SuiteTolerances::from_json(const Json& j) {
  SuiteTolerances t;
  if (!j.is_object()) throw DomainError("tolerance file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw DomainError("tolerance '" + key + "' must be a number");
    const double v = value.get<double>();
    if (!(v >= 0.0)) throw DomainError("tolerance '" + key + "' must be non-negative");
    double* slot = nullptr;
    if (key == "qw") slot = &t.qw;
    else if (key == "hadamard") slot = &t.hadamard;
    else if (key == "cr") slot = &t.cr;
    else if (key == "factorisation") slot = &t.factorisation;
    else if (key == "grover") slot = &t.grover;
    else if (key == "grover_d3") slot = &t.grover_d3;
    else if (key == "rw_d1") slot = &t.rw_d1;
    else if (key == "rw_d2") slot = &t.rw_d2;
    else if (key == "rw") slot = &t.rw;
    else if (key == "mahler_closed") slot = &t.mahler_closed;
    else if (key == "smyth2") slot = &t.smyth2;
    else if (key == "smyth3") slot = &t.smyth3;
    else if (key == "spanning") slot = &t.spanning;
    else if (key == "stgf_shift") slot = &t.stgf_shift;
    else if (key == "transience") slot = &t.transience;
    else if (key == "all") {
      t = SuiteTolerances{};
      for (double* p : {&t.qw, &t.hadamard, &t.cr, &t.factorisation, &t.grover, &t.grover_d3, &t.rw_d1, &t.rw_d2,
                        &t.rw, &t.mahler_closed, &t.smyth2, &t.smyth3, &t.spanning, &t.stgf_shift, &t.transience})
        *p = v;
      continue;
    } else
      throw DomainError("unknown tolerance key '" + key + "'");
    *slot = v;
  }
  return t;
}

Json SuiteTolerances::to_json() const {
  return Json{{"qw", qw},         {"hadamard", hadamard},   {"cr", cr},         {"factorisation", factorisation},
              {"grover", grover}, {"grover_d3", grover_d3}, {"rw_d1", rw_d1},   {"rw_d2", rw_d2},
              {"rw", rw},         {"mahler_closed", mahler_closed},       {"smyth2", smyth2}, {"smyth3", smyth3},
              {"spanning", spanning}, {"stgf_shift", stgf_shift}, {"transience", transience}};
}

SuiteConfig SuiteConfig::canonical() {
  SuiteConfig c;
  c.qw_xi = {kPi / 6, kPi / 4, kPi / 3};
  c.qw_m_fractions = {0.1, 0.3, 0.5, 0.7, 0.9};
  c.qw_f_u = {-0.1, -0.5, -1.0, -2.0, -5.0};
  c.hadamard_cases = {{ShiftType::m_type, -0.1}, {ShiftType::f_type, -1.0}};
  for (double xi : c.qw_xi)
    for (ShiftType s : {ShiftType::m_type, ShiftType::f_type})
      c.cr_coins.push_back(CoinSpec{CoinKind::hadamard_type, 1, xi, s});
  c.cr_coins.push_back(CoinSpec{CoinKind::grover, 2, std::nullopt, ShiftType::f_type});
  c.cr_coins.push_back(CoinSpec{CoinKind::simple_rw, 1, std::nullopt, ShiftType::m_type});
  c.cr_coins.push_back(CoinSpec{CoinKind::simple_rw, 2, std::nullopt, ShiftType::m_type});
  c.factorisation_sizes = {{1, 2}, {1, 3}, {1, 4}, {2, 2}, {2, 3}};
  c.factorisation_u = {0.3, -0.3, -0.7};
  c.closed_m_c = {0.5, -0.5, 1.0, -1.0, 3.0, -3.0};
  c.closed_f_c = {2.0, -2.0, 3.0, -3.0, 5.0, -5.0};
  c.grover_d = {1, 2, 3};
  c.grover_u = {-0.2, -0.5, -0.8};
  c.rw_d = {1, 2, 3};
  c.rw_u = {-0.2, -0.5, -0.8};
  c.smyth_vars = {2, 3};
  c.spanning_d = {1, 2, 3};
  c.stgf_d = {1, 2, 3};
  c.stgf_u = {0.3, 0.6, 0.9};
  c.transience_d = {1, 2, 3};
  c.transience_u = {0.9, 0.99, 0.999};
  return c;
}

std::vector<std::string> SuiteConfig::group_names() {
  return {"all", "qw", "hadamard", "cr", "factorisation", "mahler_closed", "grover",
          "rw", "smyth", "spanning", "stgf", "transience"};
}

SuiteConfig SuiteConfig::group(const std::string& name) {
  const SuiteConfig full = canonical();
  if (name == "all") return full;
  SuiteConfig c;
  if (name == "qw") {
    c.qw_xi = full.qw_xi;
    c.qw_m_fractions = full.qw_m_fractions;
    c.qw_f_u = full.qw_f_u;
  } else if (name == "hadamard") {
    c.hadamard_cases = full.hadamard_cases;
  } else if (name == "cr") {
    c.cr_coins = full.cr_coins;
  } else if (name == "factorisation") {
    c.factorisation_sizes = full.factorisation_sizes;
    c.factorisation_u = full.factorisation_u;
  } else if (name == "mahler_closed") {
    c.closed_m_c = full.closed_m_c;
    c.closed_f_c = full.closed_f_c;
  } else if (name == "grover") {
    c.grover_d = full.grover_d;
    c.grover_u = full.grover_u;
  } else if (name == "rw") {
    c.rw_d = full.rw_d;
    c.rw_u = full.rw_u;
  } else if (name == "smyth") {
    c.smyth_vars = full.smyth_vars;
  } else if (name == "spanning") {
    c.spanning_d = full.spanning_d;
  } else if (name == "stgf") {
    c.stgf_d = full.stgf_d;
    c.stgf_u = full.stgf_u;
  } else if (name == "transience") {
    c.transience_d = full.transience_d;
    c.transience_u = full.transience_u;
  } else {
    throw DomainError("unknown suite '" + name + "'");
  }
  return c;
}

namespace {

CorrespondenceReport failed(const std::string& name, Json inputs, double tol, const std::string& why) {
  CorrespondenceReport r;
  r.identity_name = name;
  r.inputs = std::move(inputs);
  r.tolerance = tol;
  r.lhs = r.rhs = kNaN;
  r.abs_diff = std::numeric_limits<double>::infinity();
  r.diagnostics = Json{{"error", why}};
  r.passed = false;
  return r;
}

template <class F>
void attempt(std::vector<CorrespondenceReport>& out, const std::string& name, const Json& inputs, double tol, F f) {
  try {
    out.push_back(f());
  } catch (const std::exception& e) {
    out.push_back(failed(name, inputs, tol, e.what()));
  }
}

CorrespondenceReport cr_routes(const CoinSpec& spec, int r_max, double tol) {
  const CoinMatrix coin = spec.build();
  CorrespondenceReport rep;
  rep.identity_name = "cr_routes";
  rep.tolerance = tol;
  rep.inputs = Json{{"coin", spec.label()}, {"r_max", r_max}};
  const QuadratureSpec quad{16, 0.5, 1e-12, 2};
  const auto path = cr_pathsum_sequence(coin, r_max);
  Json rows = Json::array();
  double worst = -1.0;
  for (int r = 1; r <= r_max; ++r) {
    std::vector<double> routes;
    const double q = cr_limit(coin, r, quad).value;
    const double p = path[static_cast<std::size_t>(r - 1)];
    routes = {q, p};
    Json row{{"r", r}, {"quadrature", q}, {"path_sum", p}};
    if (spec.kind == CoinKind::hadamard_type) {
      const double cf = r % 2 ? 0.0 : cr_closed_1d_qw(*spec.xi, r / 2, spec.shift);
      const double hf = r % 2 ? 0.0 : cr_closed_1d_qw_2f1(*spec.xi, r / 2, spec.shift);
      routes.push_back(cf);
      routes.push_back(hf);
      row["closed_form"] = cf;
      row["closed_form_2f1"] = hf;
    }
    const double diff = max_pairwise(routes);
    if (!(diff <= worst)) {
      worst = diff;
      rep.lhs = q;
      rep.rhs = p;
    }
    rows.push_back(row);
  }
  rep.abs_diff = worst;
  rep.diagnostics = Json{{"coefficients", rows}};
  rep.settle();
  return rep;
}

std::vector<CoinSpec> factorisation_coins(int d) {
  std::vector<CoinSpec> v;
  if (d == 1)
    for (ShiftType s : {ShiftType::m_type, ShiftType::f_type}) v.push_back({CoinKind::hadamard_type, 1, kPi / 4, s});
  for (ShiftType s : {ShiftType::m_type, ShiftType::f_type}) v.push_back({CoinKind::grover, d, std::nullopt, s});
  v.push_back({CoinKind::simple_rw, d, std::nullopt, ShiftType::m_type});
  return v;
}

// Real orthogonal coin built from Givens rotations, so det(I - u M_A) stays real.
CoinMatrix rotation_coin(int d) {
  const int n = 2 * d;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    const double t = 0.3 + 0.4 * i;
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(n, n);
    g(i, i) = std::cos(t);
    g(i, i + 1) = -std::sin(t);
    g(i + 1, i) = std::sin(t);
    g(i + 1, i + 1) = std::cos(t);
    a = g * a;
  }
  return CoinMatrix::custom(a);
}

CorrespondenceReport factorisation(int d, int n, const std::vector<double>& us, double tol) {
  CorrespondenceReport rep;
  rep.identity_name = "momentum_factorisation";
  rep.tolerance = tol;
  rep.inputs = Json{{"d", d}, {"N", n}, {"u", us}};
  std::vector<std::pair<std::string, CoinMatrix>> coins;
  for (const auto& s : factorisation_coins(d)) coins.emplace_back(s.label(), s.build());
  coins.emplace_back("custom(rotation,d=" + std::to_string(d) + ")", rotation_coin(d));
  Json cases = Json::array();
  double worst = -1.0;
  for (const auto& [label, coin] : coins)
    for (double u : us) {
      const FiniteZeta a = zeta_finite(coin, n, u);
      const FiniteZeta b = zeta_finite_dense(coin, n, u);
      const double rel = std::abs(a.value - b.value) / std::abs(b.value);
      cases.push_back(Json{{"coin", label}, {"u", u}, {"momentum", a.value}, {"dense", b.value}, {"relative_error", rel}});
      if (!(rel <= worst)) {
        worst = rel;
        rep.lhs = a.value;
        rep.rhs = b.value;
      }
    }
  rep.abs_diff = worst;
  rep.diagnostics = Json{{"measure", "relative error"}, {"cases", cases}};
  rep.settle();
  return rep;
}

CorrespondenceReport mahler_closed_check(double c, ShiftType shift, double tol) {
  CorrespondenceReport rep;
  rep.identity_name = shift == ShiftType::m_type ? "mahler_closed_m" : "mahler_closed_f";
  rep.tolerance = tol;
  rep.inputs = Json{{"c", c}};
  LaurentPolynomial p(1);
  p.add_term({1}, 1.0);
  p.add_term({-1}, shift == ShiftType::m_type ? -1.0 : 1.0);
  p.add_term({0}, c);
  const MahlerResult q = mahler_quadrature(p);
  const MahlerResult j = mahler_univariate(p);
  rep.lhs = q.value;
  rep.rhs = shift == ShiftType::m_type ? mahler_closed_mtype(c) : mahler_closed_ftype(c);
  rep.abs_diff = max_pairwise({rep.lhs, rep.rhs, j.value});
  rep.diagnostics = Json{{"polynomial", format_laurent(p)}, {"quadrature", mahler_diag(q)}, {"jensen", j.value}};
  if (!q.notes.empty()) rep.diagnostics["notes"] = q.notes;
  rep.settle();
  return rep;
}

CorrespondenceReport smyth(int vars, double tol) {
  CorrespondenceReport rep;
  rep.identity_name = vars == 2 ? "smyth_2" : "smyth_3";
  rep.tolerance = tol;
  rep.inputs = Json{{"polynomial", vars == 2 ? "X1 + X2 + 1" : "X1 + X2 + X3 + 1"}};
  if (vars != 2 && vars != 3) throw DomainError("Smyth identities exist for 2 and 3 variables");
  const LaurentPolynomial p = parse_laurent(rep.inputs["polynomial"].get<std::string>());
  const MahlerResult m = mahler_quadrature(p, QuadratureSpec::fixed(vars == 2 ? 4096 : 256, tol));
  rep.lhs = m.value;
  rep.rhs = vars == 2 ? smyth_two_variable() : smyth_three_variable();
  rep.abs_diff = std::abs(rep.lhs - rep.rhs);
  const auto& k = special_constants();
  rep.diagnostics = Json{{"quadrature", mahler_diag(m)},
                         {vars == 2 ? "l_chi3_2" : "zeta3", vars == 2 ? k.l_chi3_2 : k.zeta3}};
  rep.settle();
  return rep;
}

CorrespondenceReport spanning(int d, double tol) {
  CorrespondenceReport rep;
  rep.identity_name = "spanning_tree_constant";
  rep.tolerance = tol;
  rep.inputs = Json{{"d", d}};
  rep.lhs = spanning_tree_constant(d);
  const double dd = d;
  if (d == 1) {
    const CosIntegral ci = cos_sum_integral(1, [](double e) { return std::log(1.0 - e); }, QuadratureSpec{}, true);
    rep.rhs = std::log(2.0) + ci.value;
    rep.diagnostics["route"] = "log 2 + adaptive quadrature of log(1 - cos theta)";
  } else if (d == 2) {
    rep.rhs = 4.0 * special_constants().catalan_g / kPi;
    rep.diagnostics["catalan_g"] = special_constants().catalan_g;
  }
  // Determinant route: L(A_RW, 1) + log 2d from the momentum matrix.
  try {
    const QuadratureSpec det_spec = d == 2 ? QuadratureSpec{64, 0.5, 1e-5, 4} : QuadratureSpec{16, 0.5, 1e-3, 3};
    const LogZeta lz = log_zeta(build_coin(CoinKind::simple_rw, d), 1.0, det_spec);
    const double v = lz.value + std::log(2.0 * dd);
    rep.diagnostics["determinant_route"] = Json{{"value", v}, {"points", lz.points}, {"error_estimate", lz.error_estimate}};
    if (d >= 3) rep.rhs = v;
  } catch (const Error& e) {
    rep.diagnostics["determinant_route"] = Json{{"error", e.what()}};
    if (d >= 3) throw;
  }
  rep.abs_diff = std::abs(rep.lhs - rep.rhs);
  rep.settle();
  return rep;
}

CorrespondenceReport stgf_shift(int d, double u, double tol) {
  CorrespondenceReport rep;
  rep.identity_name = "stgf_shift";
  rep.tolerance = tol;
  rep.inputs = Json{{"d", d}, {"u", u}};
  const double t = stgf(d, u);
  const LogZeta lz = log_zeta(build_coin(CoinKind::simple_rw, d), u);
  rep.lhs = t - std::log(2.0 * d) + std::log(u);
  rep.rhs = lz.value;
  rep.abs_diff = std::abs(rep.lhs - rep.rhs);
  rep.diagnostics = Json{{"stgf", t}, {"log_zeta_points", lz.points}, {"log_zeta_error_estimate", lz.error_estimate}};
  rep.settle();
  return rep;
}

void transience_reports(std::vector<CorrespondenceReport>& out, int d, const std::vector<double>& us,
                        double tol) {
  const Json inputs{{"d", d}, {"u", us}};
  TransienceProbe p;
  try {
    p = transience_probe(d, us);
  } catch (const std::exception& e) {
    out.push_back(failed("transience_verdict", inputs, 0.5, e.what()));
    return;
  }
  const Json diag{{"u_dl", p.u_dl},
                  {"green", p.green},
                  {"increments", p.increments},
                  {"bounded", p.bounded},
                  {"grid_points", p.grid_points},
                  {"h", p.h}};

  CorrespondenceReport v;
  v.identity_name = "transience_verdict";
  v.inputs = inputs;
  v.tolerance = 0.5;
  v.lhs = d >= 3 ? 1.0 : 0.0;  // expected: 1 transient, 0 recurrent
  v.rhs = p.bounded ? 1.0 : 0.0;
  v.abs_diff = std::abs(v.lhs - v.rhs);
  v.diagnostics = diag;
  v.settle();
  out.push_back(v);

  CorrespondenceReport b;
  b.identity_name = "transience_bridge";
  b.inputs = Json{{"d", d}, {"u", p.bridge_u}};
  // Truncation after n = 12: sum_{n>12} P_n u^n <= u^13 / (1 - u).
  const double tail = std::pow(p.bridge_u, 13) / (1.0 - p.bridge_u);
  b.tolerance = tail + 1e-9;
  b.lhs = p.bridge_probe;
  b.rhs = p.bridge_pathsum;
  b.abs_diff = std::abs(b.lhs - b.rhs);
  b.diagnostics = Json{{"terms", 12}, {"tail_bound", tail}};
  b.settle();
  out.push_back(b);

  if (d >= 3) {
    CorrespondenceReport g;
    g.identity_name = "transience_green";
    g.inputs = Json{{"d", d}, {"u", us.back()}};
    g.tolerance = tol;
    g.lhs = p.green.back();
    g.rhs = p.path_count_green;
    g.abs_diff = std::abs(g.lhs - g.rhs);
    g.diagnostics = Json{{"extrapolated_limit", p.extrapolated ? Json(*p.extrapolated) : Json()}};
    try {
      g.diagnostics["path_count_at_u_1"] = green_path_count(d, 1.0);
    } catch (const Error&) {
    }
    g.settle();
    out.push_back(g);
  }
}

}  // namespace

std::vector<CorrespondenceReport> run_suite(const SuiteConfig& cfg) {
  std::vector<CorrespondenceReport> out;
  const auto& tol = cfg.tol;

  for (double xi : cfg.qw_xi) {
    for (double f : cfg.qw_m_fractions) {
      const double u = f * qw_u_range(xi, ShiftType::m_type).lo;
      attempt(out, "qw1d_log_zeta", Json{{"xi", xi}, {"u", u}, {"shift", "m_type"}}, tol.qw,
              [&] { return verify_1d_qw(xi, u, ShiftType::m_type, tol.qw); });
    }
    for (double u : cfg.qw_f_u)
      attempt(out, "qw1d_log_zeta", Json{{"xi", xi}, {"u", u}, {"shift", "f_type"}}, tol.qw,
              [&] { return verify_1d_qw(xi, u, ShiftType::f_type, tol.qw); });
  }

  for (const auto& [shift, u] : cfg.hadamard_cases)
    attempt(out, "hadamard_closed_form", Json{{"u", u}, {"shift", to_string(shift)}}, tol.hadamard, [&] {
      CorrespondenceReport r = verify_1d_qw(kPi / 4, u, shift, tol.hadamard);
      r.identity_name = "hadamard_closed_form";
      r.rhs = r.diagnostics["closed_form"].get<double>();
      r.settle();
      return r;
    });

  for (const auto& c : cfg.cr_coins)
    attempt(out, "cr_routes", Json{{"coin", c.label()}, {"r_max", cfg.cr_r_max}}, tol.cr,
            [&] { return cr_routes(c, cfg.cr_r_max, tol.cr); });

  if (!cfg.factorisation_u.empty())
    for (const auto& [d, n] : cfg.factorisation_sizes)
      attempt(out, "momentum_factorisation", Json{{"d", d}, {"N", n}}, tol.factorisation,
              [&, d = d, n = n] { return factorisation(d, n, cfg.factorisation_u, tol.factorisation); });

  for (double c : cfg.closed_m_c)
    attempt(out, "mahler_closed_m", Json{{"c", c}}, tol.mahler_closed, [&] { return mahler_closed_check(c, ShiftType::m_type, tol.mahler_closed); });
  for (double c : cfg.closed_f_c)
    attempt(out, "mahler_closed_f", Json{{"c", c}}, tol.mahler_closed, [&] { return mahler_closed_check(c, ShiftType::f_type, tol.mahler_closed); });

  for (int d : cfg.grover_d)
    for (double u : cfg.grover_u) {
      const double t = d >= 3 ? tol.grover_d3 : tol.grover;
      attempt(out, "grover_log_zeta", Json{{"d", d}, {"u", u}}, t, [&] { return verify_grover(d, u, t); });
    }

  for (int d : cfg.rw_d)
    for (double u : cfg.rw_u) {
      const double t = d == 1 ? tol.rw_d1 : d == 2 ? tol.rw_d2 : tol.rw;
      attempt(out, "rw_log_zeta", Json{{"d", d}, {"u", u}}, t, [&] { return verify_rw(d, u, t); });
    }
  for (int d : cfg.rw_d) {
    if (d > 2) continue;
    attempt(out, "rw_return_exact", Json{{"d", d}, {"n_max", 6}}, tol.rw_d1, [&] {
      CorrespondenceReport r;
      r.identity_name = "rw_return_exact";
      r.inputs = Json{{"d", d}, {"n_max", 6}};
      r.tolerance = tol.rw_d1;
      const auto c = cr_pathsum_sequence(build_coin(CoinKind::simple_rw, d), 12);
      Json rows = Json::array();
      double worst = 0.0;
      for (int n = 1; n <= 6; ++n) {
        const ExactFraction f = rw_return_fraction(d, n);
        // Path-sum values are dyadic, so scaling by the denominator is exact.
        const double scaled = c[static_cast<std::size_t>(2 * n - 1)] * static_cast<double>(f.den);
        const double mismatch = std::abs(scaled - static_cast<double>(f.num));
        worst = std::max(worst, mismatch);
        rows.push_back(Json{{"n", n}, {"numerator", to_string(f.num)}, {"denominator", to_string(f.den)},
                            {"path_sum_times_denominator", scaled}});
        if (n == 6) {
          r.lhs = scaled;
          r.rhs = static_cast<double>(f.num);
        }
      }
      r.abs_diff = worst;
      r.diagnostics = Json{{"coefficients", rows}};
      r.settle();
      return r;
    });
  }

  for (int v : cfg.smyth_vars) {
    const double t = v == 2 ? tol.smyth2 : tol.smyth3;
    attempt(out, v == 2 ? "smyth_2" : "smyth_3", Json{{"vars", v}}, t, [&] { return smyth(v, t); });
  }

  for (int d : cfg.spanning_d)
    attempt(out, "spanning_tree_constant", Json{{"d", d}}, tol.spanning, [&] { return spanning(d, tol.spanning); });

  for (int d : cfg.stgf_d)
    for (double u : cfg.stgf_u)
      attempt(out, "stgf_shift", Json{{"d", d}, {"u", u}}, tol.stgf_shift, [&] { return stgf_shift(d, u, tol.stgf_shift); });

  if (!cfg.transience_u.empty())
    for (int d : cfg.transience_d) transience_reports(out, d, cfg.transience_u, tol.transience);

  // json's operator< compares numbers by value, so u = -0.8 sorts before -0.2
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.identity_name != b.identity_name) return a.identity_name < b.identity_name;
    return a.inputs < b.inputs;
  });
  return out;
}

Json to_json(const CorrespondenceReport& r) {
  return Json{{"identity_name", r.identity_name},
              {"inputs", r.inputs},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"abs_diff", r.abs_diff},
              {"tolerance", r.tolerance},
              {"passed", r.passed},
              {"diagnostics", r.diagnostics}};
}

}  // namespace mzc
