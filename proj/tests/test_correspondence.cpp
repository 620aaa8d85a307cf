#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mzc/correspondence.hpp"

using namespace mzc;
using std::numbers::pi;

namespace {

unsigned __int128 binom(int n, int k) {
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return r;
}

// number of closed walks of length 2n on Z^3
unsigned __int128 closed_walks_3d(int n) {
  unsigned __int128 s = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) {
      const unsigned __int128 m = binom(n, i) * binom(n - i, j);
      s += m * m;
    }
  return binom(2 * n, n) * s;
}

unsigned __int128 ipow(unsigned __int128 b, int e) {
  unsigned __int128 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

TEST_CASE("QW closed forms agree with the Mahler decomposition") {
  for (int i = 1; i <= 10; ++i) {
    const double xi = i * (pi / 2) / 11;
    const UInterval m = qw_u_range(xi, ShiftType::m_type);
    CHECK(m.lo == doctest::Approx(std::cos(xi) - std::sqrt(std::cos(xi) * std::cos(xi) + 1)));
    CHECK(m.hi == 0.0);
    for (int j = 1; j <= 10; ++j) {
      const double u = m.lo * j / 11.0;
      const double alt = std::log(-u * std::cos(xi)) + mahler_lemma5(xi, u, ShiftType::m_type);
      CHECK(std::abs(qw_log_zeta_closed(xi, u, ShiftType::m_type) - alt) < 1e-12);
      const double uf = -0.3 * j;
      const double altf = std::log(-uf * std::sin(xi)) + mahler_lemma5(xi, uf, ShiftType::f_type);
      CHECK(std::abs(qw_log_zeta_closed(xi, uf, ShiftType::f_type) - altf) < 1e-12);
    }
  }
}

TEST_CASE("1D QW report") {
  const auto r = verify_1d_qw(pi / 3, -0.2, ShiftType::m_type);
  CHECK(r.passed);
  CHECK(r.abs_diff < 1e-12);
  CHECK(r.identity_name == "qw1d_log_zeta");
  CHECK(verify_1d_qw(pi / 6, -2.0, ShiftType::f_type).passed);
  CHECK_THROWS_AS(verify_1d_qw(pi / 4, 0.2, ShiftType::m_type), DomainError);
  CHECK_THROWS_AS(verify_1d_qw(pi / 4, -0.9, ShiftType::m_type), DomainError);
  // exactly at the open endpoint
  CHECK_THROWS_AS(verify_1d_qw(pi / 4, qw_u_range(pi / 4, ShiftType::m_type).lo, ShiftType::m_type), DomainError);
}

TEST_CASE("Hadamard specialisation values") {
  const double u = -0.1;
  CHECK(std::abs(qw_log_zeta_closed(pi / 4, u, ShiftType::m_type) - std::log((0.99 + std::sqrt(1.0001)) / 2)) < 1e-15);
  CHECK(std::abs(qw_log_zeta_closed(pi / 4, -1.0, ShiftType::f_type) - std::log((2 + std::sqrt(2.0)) / 2)) < 1e-15);
}

TEST_CASE("Grover and random-walk reports") {
  for (double u : {-0.2, -0.8}) {
    const auto g = verify_grover(2, u);
    CHECK(g.passed);
    CHECK(g.diagnostics.contains("hypergeometric_form"));
  }
  CHECK(verify_grover(1, -0.5).passed);
  CHECK_THROWS_AS(verify_grover(2, 0.5), DomainError);
  CHECK_THROWS_AS(verify_grover(0, -0.5), DomainError);

  for (double u : {-0.2, -0.5}) {
    const auto r1 = verify_rw(1, u);
    CHECK(r1.passed);
    CHECK(std::abs(r1.lhs - std::log((1 + std::sqrt(1 - u * u)) / 2)) < 1e-12);
    const auto r2 = verify_rw(2, u, 1e-7);
    CHECK(r2.passed);
    long double b = 1.0L, s = 0.0L;
    for (int n = 1; n <= 200; ++n) {
      b *= (2.0L * n - 1.0L) / (2.0L * n);
      s -= b * b * std::pow(static_cast<long double>(u), 2 * n) / (2.0L * n);
    }
    CHECK(std::abs(r2.lhs - static_cast<double>(s)) < 1e-10);
  }
}

TEST_CASE("exact return fractions") {
  for (int n = 0; n <= 12; ++n) {
    const auto f1 = rw_return_fraction(1, n);
    CHECK(f1.num * ipow(4, n) == binom(2 * n, n) * f1.den);
    const auto f2 = rw_return_fraction(2, n);
    CHECK(f2.num * ipow(16, n) == binom(2 * n, n) * binom(2 * n, n) * f2.den);
  }
  for (int n = 0; n <= 8; ++n) {
    const auto f3 = rw_return_fraction(3, n);
    CHECK(f3.num * ipow(36, n) == closed_walks_3d(n) * f3.den);
  }
  CHECK(to_string(static_cast<unsigned __int128>(0)) == "0");
  CHECK(to_string(ipow(10, 30)) == "1" + std::string(30, '0'));
  CHECK_THROWS_AS(rw_return_fraction(1, -1), DomainError);
}

TEST_CASE("spanning-tree generating function") {
  for (int d : {1, 2, 3})
    for (double u : {0.3, 0.6}) {
      const double lz = log_zeta(build_coin(CoinKind::simple_rw, d), u).value;
      CHECK(std::abs(stgf(d, u) - std::log(2.0 * d) + std::log(u) - lz) < 1e-9);
    }
  CHECK(spanning_tree_constant(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(spanning_tree_constant(2) - 4 * special_constants().catalan_g / pi) < 1e-4);
  CHECK_THROWS_AS(stgf(2, 0.0), DomainError);
  CHECK_THROWS_AS(stgf(2, 1.5), DomainError);
}

TEST_CASE("Green function from path counts") {
  for (double u : {0.3, 0.5}) CHECK(green_path_count(1, u) == doctest::Approx(1.0 / std::sqrt(1 - u * u)).epsilon(1e-12));
  CHECK_THROWS_AS(green_path_count(2, 1.0), DomainError);
  // d = 3 at u = 1 is the return-probability sum 1/(1 - p), p = 0.3405373296...
  CHECK(green_path_count(3, 1.0) == doctest::Approx(1.5163860591519780).epsilon(2e-3));
}

TEST_CASE("transience probe") {
  const std::vector<double> us{0.9, 0.99, 0.999};
  const auto p1 = transience_probe(1, us);
  CHECK_FALSE(p1.bounded);
  for (std::size_t i = 0; i < us.size(); ++i) {
    const double u = us[i];
    // central difference error grows like (h / (1 - u))^2
    const double fd = std::pow(p1.h / (1 - u), 2);
    CHECK(p1.green[i] == doctest::Approx(1.0 / std::sqrt(1 - u * u)).epsilon(std::max(fd, 1e-9)));
  }
  const auto p3 = transience_probe(3, us);
  CHECK(p3.bounded);
  REQUIRE(p3.extrapolated.has_value());
  CHECK(std::abs(p3.green.back() - p3.path_count_green) < 2e-2);
  CHECK_THROWS_AS(transience_probe(3, {0.9, 0.99}), DomainError);
  CHECK_THROWS_AS(transience_probe(3, {0.9, 0.99, 0.99995}), DomainError);
  CHECK_THROWS_AS(transience_probe(3, {0.9, 0.5, 0.99}), DomainError);
}

TEST_CASE("suite plumbing") {
  SuiteConfig empty;
  CHECK(run_suite(empty).empty());

  SuiteConfig had = SuiteConfig::group("hadamard");
  const auto ok = run_suite(had);
  REQUIRE(ok.size() == 2);
  for (const auto& r : ok) CHECK(r.passed);

  had.tol = SuiteTolerances::from_json(Json{{"all", 0.0}});
  for (const auto& r : run_suite(had)) CHECK_FALSE(r.passed);

  CHECK_THROWS_AS(SuiteTolerances::from_json(Json{{"bogus", 1.0}}), DomainError);
  CHECK_THROWS_AS(SuiteTolerances::from_json(Json{{"qw", -1.0}}), DomainError);
  CHECK_THROWS_AS(SuiteConfig::group("nope"), DomainError);
  const Json t = SuiteTolerances{}.to_json();
  CHECK(SuiteTolerances::from_json(t).to_json() == t);

  const auto cr = run_suite(SuiteConfig::group("cr"));
  for (std::size_t i = 1; i < cr.size(); ++i) {
    const auto& a = cr[i - 1];
    const auto& b = cr[i];
    CHECK(a.identity_name <= b.identity_name);
    if (a.identity_name == b.identity_name) CHECK_FALSE(b.inputs < a.inputs);
  }
  const Json j = to_json(ok.front());
  CHECK(j.contains("identity_name"));
  CHECK(j.contains("passed"));
}
