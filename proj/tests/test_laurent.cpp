#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "mzc/laurent.hpp"

using namespace mzc;
using std::numbers::pi;

namespace {

std::size_t error_offset(const std::string& text) {
  try {
    parse_laurent(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  return std::string::npos;
}

// random sparse polynomial written in the text grammar
std::string random_text(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nterms(1, 6), nv(1, 3), ex(-20, 20), num(-50, 50), den(1, 9), coin(0, 2);
  const int vars = nv(rng);
  std::string s;
  const int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    int p = num(rng);
    if (p == 0) p = 1;
    s += i == 0 ? (p < 0 ? "-" : "") : (p < 0 ? " - " : " + ");
    s += std::to_string(std::abs(p));
    if (coin(rng) == 0) s += "/" + std::to_string(den(rng));
    for (int v = 1; v <= vars; ++v)
      if (coin(rng) != 0) s += "*X" + std::to_string(v) + "^" + std::to_string(ex(rng));
  }
  return s;
}

}  // namespace

TEST_CASE("parsing canonical examples") {
  const auto p = parse_laurent("X1 + X2 + 1");
  CHECK(p.n_vars() == 2);
  CHECK(p.terms().size() == 3);
  CHECK(p.terms().at({1, 0}) == cplx(1.0));
  CHECK(p.terms().at({0, 1}) == cplx(1.0));
  CHECK(p.terms().at({0, 0}) == cplx(1.0));

  const auto q = parse_laurent("X1 - X1^-1 + 3");
  CHECK(q.terms().at({1}) == cplx(1.0));
  CHECK(q.terms().at({-1}) == cplx(-1.0));
  CHECK(q.terms().at({0}) == cplx(3.0));

  const auto r = parse_laurent("  -1/4*X3^2 * X1  + 0.5 ");
  CHECK(r.n_vars() == 3);
  CHECK(r.terms().at({1, 0, 2}) == cplx(-0.25));
  CHECK(parse_laurent("7").n_vars() == 1);
  CHECK(parse_laurent("X1*X1^-1 + 2").terms().size() == 1);
  CHECK(parse_laurent("X1 + X1 + X2").terms().at({1, 0}) == cplx(2.0));
}

TEST_CASE("parse errors carry byte offsets") {
  CHECK(error_offset("X1 + ") == 5);
  CHECK(error_offset("2X1") == 1);
  CHECK(error_offset("2 X1") == 2);
  CHECK(error_offset("X1 ^ x") == 5);
  CHECK(error_offset("X") == 0);  // a bare X is not a token
  CHECK(error_offset("") == 0);
  CHECK(error_offset("X1 + + X2") == 5);
  try {
    parse_laurent("X1 +");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK_FALSE(e.expected().empty());
    CHECK(std::string(e.what()).find("byte 4") != std::string::npos);
  }
}

TEST_CASE("semantic errors") {
  CHECK_THROWS_AS(parse_laurent("X1 - X1"), DomainError);
  CHECK_THROWS_AS(parse_laurent("X0 + 1"), DomainError);
  CHECK_THROWS_AS(parse_laurent("X17 + 1"), DomainError);
  CHECK_THROWS_AS(parse_laurent("X1^1000001"), DomainError);
  CHECK_NOTHROW(parse_laurent("X1^-1000000"));
  CHECK_THROWS_AS(parse_laurent("1/0*X1"), DomainError);
}

TEST_CASE("formatting") {
  CHECK(format_laurent(parse_laurent("1 + X2 + X1")) == "X1 + X2 + 1");
  CHECK(format_laurent(parse_laurent("3 - X1^-1 + X1")) == "X1 - X1^-1 + 3");
  CHECK(format_laurent(parse_laurent("-1 + 3*X1 + X1^2")) == "X1^2 + 3*X1 - 1");
  CHECK(format_laurent(parse_laurent("-X1")) == "-X1");
  CHECK(format_laurent(parse_laurent("0.1*X1*X2")) == "0.1*X1*X2");
  LaurentPolynomial c(1);
  c.add_term({1}, cplx(1.0, 2.0));
  CHECK(format_laurent(c).find('i') != std::string::npos);
}

TEST_CASE("round trip on random polynomials") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 500; ++i) {
    const std::string text = random_text(rng);
    LaurentPolynomial p(1);
    try {
      p = parse_laurent(text);
    } catch (const DomainError&) {
      continue;  // cancelled to zero
    }
    const std::string f = format_laurent(p);
    const auto back = parse_laurent(f);
    CHECK_MESSAGE(back.widened(p.n_vars()) == p, text, " -> ", f);
    CHECK(format_laurent(back) == f);
  }
}

TEST_CASE("evaluation") {
  const auto p = parse_laurent("X1 + X1^-1");
  const double zero[] = {0.0};
  const double quarter[] = {pi / 2};
  CHECK(std::abs(eval_laurent(p, zero) - 2.0) < 1e-15);
  CHECK(std::abs(eval_laurent(p, quarter)) < 1e-15);
  const auto q = parse_laurent("X1 + X2 + 1");
  CHECK(std::abs(eval_laurent(q, MomentumPoint({2 * pi / 3, 4 * pi / 3}))) < 1e-15);
  CHECK_THROWS_AS(eval_laurent(q, zero), DomainError);
}

TEST_CASE("evaluation homomorphism and unit modulus") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> th(0.0, 2 * pi);
  for (int i = 0; i < 100; ++i) {
    const auto a = parse_laurent(random_text(rng)).widened(3);
    const auto b = parse_laurent(random_text(rng)).widened(3);
    const double t[] = {th(rng), th(rng), th(rng)};
    const cplx ea = eval_laurent(a, t), eb = eval_laurent(b, t);
    const double scale = 1.0 + std::abs(ea) + std::abs(eb);
    CHECK(std::abs(eval_laurent(a + b, t) - (ea + eb)) < 1e-13 * scale);
    const Exponents m{2, -3, 1};
    const cplx em = std::polar(1.0, 2 * t[0] - 3 * t[1] + t[2]);
    CHECK(std::abs(eval_laurent(a.times_monomial(m), t) - ea * em) < 1e-13 * (1.0 + std::abs(ea)));
  }
  for (int a = -30; a <= 30; a += 7) {
    const auto mono = parse_laurent("X1^" + std::to_string(a));
    for (int k = 0; k < 10; ++k) {
      const double t[] = {th(rng)};
      CHECK(std::abs(std::abs(eval_laurent(mono, t)) - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("polynomial helpers") {
  auto p = parse_laurent("X1^2 - 3*X2^-1");
  CHECK(p.max_abs_exponent() == 2);
  CHECK(p.is_real());
  CHECK(p.inverted().terms().count({-2, 0}) == 1);
  CHECK((p + p.times_monomial({0, 0}, -1.0)).is_zero());
  CHECK_THROWS_AS(LaurentPolynomial(0), DomainError);
  CHECK_THROWS_AS(p.widened(1), DomainError);
}
