#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mzc/error.hpp"
#include "mzc/hypergeometric.hpp"

using mzc::hyper_pfq;
using mzc::hyper_pfq_detailed;

TEST_CASE("elementary closed forms") {
  const std::vector<double> none;
  const std::vector<double> one{1.0}, two{2.0}, one_one{1.0, 1.0}, half{0.5}, three_half{1.5};
  CHECK(hyper_pfq(none, none, 0.7) == doctest::Approx(std::exp(0.7)).epsilon(1e-15));
  CHECK(hyper_pfq(one, none, 0.3) == doctest::Approx(1.0 / 0.7).epsilon(1e-14));
  // 2F1(1,1;2;x) = -log(1-x)/x
  CHECK(hyper_pfq(one_one, two, 0.5) == doctest::Approx(-std::log(0.5) / 0.5).epsilon(1e-14));
  // 2F1(1/2,1/2;3/2;x^2) = asin(x)/x
  const std::vector<double> hh{0.5, 0.5};
  CHECK(hyper_pfq(hh, three_half, 0.25) == doctest::Approx(std::asin(0.5) / 0.5).epsilon(1e-14));
  // 0F1(;1/2; -x^2/4) = cos x
  CHECK(hyper_pfq(none, half, -0.25) == doctest::Approx(std::cos(1.0)).epsilon(1e-15));
}

TEST_CASE("terminating series") {
  // 2F1(-3, b; c; x) is a cubic
  const std::vector<double> a{-3.0, 2.0}, b{4.0};
  const double x = 0.7;
  double expect = 1.0, t = 1.0;
  for (int n = 0; n < 3; ++n) {
    t *= (-3.0 + n) * (2.0 + n) / ((4.0 + n) * (n + 1.0)) * x;
    expect += t;
  }
  const auto r = hyper_pfq_detailed(a, b, x);
  CHECK(r.terminated);
  CHECK(r.value == doctest::Approx(expect).epsilon(1e-15));
  // terminating series may be evaluated outside the disc
  CHECK_NOTHROW(hyper_pfq(a, b, 5.0));
}

TEST_CASE("4F3 against extended-precision summation") {
  // 4F3(3/2,3/2,1,1; 2,2,2; x) against long double summation of its terms
  const std::vector<double> a{1.5, 1.5, 1.0, 1.0}, b{2.0, 2.0, 2.0};
  const double x = 0.64;
  long double s = 0.0L, t = 1.0L;
  for (int n = 0; n < 400; ++n) {
    s += t;
    t *= (1.5L + n) * (1.5L + n) * (1.0L + n) * (1.0L + n) / ((2.0L + n) * (2.0L + n) * (2.0L + n) * (n + 1.0L)) * x;
  }
  CHECK(hyper_pfq(a, b, x) == doctest::Approx(static_cast<double>(s)).epsilon(1e-14));
}

TEST_CASE("domain errors") {
  const std::vector<double> a{1.0, 1.0}, b{2.0}, bad_b{-2.0}, a3{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(hyper_pfq(a, b, 1.0), mzc::DomainError);
  CHECK_THROWS_AS(hyper_pfq(a, b, -1.5), mzc::DomainError);
  CHECK_THROWS_AS(hyper_pfq(a, bad_b, 0.2), mzc::DomainError);
  CHECK_THROWS_AS(hyper_pfq(a3, b, 0.1), mzc::DomainError);
  CHECK(hyper_pfq(a, b, 0.0) == 1.0);
}
