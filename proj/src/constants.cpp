#include <cmath>
#include <numbers>

#include "mzc/mahler.hpp"

namespace mzc {

namespace {

constexpr long kPairs = 100000;

// sum_{k>=0} [(pk+a)^-2 - (pk+b)^-2]: the first kPairs pairs summed smallest
// first, plus an Euler-Maclaurin tail.
long double paired_series(long double p, long double a, long double b) {
  auto g = [&](long double k) {
    const long double x = p * k + a, y = p * k + b;
    return 1.0L / (x * x) - 1.0L / (y * y);
  };
  auto dg = [&](long double k) {
    const long double x = p * k + a, y = p * k + b;
    return -2.0L * p / (x * x * x) + 2.0L * p / (y * y * y);
  };
  const long double kk = kPairs;
  long double tail = 1.0L / (p * (p * kk + a)) - 1.0L / (p * (p * kk + b));
  tail += g(kk) / 2.0L - dg(kk) / 12.0L;
  long double s = tail;
  for (long k = kPairs - 1; k >= 0; --k) s += g(static_cast<long double>(k));
  return s;
}

long double zeta3_series() {
  const long n = kPairs;
  const long double nn = n;
  long double s = 1.0L / (2.0L * nn * nn) - 1.0L / (2.0L * nn * nn * nn) + 1.0L / (4.0L * nn * nn * nn * nn);
  for (long k = n; k >= 1; --k) {
    const long double x = k;
    s += 1.0L / (x * x * x);
  }
  return s;
}

}  // namespace

const SpecialConstants& special_constants() {
  static const SpecialConstants c{
      static_cast<double>(paired_series(3.0L, 1.0L, 2.0L)),
      static_cast<double>(zeta3_series()),
      static_cast<double>(paired_series(4.0L, 1.0L, 3.0L)),
  };
  return c;
}

double smyth_two_variable() {
  return 3.0 * std::sqrt(3.0) / (4.0 * std::numbers::pi) * special_constants().l_chi3_2;
}

double smyth_three_variable() {
  return 7.0 / (2.0 * std::numbers::pi * std::numbers::pi) * special_constants().zeta3;
}

}  // namespace mzc
