#include "mzc/hypergeometric.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "mzc/error.hpp"

namespace mzc {

namespace {

std::optional<long> nonpositive_integer(double v) {
  if (v <= 0.0 && v == std::floor(v) && v > -1e9) return static_cast<long>(-v);
  return std::nullopt;
}

constexpr int kMaxTerms = 10'000'000;
constexpr double kRelStop = 1e-16;

}  // namespace

HyperResult hyper_pfq_detailed(std::span<const double> a, std::span<const double> b, double x) {
  if (!std::isfinite(x)) throw DomainError("hyper_pfq: x must be finite");

  std::optional<long> stop;  // index of the first vanishing term
  for (double ai : a)
    if (auto k = nonpositive_integer(ai)) stop = stop ? std::min(*stop, *k + 1) : *k + 1;
  for (double bj : b)
    if (auto k = nonpositive_integer(bj)) {
      // (b)_n vanishes from n = k + 1 on.
      if (!stop || *k + 1 < *stop)
        throw DomainError("hyper_pfq: lower parameter is a nonpositive integer reached before termination");
    }

  HyperResult r{1.0, 1, false};
  if (x == 0.0) return r;

  const auto p = a.size(), q = b.size();
  if (!stop) {
    if (p > q + 1) throw DomainError("hyper_pfq: series diverges for p > q + 1");
    if (p == q + 1 && std::abs(x) >= 1.0)
      throw DomainError("hyper_pfq: non-terminating series needs |x| < 1 when p = q + 1");
  }
  const double limit_ratio = p == q + 1 ? std::abs(x) : 0.0;

  double term = 1.0, sum = 1.0, comp = 0.0;
  for (long n = 0; n < kMaxTerms; ++n) {
    if (stop && n + 1 >= *stop) {
      r.terminated = true;
      break;
    }
    double ratio = x / (n + 1.0);
    for (double ai : a) ratio *= ai + n;
    for (double bj : b) ratio /= bj + n;
    term *= ratio;
    // Neumaier
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    ++r.terms;
    if (!std::isfinite(sum)) throw ComputationError("hyper_pfq: overflow while summing");
    if (stop) continue;
    const double rho = std::max(std::abs(ratio), limit_ratio);
    const double tail = rho < 1.0 ? std::abs(term) * rho / (1.0 - rho) : std::numeric_limits<double>::infinity();
    if (std::abs(term) < kRelStop * std::abs(sum) && tail < kRelStop * std::abs(sum)) {
      r.value = sum + comp;
      return r;
    }
  }
  if (!r.terminated) throw ComputationError("hyper_pfq: series did not converge within the term cap");
  r.value = sum + comp;
  return r;
}

}  // namespace mzc
