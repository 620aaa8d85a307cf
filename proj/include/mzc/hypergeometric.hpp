#pragma once

#include <span>

namespace mzc {

struct HyperResult {
  double value = 0.0;
  int terms = 0;
  bool terminated = false;  // a nonpositive-integer upper parameter ended the series
};

// pFq(a; b; x) by direct summation with the term ratio
// t_{n+1}/t_n = x prod(a_i + n) / (prod(b_j + n) (n + 1)).
// A nonpositive-integer a_i truncates the series exactly. Non-terminating
// series need |x| < 1 when p = q + 1 and are refused for p > q + 1.
HyperResult hyper_pfq_detailed(std::span<const double> a, std::span<const double> b, double x);

inline double hyper_pfq(std::span<const double> a, std::span<const double> b, double x) {
  return hyper_pfq_detailed(a, b, x).value;
}

}  // namespace mzc
