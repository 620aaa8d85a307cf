#pragma once

// Sparse multivariate Laurent polynomials in X1..Xn, their text form and
// evaluation on the unit torus.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mzc/error.hpp"
#include "mzc/kernels.hpp"
#include "mzc/walk.hpp"

namespace mzc {

using Exponents = std::vector<int>;

inline constexpr int kMaxAbsExponent = 1'000'000;

class LaurentPolynomial {
 public:
  // Zero polynomial in n_vars variables.
  explicit LaurentPolynomial(int n_vars = 1);

  // Adds coeff * X^exps, merging like terms and dropping exact zeros.
  void add_term(const Exponents& exps, cplx coeff);

  int n_vars() const { return n_vars_; }
  const std::map<Exponents, cplx>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_real() const;

  // Largest |e_j| over all terms and variables.
  int max_abs_exponent() const;

  // Same polynomial viewed in more variables (the extra ones absent).
  LaurentPolynomial widened(int n_vars) const;

  LaurentPolynomial operator+(const LaurentPolynomial& o) const;
  // p * coeff * X^exps
  LaurentPolynomial times_monomial(const Exponents& exps, cplx coeff = 1.0) const;
  // f(X_1^-1, ..., X_n^-1)
  LaurentPolynomial inverted() const;

  friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

 private:
  int n_vars_;
  std::map<Exponents, cplx> terms_;
};

class ParseError : public DomainError {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found);
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

// Grammar (whitespace allowed between tokens):
//   poly   := ['-'] term (('+'|'-') term)*
//   term   := coeff ('*' varpow)* | varpow ('*' varpow)*
//   varpow := 'X' INT ['^' SINT]
//   coeff  := DECIMAL | INT ['/' INT]
// Throws ParseError on syntax errors and DomainError for index 0, exponents
// beyond +-1e6 and polynomials that cancel to zero.
LaurentPolynomial parse_laurent(std::string_view text);

// Terms by descending total degree sum |e_j|, ties by descending exponent
// vector; real coefficients use the shortest decimal that reads back exactly.
std::string format_laurent(const LaurentPolynomial& poly);

cplx eval_laurent(const LaurentPolynomial& poly, std::span<const double> theta);
cplx eval_laurent(const LaurentPolynomial& poly, const MomentumPoint& point);

}  // namespace mzc
