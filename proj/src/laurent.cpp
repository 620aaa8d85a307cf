#include "mzc/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace mzc {

LaurentPolynomial::LaurentPolynomial(int n_vars) : n_vars_(n_vars) {
  if (n_vars < 1 || n_vars > kernels::kMaxDim)
    throw DomainError("Laurent polynomial needs between 1 and 16 variables");
}

void LaurentPolynomial::add_term(const Exponents& exps, cplx coeff) {
  if (static_cast<int>(exps.size()) != n_vars_)
    throw DomainError("exponent vector length does not match the number of variables");
  for (int e : exps)
    if (std::abs(e) > kMaxAbsExponent) throw DomainError("exponent magnitude exceeds 1e6");
  if (!std::isfinite(coeff.real()) || !std::isfinite(coeff.imag()))
    throw DomainError("coefficient is not finite");
  if (coeff == cplx(0.0)) return;
  auto [it, fresh] = terms_.try_emplace(exps, coeff);
  if (!fresh) {
    it->second += coeff;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

bool LaurentPolynomial::is_real() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.imag() == 0.0; });
}

int LaurentPolynomial::max_abs_exponent() const {
  int m = 0;
  for (const auto& [e, c] : terms_)
    for (int x : e) m = std::max(m, std::abs(x));
  return m;
}

LaurentPolynomial LaurentPolynomial::widened(int n_vars) const {
  if (n_vars < n_vars_) throw DomainError("cannot drop variables");
  LaurentPolynomial p(n_vars);
  for (const auto& [e, c] : terms_) {
    Exponents w = e;
    w.resize(static_cast<std::size_t>(n_vars), 0);
    p.terms_.emplace(std::move(w), c);
  }
  return p;
}

LaurentPolynomial LaurentPolynomial::operator+(const LaurentPolynomial& o) const {
  const int n = std::max(n_vars_, o.n_vars_);
  LaurentPolynomial p = widened(n);
  for (const auto& [e, c] : o.widened(n).terms_) p.add_term(e, c);
  return p;
}

LaurentPolynomial LaurentPolynomial::times_monomial(const Exponents& exps, cplx coeff) const {
  const int n = std::max(n_vars_, static_cast<int>(exps.size()));
  Exponents m = exps;
  m.resize(static_cast<std::size_t>(n), 0);
  LaurentPolynomial p(n);
  for (const auto& [e, c] : widened(n).terms_) {
    Exponents s = e;
    for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(j)] += m[static_cast<std::size_t>(j)];
    p.add_term(s, c * coeff);
  }
  return p;
}

LaurentPolynomial LaurentPolynomial::inverted() const {
  LaurentPolynomial p(n_vars_);
  for (const auto& [e, c] : terms_) {
    Exponents s = e;
    for (int& x : s) x = -x;
    p.terms_.emplace(std::move(s), c);
  }
  return p;
}

namespace {

std::string join_expected(const std::vector<std::string>& expected) {
  std::string s;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) s += i + 1 == expected.size() ? " or " : ", ";
    s += expected[i];
  }
  return s;
}

std::string parse_message(std::size_t offset, const std::vector<std::string>& expected,
                          const std::string& found) {
  std::ostringstream os;
  os << "syntax error at byte " << offset << ": expected " << join_expected(expected) << ", found "
     << found;
  return os.str();
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : DomainError(parse_message(offset, expected, found)), offset_(offset), expected_(std::move(expected)) {}

namespace {

enum class Tok { number, var, plus, minus, star, slash, caret, end, bad };

struct Token {
  Tok kind = Tok::end;
  std::size_t offset = 0;
  std::string_view text;
  bool has_dot = false;
};

const char* kNumber = "number";
const char* kVariable = "variable X<k>";
const char* kInteger = "integer";
const char* kEnd = "end of input";

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) { next(); }

  LaurentPolynomial parse() {
    struct Raw {
      std::vector<std::pair<int, long>> powers;  // (index, exponent)
      double coeff;
    };
    std::vector<Raw> raw;
    int n_vars = 0;

    double sign = 1.0;
    if (tok_.kind == Tok::minus) {
      sign = -1.0;
      next();
    }
    while (true) {
      Raw r{{}, sign};
      if (tok_.kind == Tok::number) {
        r.coeff *= coefficient();
        while (tok_.kind == Tok::star) {
          next();
          r.powers.push_back(varpow());
        }
      } else if (tok_.kind == Tok::var) {
        r.powers.push_back(varpow());
        while (tok_.kind == Tok::star) {
          next();
          r.powers.push_back(varpow());
        }
      } else {
        fail({kNumber, kVariable});
      }
      for (const auto& [idx, e] : r.powers) n_vars = std::max(n_vars, idx);
      raw.push_back(std::move(r));

      if (tok_.kind == Tok::plus) {
        sign = 1.0;
      } else if (tok_.kind == Tok::minus) {
        sign = -1.0;
      } else if (tok_.kind == Tok::end) {
        break;
      } else {
        std::vector<std::string> expected{"'*'", "'+'", "'-'", kEnd};
        if (last_was_var_ && !last_had_caret_) expected.insert(expected.begin(), "'^'");
        if (last_was_number_ && !last_was_var_ && !last_had_slash_) expected.insert(expected.begin(), "'/'");
        fail(std::move(expected));
      }
      next();
    }

    if (n_vars == 0) n_vars = 1;
    if (n_vars > kernels::kMaxDim) throw DomainError("at most 16 variables (X1..X16) are supported");
    LaurentPolynomial p(n_vars);
    for (const Raw& r : raw) {
      Exponents e(static_cast<std::size_t>(n_vars), 0);
      for (const auto& [idx, x] : r.powers) {
        const long sum = static_cast<long>(e[static_cast<std::size_t>(idx - 1)]) + x;
        if (std::abs(sum) > kMaxAbsExponent)
          throw DomainError("exponent of X" + std::to_string(idx) + " exceeds 1e6 in magnitude");
        e[static_cast<std::size_t>(idx - 1)] = static_cast<int>(sum);
      }
      p.add_term(e, r.coeff);
    }
    if (p.is_zero()) throw DomainError("polynomial cancels to zero");
    return p;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string found;
    switch (tok_.kind) {
      case Tok::end: found = kEnd; break;
      case Tok::bad: found = "character '" + std::string(tok_.text) + "'"; break;
      default: found = "'" + std::string(tok_.text) + "'";
    }
    throw ParseError(tok_.offset, std::move(expected), found);
  }

  void next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    tok_ = Token{Tok::end, pos_, {}, false};
    if (pos_ >= s_.size()) return;
    const std::size_t start = pos_;
    const char c = s_[pos_];
    auto digits = [&] {
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    };
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits();
      if (pos_ + 1 < s_.size() && s_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
        ++pos_;
        digits();
        tok_.has_dot = true;
      }
      tok_.kind = Tok::number;
    } else if (c == 'X' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      ++pos_;
      digits();
      tok_.kind = Tok::var;
    } else {
      ++pos_;
      switch (c) {
        case '+': tok_.kind = Tok::plus; break;
        case '-': tok_.kind = Tok::minus; break;
        case '*': tok_.kind = Tok::star; break;
        case '/': tok_.kind = Tok::slash; break;
        case '^': tok_.kind = Tok::caret; break;
        default: tok_.kind = Tok::bad;
      }
    }
    tok_.text = s_.substr(start, pos_ - start);
  }

  static double to_double(std::string_view t) {
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc()) return HUGE_VAL;
    return v;
  }

  double coefficient() {
    last_was_number_ = true;
    last_was_var_ = false;
    last_had_slash_ = false;
    const Token num = tok_;
    double v = to_double(num.text);
    if (!std::isfinite(v)) throw DomainError("coefficient out of range at byte " + std::to_string(num.offset));
    next();
    if (!num.has_dot && tok_.kind == Tok::slash) {
      last_had_slash_ = true;
      next();
      if (tok_.kind != Tok::number || tok_.has_dot) fail({kInteger});
      const double den = to_double(tok_.text);
      if (den == 0.0) throw DomainError("zero denominator at byte " + std::to_string(tok_.offset));
      v /= den;
      next();
    }
    return v;
  }

  std::pair<int, long> varpow() {
    if (tok_.kind != Tok::var) fail({kVariable});
    last_was_var_ = true;
    last_had_caret_ = false;
    const Token var = tok_;
    const std::string_view digits = var.text.substr(1);
    long idx = 0;
    for (char ch : digits) {
      idx = idx * 10 + (ch - '0');
      if (idx > 1'000'000) break;
    }
    if (idx == 0) throw DomainError("variable index 0 at byte " + std::to_string(var.offset) + " (indices start at 1)");
    if (idx > kernels::kMaxDim)
      throw DomainError("variable index " + std::string(digits) + " at byte " + std::to_string(var.offset) +
                        " exceeds the supported 16 variables");
    next();
    long e = 1;
    if (tok_.kind == Tok::caret) {
      last_had_caret_ = true;
      next();
      long s = 1;
      if (tok_.kind == Tok::minus || tok_.kind == Tok::plus) {
        if (tok_.kind == Tok::minus) s = -1;
        next();
      }
      if (tok_.kind != Tok::number || tok_.has_dot) fail({kInteger});
      long mag = 0;
      for (char ch : tok_.text) {
        mag = mag * 10 + (ch - '0');
        if (mag > kMaxAbsExponent)
          throw DomainError("exponent at byte " + std::to_string(tok_.offset) + " exceeds 1e6 in magnitude");
      }
      e = s * mag;
      next();
    }
    return {static_cast<int>(idx), e};
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  Token tok_;
  bool last_was_number_ = false;
  bool last_was_var_ = false;
  bool last_had_caret_ = false;
  bool last_had_slash_ = false;
};

}  // namespace

LaurentPolynomial parse_laurent(std::string_view text) { return Parser(text).parse(); }

namespace {

std::string shortest(double v) {
  char buf[512];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

long degree(const Exponents& e) {
  long s = 0;
  for (int x : e) s += std::abs(x);
  return s;
}

}  // namespace

std::string format_laurent(const LaurentPolynomial& poly) {
  if (poly.is_zero()) return "0";
  std::vector<const std::pair<const Exponents, cplx>*> order;
  for (const auto& t : poly.terms()) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    const long da = degree(a->first), db = degree(b->first);
    if (da != db) return da > db;
    return a->first > b->first;
  });

  std::string out;
  bool first = true;
  for (const auto* t : order) {
    const Exponents& e = t->first;
    const cplx c = t->second;
    const bool constant = degree(e) == 0;

    std::string coeff;
    bool negative = false;
    if (c.imag() == 0.0) {
      negative = c.real() < 0.0;
      const double a = std::abs(c.real());
      if (a != 1.0 || constant) coeff = shortest(a);
    } else {
      // Complex coefficients have no text form in the grammar; this is for display only.
      coeff = "(" + shortest(c.real()) + (c.imag() < 0 ? "-" : "+") + shortest(std::abs(c.imag())) + "i)";
    }

    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;

    std::string body = coeff;
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      if (!body.empty()) body += "*";
      body += "X" + std::to_string(j + 1);
      if (e[j] != 1) body += "^" + std::to_string(e[j]);
    }
    out += body;
  }
  return out;
}

cplx eval_laurent(const LaurentPolynomial& poly, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != poly.n_vars())
    throw DomainError("evaluation point has " + std::to_string(theta.size()) + " angles, polynomial has " +
                      std::to_string(poly.n_vars()) + " variables");
  cplx s = 0.0;
  for (const auto& [e, c] : poly.terms()) {
    double phase = 0.0;
    for (std::size_t j = 0; j < e.size(); ++j) phase += e[j] * theta[j];
    s += c * std::polar(1.0, phase);
  }
  return s;
}

cplx eval_laurent(const LaurentPolynomial& poly, const MomentumPoint& point) {
  return eval_laurent(poly, std::span<const double>(point.angles));
}

}  // namespace mzc
