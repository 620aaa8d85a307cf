#include "mzc/walk.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mzc {

std::string to_string(CoinKind k) {
  switch (k) {
    case CoinKind::hadamard_type: return "hadamard_type";
    case CoinKind::grover: return "grover";
    case CoinKind::simple_rw: return "simple_rw";
    case CoinKind::custom: return "custom";
  }
  return "unknown";
}

std::string to_string(ShiftType s) { return s == ShiftType::m_type ? "m_type" : "f_type"; }

CoinMatrix::CoinMatrix(int dim, Eigen::MatrixXcd entries, CoinKind kind, ShiftType shift,
                       std::optional<double> xi)
    : dim_(dim), entries_(std::move(entries)), kind_(kind), shift_(shift), xi_(xi) {
  const int n = size();
  row_major_.resize(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) row_major_[static_cast<std::size_t>(i * n + j)] = entries_(i, j);
}

bool CoinMatrix::is_real() const {
  for (const cplx& z : row_major_)
    if (z.imag() != 0.0) return false;
  return true;
}

CoinMatrix CoinMatrix::custom(const Eigen::MatrixXcd& entries, ShiftType shift) {
  if (entries.rows() != entries.cols() || entries.rows() < 2 || entries.rows() % 2 != 0)
    throw DomainError("custom coin must be square of even size 2d");
  if (entries.rows() / 2 > kernels::kMaxDim) throw DomainError("custom coin: dimension too large");
  for (Eigen::Index i = 0; i < entries.size(); ++i)
    if (!std::isfinite(entries(i).real()) || !std::isfinite(entries(i).imag()))
      throw DomainError("custom coin has non-finite entries");
  return CoinMatrix(static_cast<int>(entries.rows() / 2), entries, CoinKind::custom, shift,
                    std::nullopt);
}

CoinMatrix build_coin(CoinKind kind, int d, std::optional<double> xi) {
  if (d < 1 || d > kernels::kMaxDim) throw DomainError("coin dimension d must be in [1, 16]");
  if (kind == CoinKind::hadamard_type) {
    if (!xi) throw DomainError("hadamard_type coin needs xi");
    if (d != 1) throw DomainError("hadamard_type coin requires d = 1");
    if (!std::isfinite(*xi)) throw DomainError("xi must be finite");
  } else if (xi) {
    throw DomainError("xi is only accepted for hadamard_type coins");
  }

  const int n = 2 * d;
  Eigen::MatrixXcd a(n, n);
  switch (kind) {
    case CoinKind::hadamard_type: {
      const double c = std::cos(*xi), s = std::sin(*xi);
      a << c, s, s, -c;
      break;
    }
    case CoinKind::grover:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 1.0 / d - (i == j ? 1.0 : 0.0);
      break;
    case CoinKind::simple_rw:
      a.setConstant(1.0 / n);
      break;
    case CoinKind::custom:
      throw DomainError("use CoinMatrix::custom for custom coins");
  }
  return CoinMatrix(d, a, kind, ShiftType::m_type, xi);
}

CoinMatrix flip_flop(const CoinMatrix& coin) {
  if (coin.shift_type() == ShiftType::f_type) throw DomainError("coin is already F-type");
  Eigen::MatrixXcd a = coin.entries();
  for (int j = 0; j < coin.dim(); ++j) a.row(2 * j).swap(a.row(2 * j + 1));
  return CoinMatrix(coin.dim(), a, coin.kind(), ShiftType::f_type, coin.xi());
}

CoinMatrix CoinSpec::build() const {
  CoinMatrix base = build_coin(kind, d, xi);
  return shift == ShiftType::f_type ? flip_flop(base) : base;
}

std::string CoinSpec::label() const {
  std::ostringstream os;
  os << to_string(kind) << "(d=" << d;
  if (xi) os << ",xi=" << *xi;
  os << "," << to_string(shift) << ")";
  return os.str();
}

std::vector<std::string> CoinClass::names() const {
  std::vector<std::string> out;
  if (unitary) out.push_back("unitary");
  if (stochastic) out.push_back("stochastic");
  if (crw) out.push_back("crw");
  if (rw) out.push_back("rw");
  return out;
}

CoinClass classify_coin(const CoinMatrix& coin, double tol) {
  if (!(tol > 0.0)) throw DomainError("classify_coin: tol must be positive");
  const auto& a = coin.entries();
  const auto n = a.rows();
  CoinClass c;
  const Eigen::MatrixXcd gram = a * a.adjoint() - Eigen::MatrixXcd::Identity(n, n);
  c.unitary = gram.cwiseAbs().maxCoeff() <= tol;

  bool crw = true;
  for (Eigen::Index i = 0; i < n && crw; ++i)
    for (Eigen::Index j = 0; j < n && crw; ++j) {
      const cplx z = a(i, j);
      if (std::abs(z.imag()) > tol || z.real() < -tol || z.real() > 1.0 + tol) crw = false;
    }
  if (crw)
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(a.col(j).sum().real() - 1.0) > tol) crw = false;
  c.crw = crw;
  c.stochastic = crw;
  if (crw) {
    bool constant_rows = true;
    for (Eigen::Index i = 0; i < n && constant_rows; ++i)
      for (Eigen::Index j = 1; j < n; ++j)
        if (std::abs(a(i, j) - a(i, 0)) > tol) {
          constant_rows = false;
          break;
        }
    c.rw = constant_rows;
  }
  return c;
}

MomentumPoint::MomentumPoint(std::vector<double> a) : angles(std::move(a)) {
  if (angles.empty()) throw DomainError("momentum point needs at least one angle");
  for (double t : angles)
    if (!(t >= 0.0 && t < 2.0 * std::numbers::pi))
      throw DomainError("momentum angles must lie in [0, 2pi)");
}

MomentumPoint MomentumPoint::from_lattice(std::span<const int> k, int n) {
  if (n < 1) throw DomainError("torus side must be positive");
  std::vector<double> a;
  a.reserve(k.size());
  for (int kj : k) {
    if (kj < 0 || kj >= n) throw DomainError("lattice momentum index out of range");
    a.push_back(2.0 * std::numbers::pi * kj / n);
  }
  return MomentumPoint(std::move(a));
}

void momentum_matrix_into(std::span<const cplx> coin_rm, int dim, const double* angles, cplx* out) {
  const int n = 2 * dim;
  for (int j = 0; j < dim; ++j) {
    const cplx ph = std::polar(1.0, angles[j]);
    const cplx phc = std::conj(ph);
    for (int c = 0; c < n; ++c) {
      out[(2 * j) * n + c] = ph * coin_rm[static_cast<std::size_t>((2 * j) * n + c)];
      out[(2 * j + 1) * n + c] = phc * coin_rm[static_cast<std::size_t>((2 * j + 1) * n + c)];
    }
  }
}

Eigen::MatrixXcd momentum_matrix(const CoinMatrix& coin, const MomentumPoint& k) {
  if (static_cast<int>(k.angles.size()) != coin.dim())
    throw DomainError("momentum point dimension does not match coin");
  Eigen::MatrixXcd m = coin.entries();
  for (int j = 0; j < coin.dim(); ++j) {
    m.row(2 * j) *= std::polar(1.0, k.angles[static_cast<std::size_t>(j)]);
    m.row(2 * j + 1) *= std::polar(1.0, -k.angles[static_cast<std::size_t>(j)]);
  }
  return m;
}

WalkState::WalkState(int dim, int side) : dim_(dim), side_(side) {
  if (dim < 1 || dim > kernels::kMaxDim) throw DomainError("state dimension out of range");
  if (side < 1) throw DomainError("torus side must be positive");
  const double total = std::pow(static_cast<double>(side), dim) * 2 * dim;
  if (total > 1e9) throw DomainError("state too large");
  field_.assign(static_cast<std::size_t>(sites() * 2 * dim), cplx(0.0));
}

std::int64_t WalkState::sites() const { return kernels::detail::ipow(side_, dim_); }

std::int64_t WalkState::site_index(std::span<const int> x) const {
  if (static_cast<int>(x.size()) != dim_) throw DomainError("site coordinate length mismatch");
  std::int64_t idx = 0, stride = 1;
  for (int j = 0; j < dim_; ++j) {
    const int xj = ((x[static_cast<std::size_t>(j)] % side_) + side_) % side_;
    idx += xj * stride;
    stride *= side_;
  }
  return idx;
}

std::span<const cplx> WalkState::at(std::span<const int> x) const {
  return std::span<const cplx>(field_).subspan(static_cast<std::size_t>(site_index(x) * 2 * dim_),
                                               static_cast<std::size_t>(2 * dim_));
}

std::span<cplx> WalkState::at(std::span<const int> x) {
  return std::span<cplx>(field_).subspan(static_cast<std::size_t>(site_index(x) * 2 * dim_),
                                         static_cast<std::size_t>(2 * dim_));
}

WalkState WalkState::delta(int dim, int side, std::span<const cplx> psi0) {
  if (static_cast<int>(psi0.size()) != 2 * dim) throw DomainError("initial vector must have 2d components");
  WalkState s(dim, side);
  std::copy(psi0.begin(), psi0.end(), s.field_.begin());
  return s;
}

WalkState WalkState::uniform_probability(int dim, int side) {
  WalkState s(dim, side);
  const double p = 1.0 / static_cast<double>(s.field_.size());
  std::fill(s.field_.begin(), s.field_.end(), cplx(p));
  return s;
}

namespace {

template <class Step>
WalkState evolve_with(const WalkState& state, const CoinMatrix& coin, std::int64_t steps, Step step) {
  if (coin.dim() != state.dim()) throw DomainError("evolve: coin and state dimensions differ");
  if (steps < 0) throw DomainError("evolve: steps must be non-negative");
  WalkState cur = state;
  std::vector<cplx> next(cur.field().size());
  for (std::int64_t n = 0; n < steps; ++n) {
    step(cur.dim(), cur.side(), std::span<const cplx>(coin.row_major()), cur.field(), std::span<cplx>(next));
    std::copy(next.begin(), next.end(), cur.field().begin());
  }
  return cur;
}

}  // namespace

WalkState evolve(const WalkState& state, const CoinMatrix& coin, std::int64_t steps) {
  WalkState out = evolve_with(state, coin, steps, kernels::walk_step);
  out.time_ = state.time_ + steps;
  return out;
}

WalkState evolve_serial(const WalkState& state, const CoinMatrix& coin, std::int64_t steps) {
  WalkState out = evolve_with(state, coin, steps, kernels::walk_step_serial);
  out.time_ = state.time_ + steps;
  return out;
}

double total_measure(const WalkState& state, double p) {
  if (!(p > 0.0)) throw DomainError("total_measure: p must be positive");
  double s = 0.0;
  for (const cplx& z : state.field()) {
    const double a = std::abs(z);
    s += p == 2.0 ? a * a : (p == 1.0 ? a : std::pow(a, p));
  }
  return s;
}

namespace {

// Forward recursion for Phi_n(x) on the window [-radius, radius]^d; calls
// visit(n, origin block) for n = 0..radius.
template <class Visit>
void weight_recursion(const CoinMatrix& coin, int radius, std::size_t budget, Visit visit) {
  if (radius < 0) throw DomainError("matrix weight step must be non-negative");
  const int d = coin.dim();
  const int n = coin.size();
  const int nn = n * n;
  const int extent = 2 * radius + 1;
  const double sites_d = std::pow(static_cast<double>(extent), d);
  const double bytes = 2.0 * sites_d * nn * sizeof(cplx);
  if (bytes > static_cast<double>(budget)) {
    std::ostringstream msg;
    msg << "matrix weight window (" << extent << ")^" << d << " = " << sites_d
        << " sites needs " << bytes << " bytes, over the budget of " << budget;
    throw ComputationError(msg.str());
  }
  const auto sites = static_cast<std::int64_t>(sites_d);
  std::vector<std::int64_t> stride(static_cast<std::size_t>(d));
  std::int64_t origin = 0;
  for (int j = 0, s = 1; j < d; ++j, s *= extent) {
    stride[static_cast<std::size_t>(j)] = s;
    origin += static_cast<std::int64_t>(radius) * s;
  }

  std::vector<cplx> cur(static_cast<std::size_t>(sites * nn), cplx(0.0));
  std::vector<cplx> next(cur.size());
  for (int i = 0; i < n; ++i) cur[static_cast<std::size_t>(origin * nn + i * n + i)] = 1.0;
  visit(0, cur.data() + origin * nn);

  const auto& a = coin.row_major();
  for (int step = 1; step <= radius; ++step) {
    const int reach = std::min(step, radius - step);
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < sites; ++s) {
      cplx* out = next.data() + s * nn;
      int x[kernels::kMaxDim];
      int l1 = 0;
      std::int64_t rest = s;
      for (int j = 0; j < d; ++j) {
        x[j] = static_cast<int>(rest % extent) - radius;
        rest /= extent;
        l1 += std::abs(x[j]);
      }
      if (l1 > reach) {
        std::fill(out, out + nn, cplx(0.0));
        continue;
      }
      for (int j = 0; j < d; ++j) {
        const std::int64_t sj = stride[static_cast<std::size_t>(j)];
        const cplx* from_plus = x[j] + 1 <= radius ? cur.data() + (s + sj) * nn : nullptr;
        const cplx* from_minus = x[j] - 1 >= -radius ? cur.data() + (s - sj) * nn : nullptr;
        for (int half = 0; half < 2; ++half) {
          const int row = 2 * j + half;
          const cplx* src = half == 0 ? from_plus : from_minus;
          cplx* dst = out + row * n;
          std::fill(dst, dst + n, cplx(0.0));
          if (!src) continue;
          for (int c = 0; c < n; ++c) {
            const cplx w = a[static_cast<std::size_t>(row * n + c)];
            if (w == cplx(0.0)) continue;
            const cplx* src_row = src + c * n;
            for (int col = 0; col < n; ++col) dst[col] += w * src_row[col];
          }
        }
      }
    }
    std::swap(cur, next);
    visit(step, cur.data() + origin * nn);
  }
}

}  // namespace

MatrixWeight matrix_weight_origin(const CoinMatrix& coin, int r, std::size_t memory_budget) {
  MatrixWeight w{coin.dim(), r, Eigen::MatrixXcd::Zero(coin.size(), coin.size())};
  const int n = coin.size();
  weight_recursion(coin, r, memory_budget, [&](int step, const cplx* block) {
    if (step != r) return;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w.matrix(i, j) = block[i * n + j];
  });
  return w;
}

std::vector<cplx> origin_trace_sequence(const CoinMatrix& coin, int r_max, std::size_t memory_budget) {
  std::vector<cplx> tr(static_cast<std::size_t>(r_max + 1));
  const int n = coin.size();
  weight_recursion(coin, r_max, memory_budget, [&](int step, const cplx* block) {
    cplx t = 0;
    for (int i = 0; i < n; ++i) t += block[i * n + i];
    tr[static_cast<std::size_t>(step)] = t;
  });
  return tr;
}

}  // namespace mzc
