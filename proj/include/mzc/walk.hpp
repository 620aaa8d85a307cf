#pragma once

// Coins, momentum-space matrices, state evolution on the torus T^d_N and
// return matrix weights on Z^d.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mzc/error.hpp"
#include "mzc/kernels.hpp"

namespace mzc {

enum class CoinKind { hadamard_type, grover, simple_rw, custom };
enum class ShiftType { m_type, f_type };

std::string to_string(CoinKind k);
std::string to_string(ShiftType s);

// 2d x 2d local rule of the walk. Immutable after construction.
class CoinMatrix {
 public:
  // Arbitrary square matrix of even size; kind = custom.
  static CoinMatrix custom(const Eigen::MatrixXcd& entries, ShiftType shift = ShiftType::m_type);

  int dim() const { return dim_; }
  int size() const { return 2 * dim_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  CoinKind kind() const { return kind_; }
  ShiftType shift_type() const { return shift_; }
  std::optional<double> xi() const { return xi_; }
  // d = 1 Grover: 1/d - delta_ij collapses to the swap matrix.
  bool degenerate() const { return kind_ == CoinKind::grover && dim_ == 1; }
  // Row-major copy of the entries for the flat kernels.
  const std::vector<cplx>& row_major() const { return row_major_; }
  // Every entry has zero imaginary part.
  bool is_real() const;

 private:
  friend CoinMatrix build_coin(CoinKind, int, std::optional<double>);
  friend CoinMatrix flip_flop(const CoinMatrix&);
  CoinMatrix(int dim, Eigen::MatrixXcd entries, CoinKind kind, ShiftType shift,
             std::optional<double> xi);

  int dim_;
  Eigen::MatrixXcd entries_;
  CoinKind kind_;
  ShiftType shift_;
  std::optional<double> xi_;
  std::vector<cplx> row_major_;
};

// M-type coin of the requested kind. Hadamard type needs xi and d = 1.
CoinMatrix build_coin(CoinKind kind, int d, std::optional<double> xi = std::nullopt);

// F-type coin (I_d (x) sigma) A: rows swapped inside each consecutive pair.
CoinMatrix flip_flop(const CoinMatrix& coin);

// Named coin recipe: kind, dimension, optional xi and shift type.
struct CoinSpec {
  CoinKind kind = CoinKind::simple_rw;
  int d = 1;
  std::optional<double> xi;
  ShiftType shift = ShiftType::m_type;

  CoinMatrix build() const;
  std::string label() const;
};

struct CoinClass {
  bool unitary = false;
  bool stochastic = false;
  bool crw = false;
  bool rw = false;

  std::vector<std::string> names() const;
};

CoinClass classify_coin(const CoinMatrix& coin, double tol = 1e-12);

// Point of the momentum torus; every angle in [0, 2pi).
struct MomentumPoint {
  std::vector<double> angles;

  explicit MomentumPoint(std::vector<double> a);
  // 2pi k_j / N for integer k_j.
  static MomentumPoint from_lattice(std::span<const int> k, int n);
};

// sum_j ( e^{i k_j} P_{2j-1} A + e^{-i k_j} P_{2j} A )
Eigen::MatrixXcd momentum_matrix(const CoinMatrix& coin, const MomentumPoint& k);

// Flat version used inside quadrature loops: writes the row-major momentum
// matrix for `angles` into `out` (size (2d)^2).
void momentum_matrix_into(std::span<const cplx> coin_rm, int dim, const double* angles, cplx* out);

// Complex 2d-vector field over the N^d torus. Sites are enumerated row-major
// with x_1 fastest.
class WalkState {
 public:
  WalkState(int dim, int side);

  // Unit amplitude vector `psi0` at the origin, zero elsewhere.
  static WalkState delta(int dim, int side, std::span<const cplx> psi0);
  // Probability 1/(2d N^d) in every component of every site.
  static WalkState uniform_probability(int dim, int side);

  int dim() const { return dim_; }
  int side() const { return side_; }
  std::int64_t time() const { return time_; }
  std::int64_t sites() const;
  std::int64_t site_index(std::span<const int> x) const;

  std::span<const cplx> at(std::span<const int> x) const;
  std::span<cplx> at(std::span<const int> x);
  std::span<const cplx> field() const { return field_; }
  std::span<cplx> field() { return field_; }

 private:
  friend WalkState evolve(const WalkState&, const CoinMatrix&, std::int64_t);
  friend WalkState evolve_serial(const WalkState&, const CoinMatrix&, std::int64_t);
  int dim_;
  int side_;
  std::int64_t time_ = 0;
  std::vector<cplx> field_;
};

// Psi_{n+1}(x) = sum_j ( P_{2j-1} A Psi_n(x+e_j) + P_{2j} A Psi_n(x-e_j) ),
// periodic, applied `steps` times.
WalkState evolve(const WalkState& state, const CoinMatrix& coin, std::int64_t steps);
WalkState evolve_serial(const WalkState& state, const CoinMatrix& coin, std::int64_t steps);

// sum_x sum_j |Psi^j(x)|^p
double total_measure(const WalkState& state, double p);

struct MatrixWeight {
  int dim = 1;
  int step = 0;
  Eigen::MatrixXcd matrix;  // Phi_r(0) on Z^d
};

// Default memory cap for the Z^d window used by the matrix-weight recursion.
inline constexpr std::size_t kWeightMemoryBudget = std::size_t{512} << 20;

// Return matrix weight Phi_r(0) on Z^d, by forward recursion on the window
// [-r, r]^d with zero boundary.
MatrixWeight matrix_weight_origin(const CoinMatrix& coin, int r,
                                  std::size_t memory_budget = kWeightMemoryBudget);

// Tr Phi_n(0) for n = 0..r_max from a single recursion.
std::vector<cplx> origin_trace_sequence(const CoinMatrix& coin, int r_max,
                                        std::size_t memory_budget = kWeightMemoryBudget);

}  // namespace mzc
