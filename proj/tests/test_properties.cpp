// Randomised invariants of the walk, zeta and Mahler layers.

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mzc/laurent.hpp"
#include "mzc/mahler.hpp"
#include "mzc/zeta.hpp"

using namespace mzc;
using std::numbers::pi;

namespace {

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = cplx(g(rng), g(rng));
  return Eigen::HouseholderQR<Eigen::MatrixXcd>(z).householderQ();
}

// column-stochastic matrix with random entries
Eigen::MatrixXcd random_stochastic(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  for (int j = 0; j < n; ++j) m.col(j) /= m.col(j).sum();
  return m.cast<cplx>();
}

WalkState random_state(int d, int side, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  WalkState s(d, side);
  double norm = 0.0;
  for (auto& z : s.field()) {
    z = cplx(g(rng), g(rng));
    norm += std::norm(z);
  }
  for (auto& z : s.field()) z /= std::sqrt(norm);
  return s;
}

}  // namespace

TEST_CASE("unitary coins conserve the 2-norm") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> side(2, 32), steps(1, 100);
  for (int t = 0; t < 40; ++t) {
    const int d = 1 + t % 2;
    const CoinMatrix c = CoinMatrix::custom(random_unitary(2 * d, rng));
    const WalkState s = random_state(d, d == 1 ? side(rng) : side(rng) / 2 + 2, rng);
    CHECK(std::abs(total_measure(evolve(s, c, steps(rng)), 2) - 1.0) < 1e-12);
  }
}

TEST_CASE("momentum matrices of unitary coins are unitary") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> th(0.0, 2 * pi);
  for (int t = 0; t < 50; ++t) {
    const int d = 1 + t % 3;
    const CoinMatrix c = CoinMatrix::custom(random_unitary(2 * d, rng));
    std::vector<double> k(static_cast<std::size_t>(d));
    for (auto& x : k) x = th(rng);
    const Eigen::MatrixXcd m = momentum_matrix(c, MomentumPoint(k));
    CHECK((m * m.adjoint() - Eigen::MatrixXcd::Identity(2 * d, 2 * d)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("stochastic coins conserve probability") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    const int d = 1 + t % 2, side = 3 + t % 7;
    const CoinMatrix c = CoinMatrix::custom(random_stochastic(2 * d, rng));
    CHECK(classify_coin(c, 1e-12).crw);
    WalkState s(d, side);
    double total = 0.0;
    for (auto& z : s.field()) {
      z = u(rng);
      total += z.real();
    }
    for (auto& z : s.field()) z /= total;
    CHECK(std::abs(total_measure(evolve(s, c, 25), 1) - 1.0) < 1e-12);
  }
}

TEST_CASE("evolution in position and momentum space agree") {
  std::mt19937_64 rng(4);
  for (int side = 2; side <= 8; ++side) {
    const CoinMatrix c = CoinMatrix::custom(random_unitary(2, rng));
    const WalkState s0 = random_state(1, side, rng);
    const int steps = 7;
    const WalkState s = evolve(s0, c, steps);
    // psi_hat(k) = sum_x psi(x) e^{-ikx}; each mode is multiplied by M(k)
    std::vector<Eigen::Vector2cd> modes(static_cast<std::size_t>(side));
    for (int m = 0; m < side; ++m) {
      const double k = 2 * pi * m / side;
      Eigen::Vector2cd v = Eigen::Vector2cd::Zero();
      for (int x = 0; x < side; ++x) {
        const int xs[] = {x};
        v += std::polar(1.0, -k * x) * Eigen::Vector2cd(s0.at(xs)[0], s0.at(xs)[1]);
      }
      Eigen::Matrix2cd mm = momentum_matrix(c, MomentumPoint::from_lattice(std::vector<int>{m}, side));
      for (int n = 0; n < steps; ++n) v = mm * v;
      modes[static_cast<std::size_t>(m)] = v;
    }
    for (int x = 0; x < side; ++x) {
      Eigen::Vector2cd back = Eigen::Vector2cd::Zero();
      for (int m = 0; m < side; ++m) back += std::polar(1.0, 2 * pi * m * x / side) * modes[static_cast<std::size_t>(m)];
      back /= side;
      const int xs[] = {x};
      CHECK(std::abs(back(0) - s.at(xs)[0]) < 1e-10);
      CHECK(std::abs(back(1) - s.at(xs)[1]) < 1e-10);
    }
  }
}

TEST_CASE("momentum factorisation on random coins") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 12; ++t) {
    const int d = 1 + t % 2, n = d == 1 ? 2 + t % 3 : 2 + t % 2;
    const CoinMatrix c = CoinMatrix::custom(t % 3 == 0 ? random_stochastic(2 * d, rng) : random_unitary(2 * d, rng));
    for (double u : {0.3, -0.3, -0.7}) {
      try {
        const double a = zeta_finite(c, n, u).value, b = zeta_finite_dense(c, n, u).value;
        CHECK(std::abs(a - b) / std::abs(b) < 1e-10);
      } catch (const ComputationError&) {
        // complex unitary coins can put det(I - uM) off the positive axis
      }
    }
  }
}

TEST_CASE("odd C_r vanish for 1D QW coins") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> xi(0.05, pi / 2 - 0.05);
  for (int t = 0; t < 20; ++t) {
    const CoinMatrix c = CoinSpec{CoinKind::hadamard_type, 1, xi(rng), t % 2 ? ShiftType::f_type : ShiftType::m_type}.build();
    const auto seq = cr_pathsum_sequence(c, 9);
    for (int r = 1; r <= 9; r += 2) CHECK(std::abs(seq[static_cast<std::size_t>(r - 1)]) < 1e-12);
  }
}

TEST_CASE("path sum equals quadrature for r <= 10") {
  for (const CoinSpec& s : {CoinSpec{CoinKind::grover, 2, {}, ShiftType::f_type}, CoinSpec{CoinKind::simple_rw, 2, {}, ShiftType::m_type},
                            CoinSpec{CoinKind::grover, 3, {}, ShiftType::m_type}}) {
    const CoinMatrix c = s.build();
    const auto seq = cr_pathsum_sequence(c, 10);
    for (int r = 1; r <= 10; ++r) CHECK(std::abs(cr_limit(c, r, {16, 0.5, 1e-12, 3}).value - seq[static_cast<std::size_t>(r - 1)]) < 1e-9);
  }
}

TEST_CASE("Mahler measure is invariant under monomial shifts and inversion") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> ex(-3, 3), coef(-9, 9);
  for (int t = 0; t < 15; ++t) {
    LaurentPolynomial p(2);
    p.add_term({0, 0}, 40.0);  // dominant constant keeps |f| >= 4 on the torus
    for (int k = 0; k < 4; ++k) p.add_term({ex(rng), ex(rng)}, double(coef(rng)));
    if (p.is_zero()) continue;
    const auto r = mahler_quadrature(p);
    const auto shifted = mahler_quadrature(p.times_monomial({ex(rng), ex(rng)}));
    const auto inv = mahler_quadrature(p.inverted());
    CHECK(std::abs(shifted.value - r.value) <= 2 * r.error_estimate + 1e-13);
    CHECK(std::abs(inv.value - r.value) <= 2 * r.error_estimate + 1e-13);
  }
}
