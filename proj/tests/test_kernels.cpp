#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "mzc/kernels.hpp"

using mzc::cplx;
namespace k = mzc::kernels;

namespace {

Eigen::MatrixXcd random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

std::vector<cplx> row_major(const Eigen::MatrixXcd& m) {
  std::vector<cplx> v(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
  return v;
}

// smooth, non-even integrand on T^d
auto smooth(const k::TorusGrid& g) {
  return [&g](std::span<const int> idx) {
    double s = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) s += std::sin(g.angles[static_cast<std::size_t>(idx[j])] + 0.3 * j);
    return cplx(std::exp(std::cos(s)), s);
  };
}

}  // namespace

TEST_CASE("grid nodes and symmetry flags") {
  const auto g = k::make_grid(2, 8, 0.5);
  CHECK(g.size() == 64);
  CHECK(g.angles.front() == doctest::Approx(std::numbers::pi / 8));
  CHECK(g.foldable());
  CHECK(g.reflection_symmetric());
  CHECK_FALSE(k::make_grid(1, 7, 0.5).foldable());
  CHECK(k::make_grid(1, 8, 0.0).reflection_symmetric());
  CHECK_FALSE(k::make_grid(1, 8, 0.25).reflection_symmetric());
  CHECK_THROWS_AS(k::make_grid(0, 8, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(k::make_grid(17, 8, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(k::make_grid(1, 0, 0.5), std::invalid_argument);
}

TEST_CASE("trigonometric polynomials are integrated exactly") {
  // mean of cos^2(t1) cos^2(t2) = 1/4
  const auto g = k::make_grid(2, 16, 0.5);
  auto f = [&g](std::span<const int> idx) {
    const double a = std::cos(g.angles[idx[0]]), b = std::cos(g.angles[idx[1]]);
    return cplx(a * a * b * b, 0.0);
  };
  const auto acc = k::torus_reduce<k::SumAcc>(g, f);
  CHECK(acc.count == 256);
  CHECK(std::abs(acc.sum() / 256.0 - 0.25) < 1e-15);
}

TEST_CASE("parallel and serial reductions agree") {
  for (int d : {1, 2, 3}) {
    const auto g = k::make_grid(d, d == 1 ? 100000 : d == 2 ? 300 : 40, 0.5);
    auto f = smooth(g);
    const cplx a = k::torus_reduce<k::SumAcc>(g, f).sum();
    const cplx b = k::torus_reduce_serial<k::SumAcc>(g, f).sum();
    CHECK(std::abs(a - b) <= 1e-13 * std::abs(b));
  }
}

TEST_CASE("reduction is bitwise independent of the thread count") {
  const auto g = k::make_grid(2, 256, 0.5);
  auto f = smooth(g);
  k::set_threads(1);
  const cplx one = k::torus_reduce<k::SumAcc>(g, f).sum();
  k::set_threads(4);
  const cplx four = k::torus_reduce<k::SumAcc>(g, f).sum();
  k::set_threads(0);
  CHECK(one.real() == four.real());
  CHECK(one.imag() == four.imag());
}

TEST_CASE("half-box reduction of an even integrand") {
  const auto g = k::make_grid(2, 64, 0.5);
  auto f = [&g](std::span<const int> idx) {
    return cplx(std::log(3.0 + std::cos(g.angles[idx[0]]) + std::cos(g.angles[idx[1]])), 0.0);
  };
  const auto full = k::torus_reduce<k::SumAcc>(g, f);
  const auto half = k::torus_reduce_even<k::SumAcc>(g, f);
  CHECK(half.count == full.count / 4);
  CHECK(std::abs(half.sum() / double(half.count) - full.sum() / double(full.count)) < 1e-14);
}

TEST_CASE("log-modulus accumulator tracks the minimum") {
  k::LogModAcc a, b;
  a.push(cplx(0.0, 2.0));
  b.push(cplx(0.5, 0.0));
  a.merge(b);
  CHECK(a.count() == 2);
  CHECK(a.min_abs == doctest::Approx(0.5));
  CHECK(a.sum().real() == doctest::Approx(std::log(2.0) + std::log(0.5)));
}

TEST_CASE("det_small matches LU determinants") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 10; ++n) {
    const Eigen::MatrixXcd m = random_matrix(n, rng);
    auto v = row_major(m);
    const cplx d = k::det_small(n, v.data());
    const cplx ref = m.partialPivLu().determinant();
    CHECK(std::abs(d - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
  std::vector<cplx> zero(9, cplx(0.0));
  CHECK(k::det_small(3, zero.data()) == cplx(0.0));
}

TEST_CASE("trace_power matches dense powers") {
  std::mt19937_64 rng(11);
  for (int n : {2, 4, 6}) {
    const Eigen::MatrixXcd m = random_matrix(n, rng) / std::sqrt(double(n));
    const auto v = row_major(m);
    std::vector<cplx> scratch(static_cast<std::size_t>(2 * n * n));
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(n, n);
    for (int r = 0; r <= 7; ++r) {
      CHECK(std::abs(k::trace_power(n, v.data(), r, scratch.data()) - p.trace()) < 1e-11);
      p = p * m;
    }
  }
}

TEST_CASE("walk_step parallel and serial are identical") {
  std::mt19937_64 rng(3);
  for (int d : {1, 2, 3}) {
    const int n = 2 * d, side = d == 3 ? 6 : 9;
    const auto coin = row_major(random_matrix(n, rng));
    std::int64_t sites = 1;
    for (int j = 0; j < d; ++j) sites *= side;
    std::vector<cplx> in(static_cast<std::size_t>(sites * n)), a(in.size()), b(in.size());
    std::normal_distribution<double> g;
    for (auto& z : in) z = cplx(g(rng), g(rng));
    k::walk_step(d, side, coin, in, a);
    k::walk_step_serial(d, side, coin, in, b);
    CHECK(a == b);
  }
}

TEST_CASE("walk_step rejects mismatched buffers") {
  std::vector<cplx> coin(4), in(8), out(6);
  CHECK_THROWS_AS(k::walk_step(1, 4, coin, in, out), std::invalid_argument);
  CHECK_THROWS_AS(k::walk_step_serial(1, 4, coin, in, out), std::invalid_argument);
}
