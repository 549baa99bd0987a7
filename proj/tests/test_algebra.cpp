#include "horolab/algebra.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

using namespace horolab;

namespace {

// Leibniz-formula determinant over exact integers, for small matrices.
BigInt leibniz_det(const IntegerMatrix& m) {
  const int n = m.dim();
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  BigInt total = 0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inversions += perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)];
    BigInt prod = 1;
    for (int i = 0; i < n; ++i) prod *= m(i, perm[static_cast<std::size_t>(i)]);
    total += inversions % 2 ? BigInt(-prod) : prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace

TEST_CASE("diagonal flow examples") {
  CHECK(approx_equal(diagonal_flow(0.0, 3), RealMatrix::Identity(3, 3), 1e-15));
  RealMatrix two(2, 2);
  two << 0.5, 0, 0, 2;
  CHECK(approx_equal(diagonal_flow(std::log(2.0), 2), two, 1e-15));
  RealMatrix three = RealMatrix::Zero(3, 3);
  three.diagonal() << 0.5, 0.5, 4;
  CHECK(approx_equal(diagonal_flow(std::log(2.0), 3), three, 1e-15));
  CHECK_THROWS_AS(diagonal_flow(1.0, 1), Error);
}

TEST_CASE("diagonal flow is a one-parameter group of determinant one") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t(-3, 3);
  for (int k = 0; k < 200; ++k) {
    const int d = 2 + k % 4;
    const double a = t(rng), b = t(rng);
    CHECK(approx_equal(diagonal_flow(a, d) * diagonal_flow(b, d), diagonal_flow(a + b, d), 1e-12));
    CHECK(std::abs(diagonal_flow(a, d).determinant() - 1.0) < 1e-12);
  }
}

TEST_CASE("unipotent examples") {
  CHECK(approx_equal(unipotent_stable(RealVector::Zero(1)), RealMatrix::Identity(2, 2), 0));
  RealMatrix expect(2, 2);
  expect << 1, 3, 0, 1;
  CHECK(unipotent_unstable(RealVector::Constant(1, 3.0)) == expect);
  RealVector x(2), y(2);
  x << 1, 2;
  y << -1, 5;
  CHECK(unipotent_stable(x) * unipotent_stable(y) == unipotent_stable(x + y));
  const RealMatrix n = unipotent_stable(x);
  CHECK(n(2, 0) == 1);
  CHECK(n(2, 1) == 2);
  CHECK(n(0, 2) == 0);
}

TEST_CASE("flow conjugation of unipotents") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 100; ++k) {
    const int d = 2 + k % 3;
    const double t = u(rng);
    RealVector x(d - 1);
    for (int i = 0; i + 1 < d; ++i) x[i] = u(rng);
    // Phi^{-t} n_+(x) Phi^{t} = n_+(e^{-dt} x): bottom row scales by e^{(d-1)t} e^{t}
    const RealMatrix lhs = diagonal_flow(-t, d) * unipotent_stable(x) * diagonal_flow(t, d);
    CHECK(approx_equal(lhs, unipotent_stable(std::exp(-d * t) * x), 1e-12));
    const RealMatrix lhs2 = diagonal_flow(-t, d) * unipotent_unstable(x) * diagonal_flow(t, d);
    CHECK(approx_equal(lhs2, unipotent_unstable(std::exp(d * t) * x), 1e-12));
  }
}

TEST_CASE("conjugate_flow_identity") {
  auto check = [](double T, double T0, RealVector x) {
    const auto [l, r] = conjugate_flow_identity(T, T0, x);
    CHECK(max_abs(l - r) <= 1e-12 * std::max(1.0, max_abs(l)));
    CHECK(l == unipotent_stable(x));
  };
  check(1, 1, RealVector::Constant(1, 1.0));
  check(4, 1, RealVector::Constant(1, 1.0));
  check(9, 3, RealVector::Constant(2, 1.0));
  CHECK_THROWS_AS(conjugate_flow_identity(0, 1, RealVector::Constant(1, 1.0)), Error);
  // T = 4, T0 = 1, d = 2: the inner argument is x/4
  const auto [l, r] = conjugate_flow_identity(4, 1, RealVector::Constant(1, 1.0));
  const double u = std::log(4.0) / 2;
  const RealMatrix manual = diagonal_flow(u, 2) * unipotent_stable(RealVector::Constant(1, 0.25)) * diagonal_flow(-u, 2);
  CHECK(approx_equal(manual, r, 1e-14));
}

TEST_CASE("zeta against an independent partial sum with a bracketing tail") {
  CHECK(zeta(2) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6).epsilon(1e-14));
  CHECK(zeta(4) == doctest::Approx(std::pow(std::numbers::pi, 4) / 90).epsilon(1e-14));
  for (int d : {2, 3, 5}) {
    const long N = 1'000'000;
    long double s = 0;
    for (long n = N; n >= 1; --n) s += std::pow(static_cast<long double>(n), -d);
    const long double lo = s + 1.0L / ((d - 1) * std::pow(static_cast<long double>(N + 1), d - 1));
    const long double hi = s + 1.0L / ((d - 1) * std::pow(static_cast<long double>(N), d - 1));
    CHECK(zeta(d) >= static_cast<double>(lo) - 1e-12);
    CHECK(zeta(d) <= static_cast<double>(hi) + 1e-12);
  }
  CHECK(zeta(3) == doctest::Approx(1.2020569032).epsilon(1e-10));
  CHECK_THROWS_AS(zeta(1), Error);
}

TEST_CASE("constants") {
  const Constants c2 = constants(2);
  CHECK(c2.h0 == 1.0);
  CHECK(c2.cd_lower == 1.0);
  const Constants c3 = constants(3);
  CHECK(c3.h0 == doctest::Approx(std::sqrt(3.0) * 4.0 / 3.0));
  CHECK(c3.cd_lower == doctest::Approx(std::sqrt(3.0) / 4.0));
  CHECK(c3.zeta_d > 1.0);
}

TEST_CASE("swap elements have determinant one") {
  CHECK(swap_element(3, 3) == IntegerMatrix::identity(3));
  const IntegerMatrix s12 = swap_element(1, 2);
  CHECK(s12(0, 1) == 1);
  CHECK(s12(1, 0) == -1);
  CHECK(s12.det() == 1);
  for (int d = 2; d <= 6; ++d)
    for (int i = 1; i <= d; ++i) {
      CHECK(swap_element(i, d).det() == 1);
      CHECK(leibniz_det(swap_element(i, d)) == 1);
    }
  CHECK_THROWS_AS(swap_element(0, 3), Error);
  CHECK_THROWS_AS(swap_element(4, 3), Error);
  CHECK(tilde_reflection(3).det() == 1);
}

TEST_CASE("exact determinant matches the Leibniz oracle") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> e(-1'000'000'000L, 1'000'000'000L);
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 4;
    IntegerMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = e(rng);
    CHECK(m.det() == leibniz_det(m));
    const IntegerMatrix sq = m * m;
    CHECK(sq.det() == m.det() * m.det());
  }
}

TEST_CASE("tolerance is configurable and read from the environment") {
  const double before = tolerance();
  CHECK(before > 0);
  setenv("HOROLAB_TOLERANCE", "1e-7", 1);
  CHECK(load_tolerance_from_env() == 1e-7);
  setenv("HOROLAB_TOLERANCE", "garbage", 1);
  CHECK_THROWS_AS(load_tolerance_from_env(), Error);
  unsetenv("HOROLAB_TOLERANCE");
  set_tolerance(before);
  CHECK_THROWS_AS(set_tolerance(-1), Error);
  CHECK(tolerance() == before);
}

TEST_CASE("unimodularity check") {
  RealMatrix m(2, 2);
  m << 2, 1, 1, 1;
  CHECK(is_unimodular(m, 1e-9));
  m(0, 0) = 2.1;
  CHECK_FALSE(is_unimodular(m, 1e-9));
  CHECK(std::string(errc_name(Errc::invalid_dimension)) == "invalid-dimension");
}
