#include "horolab/farey.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

using namespace horolab;

namespace {

using Key = std::vector<std::int64_t>;

std::set<Key> sources_of(const std::vector<TranslatedFareyPoint>& pts) {
  std::set<Key> s;
  for (const auto& p : pts) s.insert(p.source);
  return s;
}

// Primitive (p, q) with p in [0, q)^{d-1}, q <= Q, straight from the definition.
std::uint64_t brute_farey_count(int d, std::int64_t Q) {
  std::uint64_t n = 0;
  for (std::int64_t q = 1; q <= Q; ++q) {
    if (d == 2) {
      for (std::int64_t p = 0; p < q; ++p) n += std::gcd(p, q) == 1;
    } else {
      for (std::int64_t a = 0; a < q; ++a)
        for (std::int64_t b = 0; b < q; ++b) n += std::gcd(std::gcd(a, b), q) == 1;
    }
  }
  return n;
}

std::uint64_t brute_jordan(int k, std::int64_t n) {
  // number of k-tuples mod n whose gcd with n is 1
  std::uint64_t count = 0, total = 1;
  for (int i = 0; i < k; ++i) total *= static_cast<std::uint64_t>(n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::int64_t g = n;
    std::uint64_t r = idx;
    for (int i = 0; i < k; ++i) {
      g = std::gcd(g, static_cast<std::int64_t>(r % static_cast<std::uint64_t>(n)));
      r /= static_cast<std::uint64_t>(n);
    }
    count += g == 1;
  }
  return count;
}

RealMatrix mat2(double a, double b, double c, double e) {
  RealMatrix m(2, 2);
  m << a, b, c, e;
  return m;
}

}  // namespace

TEST_CASE("enumerate_farey examples") {
  const auto f3 = enumerate_farey(2, 3);
  REQUIRE(f3.size() == 4);
  const std::vector<double> expect{0.0, 1.0 / 3, 0.5, 2.0 / 3};
  std::vector<double> xs, qs;
  for (const auto& p : f3) {
    xs.push_back(p.point[0]);
    qs.push_back(p.alpha_d);
  }
  // sorted by (q, p)
  CHECK(qs == std::vector<double>{1, 2, 3, 3});
  std::vector<double> sorted_x = xs;
  std::sort(sorted_x.begin(), sorted_x.end());
  for (std::size_t i = 0; i < 4; ++i) CHECK(sorted_x[i] == doctest::Approx(expect[i]).epsilon(1e-15));

  const auto f32 = enumerate_farey(3, 2);
  REQUIRE(f32.size() == 4);
  std::set<std::pair<double, double>> pts;
  for (const auto& p : f32) pts.insert({p.point[0], p.point[1]});
  CHECK(pts == std::set<std::pair<double, double>>{{0, 0}, {0, 0.5}, {0.5, 0}, {0.5, 0.5}});

  CHECK(enumerate_farey(2, 1).size() == 1);
  CHECK_THROWS_AS(enumerate_farey(2, 0.5), Error);
}

TEST_CASE("every source is primitive and points satisfy their invariants") {
  for (int d : {2, 3}) {
    for (const auto& p : enumerate_farey(d, d == 2 ? 60 : 15)) {
      CHECK(is_primitive(p.source));
      CHECK(p.alpha_d > 0);
      CHECK(p.alpha_d == std::round(p.alpha_d));
      for (int i = 0; i + 1 < d; ++i) {
        CHECK(std::abs(p.point[i] * p.alpha_d - p.alpha_prime[i]) <= 1e-12 * std::max(1.0, std::abs(p.alpha_prime[i])));
        CHECK(p.point[i] >= 0);
        CHECK(p.point[i] < 1);
      }
    }
  }
}

TEST_CASE("translated enumeration examples") {
  const auto id = enumerate_translated_farey(RealMatrix::Identity(2, 2), 3, Box::unit(1));
  CHECK(sources_of(id) == sources_of(enumerate_farey(2, 3)));

  const auto sheared = enumerate_translated_farey(mat2(1, 0, 1, 1), 1, Box::cube(1, 0, 1, true));
  REQUIRE(sheared.size() == 2);
  std::vector<double> xs;
  for (const auto& p : sheared) {
    CHECK(p.alpha_d == doctest::Approx(1.0));
    xs.push_back(p.point[0]);
  }
  std::sort(xs.begin(), xs.end());
  CHECK(xs[0] == doctest::Approx(0.0));
  CHECK(xs[1] == doctest::Approx(1.0));

  Box unbounded = Box::unit(1);
  unbounded.hi[0] = INFINITY;
  CHECK_THROWS(enumerate_translated_farey(RealMatrix::Identity(2, 2), 3, unbounded));
}

TEST_CASE("an integral unimodular L gives the same point set as the identity") {
  const std::vector<RealMatrix> gammas{mat2(2, 1, 1, 1), mat2(1, 3, 0, 1), mat2(0, 1, -1, 0)};
  for (const auto& g : gammas)
    for (double Q : {1.0, 5.0, 17.5, 40.0}) {
      std::set<std::pair<double, double>> a, b;
      for (const auto& p : enumerate_translated_farey(g, Q, Box::unit(1))) a.insert({std::round(p.point[0] * 1e9), p.alpha_d});
      for (const auto& p : enumerate_farey(2, Q)) b.insert({std::round(p.point[0] * 1e9), p.alpha_d});
      CHECK(a == b);
    }
  RealMatrix g3(3, 3);
  g3 << 1, 1, 0, 0, 1, 0, 2, 1, 1;
  std::set<std::vector<double>> a, b;
  for (const auto& p : enumerate_translated_farey(g3, 9, Box::unit(2)))
    a.insert({std::round(p.point[0] * 1e9), std::round(p.point[1] * 1e9), p.alpha_d});
  for (const auto& p : enumerate_farey(3, 9)) b.insert({std::round(p.point[0] * 1e9), std::round(p.point[1] * 1e9), p.alpha_d});
  CHECK(a == b);
}

TEST_CASE("monotone in Q") {
  std::set<Key> prev;
  for (double Q : {1.0, 2.0, 3.5, 8.0, 13.0, 21.0}) {
    const auto cur = sources_of(enumerate_farey(2, Q));
    CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
    prev = cur;
  }
}

TEST_CASE("serial and parallel enumeration agree exactly") {
  RealMatrix L = mat2(std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0));
  const auto s = enumerate_translated_farey(L, 300, Box::cube(1, -0.3, 0.8), Exec::serial);
  const auto p = enumerate_translated_farey(L, 300, Box::cube(1, -0.3, 0.8), Exec::parallel);
  REQUIRE(s.size() == p.size());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i].source == p[i].source);
}

TEST_CASE("count_farey against brute force and asymptotics") {
  const FareyCount c3 = count_farey(2, 3);
  CHECK(c3.exact == 4);
  CHECK(c3.asymptotic == doctest::Approx(9 / (2 * M_PI * M_PI / 6)).epsilon(1e-12));
  CHECK(c3.asymptotic == doctest::Approx(2.7357).epsilon(1e-4));
  for (std::int64_t Q : {1, 2, 7, 30, 101}) CHECK(count_farey(2, static_cast<double>(Q)).exact == brute_farey_count(2, Q));
  for (std::int64_t Q : {1, 2, 6, 19}) CHECK(count_farey(3, static_cast<double>(Q)).exact == brute_farey_count(3, Q));
  CHECK(count_farey(3, 19).exact == enumerate_farey(3, 19).size());

  const FareyCount big = count_farey(2, 1e4);
  CHECK(std::abs(static_cast<double>(big.exact) / big.asymptotic - 1) < 1e-3);
  const FareyCount c350 = count_farey(3, 50);
  CHECK(std::abs(static_cast<double>(c350.exact) / c350.asymptotic - 1) < 0.02);
}

TEST_CASE("relative error of the d=2 count decays like C/Q with C <= 5") {
  double worst = 0;
  for (double Q = 100; Q <= 1e6; Q *= 1.7) {
    const FareyCount c = count_farey(2, Q);
    worst = std::max(worst, std::abs(static_cast<double>(c.exact) / c.asymptotic - 1) * Q);
  }
  CHECK(worst <= 5.0);
}

TEST_CASE("Jordan totients against brute force") {
  for (int k : {1, 2, 3}) {
    const auto j = jordan_totients(k, 30);
    for (std::int64_t n = 1; n <= (k == 3 ? 12 : 30); ++n) CHECK(j[static_cast<std::size_t>(n)] == brute_jordan(k, n));
  }
}

TEST_CASE("duplicate_region examples") {
  const DuplicateRegion id3 = duplicate_region(RealMatrix::Identity(3, 3));
  CHECK(id3.kind == DuplicateRegion::Kind::torus);
  CHECK(approx_equal(id3.period_basis, RealMatrix::Identity(2, 2), 1e-12));

  const DuplicateRegion half = duplicate_region(mat2(1, 0, 0.5, 1));
  CHECK(half.period_basis(0, 0) == doctest::Approx(1.0));

  // det(A) = 0 branch; L n_-(s) L^-1 = [[1,0],[-s,1]] so the period is 1
  const DuplicateRegion rot = duplicate_region(mat2(0, 1, -1, 0));
  CHECK(std::abs(rot.period_basis(0, 0)) == doctest::Approx(1.0));
  CHECK(is_gamma_duplicate(mat2(0, 1, -1, 0), RealVector::Constant(1, 1.0)));
  CHECK_FALSE(is_gamma_duplicate(mat2(0, 1, -1, 0), RealVector::Constant(1, 0.5)));

  CHECK(duplicate_region(mat2(2, 1, 1, 1), true).kind == DuplicateRegion::Kind::all);
  CHECK_THROWS_AS(duplicate_region(mat2(2, 0, 0, 1)), Error);
}

TEST_CASE("is_gamma_duplicate examples") {
  CHECK(is_gamma_duplicate(RealMatrix::Identity(2, 2), RealVector::Constant(1, 1.0)));
  CHECK_FALSE(is_gamma_duplicate(RealMatrix::Identity(2, 2), RealVector::Constant(1, 0.5)));
  const RealMatrix L = mat2(1, 0, 0.5, 1);
  CHECK(is_gamma_duplicate(L, RealVector::Constant(1, 4.0)));
  CHECK_FALSE(is_gamma_duplicate(L, RealVector::Constant(1, 1.0)));

  const RationalMatrix Lq{{Rational(1), Rational(0)}, {Rational(1, 2), Rational(1)}};
  CHECK(is_gamma_duplicate(Lq, {Rational(4)}));
  CHECK_FALSE(is_gamma_duplicate(Lq, {Rational(1)}));
  CHECK_FALSE(is_gamma_duplicate(Lq, {Rational(2)}));
  CHECK(approx_equal(to_real(Lq), L, 0));
}

TEST_CASE("no duplicates strictly inside a fundamental cell") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(1e-6, 1 - 1e-6);
  std::uniform_int_distribution<int> k(-6, 6);
  RealMatrix L3(3, 3);
  L3 << 1, 0, 0, 0.5, 1, 0, 0.25, 0.5, 1;
  const std::vector<RealMatrix> Ls{RealMatrix::Identity(2, 2), mat2(1, 0, 0.5, 1), mat2(0, 1, -1, 0), mat2(2, 1, 1, 1),
                                   mat2(1, 0, 1.0 / 3, 1), L3};
  for (const auto& L : Ls) {
    const DuplicateRegion r = duplicate_region(L);
    const int n = static_cast<int>(L.rows()) - 1;
    const RealMatrix inv = r.period_basis.inverse();
    for (int trial = 0; trial < 200; ++trial) {
      RealVector c(n);
      for (int i = 0; i < n; ++i) c[i] = u(rng);
      CHECK_FALSE(is_gamma_duplicate(L, RealVector(r.period_basis.transpose() * c)));
      // integer combinations may be duplicates, and only those
      RealVector m(n);
      for (int i = 0; i < n; ++i) m[i] = k(rng);
      const RealVector s = r.period_basis.transpose() * m;
      if (is_gamma_duplicate(L, s)) {
        const RealVector back = inv.transpose() * s;
        for (int i = 0; i < n; ++i) CHECK(std::abs(back[i] - std::round(back[i])) < 1e-9);
      }
    }
  }
}

TEST_CASE("fits_in_cell") {
  const DuplicateRegion id = duplicate_region(RealMatrix::Identity(2, 2));
  CHECK(fits_in_cell(id, Box::unit(1)));
  CHECK_FALSE(fits_in_cell(id, Box::cube(1, 0, 1.5)));
  const DuplicateRegion all = duplicate_region(RealMatrix::Identity(2, 2), true);
  CHECK(fits_in_cell(all, Box::cube(1, -10, 10)));
}

TEST_CASE("coprime counting and lattice helpers") {
  const PrimeTable primes(1000);
  for (std::int64_t g : {1, 6, 30, 97, 360}) {
    const auto ps = primes.distinct_primes(g);
    for (std::int64_t a : {-20, -1, 0, 5})
      for (std::int64_t b : {-3, 0, 7, 50}) {
        std::int64_t brute = 0;
        for (std::int64_t n = a; n <= b; ++n) brute += std::gcd(n, g) == 1;
        CHECK(coprime_count(a, b, ps) == brute);
      }
  }
  CHECK(gcd_of({0, 0, 4, -6}) == 2);
  CHECK_FALSE(is_primitive({0, 0}));
  CHECK(is_primitive({-3, 5}));
}
