#include "horolab/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace horolab;

namespace {

const double kZeta2 = std::numbers::pi * std::numbers::pi / 6;

StableSection eps_section(int d, double T, double eps, double ytilde = 0.0) {
  return StableSection::epsilon_box(T, eps, RealVector::Constant(d - 1, ytilde));
}

// Sum of clipped window volumes straight from the Farey enumeration.
double brute_window_sum(const StableSection& s, const RealMatrix& L, const Box& A, double t) {
  const int d = static_cast<int>(L.rows());
  const double scale = std::exp(-d * t);
  Box cover = A;
  cover.lo = A.lo + scale * s.B.lo;
  cover.hi = A.hi + scale * s.B.hi;
  cover.closed_upper = true;
  const double qh = q_hat(d, t, s.T);
  if (qh < 1) return 0;
  double total = 0;
  for (const auto& p : enumerate_translated_farey(L, qh, cover, Exec::serial)) {
    double v = 1;
    for (int i = 0; i + 1 < d; ++i) {
      const double lo = p.point[i] - scale * s.B.hi[i], hi = p.point[i] - scale * s.B.lo[i];
      v *= std::max(0.0, std::min(hi, A.hi[i]) - std::max(lo, A.lo[i]));
    }
    total += v;
  }
  return total;
}

ExperimentConfig base_config(int d) {
  ExperimentConfig c;
  c.d = d;
  c.L = RealMatrix::Identity(d, d);
  c.A = ParamRegion::from_box(Box::unit(d - 1));
  c.target = eps_section(d, 1.0, 0.2);
  c.estimator = Estimator::exact_window;
  return c;
}

double r_level_of(const ExperimentConfig& c) { return sthe_run(c).front().T; }

RealMatrix mat2(double a, double b, double c, double e) {
  RealMatrix m(2, 2);
  m << a, b, c, e;
  return m;
}

}  // namespace

TEST_CASE("certified d=2 window total equals the enumerated clipped sum") {
  const std::vector<Box> regions{Box::unit(1), Box::cube(1, 0.1, 0.73), Box::cube(1, -0.4, 0.05), Box::cube(1, 0.3333, 0.3334)};
  for (const auto& A : regions)
    for (double t : {0.0, 1.0, 3.0, 5.5})
      for (double y : {0.0, 0.05, -0.3}) {
        const StableSection s = eps_section(2, 1.5, 0.4, y);
        INFO("A = [", A.lo[0], ", ", A.hi[0], "], t = ", t, ", y = ", y);
        const WindowTotal w = sthe_exact_stable(s, RealMatrix::Identity(2, 2), A, t);
        CHECK(w.certified);
        CHECK(w.overlaps == 0);
        const double brute = brute_window_sum(s, RealMatrix::Identity(2, 2), A, t);
        // window edges are P - e^{-2t} b with |P| ~ 1: a few ulp of 1 per window
        const double bound = 4 * std::numeric_limits<double>::epsilon() * (1 + A.hi.cwiseAbs().maxCoeff()) *
                             static_cast<double>(w.count + 1);
        CHECK(std::abs(w.measure - brute) <= bound);
        CHECK(std::abs(w.window_sum - brute) <= bound);
      }
}

TEST_CASE("full-period total is eps e^{-2t} times the Farey count") {
  for (double t : {2.0, 5.0, 8.0}) {
    const double eps = 0.2;
    const WindowTotal w = sthe_exact_stable(eps_section(2, 1.0, eps), RealMatrix::Identity(2, 2), Box::unit(1), t);
    const double expect = eps * std::exp(-2 * t) * static_cast<double>(count_farey(2, std::exp(t)).exact);
    CHECK(w.measure == doctest::Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("d=3 sweep matches the enumerated sum") {
  const StableSection s = eps_section(3, 1.0, 0.2, 0.03);
  for (double t : {1.0, 1.5, 2.0}) {
    const Box A = Box::cube(2, 0.1, 0.8);
    const WindowTotal w = sthe_exact_stable(s, RealMatrix::Identity(3, 3), A, t);
    CHECK(w.window_sum == doctest::Approx(brute_window_sum(s, RealMatrix::Identity(3, 3), A, t)).epsilon(1e-12));
    CHECK(w.measure <= w.window_sum * (1 + 1e-12));
    if (w.overlaps == 0) CHECK(w.measure == doctest::Approx(w.window_sum).epsilon(1e-12));
  }
}

TEST_CASE("windows away from A give zero") {
  const StableSection s = eps_section(2, 1.0, 0.2, 0.4);
  const WindowTotal w = sthe_exact_stable(s, RealMatrix::Identity(2, 2), Box::cube(1, 0, 0.5, true), 0.0);
  CHECK(w.measure == 0.0);
  CHECK(w.count == 0);
  const WindowTotal far = sthe_exact_stable(eps_section(2, 1.0, 0.2), RealMatrix::Identity(2, 2), Box::cube(1, 0.4, 0.45), 0.5);
  CHECK(far.measure == 0.0);
}

TEST_CASE("spec example: d=2, T=2, eps=0.2, t=9") {
  ExperimentConfig c = base_config(2);
  c.target = eps_section(2, 2.0, 0.2);
  c.T_rule.T0 = 2.0;
  c.t_schedule = {9.0};
  const auto r = sthe_run(c);
  REQUIRE(r.size() == 1);
  CHECK(r[0].predicted == doctest::Approx(0.2 / (2 * kZeta2)).epsilon(1e-14));
  CHECK(r[0].predicted == doctest::Approx(0.0607927).epsilon(1e-6));
  CHECK(r[0].rel_error < 0.01);
  CHECK(r[0].T == 2.0);
  CHECK(r[0].Q == doctest::Approx(std::exp(9.0)));
  CHECK(r[0].estimate >= 0);
}

TEST_CASE("integral L gives bit-identical exact-window results") {
  ExperimentConfig c = base_config(2);
  c.t_schedule = {4.0, 7.0, 9.0};
  const auto ref = sthe_run(c, Exec::serial);
  for (const RealMatrix& g : {mat2(2, 1, 1, 1), mat2(1, 5, 0, 1), mat2(3, 2, 1, 1)}) {
    c.L = g;
    const auto r = sthe_run(c, Exec::serial);
    REQUIRE(r.size() == ref.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(r[i].estimate == ref[i].estimate);
      CHECK(r[i].count == ref[i].count);
    }
  }
}

TEST_CASE("serial and parallel runs agree exactly") {
  ExperimentConfig c = base_config(2);
  c.t_schedule = {3.0, 6.0, 8.0};
  const auto a = sthe_run(c, Exec::serial), b = sthe_run(c, Exec::parallel);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].estimate == b[i].estimate);

  c.estimator = Estimator::monte_carlo;
  c.samples = 20000;
  c.seed = 42;
  const auto m1 = sthe_run(c, Exec::serial), m2 = sthe_run(c, Exec::parallel), m3 = sthe_run(c);
  for (std::size_t i = 0; i < m1.size(); ++i) {
    CHECK(m1[i].estimate == m2[i].estimate);
    CHECK(m1[i].estimate == m3[i].estimate);
  }
  c.seed = 43;
  const auto m4 = sthe_run(c);
  CHECK(m4[0].estimate != m1[0].estimate);
}

TEST_CASE("grid and Monte-Carlo agree with the exact window total") {
  const StableSection s = eps_section(2, 1.0, 0.5, 0.1);
  const Box A = Box::cube(1, 0.05, 0.9);
  const double t = 3.0;
  const double exact = sthe_exact_stable(s, RealMatrix::Identity(2, 2), A, t).measure;
  const std::uint64_t n = 200000;
  const double p = exact / A.volume();
  const double sigma = A.volume() * std::sqrt(p * (1 - p) / n);
  const SampledTotal mc = sthe_sampled(s, RealMatrix::Identity(2, 2), ParamRegion::from_box(A), t, Estimator::monte_carlo, n, 7);
  CHECK(std::abs(mc.measure - exact) <= 3 * sigma);
  CHECK(mc.draws == n);
  CHECK(mc.multiple == 0);
  const SampledTotal grid = sthe_sampled(s, RealMatrix::Identity(2, 2), ParamRegion::from_box(A), t, Estimator::grid, n, 0);
  CHECK(std::abs(grid.measure - exact) <= 3 * sigma);
}

TEST_CASE("ball regions for sampling estimators") {
  RealVector c(1);
  c << 0.5;
  const ParamRegion ball = ParamRegion::ball(c, 0.25);
  CHECK(ball.volume() == doctest::Approx(0.5));
  CHECK(ball.contains(RealVector::Constant(1, 0.7)));
  CHECK_FALSE(ball.contains(RealVector::Constant(1, 0.8)));
  const StableSection s = eps_section(2, 1.0, 0.5);
  const double exact = sthe_exact_stable(s, RealMatrix::Identity(2, 2), Box::cube(1, 0.25, 0.75), 3.0).measure;
  const SampledTotal g = sthe_sampled(s, RealMatrix::Identity(2, 2), ball, 3.0, Estimator::grid, 400000, 0);
  CHECK(g.measure == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("spherical window total against the grid estimator") {
  for (const auto& [d, t] : std::vector<std::pair<int, double>>{{2, 3.0}, {2, 5.0}, {3, 1.5}}) {
    const SphericalSection s{2.5, Chart{d, 1.0}};  // above h0 for d = 3
    const Box A = Box::cube(d - 1, 0.1, 0.7);
    const WindowTotal w = sthe_window_spherical(s, RealMatrix::Identity(d, d), A, t);
    const std::uint64_t n = d == 2 ? 400000 : 600;
    const SampledTotal g = sthe_sampled(s, RealMatrix::Identity(d, d), ParamRegion::from_box(A), t, Estimator::grid, n, 0);
    const double draws = static_cast<double>(g.draws);
    CHECK(std::abs(w.measure - g.measure) <= 5 * A.volume() / std::sqrt(draws) + 1e-12);
  }
}

TEST_CASE("Grenier stable window total against the grid estimator") {
  GrenierBoxStable g;
  g.box = GrenierBox::with_heights(RealVector::Constant(1, 1.0), RealVector::Constant(1, 3.0));
  g.T = 1.5;
  g.B = Box::cube(1, -0.3, 0.3);
  const Box A = Box::cube(1, 0.2, 0.6);
  for (double t : {2.0, 3.5}) {
    const WindowTotal w = sthe_window_grenier_stable(g, RealMatrix::Identity(2, 2), A, t);
    const SampledTotal s = sthe_sampled(g, RealMatrix::Identity(2, 2), ParamRegion::from_box(A), t, Estimator::grid, 200000, 0);
    CHECK(w.measure == doctest::Approx(s.measure).epsilon(0.01).scale(1e-6));
  }
}

TEST_CASE("T-uniformity over constant and growing levels") {
  const double t = 10.0, limit = 0.2 / (2 * kZeta2);
  for (double T : {1.0, 2.0, std::exp(2 * t * 0.2)}) {
    ExperimentConfig c = base_config(2);
    c.target = eps_section(2, T, 0.2);
    c.T_rule.T0 = T;
    c.t_schedule = {t};
    CHECK(r_level_of(c) == T);
    const auto r = sthe_run(c);
    CHECK(std::abs(r[0].estimate / limit - 1) < 0.02);
  }
  LevelRule grow{true, 1.0, 0.2};
  CHECK(grow.level(2, 10.0) == doctest::Approx(std::exp(4.0)));
  CHECK(grow.level(2, 0.0) == 1.0);
  CHECK(LevelRule{false, 3.0, 0.0}.level(2, 7.0) == 3.0);
}

TEST_CASE("translated lattice has the same limit") {
  ExperimentConfig c = base_config(2);
  c.L = mat2(std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0));
  c.t_schedule = {9.0};
  const auto r = sthe_run(c);
  c.L = RealMatrix::Identity(2, 2);
  const auto ref = sthe_run(c);
  CHECK(std::abs(r[0].estimate / ref[0].estimate - 1) < 0.02);
}

TEST_CASE("config validation") {
  ExperimentConfig c = base_config(2);
  c.t_schedule = {1.0};
  CHECK_NOTHROW(c.validate());
  c.A = ParamRegion::from_box(Box::cube(1, 0, 1.5));
  CHECK_THROWS_AS(c.validate(), Error);
  c.generic = true;
  CHECK_NOTHROW(c.validate());
  c = base_config(2);
  c.t_schedule = {1.0};
  c.target = SphericalSection{2.0, Chart{2, 1.0}};
  CHECK_THROWS_AS(c.validate(), Error);
  c.estimator = Estimator::window_sum;
  CHECK_NOTHROW(c.validate());
  c.estimator = Estimator::monte_carlo;
  CHECK_THROWS_AS(c.validate(), Error);
  c.samples = 10;
  CHECK_NOTHROW(c.validate());
  c = base_config(2);
  c.L = mat2(2, 0, 0, 1);
  CHECK_THROWS_AS(c.validate(), Error);

  CHECK(parse_estimator("window-sum") == Estimator::window_sum);
  CHECK(std::string(estimator_name(Estimator::monte_carlo)) == "monte-carlo");
  CHECK_THROWS_AS(parse_estimator("magic"), Error);
  CHECK(default_estimator(eps_section(2, 1, 0.2)) == Estimator::exact_window);
  CHECK(default_estimator(eps_section(3, 1, 0.2)) == Estimator::window_sum);
  CHECK(default_schedule(2) == std::vector<double>{5, 6, 7, 8, 9, 10, 11});
  CHECK(default_schedule(3) == std::vector<double>{2.5, 3, 3.5, 4, 4.5, 5});
}

TEST_CASE("strict mode reports window overlaps") {
  const StableSection s = eps_section(3, 1.0, 0.4);
  const WindowTotal w = sthe_exact_stable(s, RealMatrix::Identity(3, 3), Box::unit(2), 2.5);
  if (w.overlaps > 0) {
    CHECK_THROWS_AS(sthe_exact_stable(s, RealMatrix::Identity(3, 3), Box::unit(2), 2.5, Exec::parallel, true), Error);
  }
  CHECK_NOTHROW(sthe_exact_stable(eps_section(2, 1.0, 0.4), RealMatrix::Identity(2, 2), Box::unit(1), 6, Exec::parallel, true));
}

TEST_CASE("Marklof averages") {
  const MarklofResult all = marklof_average(2, RealMatrix::Identity(2, 2), 500, {}, Box::unit(1));
  CHECK(all.empirical == 1.0);
  CHECK(all.predicted == 1.0);

  MarklofObservable slab;
  slab.s_lo = std::log(2.0) / 2;
  const MarklofResult half = marklof_average(2, RealMatrix::Identity(2, 2), 1e5, slab, Box::unit(1));
  CHECK(half.predicted == doctest::Approx(0.5));
  CHECK(std::abs(half.empirical / 0.5 - 1) < 0.005);
  // two totient counts
  const double ratio = static_cast<double>(count_farey(2, 1e5 / std::sqrt(2.0)).exact) /
                       static_cast<double>(count_farey(2, 1e5).exact);
  CHECK(half.empirical == doctest::Approx(ratio).epsilon(1e-15));

  MarklofObservable sub;
  sub.subset = Box::cube(1, 0, 0.5);
  const MarklofResult left = marklof_average(2, RealMatrix::Identity(2, 2), 2000, sub, Box::unit(1));
  CHECK(left.predicted == doctest::Approx(0.5));
  CHECK(left.empirical == doctest::Approx(0.5).epsilon(0.01));

  MarklofObservable bad;
  bad.s_lo = 1.0;
  bad.s_hi = 0.5;
  CHECK_THROWS_AS(marklof_average(2, RealMatrix::Identity(2, 2), 100, bad, Box::unit(1)), Error);
  bad.s_lo = -1.0;
  bad.s_hi = 1.0;
  CHECK_THROWS_AS(marklof_average(2, RealMatrix::Identity(2, 2), 100, bad, Box::unit(1)), Error);
}

TEST_CASE("convergence report") {
  std::vector<ExperimentResult> rs;
  for (int i = 0; i < 4; ++i) {
    ExperimentResult r;
    r.t = 6 + i;
    r.estimate = 1.0;
    r.rel_error = 0.1 * std::exp(-0.5 * i);
    rs.push_back(r);
  }
  const ConvergenceSummary s = convergence_report(rs, 0.05);
  CHECK(s.slope == doctest::Approx(-0.5));
  CHECK(s.pass);
  CHECK_FALSE(s.degenerate);
  CHECK_FALSE(convergence_report(rs, 0.01).pass);

  for (auto& r : rs) r.estimate = 0.0;
  const ConvergenceSummary z = convergence_report(rs, 1.0);
  CHECK(z.degenerate);
  CHECK_FALSE(z.pass);

  ExperimentConfig c = base_config(2);
  c.target = eps_section(2, 1.0, 0.2, 0.4);
  c.A = ParamRegion::from_box(Box::cube(1, 0, 0.5, true));
  c.t_schedule = {0.0, 0.0};
  const auto far = sthe_run(c);
  CHECK(convergence_report(far, 0.01).degenerate);
}
