#include "horolab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <omp.h>
#include <random>

namespace horolab {

ParamRegion ParamRegion::from_box(const Box& b) {
  ParamRegion r;
  r.box = b;
  return r;
}

ParamRegion ParamRegion::ball(const RealVector& center, double radius) {
  if (!(radius > 0)) throw Error(Errc::invalid_argument, "ball radius must be positive");
  ParamRegion r;
  r.box.lo = center.array() - radius;
  r.box.hi = center.array() + radius;
  r.ball_radius = radius;
  return r;
}

double ParamRegion::volume() const {
  if (!ball_radius) return box.volume();
  const double n = dim();
  return std::pow(std::numbers::pi, n / 2) / std::tgamma(n / 2 + 1) * std::pow(*ball_radius, n);
}

bool ParamRegion::contains(const RealVector& x) const {
  if (!ball_radius) return box.contains(x);
  const RealVector center = 0.5 * (box.lo + box.hi);
  return (x - center).norm() < *ball_radius;
}

void ParamRegion::validate() const {
  box.validate();
  if (dim() < 1) throw Error(Errc::invalid_dimension, "A must have dimension >= 1");
}

const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::exact_window: return "exact-window";
    case Estimator::window_sum: return "window-sum";
    case Estimator::grid: return "grid";
    case Estimator::monte_carlo: return "monte-carlo";
  }
  return "?";
}

Estimator parse_estimator(const std::string& name) {
  for (Estimator e : {Estimator::exact_window, Estimator::window_sum, Estimator::grid, Estimator::monte_carlo})
    if (name == estimator_name(e)) return e;
  throw Error(Errc::invalid_argument, "unknown estimator '" + name + "'");
}

double LevelRule::level(int d, double t) const {
  if (!growing) return T0;
  return std::max(T0, std::exp(d * t * eta));
}

Estimator default_estimator(const TargetSpec& target) {
  switch (target.index()) {
    case 0: return target_dim(target) == 2 ? Estimator::exact_window : Estimator::window_sum;
    case 3: return Estimator::grid;
    default: return Estimator::window_sum;
  }
}

std::vector<double> default_schedule(int d) {
  std::vector<double> ts;
  if (d == 2)
    for (int t = 5; t <= 11; ++t) ts.push_back(t);
  else
    for (double t = 2.5; t <= 5.0 + 1e-12; t += 0.5) ts.push_back(t);
  return ts;
}

void ExperimentConfig::validate() const {
  if (d < 2) throw Error(Errc::invalid_dimension, "d must be at least 2");
  if (target_dim(target) != d) throw Error(Errc::invalid_dimension, "target dimension differs from d");
  require_square(L, "L");
  if (L.rows() != d) throw Error(Errc::invalid_dimension, "L must be d x d");
  if (!is_unimodular(L, horolab::tolerance())) throw Error(Errc::invalid_argument, "L must be unimodular");
  A.validate();
  if (A.dim() != d - 1) throw Error(Errc::invalid_dimension, "A must have dimension d-1");
  if (t_schedule.empty()) throw Error(Errc::empty_range, "t schedule is empty");
  for (double t : t_schedule)
    if (!(t >= 0)) throw Error(Errc::invalid_argument, "schedule times must be non-negative");
  if (T_rule.growing && !(T_rule.eta < 1.0 && T_rule.eta >= 0.0)) throw Error(Errc::invalid_argument, "eta' must lie in [0, 1)");
  if (!(T_rule.T0 >= 1.0)) throw Error(Errc::invalid_argument, "T0 must be at least 1");
  const bool windowed = estimator == Estimator::exact_window || estimator == Estimator::window_sum;
  if (windowed && A.ball_radius) throw Error(Errc::invalid_argument, "window estimators need a box A");
  if (estimator == Estimator::exact_window && target.index() != 0)
    throw Error(Errc::invalid_argument, "exact-window applies to stable targets only");
  if (estimator == Estimator::window_sum && target.index() == 3)
    throw Error(Errc::invalid_argument, "window-sum does not support Grenier spherical targets; use grid or monte-carlo");
  if (!windowed && samples == 0) throw Error(Errc::invalid_argument, "sampling estimators need samples > 0");
  if (!generic && !fits_in_cell(duplicate_region(L), A.box))
    throw Error(Errc::invalid_argument, "A does not fit in one cell of the duplicate-free region");
}

SampledTotal sthe_sampled(const TargetSpec& target, const RealMatrix& L, const ParamRegion& A, double t,
                          Estimator estimator, std::uint64_t samples, std::uint64_t seed, Exec exec) {
  validate_target(target);
  A.validate();
  const int n = A.dim();
  if (n != target_dim(target) - 1) throw Error(Errc::invalid_dimension, "A must have dimension d-1");
  if (samples == 0) throw Error(Errc::invalid_argument, "samples must be positive");

  std::vector<double> xs;
  std::uint64_t draws = 0;
  if (estimator == Estimator::grid) {
    draws = 1;
    for (int i = 0; i < n; ++i) {
      if (draws > 50'000'000ULL / samples) throw Error(Errc::resource_exhausted, "grid exceeds 5e7 points");
      draws *= samples;
    }
    xs.resize(draws * static_cast<std::uint64_t>(n));
    for (std::uint64_t k = 0; k < draws; ++k) {
      std::uint64_t rem = k;
      for (int i = 0; i < n; ++i) {
        const std::uint64_t j = rem % samples;
        rem /= samples;
        xs[k * n + i] = A.box.lo[i] + (static_cast<double>(j) + 0.5) / static_cast<double>(samples) * (A.box.hi[i] - A.box.lo[i]);
      }
    }
  } else if (estimator == Estimator::monte_carlo) {
    draws = samples;
    xs.resize(draws * static_cast<std::uint64_t>(n));
    std::mt19937_64 rng(seed);
    for (std::uint64_t k = 0; k < draws; ++k)
      for (int i = 0; i < n; ++i) {
        // 53-bit uniform in [0,1), independent of the library's distribution implementation
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        xs[k * n + i] = A.box.lo[i] + u * (A.box.hi[i] - A.box.lo[i]);
      }
  } else {
    throw Error(Errc::invalid_argument, "sthe_sampled needs grid or monte-carlo");
  }

  const FareyIndex index(L, target, A.box, t, exec);
  std::vector<std::uint8_t> flags(draws, 0);
  auto probe = [&](std::int64_t k) {
    RealVector x = Eigen::Map<const RealVector>(xs.data() + k * n, n);
    if (!A.contains(x)) return;
    if (auto w = index.query(x)) flags[static_cast<std::size_t>(k)] = w->multiplicity > 1 ? 2 : 1;
  };
  const auto total = static_cast<std::int64_t>(draws);
  if (parallel_allowed(exec)) {
#pragma omp parallel for schedule(dynamic, 1024)
    for (std::int64_t k = 0; k < total; ++k) probe(k);
  } else {
    for (std::int64_t k = 0; k < total; ++k) probe(k);
  }
  SampledTotal out;
  out.draws = draws;
  for (auto f : flags) {
    out.hits += f > 0;
    out.multiple += f > 1;
  }
  out.measure = A.box.volume() * static_cast<double>(out.hits) / static_cast<double>(draws);
  return out;
}

namespace {

ExperimentResult run_one(const ExperimentConfig& cfg, std::size_t index, Exec exec) {
  const auto start = std::chrono::steady_clock::now();
  const int d = cfg.d;
  const double t = cfg.t_schedule[index];
  ExperimentResult r;
  r.t = t;
  r.T = cfg.T_rule.level(d, t);
  r.Q = std::exp((d - 1) * t);
  const TargetSpec target = with_level(cfg.target, r.T);
  validate_target(target);

  double measure = 0.0;
  switch (cfg.estimator) {
    case Estimator::exact_window:
    case Estimator::window_sum: {
      WindowTotal w;
      if (const auto* st = std::get_if<StableSection>(&target))
        w = sthe_exact_stable(*st, cfg.L, cfg.A.box, t, exec, cfg.strict_disjointness);
      else if (const auto* sp = std::get_if<SphericalSection>(&target))
        w = sthe_window_spherical(*sp, cfg.L, cfg.A.box, t, exec);
      else if (const auto* gs = std::get_if<GrenierBoxStable>(&target))
        w = sthe_window_grenier_stable(*gs, cfg.L, cfg.A.box, t, exec);
      else
        throw Error(Errc::invalid_argument, "window estimators do not support this target");
      measure = w.measure;
      r.count = w.count;
      r.overlaps = w.overlaps;
      break;
    }
    case Estimator::grid:
    case Estimator::monte_carlo: {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(index)};
      std::uint32_t words[2];
      seq.generate(words, words + 2);
      const std::uint64_t job_seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
      const SampledTotal s = sthe_sampled(target, cfg.L, cfg.A, t, cfg.estimator, cfg.samples, job_seed, exec);
      measure = s.measure;
      r.count = s.hits;
      r.overlaps = s.multiple;
      break;
    }
  }
  r.estimate = std::pow(r.T, d - 1) * measure;
  if (auto dens = limit_density(target)) {
    r.predicted = *dens * cfg.A.volume();
    r.abs_error = std::abs(r.estimate - r.predicted);
    if (r.predicted != 0.0) r.rel_error = r.abs_error / std::abs(r.predicted);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

std::vector<ExperimentResult> sthe_run(const ExperimentConfig& config, Exec exec) {
  config.validate();
  const auto n = static_cast<std::int64_t>(config.t_schedule.size());
  std::vector<ExperimentResult> out(static_cast<std::size_t>(n));
  if (parallel_allowed(exec) && n > 1) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = run_one(config, static_cast<std::size_t>(i), exec);
      } catch (...) {
#pragma omp critical(horolab_run_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = run_one(config, static_cast<std::size_t>(i), exec);
  }
  return out;
}

MarklofResult marklof_average(int d, const RealMatrix& L, double Q, const MarklofObservable& observable,
                              const Box& reference, Exec exec) {
  if (d < 2) throw Error(Errc::invalid_dimension, "d must be at least 2");
  require_square(L, "L");
  if (L.rows() != d) throw Error(Errc::invalid_dimension, "L must be d x d");
  if (reference.dim() != d - 1) throw Error(Errc::invalid_dimension, "reference box must have dimension d-1");
  if (!(Q >= 1.0)) throw Error(Errc::empty_range, "Q must be at least 1");
  if (!(observable.s_lo >= 0.0) || !(observable.s_hi > observable.s_lo))
    throw Error(Errc::unsupported_observable, "depth slab must satisfy 0 <= s_lo < s_hi");

  Box sub = reference;
  if (observable.subset) {
    if (observable.subset->dim() != d - 1) throw Error(Errc::unsupported_observable, "subset must have dimension d-1");
    sub.lo = reference.lo.cwiseMax(observable.subset->lo);
    sub.hi = reference.hi.cwiseMin(observable.subset->hi);
  }
  MarklofResult out;
  out.total = count_primitive(translated_farey_region(L, Q, reference), exec);
  if (out.total == 0) throw Error(Errc::empty_range, "no Farey points in the reference box");

  bool empty = false;
  for (int i = 0; i + 1 < d; ++i) empty = empty || !(sub.lo[i] < sub.hi[i]);
  if (!empty) {
    // s = log(Q / alpha_d) / (d-1), so s >= s0  <=>  alpha_d <= Q e^{-(d-1) s0}
    auto upto = [&](double s) -> std::uint64_t {
      if (std::isinf(s)) return 0;
      const double qmax = Q * std::exp(-(d - 1) * s);
      return count_primitive(translated_farey_region(L, qmax, sub), exec);
    };
    out.hits = upto(observable.s_lo) - upto(observable.s_hi);
  }
  out.empirical = static_cast<double>(out.hits) / static_cast<double>(out.total);
  const double mass = std::exp(-d * (d - 1) * observable.s_lo) -
                      (std::isinf(observable.s_hi) ? 0.0 : std::exp(-d * (d - 1) * observable.s_hi));
  out.predicted = empty ? 0.0 : sub.volume() / reference.volume() * mass;
  return out;
}

ConvergenceSummary convergence_report(const std::vector<ExperimentResult>& results, double tolerance) {
  if (results.empty()) throw Error(Errc::empty_range, "no results to summarize");
  ConvergenceSummary s;
  s.tolerance = tolerance;
  s.degenerate = true;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (const auto& r : results) {
    s.t.push_back(r.t);
    s.rel_error.push_back(r.rel_error);
    s.degenerate = s.degenerate && r.estimate == 0.0;
    if (std::isfinite(r.rel_error) && r.rel_error > 0) {
      const double y = std::log(r.rel_error);
      sx += r.t;
      sy += y;
      sxx += r.t * r.t;
      sxy += r.t * y;
      ++k;
    }
  }
  const double denom = k * sxx - sx * sx;
  if (k >= 2 && denom > 0) s.slope = (k * sxy - sx * sy) / denom;
  s.final_rel_error = results.back().rel_error;
  s.pass = !s.degenerate && std::isfinite(s.final_rel_error) && s.final_rel_error <= tolerance;
  return s;
}

}  // namespace horolab
