#pragma once

#include "horolab/farey.hpp"
#include "horolab/targets.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace horolab {

// Parameter region A: a box, or a Euclidean ball (sampling estimators only).
struct ParamRegion {
  Box box;  // the ball's bounding box when ball_radius is set
  std::optional<double> ball_radius;

  static ParamRegion from_box(const Box& b);
  static ParamRegion ball(const RealVector& center, double radius);
  int dim() const { return box.dim(); }
  double volume() const;
  bool contains(const RealVector& x) const;
  void validate() const;
};

enum class Estimator { exact_window, window_sum, grid, monte_carlo };
const char* estimator_name(Estimator e);
Estimator parse_estimator(const std::string& name);

struct LevelRule {
  bool growing = false;
  double T0 = 1.0;
  double eta = 0.0;  // growing: T = max(T0, e^{d t eta})
  double level(int d, double t) const;
};

struct ExperimentConfig {
  int d = 2;
  RealMatrix L;
  std::optional<RationalMatrix> L_exact;
  bool generic = false;
  ParamRegion A;
  TargetSpec target;
  std::vector<double> t_schedule;
  LevelRule T_rule;
  Estimator estimator = Estimator::exact_window;
  std::uint64_t samples = 0;  // grid: points per axis; monte-carlo: total draws
  std::uint64_t seed = 0;
  double tolerance = 0.01;
  bool strict_disjointness = false;

  void validate() const;
};

Estimator default_estimator(const TargetSpec& target);
std::vector<double> default_schedule(int d);

struct ExperimentResult {
  double t = 0.0, T = 1.0, Q = 1.0;
  double estimate = 0.0;
  double predicted = std::numeric_limits<double>::quiet_NaN();
  double abs_error = std::numeric_limits<double>::quiet_NaN();
  double rel_error = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t count = 0;
  std::uint64_t overlaps = 0;
  double seconds = 0.0;
};

// Lebesgue measure of the union of windows inside A, plus diagnostics.
struct WindowTotal {
  double measure = 0.0;     // union
  double window_sum = 0.0;  // plain sum of clipped window volumes
  std::uint64_t count = 0;  // windows meeting A
  std::uint64_t overlaps = 0;
  bool certified = false;   // disjointness proven a priori
};

WindowTotal sthe_exact_stable(const StableSection& target, const RealMatrix& L, const Box& A, double t,
                              Exec exec = Exec::parallel, bool strict = false);
WindowTotal sthe_window_spherical(const SphericalSection& target, const RealMatrix& L, const Box& A, double t,
                                  Exec exec = Exec::parallel);
WindowTotal sthe_window_grenier_stable(const GrenierBoxStable& target, const RealMatrix& L, const Box& A, double t,
                                       Exec exec = Exec::parallel);

// Fraction-of-hits estimate of the integral of the target indicator over A.
struct SampledTotal {
  double measure = 0.0;
  std::uint64_t hits = 0, draws = 0;
  std::uint64_t multiple = 0;  // draws with more than one witness
};
SampledTotal sthe_sampled(const TargetSpec& target, const RealMatrix& L, const ParamRegion& A, double t,
                          Estimator estimator, std::uint64_t samples, std::uint64_t seed, Exec exec = Exec::parallel);

// Per-t jobs; output order follows the schedule.
std::vector<ExperimentResult> sthe_run(const ExperimentConfig& config, Exec exec = Exec::parallel);

// Product of a subset indicator and a depth-slab indicator s in [s_lo, s_hi).
struct MarklofObservable {
  std::optional<Box> subset;
  double s_lo = 0.0;
  double s_hi = std::numeric_limits<double>::infinity();
};

struct MarklofResult {
  double empirical = 0.0, predicted = 0.0;
  std::uint64_t hits = 0, total = 0;
};

MarklofResult marklof_average(int d, const RealMatrix& L, double Q, const MarklofObservable& observable,
                              const Box& reference, Exec exec = Exec::parallel);

struct ConvergenceSummary {
  std::vector<double> t, rel_error;
  double slope = std::numeric_limits<double>::quiet_NaN();  // d log(rel_error) / dt
  double final_rel_error = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  bool pass = false;
  bool degenerate = false;
};

ConvergenceSummary convergence_report(const std::vector<ExperimentResult>& results, double tolerance);

}  // namespace horolab
