#pragma once

#include "horolab/algebra.hpp"
#include "horolab/coords.hpp"
#include "horolab/farey.hpp"

#include <optional>
#include <string>
#include <variant>

namespace horolab {

// Subset of K' = SO(d-1); for d = 3 an angle interval [lo, hi).
struct KSubset {
  bool all = true;
  double angle_lo = 0.0, angle_hi = 0.0;
  bool contains(const RealMatrix& kprime) const;
};

struct GrenierBox {
  RealVector alphas, gammas;    // alpha_k <= y_k <= gamma_k
  RealMatrix beta_lo, beta_hi;  // bounds on the strictly upper x_ij
  KSubset ktilde;

  static GrenierBox with_heights(const RealVector& alphas, const RealVector& gammas);
  int dim() const { return static_cast<int>(alphas.size()) + 1; }
  double t_minus() const;
  double t_plus() const;
  double t0() const;  // T_-^{d/(2(d-1))}
  bool contains(const GrenierCoords& c) const;
  void validate() const;
};

struct StableSection {
  double T = 1.0;
  Box B;
  static StableSection epsilon_box(double T, double eps, const RealVector& ytilde);
};

struct GrenierBoxStable {
  GrenierBox box;
  double T = 1.0;
  Box B;
};

struct SphericalSection {
  double T = 1.0;
  Chart chart;
};

struct GrenierBoxSpherical {
  GrenierBox box;
  double T = 1.0;
  Chart chart;
};

using TargetSpec = std::variant<StableSection, GrenierBoxStable, SphericalSection, GrenierBoxSpherical>;

int target_dim(const TargetSpec& target);
double target_level(const TargetSpec& target);
TargetSpec with_level(TargetSpec target, double T);
std::string target_kind(const TargetSpec& target);
void validate_target(const TargetSpec& target);

// Largest admissible alpha_d: e^{(d-1)t} T^{-(d-1)/d}.
double q_hat(int d, double t, double T);

struct MembershipWitness {
  TranslatedFareyPoint farey;
  double s = 0.0;
  RealVector xt;
  std::optional<RealVector> z;
  std::optional<GrenierCoords> grenier;
  int multiplicity = 1;
};

// Extent of the offset region in xt-coordinates, as a box.
Box offset_extent(const TargetSpec& target);

// Tests one translated Farey point against the target at (x, t).
std::optional<MembershipWitness> test_farey_point(const TargetSpec& target, const RealMatrix& L,
                                                  const TranslatedFareyPoint& point, const RealVector& x, double t);

// Sorted point array with a bucket grid, shared read-only across workers.
class FareyIndex {
 public:
  FareyIndex(const RealMatrix& L, const TargetSpec& target, const Box& region, double t, Exec exec = Exec::parallel);
  std::optional<MembershipWitness> query(const RealVector& x) const;
  std::size_t size() const { return points_.size(); }
  const std::vector<TranslatedFareyPoint>& points() const { return points_; }

 private:
  RealMatrix L_;
  TargetSpec target_;
  double t_;
  Box extent_;  // x-window offsets: x in point - e^{-dt} * extent
  RealVector origin_;
  double cell_ = 1.0;
  std::vector<std::int64_t> dims_;
  std::vector<std::uint32_t> cell_start_;
  std::vector<TranslatedFareyPoint> points_;
};

std::optional<MembershipWitness> member_dual(const TargetSpec& target, const RealMatrix& L, const RealVector& x, double t);
std::optional<MembershipWitness> member_direct(const StableSection& target, const RealMatrix& L, const RealVector& x,
                                               double t, std::uint64_t budget = 100'000'000ULL);

struct MeasureRecord {
  std::optional<double> absolute;  // Haar measure at level T
  double level = 1.0;
  int exponent = 1;  // mu(T') = mu(T) (T/T')^exponent
  std::string note;
  double ratio_to(double other_level) const;
};

MeasureRecord measure_formula(const TargetSpec& target);
// mu(C^T N+(B)) / mu(C N+(B)) = T^{-d}
double flowed_box_measure_ratio(int d, double T);
// Integral of c^d over z'(D), i.e. the sphere-cap mass of the chart.
double chart_cap_mass(const Chart& chart);
// lim T^{d-1} * integral over A, per unit volume of A; nullopt when unavailable.
std::optional<double> limit_density(const TargetSpec& target);

double disjointness_budget(int d, double T);

struct DisjointnessReport {
  int d = 2;
  std::uint64_t samples = 0, rejected = 0, violations = 0;
  double min_norm = INFINITY;
  double bound = 1.0;
};

DisjointnessReport disjointness_property_sample(int d, std::uint64_t n_samples, std::uint64_t seed = 0);

}  // namespace horolab
