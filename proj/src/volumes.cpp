#include "horolab/targets.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace horolab {

double chart_cap_mass(const Chart& chart) {
  chart.validate();
  const int n = chart.dim - 2;
  const double r = chart.radius;
  // I_k = int_0^r sin^k, by the usual reduction formula
  double i_prev = r, i_cur = 1.0 - std::cos(r);
  double integral = n == 0 ? i_prev : i_cur;
  for (int k = 2; k <= n; ++k) {
    const double next = -std::cos(r) * std::pow(std::sin(r), k - 1) / k + (k - 1.0) / k * i_prev;
    i_prev = i_cur;
    i_cur = next;
    integral = next;
  }
  const double sphere = 2.0 * std::pow(std::numbers::pi, (n + 1) / 2.0) / std::tgamma((n + 1) / 2.0);
  return sphere * integral;
}

namespace {

double beta_width_d2(const GrenierBox& box) {
  const double lo = std::max(box.beta_lo(0, 1), -0.5), hi = std::min(box.beta_hi(0, 1), 0.5);
  return std::max(0.0, hi - lo);
}

}  // namespace

std::optional<double> limit_density(const TargetSpec& target) {
  const int d = target_dim(target);
  const double dz = d * zeta(d);
  return std::visit(
      [&](const auto& t) -> std::optional<double> {
        using K = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<K, StableSection>) {
          return t.B.volume() / dz;
        } else if constexpr (std::is_same_v<K, SphericalSection>) {
          return chart_cap_mass(t.chart) / dz;
        } else if constexpr (std::is_same_v<K, GrenierBoxStable>) {
          if (d != 2) return std::nullopt;
          const double a = t.box.alphas[0], g = t.box.gammas[0];
          return t.box.t0() * beta_width_d2(t.box) * t.B.volume() * (1.0 / a - 1.0 / g) / dz;
        } else {
          if (d != 2) return std::nullopt;
          const double a = t.box.alphas[0], g = t.box.gammas[0];
          return beta_width_d2(t.box) * t.box.t_minus() * (1.0 / a - 1.0 / g) * chart_cap_mass(t.chart) / dz;
        }
      },
      target);
}

double MeasureRecord::ratio_to(double other_level) const { return std::pow(level / other_level, exponent); }

MeasureRecord measure_formula(const TargetSpec& target) {
  validate_target(target);
  const int d = target_dim(target);
  MeasureRecord r;
  r.level = target_level(target);
  r.exponent = d - 1;
  if (auto dens = limit_density(target)) {
    r.absolute = *dens / std::pow(r.level, d - 1);
  } else {
    r.note = "absolute Grenier-box measure unavailable for d >= 3; ratio law only";
  }
  return r;
}

double flowed_box_measure_ratio(int d, double T) {
  if (d < 2) throw Error(Errc::invalid_dimension, "d must be at least 2");
  if (!(T > 0)) throw Error(Errc::invalid_argument, "T must be positive");
  return std::pow(T, -d);
}

DisjointnessReport disjointness_property_sample(int d, std::uint64_t n_samples, std::uint64_t seed) {
  if (d != 2 && d != 3) throw Error(Errc::unsupported_dimension, "property sampler supports d in {2,3}");
  DisjointnessReport rep;
  rep.d = d;
  rep.bound = std::pow(0.75, (d - 1) / 2.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> shift(-3.0, 3.0);

  std::vector<RealVector> rows;
  const int n = d - 1;
  const int reach = 3;
  std::vector<int> cur(static_cast<std::size_t>(n), -reach);
  while (true) {
    RealVector r(n);
    bool zero = true;
    for (int i = 0; i < n; ++i) {
      r[i] = cur[static_cast<std::size_t>(i)];
      zero = zero && cur[static_cast<std::size_t>(i)] == 0;
    }
    if (!zero) rows.push_back(r);
    int i = 0;
    for (; i < n; ++i) {
      if (++cur[static_cast<std::size_t>(i)] <= reach) break;
      cur[static_cast<std::size_t>(i)] = -reach;
    }
    if (i == n) break;
  }

  while (rep.samples < n_samples) {
    RealMatrix m_h = RealMatrix::Identity(d, d);
    for (int i = 0; i < n; ++i) m_h(i, d - 1) = shift(rng);
    if (d == 3) {
      RealMatrix b(2, 2);
      double det = 0.0;
      do {
        for (int i = 0; i < 4; ++i) b.data()[i] = normal(rng);
        det = b.determinant();
      } while (std::abs(det) < 1e-3);
      if (det < 0) b.row(0).swap(b.row(1));
      m_h.topLeftCorner(2, 2) = b / std::sqrt(std::abs(det));
    }
    const GrenierReduction red = grenier_reduce(m_h, 0.0, ReductionGroup::gl);
    if (!red.coords.in_domain) {
      ++rep.rejected;
      continue;
    }
    ++rep.samples;
    const RealMatrix& mh = red.reduced;
    const RealVector b = mh.block(0, d - 1, n, 1);
    for (const auto& row : rows) {
      RealVector full(d);
      full.head(n) = row;
      full[d - 1] = -row.dot(b);
      const double norm = (full.transpose() * mh).norm();
      rep.min_norm = std::min(rep.min_norm, norm);
      if (norm < rep.bound - 1e-9) ++rep.violations;
    }
  }
  return rep;
}

}  // namespace horolab
