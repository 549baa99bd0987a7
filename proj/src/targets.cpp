#include "horolab/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace horolab {

bool KSubset::contains(const RealMatrix& kprime) const {
  if (all) return true;
  if (kprime.rows() != 2) throw Error(Errc::unsupported_dimension, "angle subsets of K' exist only for d = 3");
  const double angle = std::atan2(kprime(1, 0), kprime(0, 0));
  return angle >= angle_lo && angle < angle_hi;
}

GrenierBox GrenierBox::with_heights(const RealVector& alphas, const RealVector& gammas) {
  GrenierBox b;
  b.alphas = alphas;
  b.gammas = gammas;
  const int d = static_cast<int>(alphas.size()) + 1;
  b.beta_lo = RealMatrix::Constant(d, d, -0.5);
  b.beta_hi = RealMatrix::Constant(d, d, 0.5);
  return b;
}

double GrenierBox::t_minus() const {
  const int d = dim();
  double log_sum = 0.0;
  for (int k = 1; k < d; ++k) log_sum += 2.0 * k * std::log(alphas[k - 1]);
  return std::exp(log_sum / d);
}

double GrenierBox::t_plus() const {
  const int d = dim();
  double log_sum = 0.0;
  for (int k = 1; k < d; ++k) log_sum += 2.0 * k * std::log(gammas[k - 1]);
  return std::exp(log_sum / d);
}

double GrenierBox::t0() const {
  const int d = dim();
  return std::pow(t_minus(), d / (2.0 * (d - 1)));
}

bool GrenierBox::contains(const GrenierCoords& c) const {
  const int d = dim();
  for (int k = 0; k + 1 < d; ++k)
    if (c.ys[k] < alphas[k] || c.ys[k] > gammas[k]) return false;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (c.x(i, j) < beta_lo(i, j) || c.x(i, j) > beta_hi(i, j)) return false;
  return ktilde.contains(c.kprime);
}

void GrenierBox::validate() const {
  const int d = dim();
  if (d < 2 || gammas.size() != alphas.size()) throw Error(Errc::invalid_argument, "Grenier box height bounds have mismatched length");
  if (beta_lo.rows() != d || beta_lo.cols() != d || beta_hi.rows() != d || beta_hi.cols() != d)
    throw Error(Errc::invalid_argument, "Grenier box x bounds must be d x d");
  for (int k = 0; k + 1 < d; ++k)
    if (!(alphas[k] > 0) || !(gammas[k] >= alphas[k])) throw Error(Errc::invalid_argument, "Grenier box needs 0 < alpha_k <= gamma_k");
  if (!ktilde.all && d != 3) throw Error(Errc::unsupported_dimension, "K' subsets other than all of K' need d = 3");
}

StableSection StableSection::epsilon_box(double T, double eps, const RealVector& ytilde) {
  if (!(eps > 0)) throw Error(Errc::invalid_argument, "epsilon must be positive");
  StableSection s;
  s.T = T;
  s.B.lo = ytilde.array() - eps / 2;
  s.B.hi = ytilde.array() + eps / 2;
  return s;
}

int target_dim(const TargetSpec& target) {
  return std::visit(
      [](const auto& t) -> int {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, StableSection>) return t.B.dim() + 1;
        else if constexpr (std::is_same_v<T, GrenierBoxStable>) return t.B.dim() + 1;
        else return t.chart.dim;
      },
      target);
}

double target_level(const TargetSpec& target) {
  return std::visit([](const auto& t) { return t.T; }, target);
}

TargetSpec with_level(TargetSpec target, double T) {
  std::visit([T](auto& t) { t.T = T; }, target);
  return target;
}

std::string target_kind(const TargetSpec& target) {
  static const char* names[] = {"stable", "grenier-stable", "spherical", "grenier-spherical"};
  return names[target.index()];
}

double disjointness_budget(int d, double T) {
  if (!(T >= 1.0)) throw Error(Errc::invalid_argument, "T must be at least 1");
  return constants(d).cd_lower * T;
}

void validate_target(const TargetSpec& target) {
  const int d = target_dim(target);
  if (d < 2) throw Error(Errc::invalid_dimension, "target dimension must be at least 2");
  const double T = target_level(target);
  if (!(T >= 1.0)) throw Error(Errc::invalid_argument, "target level T must be at least 1");
  auto check_box = [&](const Box& B) {
    B.validate();
    if (B.dim() != d - 1) throw Error(Errc::invalid_dimension, "stable box must have dimension d-1");
  };
  auto check_chart = [&](const Chart& c) {
    c.validate();
    if (!c.hemisphere()) throw Error(Errc::outside_hemisphere, "spherical targets need a chart of radius < pi/2");
  };
  std::visit(
      [&](const auto& t) {
        using K = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<K, StableSection>) {
          check_box(t.B);
          const double budget = disjointness_budget(d, T);
          for (int i = 0; i + 1 < d; ++i)
            if (!(t.B.hi[i] - t.B.lo[i] < budget))
              throw Error(Errc::invalid_argument, "stable box side must be below the disjointness budget C_d T");
        } else if constexpr (std::is_same_v<K, GrenierBoxStable>) {
          check_box(t.B);
          t.box.validate();
          if (t.box.dim() != d) throw Error(Errc::invalid_dimension, "Grenier box dimension mismatch");
          if (!(t.box.t_minus() >= 1.0)) throw Error(Errc::invalid_argument, "Grenier box needs lower height >= 1");
        } else if constexpr (std::is_same_v<K, SphericalSection>) {
          check_chart(t.chart);
          if (!(T > constants(d).h0)) throw Error(Errc::invalid_argument, "spherical targets need T > h0");
        } else {
          check_chart(t.chart);
          t.box.validate();
          if (t.box.dim() != d) throw Error(Errc::invalid_dimension, "Grenier box dimension mismatch");
          if (!(t.box.t_minus() > std::pow(constants(d).h0, 2.0 * (d - 1) / d)))
            throw Error(Errc::invalid_argument, "spherical Grenier box needs T_- > h0^{2(d-1)/d}");
        }
      },
      target);
}

double q_hat(int d, double t, double T) { return std::exp((d - 1) * t) * std::pow(T, -(d - 1.0) / d); }

Box offset_extent(const TargetSpec& target) {
  return std::visit(
      [](const auto& t) -> Box {
        using K = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<K, StableSection> || std::is_same_v<K, GrenierBoxStable>) {
          return t.B;
        } else {
          if (!t.chart.hemisphere()) throw Error(Errc::outside_hemisphere, "chart must be hemispherical");
          const double r = std::tan(t.chart.radius);
          return Box::cube(t.chart.dim - 1, -r, r, true);
        }
      },
      target);
}

namespace {

RealMatrix h_part(const RealMatrix& L, const PrimitiveVec& source) {
  const RealMatrix m = complete_to_sl(source).to_real() * farey_basis(L);
  return hrd_coords(m).m_h;
}

std::optional<GrenierCoords> grenier_hit(const GrenierBox& box, const RealMatrix& g) {
  if (box.dim() > 3) throw Error(Errc::unsupported_dimension, "Grenier targets need d in {2,3}");
  GrenierReduction red = grenier_reduce_element(g, ReductionGroup::sl);
  if (!box.contains(red.coords)) return std::nullopt;
  return red.coords;
}

}  // namespace

std::optional<MembershipWitness> test_farey_point(const TargetSpec& target, const RealMatrix& L,
                                                  const TranslatedFareyPoint& point, const RealVector& x, double t) {
  const int d = target_dim(target);
  const double T = target_level(target);
  const double qh = q_hat(d, t, T);
  if (!(point.alpha_d > 0) || point.alpha_d > qh * (1.0 + 1e-12)) return std::nullopt;

  MembershipWitness w;
  w.farey = point;
  w.xt = std::exp(d * t) * (point.point - x);
  w.s = t - std::log(point.alpha_d) / (d - 1);

  const bool hit = std::visit(
      [&](const auto& tg) -> bool {
        using K = std::decay_t<decltype(tg)>;
        if constexpr (std::is_same_v<K, StableSection>) {
          return tg.B.contains(w.xt);
        } else if constexpr (std::is_same_v<K, SphericalSection>) {
          auto z = chart_point_from_zprime(tg.chart, w.xt);
          if (!z) return false;
          if (point.alpha_d > qh * std::cos(z->norm()) * (1.0 + 1e-12)) return false;
          w.z = *z;
          return true;
        } else if constexpr (std::is_same_v<K, GrenierBoxStable>) {
          if (!tg.B.contains(w.xt)) return false;
          const double shift = std::log(T / tg.box.t0()) / d;
          const RealMatrix g = h_part(L, point.source) * diagonal_flow(-(w.s - shift), d);
          auto c = grenier_hit(tg.box, g);
          if (!c) return false;
          w.grenier = *c;
          return true;
        } else {
          auto z = chart_point_from_zprime(tg.chart, w.xt);
          if (!z) return false;
          const ChartPoint cp = chart_matrix(tg.chart, *z);
          const double shift = std::log(T / tg.box.t0()) / d;
          const RealMatrix g = h_part(L, point.source) * diagonal_flow(-w.s, d) * unipotent_stable(w.xt) *
                               cp.e_inv.transpose() * diagonal_flow(shift, d);
          RealMatrix clean = g;
          clean.row(d - 1).head(d - 1).setZero();
          auto c = grenier_hit(tg.box, clean);
          if (!c) return false;
          w.z = *z;
          w.grenier = *c;
          return true;
        }
      },
      target);
  if (!hit) return std::nullopt;
  return w;
}

FareyIndex::FareyIndex(const RealMatrix& L, const TargetSpec& target, const Box& region, double t, Exec exec)
    : L_(L), target_(target), t_(t) {
  const int d = target_dim(target);
  if (L.rows() != d) throw Error(Errc::invalid_dimension, "L and target dimensions differ");
  if (region.dim() != d - 1) throw Error(Errc::invalid_dimension, "region must have dimension d-1");
  extent_ = offset_extent(target);
  const double scale = std::exp(-d * t);
  // x in f - scale*extent  <=>  f in x + scale*extent
  Box cover;
  cover.lo = region.lo + scale * extent_.lo;
  cover.hi = region.hi + scale * extent_.hi;
  cover.closed_upper = true;
  const double qh = q_hat(d, t, target_level(target));
  if (qh < 1.0) return;
  points_ = enumerate_translated_farey(L, qh, cover, exec);

  const int n = d - 1;
  origin_ = cover.lo;
  double vol = std::max(cover.volume(), 1e-300);
  double window = scale * (extent_.hi - extent_.lo).maxCoeff();
  cell_ = std::max(window, std::pow(vol / std::max<std::size_t>(points_.size(), 1), 1.0 / n));
  cell_ = std::max(cell_, 1e-300);
  dims_.assign(static_cast<std::size_t>(n), 1);
  std::uint64_t cells = 1;
  for (int i = 0; i < n; ++i) {
    dims_[static_cast<std::size_t>(i)] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((cover.hi[i] - cover.lo[i]) / cell_)));
    cells *= static_cast<std::uint64_t>(dims_[static_cast<std::size_t>(i)]);
  }
  if (cells > 4 * points_.size() + 16) {
    cell_ *= std::pow(static_cast<double>(cells) / (4.0 * points_.size() + 16), 1.0 / n);
    cells = 1;
    for (int i = 0; i < n; ++i) {
      dims_[static_cast<std::size_t>(i)] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((cover.hi[i] - cover.lo[i]) / cell_)));
      cells *= static_cast<std::uint64_t>(dims_[static_cast<std::size_t>(i)]);
    }
  }
  auto cell_of = [&](const RealVector& p) {
    std::uint64_t idx = 0;
    for (int i = n - 1; i >= 0; --i) {
      auto c = static_cast<std::int64_t>(std::floor((p[i] - origin_[i]) / cell_));
      c = std::clamp<std::int64_t>(c, 0, dims_[static_cast<std::size_t>(i)] - 1);
      idx = idx * static_cast<std::uint64_t>(dims_[static_cast<std::size_t>(i)]) + static_cast<std::uint64_t>(c);
    }
    return idx;
  };
  std::vector<std::uint64_t> keys(points_.size());
  cell_start_.assign(cells + 1, 0);
  for (std::size_t k = 0; k < points_.size(); ++k) {
    keys[k] = cell_of(points_[k].point);
    ++cell_start_[keys[k] + 1];
  }
  for (std::uint64_t c = 0; c < cells; ++c) cell_start_[c + 1] += cell_start_[c];
  std::vector<TranslatedFareyPoint> sorted(points_.size());
  std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t k = 0; k < points_.size(); ++k) sorted[fill[keys[k]]++] = std::move(points_[k]);
  points_ = std::move(sorted);
}

std::optional<MembershipWitness> FareyIndex::query(const RealVector& x) const {
  if (points_.empty()) return std::nullopt;
  const int d = target_dim(target_);
  const int n = d - 1;
  const double scale = std::exp(-d * t_);
  std::vector<std::int64_t> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double a = x[i] + scale * extent_.lo[i], b = x[i] + scale * extent_.hi[i];
    lo[static_cast<std::size_t>(i)] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((a - origin_[i]) / cell_)) - 1, 0, dims_[static_cast<std::size_t>(i)] - 1);
    hi[static_cast<std::size_t>(i)] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((b - origin_[i]) / cell_)) + 1, 0, dims_[static_cast<std::size_t>(i)] - 1);
  }
  std::vector<MembershipWitness> hits;
  std::vector<std::int64_t> cur(lo);
  while (true) {
    std::uint64_t idx = 0;
    for (int i = n - 1; i >= 0; --i)
      idx = idx * static_cast<std::uint64_t>(dims_[static_cast<std::size_t>(i)]) + static_cast<std::uint64_t>(cur[static_cast<std::size_t>(i)]);
    for (std::uint32_t k = cell_start_[idx]; k < cell_start_[idx + 1]; ++k)
      if (auto w = test_farey_point(target_, L_, points_[k], x, t_)) hits.push_back(std::move(*w));
    int i = 0;
    for (; i < n; ++i) {
      if (++cur[static_cast<std::size_t>(i)] <= hi[static_cast<std::size_t>(i)]) break;
      cur[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
    }
    if (i == n) break;
  }
  if (hits.empty()) return std::nullopt;
  std::sort(hits.begin(), hits.end(), [](const MembershipWitness& a, const MembershipWitness& b) {
    if (a.farey.alpha_d != b.farey.alpha_d) return a.farey.alpha_d < b.farey.alpha_d;
    return a.farey.source < b.farey.source;
  });
  MembershipWitness best = hits.front();
  best.multiplicity = static_cast<int>(hits.size());
  return best;
}

std::optional<MembershipWitness> member_dual(const TargetSpec& target, const RealMatrix& L, const RealVector& x, double t) {
  validate_target(target);
  const int d = target_dim(target);
  if (!(t >= 0)) throw Error(Errc::invalid_argument, "t must be non-negative");
  if (x.size() != d - 1) throw Error(Errc::invalid_dimension, "x must have length d-1");
  if (d > 3 && (target.index() == 1 || target.index() == 3))
    throw Error(Errc::unsupported_dimension, "Grenier targets need d in {2,3}");
  Box at;
  at.lo = x;
  at.hi = x;
  at.closed_upper = true;
  FareyIndex index(L, target, at, t, Exec::serial);
  return index.query(x);
}

std::optional<MembershipWitness> member_direct(const StableSection& target, const RealMatrix& L, const RealVector& x,
                                               double t, std::uint64_t budget) {
  validate_target(TargetSpec{target});
  require_square(L, "L");
  const int d = static_cast<int>(L.rows());
  if (x.size() != d - 1) throw Error(Errc::invalid_dimension, "x must have length d-1");
  if (!is_unimodular(L, 1e-9)) throw Error(Errc::invalid_argument, "L must be unimodular");
  const double delta = std::exp(-(d - 1) * t) * std::pow(target.T, -(d - 1.0) / d);
  const double grow = std::exp(d * t);

  RealVector x1(d);
  x1.head(d - 1) = x;
  x1[d - 1] = 1.0;
  const RealVector cu = L * x1;  // u = m . cu = a' x + a_d

  LatticeRegion region;
  region.dim = d;
  region.constraints.push_back({-cu, 0.0, true});
  region.constraints.push_back({cu, delta, false});
  RealVector a_lo(d), a_hi(d);
  double ax_lo = 0.0, ax_hi = 0.0;
  for (int i = 0; i + 1 < d; ++i) {
    const RealVector ai = L.col(i);
    region.constraints.push_back({target.B.lo[i] * grow * cu - ai, 0.0, false});
    region.constraints.push_back({ai - target.B.hi[i] * grow * cu, 0.0, !target.B.closed_upper});
    a_lo[i] = std::min(0.0, target.B.lo[i]) * grow * delta;
    a_hi[i] = std::max(0.0, target.B.hi[i]) * grow * delta;
    ax_lo += std::min(a_lo[i] * x[i], a_hi[i] * x[i]);
    ax_hi += std::max(a_lo[i] * x[i], a_hi[i] * x[i]);
  }
  a_lo[d - 1] = -ax_hi;
  a_hi[d - 1] = delta - ax_lo;
  enclose_image(a_lo, a_hi, L.inverse(), region.lo, region.hi);

  LatticeSweep probe(region);
  if (probe.line_count() > budget)
    throw Error(Errc::resource_exhausted, "slab enumeration needs " + std::to_string(probe.line_count()) + " lines, budget " +
                                              std::to_string(budget));
  const auto sources = collect_primitive(region, Exec::serial, budget);
  if (sources.empty()) return std::nullopt;

  std::vector<MembershipWitness> hits;
  for (const auto& m : sources) {
    RealVector mv(d);
    for (int i = 0; i < d; ++i) mv[i] = static_cast<double>(m[static_cast<std::size_t>(i)]);
    const RealVector a = L.transpose() * mv;
    const double u = a.head(d - 1).dot(x) + a[d - 1];
    MembershipWitness w;
    w.farey.source = m;
    w.farey.alpha_prime = a.head(d - 1);
    w.farey.alpha_d = a[d - 1];
    w.farey.point = x;
    w.xt = a.head(d - 1) / (grow * u);
    w.s = -t - std::log(u) / (d - 1);
    hits.push_back(std::move(w));
  }
  std::sort(hits.begin(), hits.end(), [](const MembershipWitness& p, const MembershipWitness& q) { return p.s > q.s; });
  MembershipWitness best = hits.front();
  best.multiplicity = static_cast<int>(hits.size());
  return best;
}

}  // namespace horolab
