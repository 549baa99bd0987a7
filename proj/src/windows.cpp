#include "horolab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <omp.h>

namespace horolab {

namespace {

struct Rect {
  double lo[2] = {0.0, 0.0};
  double hi[2] = {0.0, 0.0};
};

struct Disk {
  double c[2] = {0.0, 0.0};
  double r = 0.0;
};

double overlap_1d(double a_lo, double a_hi, double b_lo, double b_hi) {
  return std::max(0.0, std::min(a_hi, b_hi) - std::max(a_lo, b_lo));
}

double clipped_volume(const Rect& r, const Box& A, int n) {
  double v = 1.0;
  for (int i = 0; i < n; ++i) v *= overlap_1d(r.lo[i], r.hi[i], A.lo[i], A.hi[i]);
  return v;
}

Rect clip(const Rect& r, const Box& A, int n) {
  Rect c = r;
  for (int i = 0; i < n; ++i) {
    c.lo[i] = std::max(r.lo[i], A.lo[i]);
    c.hi[i] = std::min(r.hi[i], A.hi[i]);
  }
  return c;
}

// Window offsets relative to the Farey point: x in point + [lo, hi].
Rect stable_offsets(const Box& B, double scale, int n) {
  Rect r;
  for (int i = 0; i < n; ++i) {
    r.lo[i] = -scale * B.hi[i];
    r.hi[i] = -scale * B.lo[i];
  }
  return r;
}

Box cover_of(const Box& A, const Rect& offsets, int n) {
  Box cover;
  cover.lo.resize(n);
  cover.hi.resize(n);
  for (int i = 0; i < n; ++i) {
    cover.lo[i] = A.lo[i] - offsets.hi[i];
    cover.hi[i] = A.hi[i] - offsets.lo[i];
  }
  cover.closed_upper = true;
  return cover;
}

// Visits primitive sources with 0 < alpha_d <= q_max and point in cover;
// fn(alpha, source, out) may append to the per-line output. Results are
// concatenated in line order, so the output does not depend on threads.
template <class W, class F>
std::vector<W> sweep_windows(const RealMatrix& L, double q_max, const Box& cover, Exec exec, F&& fn) {
  const RealMatrix basis = farey_basis(L);
  const int d = static_cast<int>(L.rows());
  LatticeSweep sweep(translated_farey_region(L, q_max, cover));
  std::vector<std::vector<W>> per_line(sweep.line_count());
  for_each_line(sweep, exec, [&](std::uint64_t idx, const LatticeSweep::Line& ln) {
    RealVector m(d), alpha(d);
    sweep.visit(ln, [&](const PrimitiveVec& src) {
      for (int i = 0; i < d; ++i) m[i] = static_cast<double>(src[static_cast<std::size_t>(i)]);
      alpha.noalias() = basis.transpose() * m;
      fn(alpha, src, per_line[idx]);
    });
  });
  std::size_t total = 0;
  for (const auto& v : per_line) total += v.size();
  std::vector<W> out;
  out.reserve(total);
  for (auto& v : per_line) {
    out.insert(out.end(), v.begin(), v.end());
    std::vector<W>().swap(v);
  }
  return out;
}

struct UnionResult {
  double measure = 0.0;
  std::uint64_t overlaps = 0;
};

UnionResult union_1d(std::vector<Rect> rects) {
  std::sort(rects.begin(), rects.end(), [](const Rect& a, const Rect& b) {
    return a.lo[0] != b.lo[0] ? a.lo[0] < b.lo[0] : a.hi[0] < b.hi[0];
  });
  UnionResult u;
  double cur_lo = 0.0, cur_hi = -INFINITY;
  for (const auto& r : rects) {
    if (r.hi[0] <= r.lo[0]) continue;
    if (r.lo[0] < cur_hi) {
      ++u.overlaps;
      cur_hi = std::max(cur_hi, r.hi[0]);
    } else {
      if (cur_hi > cur_lo) u.measure += cur_hi - cur_lo;
      cur_lo = r.lo[0];
      cur_hi = r.hi[0];
    }
  }
  if (cur_hi > cur_lo) u.measure += cur_hi - cur_lo;
  return u;
}

struct DisjointSets {
  std::vector<std::uint32_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void join(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Pairs of objects whose bounding cells are neighbours; cell >= largest extent.
template <class Key, class Touch>
std::uint64_t neighbour_pairs(std::size_t count, double cell, Key&& key, Touch&& touch) {
  std::vector<std::pair<std::int64_t, std::int64_t>> keys(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto [x, y] = key(i);
    keys[i] = {static_cast<std::int64_t>(std::floor(x / cell)), static_cast<std::int64_t>(std::floor(y / cell))};
  }
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return keys[a] != keys[b] ? keys[a] < keys[b] : a < b;
  });
  std::vector<std::pair<std::int64_t, std::int64_t>> sorted_keys(count);
  for (std::size_t k = 0; k < count; ++k) sorted_keys[k] = keys[order[k]];
  std::uint64_t pairs = 0;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const std::pair<std::int64_t, std::int64_t> k{keys[i].first + dx, keys[i].second + dy};
        auto lo = std::lower_bound(sorted_keys.begin(), sorted_keys.end(), k);
        for (auto it = lo; it != sorted_keys.end() && *it == k; ++it) {
          const std::uint32_t j = order[static_cast<std::size_t>(it - sorted_keys.begin())];
          if (j <= i) continue;
          if (touch(static_cast<std::uint32_t>(i), j)) ++pairs;
        }
      }
  }
  return pairs;
}

double cluster_union_area(const std::vector<Rect>& rects, const std::vector<std::uint32_t>& members) {
  std::vector<double> xs, ys;
  for (auto k : members) {
    xs.push_back(rects[k].lo[0]);
    xs.push_back(rects[k].hi[0]);
    ys.push_back(rects[k].lo[1]);
    ys.push_back(rects[k].hi[1]);
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  double area = 0.0;
  for (std::size_t a = 0; a + 1 < xs.size(); ++a)
    for (std::size_t b = 0; b + 1 < ys.size(); ++b) {
      const double mx = 0.5 * (xs[a] + xs[a + 1]), my = 0.5 * (ys[b] + ys[b + 1]);
      for (auto k : members) {
        const Rect& r = rects[k];
        if (r.lo[0] <= mx && mx < r.hi[0] && r.lo[1] <= my && my < r.hi[1]) {
          area += (xs[a + 1] - xs[a]) * (ys[b + 1] - ys[b]);
          break;
        }
      }
    }
  return area;
}

// Rectangles are already clipped to A and non-empty.
UnionResult union_2d(const std::vector<Rect>& rects) {
  UnionResult u;
  if (rects.empty()) return u;
  double cell = 0.0;
  for (const auto& r : rects) cell = std::max({cell, r.hi[0] - r.lo[0], r.hi[1] - r.lo[1]});
  DisjointSets sets(rects.size());
  u.overlaps = neighbour_pairs(
      rects.size(), cell, [&](std::size_t i) { return std::pair{rects[i].lo[0], rects[i].lo[1]}; },
      [&](std::uint32_t i, std::uint32_t j) {
        const bool hit = overlap_1d(rects[i].lo[0], rects[i].hi[0], rects[j].lo[0], rects[j].hi[0]) > 0 &&
                         overlap_1d(rects[i].lo[1], rects[i].hi[1], rects[j].lo[1], rects[j].hi[1]) > 0;
        if (hit) sets.join(i, j);
        return hit;
      });
  if (u.overlaps == 0) {
    for (const auto& r : rects) u.measure += (r.hi[0] - r.lo[0]) * (r.hi[1] - r.lo[1]);
    return u;
  }
  std::vector<std::vector<std::uint32_t>> clusters(rects.size());
  for (std::uint32_t i = 0; i < rects.size(); ++i) clusters[sets.find(i)].push_back(i);
  for (std::uint32_t i = 0; i < rects.size(); ++i) {
    const auto& c = clusters[i];
    if (c.empty()) continue;
    if (c.size() == 1) {
      const Rect& r = rects[c[0]];
      u.measure += (r.hi[0] - r.lo[0]) * (r.hi[1] - r.lo[1]);
    } else {
      u.measure += cluster_union_area(rects, c);
    }
  }
  return u;
}

bool rect_less(const Rect& a, const Rect& b) {
  for (int i = 0; i < 2; ++i)
    if (a.lo[i] != b.lo[i]) return a.lo[i] < b.lo[i];
  for (int i = 0; i < 2; ++i)
    if (a.hi[i] != b.hi[i]) return a.hi[i] < b.hi[i];
  return false;
}

// Sorting first makes every sum independent of the enumeration order.
WindowTotal finish_rects(std::vector<Rect> raw, const Box& A, int n) {
  std::sort(raw.begin(), raw.end(), rect_less);
  WindowTotal out;
  std::vector<Rect> clipped;
  clipped.reserve(raw.size());
  for (const auto& r : raw) {
    const double v = clipped_volume(r, A, n);
    if (!(v > 0)) continue;
    out.window_sum += v;
    ++out.count;
    clipped.push_back(clip(r, A, n));
  }
  const UnionResult u = n == 1 ? union_1d(std::move(clipped)) : union_2d(clipped);
  out.measure = u.measure;
  out.overlaps = u.overlaps;
  return out;
}

void require_window_dims(const RealMatrix& L, const Box& A, int d) {
  require_square(L, "L");
  if (L.rows() != d) throw Error(Errc::invalid_dimension, "L and target dimensions differ");
  if (A.dim() != d - 1) throw Error(Errc::invalid_dimension, "A must have dimension d-1");
  A.validate();
  if (d > 3) throw Error(Errc::unsupported_dimension, "window estimators support d in {2,3}");
}

// Certified d = 2 path: interior points are counted, boundary points clipped.
WindowTotal stable_d2_certified(const StableSection& target, const RealMatrix& L, const Box& A, double t, Exec exec) {
  const double scale = std::exp(-2.0 * t);
  const double qh = q_hat(2, t, target.T);
  const Rect off = stable_offsets(target.B, scale, 1);
  const double length = off.hi[0] - off.lo[0];
  WindowTotal out;
  out.certified = true;
  const double in_lo = A.lo[0] - off.lo[0], in_hi = A.hi[0] - off.hi[0];
  const double out_lo = A.lo[0] - off.hi[0], out_hi = A.hi[0] - off.lo[0];
  std::vector<Box> edges;
  if (in_lo < in_hi) {
    const std::uint64_t inner = count_primitive(translated_farey_region(L, qh, Box{RealVector::Constant(1, in_lo), RealVector::Constant(1, in_hi), false}), exec);
    out.count += inner;
    out.window_sum += static_cast<double>(inner) * length;
    edges.push_back(Box{RealVector::Constant(1, out_lo), RealVector::Constant(1, in_lo), false});
    edges.push_back(Box{RealVector::Constant(1, in_hi), RealVector::Constant(1, out_hi), true});
  } else {
    edges.push_back(Box{RealVector::Constant(1, out_lo), RealVector::Constant(1, out_hi), true});
  }
  std::vector<double> edge_parts;
  for (const auto& edge : edges) {
    if (!(edge.lo[0] < edge.hi[0])) continue;
    auto parts = sweep_windows<double>(L, qh, edge, exec, [&](const RealVector& alpha, const PrimitiveVec&, std::vector<double>& o) {
      const double p = alpha[0] / alpha[1];
      const double v = overlap_1d(p + off.lo[0], p + off.hi[0], A.lo[0], A.hi[0]);
      if (v > 0) o.push_back(v);
    });
    edge_parts.insert(edge_parts.end(), parts.begin(), parts.end());
  }
  std::sort(edge_parts.begin(), edge_parts.end());
  for (double v : edge_parts) {
    out.window_sum += v;
    ++out.count;
  }
  out.measure = out.window_sum;
  return out;
}

double disk_box_area(const Disk& disk, const Box& A) {
  const double R = disk.r;
  if (!(R > 0)) return 0.0;
  const double cx = disk.c[0], cy = disk.c[1];
  const double x0 = std::max(A.lo[0], cx - R), x1 = std::min(A.hi[0], cx + R);
  if (!(x0 < x1)) return 0.0;
  const double top = A.hi[1] - cy, bot = cy - A.lo[1];
  if (top >= R && bot >= R && x0 == cx - R && x1 == cx + R) return M_PI * R * R;
  // chord half-height h(u) = sqrt(R^2 - u^2); integrate min(h, top) + min(h, bot), clipped at 0
  auto prim = [R](double u) {
    u = std::clamp(u, -R, R);
    return 0.5 * (u * std::sqrt(std::max(0.0, R * R - u * u)) + R * R * std::asin(u / R));
  };
  std::vector<double> cuts{x0 - cx, x1 - cx};
  for (double k : {top, bot, -top, -bot})
    if (std::abs(k) < R) {
      const double u = std::sqrt(R * R - k * k);
      cuts.push_back(u);
      cuts.push_back(-u);
    }
  std::sort(cuts.begin(), cuts.end());
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::max(cuts[i], x0 - cx), b = std::min(cuts[i + 1], x1 - cx);
    if (!(a < b)) continue;
    const double mid = 0.5 * (a + b);
    const double h = std::sqrt(std::max(0.0, R * R - mid * mid));
    const bool top_clip = top < h, bot_clip = bot < h;
    const double len = (top_clip ? top : h) + (bot_clip ? bot : h);
    if (!(len > 0)) continue;
    const int h_terms = (top_clip ? 0 : 1) + (bot_clip ? 0 : 1);
    area += (top_clip ? top : 0.0) * (b - a) + (bot_clip ? bot : 0.0) * (b - a) + h_terms * (prim(b) - prim(a));
  }
  return area;
}

double spherical_radius(const Chart& chart, double qh, double alpha_d) {
  const double ratio = qh / alpha_d;
  if (ratio < 1.0) return 0.0;
  return std::min(std::tan(chart.radius), std::sqrt(ratio * ratio - 1.0));
}

}  // namespace

WindowTotal sthe_exact_stable(const StableSection& target, const RealMatrix& L, const Box& A, double t, Exec exec,
                              bool strict) {
  validate_target(TargetSpec{target});
  const int d = target.B.dim() + 1;
  require_window_dims(L, A, d);
  if (!(t >= 0)) throw Error(Errc::invalid_argument, "t must be non-negative");
  const int n = d - 1;
  const double qh = q_hat(d, t, target.T);

  WindowTotal out;
  double widest = 0.0;
  for (int i = 0; i < n; ++i) widest = std::max(widest, target.B.hi[i] - target.B.lo[i]);
  // d = 2: two windows sit 1/(a1 a2) >= e^{-2t} T apart, so width < T separates them
  if (d == 2 && widest < target.T) {
    out = stable_d2_certified(target, L, A, t, exec);
  } else {
    const Rect off = stable_offsets(target.B, std::exp(-d * t), n);
    const Box cover = cover_of(A, off, n);
    auto rects = sweep_windows<Rect>(L, qh, cover, exec, [&](const RealVector& alpha, const PrimitiveVec&, std::vector<Rect>& o) {
      Rect r;
      for (int i = 0; i < n; ++i) {
        const double p = alpha[i] / alpha[n];
        r.lo[i] = p + off.lo[i];
        r.hi[i] = p + off.hi[i];
      }
      o.push_back(r);
    });
    out = finish_rects(std::move(rects), A, n);
  }
  if (strict && out.overlaps > 0)
    throw Error(Errc::disjointness_violation, std::to_string(out.overlaps) + " overlapping stable windows");
  return out;
}

WindowTotal sthe_window_spherical(const SphericalSection& target, const RealMatrix& L, const Box& A, double t, Exec exec) {
  validate_target(TargetSpec{target});
  const int d = target.chart.dim;
  require_window_dims(L, A, d);
  if (!(t >= 0)) throw Error(Errc::invalid_argument, "t must be non-negative");
  const int n = d - 1;
  const double scale = std::exp(-d * t);
  const double qh = q_hat(d, t, target.T);
  const double reach = scale * std::tan(target.chart.radius);
  Rect off;
  for (int i = 0; i < n; ++i) {
    off.lo[i] = -reach;
    off.hi[i] = reach;
  }
  const Box cover = cover_of(A, off, n);
  WindowTotal out;
  if (d == 2) {
    const RealMatrix basis = farey_basis(L);
    // windows of different sources are 1/(a1 a2) apart; half-widths are below e^{-2t} min(tan r, qh/a)
    out.certified = target.T >= 2.0 || 2.0 * std::tan(target.chart.radius) <= target.T;
    if (out.certified && basis(0, 1) == 0.0) {
      // alpha_d depends on the second source coordinate only: count whole lines at once
      const double f00 = basis(0, 0), f10 = basis(1, 0), f11 = basis(1, 1);
      const auto m1_max = static_cast<std::int64_t>(std::floor(qh / std::abs(f11) * (1 + 1e-15)));
      const std::int64_t sign = f11 > 0 ? 1 : -1;
      PrimeTable primes(std::max<std::int64_t>(m1_max, 2));
      std::vector<double> sums(static_cast<std::size_t>(std::max<std::int64_t>(m1_max, 0)), 0.0);
      std::vector<std::uint64_t> counts(sums.size(), 0);
      auto work = [&](std::int64_t k) {
        const std::int64_t m1 = sign * k;
        const double a = static_cast<double>(m1) * f11;
        if (!(a > 0) || a > qh * (1 + 1e-15)) return;
        const double half = scale * spherical_radius(target.chart, qh, a);
        if (!(half > 0)) return;
        // m0 as a function of the point p
        auto m0_at = [&](double p) { return (p * a - static_cast<double>(m1) * f10) / f00; };
        auto range = [&](double p_lo, double p_hi) {
          double u = m0_at(p_lo), v = m0_at(p_hi);
          if (u > v) std::swap(u, v);
          return std::pair{u, v};
        };
        const auto [o_lo, o_hi] = range(A.lo[0] - half, A.hi[0] + half);
        const auto c_lo = static_cast<std::int64_t>(std::floor(o_lo)) - 1, c_hi = static_cast<std::int64_t>(std::ceil(o_hi)) + 1;
        std::int64_t f_lo = 1, f_hi = 0;
        if (A.lo[0] + half < A.hi[0] - half) {
          const auto [i_lo, i_hi] = range(A.lo[0] + half, A.hi[0] - half);
          f_lo = static_cast<std::int64_t>(std::ceil(i_lo)) + 1;
          f_hi = static_cast<std::int64_t>(std::floor(i_hi)) - 1;
        }
        double sum = 0.0;
        std::uint64_t cnt = 0;
        if (f_lo <= f_hi) {
          const auto full = coprime_count(f_lo, f_hi, primes.distinct_primes(m1));
          sum += static_cast<double>(full) * 2.0 * half;
          cnt += static_cast<std::uint64_t>(full);
        }
        for (std::int64_t m0 = c_lo; m0 <= c_hi; ++m0) {
          if (f_lo <= m0 && m0 <= f_hi) {
            m0 = f_hi;
            continue;
          }
          if (std::gcd(m0, m1) != 1) continue;
          const double p = (static_cast<double>(m0) * f00 + static_cast<double>(m1) * f10) / a;
          const double v = overlap_1d(p - half, p + half, A.lo[0], A.hi[0]);
          if (v > 0) {
            sum += v;
            ++cnt;
          }
        }
        sums[static_cast<std::size_t>(k - 1)] = sum;
        counts[static_cast<std::size_t>(k - 1)] = cnt;
      };
      if (parallel_allowed(exec)) {
#pragma omp parallel for schedule(dynamic, 256)
        for (std::int64_t k = 1; k <= m1_max; ++k) work(k);
      } else {
        for (std::int64_t k = 1; k <= m1_max; ++k) work(k);
      }
      for (std::size_t k = 0; k < sums.size(); ++k) {
        out.window_sum += sums[k];
        out.count += counts[k];
      }
      out.measure = out.window_sum;
      return out;
    }
    auto rects = sweep_windows<Rect>(L, qh, cover, exec, [&](const RealVector& alpha, const PrimitiveVec&, std::vector<Rect>& o) {
      const double half = scale * spherical_radius(target.chart, qh, alpha[1]);
      if (!(half > 0)) return;
      Rect r;
      const double p = alpha[0] / alpha[1];
      r.lo[0] = p - half;
      r.hi[0] = p + half;
      o.push_back(r);
    });
    const bool cert = out.certified;
    out = finish_rects(std::move(rects), A, 1);
    out.certified = cert;
    return out;
  }
  // d = 3: disks, summed; overlaps are reported, not subtracted
  auto disks = sweep_windows<Disk>(L, qh, cover, exec, [&](const RealVector& alpha, const PrimitiveVec&, std::vector<Disk>& o) {
    Disk disk;
    disk.r = scale * spherical_radius(target.chart, qh, alpha[2]);
    if (!(disk.r > 0)) return;
    disk.c[0] = alpha[0] / alpha[2];
    disk.c[1] = alpha[1] / alpha[2];
    o.push_back(disk);
  });
  std::vector<Disk> inside;
  for (const auto& disk : disks) {
    const double v = disk_box_area(disk, A);
    if (!(v > 0)) continue;
    out.window_sum += v;
    ++out.count;
    inside.push_back(disk);
  }
  double cell = 0.0;
  for (const auto& disk : inside) cell = std::max(cell, 2.0 * disk.r);
  if (!inside.empty())
    out.overlaps = neighbour_pairs(
        inside.size(), cell, [&](std::size_t i) { return std::pair{inside[i].c[0], inside[i].c[1]}; },
        [&](std::uint32_t i, std::uint32_t j) {
          return std::hypot(inside[i].c[0] - inside[j].c[0], inside[i].c[1] - inside[j].c[1]) < inside[i].r + inside[j].r;
        });
  out.measure = out.window_sum;
  return out;
}

WindowTotal sthe_window_grenier_stable(const GrenierBoxStable& target, const RealMatrix& L, const Box& A, double t, Exec exec) {
  const TargetSpec spec{target};
  validate_target(spec);
  const int d = target.box.dim();
  require_window_dims(L, A, d);
  if (!(t >= 0)) throw Error(Errc::invalid_argument, "t must be non-negative");
  const int n = d - 1;
  const double qh = q_hat(d, t, target.T);
  const Rect off = stable_offsets(target.B, std::exp(-d * t), n);
  const Box cover = cover_of(A, off, n);
  const RealMatrix basis = farey_basis(L);
  auto rects = sweep_windows<Rect>(L, qh, cover, exec, [&](const RealVector&, const PrimitiveVec& src, std::vector<Rect>& o) {
    const TranslatedFareyPoint pt = make_farey_point(basis, src);
    // the Grenier test depends on the point only; probe at the window's reference x
    RealVector x = pt.point - std::exp(-d * t) * target.B.lo;
    if (!test_farey_point(spec, L, pt, x, t)) return;
    Rect r;
    for (int i = 0; i < n; ++i) {
      r.lo[i] = pt.point[i] + off.lo[i];
      r.hi[i] = pt.point[i] + off.hi[i];
    }
    o.push_back(r);
  });
  return finish_rects(std::move(rects), A, n);
}

}  // namespace horolab
