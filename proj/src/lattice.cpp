#include "horolab/lattice.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>

namespace horolab {

namespace {

constexpr double kFaceTol = 1e-12;
constexpr std::uint64_t kMaxLines = 4'000'000'000ULL;

double interval_slack(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }

std::int64_t clamp_to_int(double v) {
  constexpr double lim = 9.0e18;
  if (v > lim) return static_cast<std::int64_t>(lim);
  if (v < -lim) return static_cast<std::int64_t>(-lim);
  return static_cast<std::int64_t>(v);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::int64_t gcd_of(const PrimitiveVec& v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x);
  return g;
}

bool is_primitive(const PrimitiveVec& v) { return gcd_of(v) == 1; }

void enclose_image(const RealVector& a_lo, const RealVector& a_hi, const RealMatrix& basis, std::vector<std::int64_t>& lo,
                   std::vector<std::int64_t>& hi) {
  const int d = static_cast<int>(basis.cols());
  lo.assign(static_cast<std::size_t>(d), 0);
  hi.assign(static_cast<std::size_t>(d), 0);
  for (int j = 0; j < d; ++j) {
    double mn = 0.0, mx = 0.0;
    for (int i = 0; i < basis.rows(); ++i) {
      const double u = a_lo[i] * basis(i, j), v = a_hi[i] * basis(i, j);
      mn += std::min(u, v);
      mx += std::max(u, v);
    }
    lo[static_cast<std::size_t>(j)] = clamp_to_int(std::floor(mn)) - 1;
    hi[static_cast<std::size_t>(j)] = clamp_to_int(std::ceil(mx)) + 1;
  }
}

PrimeTable::PrimeTable(std::int64_t limit) {
  limit = std::clamp<std::int64_t>(limit, 2, 10'000'000);
  spf_.assign(static_cast<std::size_t>(limit + 1), 0);
  std::vector<std::int32_t> primes;
  for (std::int32_t i = 2; i <= limit; ++i) {
    if (spf_[static_cast<std::size_t>(i)] == 0) {
      spf_[static_cast<std::size_t>(i)] = i;
      primes.push_back(i);
    }
    for (std::int32_t p : primes) {
      const std::int64_t ip = static_cast<std::int64_t>(i) * p;
      if (p > spf_[static_cast<std::size_t>(i)] || ip > limit) break;
      spf_[static_cast<std::size_t>(ip)] = p;
    }
  }
}

std::vector<std::int64_t> PrimeTable::distinct_primes(std::int64_t n) const {
  std::vector<std::int64_t> out;
  n = n < 0 ? -n : n;
  if (n < 2) return out;
  const auto limit = static_cast<std::int64_t>(spf_.size()) - 1;
  while (n > limit) {
    std::int64_t p = 2;
    for (; p * p <= n; ++p)
      if (n % p == 0) break;
    if (p * p > n) p = n;
    if (out.empty() || out.back() != p) out.push_back(p);
    while (n % p == 0) n /= p;
    if (n == 1) return out;
  }
  while (n > 1) {
    const std::int64_t p = spf_[static_cast<std::size_t>(n)];
    if (out.empty() || out.back() != p) out.push_back(p);
    n /= p;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::int64_t coprime_count(std::int64_t a, std::int64_t b, const std::vector<std::int64_t>& primes) {
  if (b < a) return 0;
  const std::size_t k = primes.size();
  std::int64_t total = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
    std::int64_t prod = 1;
    int bits = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1ULL << i)) {
        prod *= primes[i];
        ++bits;
      }
    const std::int64_t c = floor_div(b, prod) - floor_div(a - 1, prod);
    total += (bits % 2 ? -c : c);
  }
  return total;
}

LatticeSweep::LatticeSweep(LatticeRegion region) : region_(std::move(region)) {
  const int d = region_.dim;
  if (d < 1 || static_cast<int>(region_.lo.size()) != d || static_cast<int>(region_.hi.size()) != d)
    throw Error(Errc::invalid_dimension, "lattice region box does not match dimension");
  for (auto& c : region_.constraints) {
    if (c.coeff.size() != d) throw Error(Errc::invalid_dimension, "constraint length does not match dimension");
    const double scale = c.coeff.cwiseAbs().maxCoeff();
    for (int i = 0; i < d; ++i)
      if (std::abs(c.coeff[i]) < 1e-13 * scale) c.coeff[i] = 0.0;
  }
  lines_ = 1;
  radix_.assign(static_cast<std::size_t>(std::max(d - 1, 0)), 1);
  for (int i = 1; i < d; ++i) {
    const auto span = region_.hi[static_cast<std::size_t>(i)] - region_.lo[static_cast<std::size_t>(i)] + 1;
    if (span <= 0) {
      lines_ = 0;
      return;
    }
    radix_[static_cast<std::size_t>(i - 1)] = static_cast<std::uint64_t>(span);
    if (lines_ > kMaxLines / static_cast<std::uint64_t>(span))
      throw Error(Errc::resource_exhausted, "lattice sweep needs more than 4e9 lines");
    lines_ *= static_cast<std::uint64_t>(span);
  }
  if (region_.hi[0] < region_.lo[0]) lines_ = 0;
}

std::int64_t LatticeSweep::rest_abs_max() const {
  std::int64_t m = 0;
  for (int i = 1; i < region_.dim; ++i)
    m = std::max({m, std::abs(region_.lo[static_cast<std::size_t>(i)]), std::abs(region_.hi[static_cast<std::size_t>(i)])});
  return m;
}

bool LatticeSweep::coprime_with(std::int64_t m0, std::int64_t g) {
  if (g == 0) return m0 == 1 || m0 == -1;
  return std::gcd(m0, g) == 1;
}

LatticeSweep::Line LatticeSweep::line(std::uint64_t index) const {
  const int d = region_.dim;
  Line ln;
  ln.rest.resize(static_cast<std::size_t>(d - 1));
  for (int i = 1; i < d; ++i) {
    const auto r = radix_[static_cast<std::size_t>(i - 1)];
    ln.rest[static_cast<std::size_t>(i - 1)] = region_.lo[static_cast<std::size_t>(i)] + static_cast<std::int64_t>(index % r);
    index /= r;
  }
  ln.g = gcd_of(ln.rest);

  double lo_f = static_cast<double>(region_.lo[0]);
  double hi_f = static_cast<double>(region_.hi[0]);
  bool inner_ok = true;
  for (const auto& c : region_.constraints) {
    double r = 0.0, scale = std::abs(c.bound);
    for (int i = 1; i < d; ++i) {
      const double term = c.coeff[i] * static_cast<double>(ln.rest[static_cast<std::size_t>(i - 1)]);
      r += term;
      scale += std::abs(term);
    }
    const double c0 = c.coeff[0];
    if (c0 == 0.0) {
      const double slack = std::max(interval_slack(scale), kFaceTol);
      if (r > c.bound + slack) return ln;
      if (r >= c.bound - slack) inner_ok = false;
      continue;
    }
    const double v = (c.bound - r) / c0;
    if (c0 > 0) hi_f = std::min(hi_f, v);
    else lo_f = std::max(lo_f, v);
  }
  if (lo_f > hi_f + interval_slack(hi_f)) return ln;

  ln.outer_lo = std::max(region_.lo[0], clamp_to_int(std::ceil(lo_f - interval_slack(lo_f))));
  ln.outer_hi = std::min(region_.hi[0], clamp_to_int(std::floor(hi_f + interval_slack(hi_f))));
  if (ln.outer_lo > ln.outer_hi) return ln;
  ln.empty = false;
  if (inner_ok) {
    ln.inner_lo = std::max(region_.lo[0], clamp_to_int(std::ceil(lo_f + interval_slack(lo_f))));
    ln.inner_hi = std::min(region_.hi[0], clamp_to_int(std::floor(hi_f - interval_slack(hi_f))));
  }
  return ln;
}

bool LatticeSweep::admissible(const PrimitiveVec& m) const {
  for (const auto& c : region_.constraints) {
    double v = 0.0, scale = std::abs(c.bound);
    for (int i = 0; i < region_.dim; ++i) {
      const double term = c.coeff[i] * static_cast<double>(m[static_cast<std::size_t>(i)]);
      v += term;
      scale += std::abs(term);
    }
    const double eps = kFaceTol * std::max(1.0, scale);
    if (c.strict ? !(v < c.bound - eps) : !(v <= c.bound + eps)) return false;
  }
  return true;
}

std::uint64_t LatticeSweep::count(const Line& ln, const PrimeTable& primes) const {
  if (ln.empty) return 0;
  std::uint64_t total = 0;
  PrimitiveVec m(static_cast<std::size_t>(region_.dim));
  for (std::size_t i = 0; i < ln.rest.size(); ++i) m[i + 1] = ln.rest[i];
  auto check = [&](std::int64_t m0) {
    if (!coprime_with(m0, ln.g)) return;
    m[0] = m0;
    if (admissible(m)) ++total;
  };
  const std::int64_t in_lo = std::max(ln.inner_lo, ln.outer_lo);
  const std::int64_t in_hi = std::min(ln.inner_hi, ln.outer_hi);
  if (in_lo > in_hi) {
    for (std::int64_t m0 = ln.outer_lo; m0 <= ln.outer_hi; ++m0) check(m0);
    return total;
  }
  for (std::int64_t m0 = ln.outer_lo; m0 < in_lo; ++m0) check(m0);
  for (std::int64_t m0 = in_hi + 1; m0 <= ln.outer_hi; ++m0) check(m0);
  if (ln.g == 0) {
    total += (in_lo <= 1 && 1 <= in_hi) + (in_lo <= -1 && -1 <= in_hi);
  } else if (ln.g == 1) {
    total += static_cast<std::uint64_t>(in_hi - in_lo + 1);
  } else {
    total += static_cast<std::uint64_t>(coprime_count(in_lo, in_hi, primes.distinct_primes(ln.g)));
  }
  return total;
}

bool parallel_allowed(Exec exec) { return exec == Exec::parallel && !omp_in_parallel() && omp_get_max_threads() > 1; }

void for_each_line(const LatticeSweep& sweep, Exec exec, const std::function<void(std::uint64_t, const LatticeSweep::Line&)>& fn) {
  const auto n = static_cast<std::int64_t>(sweep.line_count());
  if (!parallel_allowed(exec)) {
    for (std::int64_t i = 0; i < n; ++i) fn(static_cast<std::uint64_t>(i), sweep.line(static_cast<std::uint64_t>(i)));
    return;
  }
  std::atomic<bool> failed{false};
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      fn(static_cast<std::uint64_t>(i), sweep.line(static_cast<std::uint64_t>(i)));
    } catch (...) {
#pragma omp critical(horolab_line_error)
      {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

std::uint64_t count_primitive(const LatticeRegion& region, Exec exec) {
  LatticeSweep sweep(region);
  PrimeTable primes(std::max<std::int64_t>(sweep.rest_abs_max(), 2));
  const auto n = static_cast<std::int64_t>(sweep.line_count());
  std::uint64_t total = 0;
  if (parallel_allowed(exec)) {
#pragma omp parallel for schedule(dynamic, 256) reduction(+ : total)
    for (std::int64_t i = 0; i < n; ++i) total += sweep.count(sweep.line(static_cast<std::uint64_t>(i)), primes);
  } else {
    for (std::int64_t i = 0; i < n; ++i) total += sweep.count(sweep.line(static_cast<std::uint64_t>(i)), primes);
  }
  return total;
}

std::vector<PrimitiveVec> collect_primitive(const LatticeRegion& region, Exec exec, std::uint64_t budget) {
  LatticeSweep sweep(region);
  std::vector<PrimitiveVec> out;
  std::atomic<std::uint64_t> seen{0};
  const bool par = parallel_allowed(exec);
  std::vector<std::vector<PrimitiveVec>> buckets(static_cast<std::size_t>(par ? omp_get_max_threads() : 1));
  for_each_line(sweep, exec, [&](std::uint64_t, const LatticeSweep::Line& ln) {
    if (ln.empty) return;
    const std::uint64_t span = static_cast<std::uint64_t>(ln.outer_hi - ln.outer_lo + 1);
    if (seen.fetch_add(span, std::memory_order_relaxed) + span > budget)
      throw Error(Errc::resource_exhausted, "lattice enumeration exceeded budget of " + std::to_string(budget) + " candidates");
    auto& bucket = buckets[static_cast<std::size_t>(par ? omp_get_thread_num() : 0)];
    sweep.visit(ln, [&](const PrimitiveVec& m) { bucket.push_back(m); });
  });
  std::size_t total = 0;
  for (const auto& b : buckets) total += b.size();
  out.reserve(total);
  for (auto& b : buckets) std::move(b.begin(), b.end(), std::back_inserter(out));
  const int d = region.dim;
  std::sort(out.begin(), out.end(), [d](const PrimitiveVec& a, const PrimitiveVec& b) {
    if (a[static_cast<std::size_t>(d - 1)] != b[static_cast<std::size_t>(d - 1)])
      return a[static_cast<std::size_t>(d - 1)] < b[static_cast<std::size_t>(d - 1)];
    return std::lexicographical_compare(a.begin(), a.end() - 1, b.begin(), b.end() - 1);
  });
  return out;
}

}  // namespace horolab
