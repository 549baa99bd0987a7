#pragma once

#include "horolab/algebra.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace horolab {

using PrimitiveVec = std::vector<std::int64_t>;

std::int64_t gcd_of(const PrimitiveVec& v);
bool is_primitive(const PrimitiveVec& v);

// coeff . m  <  bound  (strict)  or  <=  bound
struct LinearConstraint {
  RealVector coeff;
  double bound = 0.0;
  bool strict = false;
};

// Integer row vectors m in a polytope, clipped to an inclusive box.
struct LatticeRegion {
  int dim = 0;
  std::vector<LinearConstraint> constraints;
  std::vector<std::int64_t> lo, hi;
};

// Integer box enclosing { a * basis : a in [a_lo, a_hi] }, inflated by one.
void enclose_image(const RealVector& a_lo, const RealVector& a_hi, const RealMatrix& basis, std::vector<std::int64_t>& lo,
                   std::vector<std::int64_t>& hi);

class PrimeTable {
 public:
  explicit PrimeTable(std::int64_t limit);
  std::vector<std::int64_t> distinct_primes(std::int64_t n) const;

 private:
  std::vector<std::int32_t> spf_;
};

// Number of n in [a, b] with gcd(n, g) = 1, g given by its distinct primes.
std::int64_t coprime_count(std::int64_t a, std::int64_t b, const std::vector<std::int64_t>& primes);

enum class Exec { serial, parallel };

// Splits the region into lines along coordinate 0; the remaining
// coordinates index the line.
class LatticeSweep {
 public:
  struct Line {
    PrimitiveVec rest;   // m_1..m_{d-1}
    std::int64_t g = 0;  // gcd of rest
    bool empty = true;
    std::int64_t outer_lo = 0, outer_hi = -1;  // candidates
    std::int64_t inner_lo = 0, inner_hi = -1;  // admissible without re-checking
  };

  explicit LatticeSweep(LatticeRegion region);

  std::uint64_t line_count() const { return lines_; }
  Line line(std::uint64_t index) const;
  bool admissible(const PrimitiveVec& m) const;
  const LatticeRegion& region() const { return region_; }

  // Calls f(m) for each primitive admissible m on the line, increasing m_0.
  template <class F>
  void visit(const Line& ln, F&& f) const {
    if (ln.empty) return;
    PrimitiveVec m(static_cast<std::size_t>(region_.dim));
    for (std::size_t i = 0; i < ln.rest.size(); ++i) m[i + 1] = ln.rest[i];
    for (std::int64_t m0 = ln.outer_lo; m0 <= ln.outer_hi; ++m0) {
      if (!coprime_with(m0, ln.g)) continue;
      m[0] = m0;
      if ((m0 < ln.inner_lo || m0 > ln.inner_hi) && !admissible(m)) continue;
      f(m);
    }
  }

  std::uint64_t count(const Line& ln, const PrimeTable& primes) const;
  std::int64_t rest_abs_max() const;

 private:
  static bool coprime_with(std::int64_t m0, std::int64_t g);

  LatticeRegion region_;
  std::vector<std::uint64_t> radix_;
  std::uint64_t lines_ = 0;
};

// Visits every line; fn(line_index, line). Parallel over lines unless
// already inside a parallel region.
void for_each_line(const LatticeSweep& sweep, Exec exec, const std::function<void(std::uint64_t, const LatticeSweep::Line&)>& fn);

std::uint64_t count_primitive(const LatticeRegion& region, Exec exec);
// Sorted by (m_{d-1}, m_0, ..., m_{d-2}); throws resource_exhausted past budget.
std::vector<PrimitiveVec> collect_primitive(const LatticeRegion& region, Exec exec, std::uint64_t budget);

bool parallel_allowed(Exec exec);

}  // namespace horolab
