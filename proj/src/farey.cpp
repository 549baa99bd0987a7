#include "horolab/farey.hpp"

#include <algorithm>
#include <cmath>

namespace horolab {

Box Box::unit(int dim) { return cube(dim, 0.0, 1.0); }

Box Box::cube(int dim, double lo, double hi, bool closed_upper) {
  Box b;
  b.lo = RealVector::Constant(dim, lo);
  b.hi = RealVector::Constant(dim, hi);
  b.closed_upper = closed_upper;
  return b;
}

double Box::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= std::max(0.0, hi[i] - lo[i]);
  return v;
}

bool Box::contains(const RealVector& p, double tol) const {
  for (int i = 0; i < dim(); ++i) {
    if (p[i] < lo[i] - tol) return false;
    if (closed_upper ? p[i] > hi[i] + tol : p[i] >= hi[i] - tol) return false;
  }
  return true;
}

void Box::validate() const {
  if (lo.size() != hi.size() || lo.size() == 0) throw Error(Errc::invalid_argument, "box bounds have mismatched length");
  if (!lo.allFinite() || !hi.allFinite()) throw Error(Errc::invalid_argument, "box must be bounded");
  for (int i = 0; i < dim(); ++i)
    if (hi[i] < lo[i]) throw Error(Errc::invalid_argument, "box has hi < lo");
}

RealMatrix farey_basis(const RealMatrix& L) {
  require_square(L, "L");
  if (!is_unimodular(L, 1e-9)) throw Error(Errc::invalid_argument, "L must be unimodular");
  return L.inverse().transpose();
}

LatticeRegion translated_farey_region(const RealMatrix& L, double q_max, const Box& box) {
  const RealMatrix basis = farey_basis(L);
  const int d = static_cast<int>(L.rows());
  if (box.dim() != d - 1) throw Error(Errc::invalid_dimension, "box dimension must be d-1");
  box.validate();
  const RealVector last = basis.col(d - 1);

  LatticeRegion region;
  region.dim = d;
  region.constraints.push_back({-last, 0.0, true});
  region.constraints.push_back({last, q_max, false});
  for (int i = 0; i + 1 < d; ++i) {
    region.constraints.push_back({box.lo[i] * last - basis.col(i), 0.0, false});
    region.constraints.push_back({basis.col(i) - box.hi[i] * last, 0.0, !box.closed_upper});
  }
  RealVector a_lo(d), a_hi(d);
  for (int i = 0; i + 1 < d; ++i) {
    a_lo[i] = q_max * std::min(box.lo[i], 0.0);
    a_hi[i] = q_max * std::max(box.hi[i], 0.0);
  }
  a_lo[d - 1] = 0.0;
  a_hi[d - 1] = q_max;
  enclose_image(a_lo, a_hi, L.transpose(), region.lo, region.hi);
  return region;
}

TranslatedFareyPoint make_farey_point(const RealMatrix& basis, const PrimitiveVec& source) {
  const int d = static_cast<int>(basis.rows());
  RealVector m(d);
  for (int i = 0; i < d; ++i) m[i] = static_cast<double>(source[static_cast<std::size_t>(i)]);
  const RealVector alpha = basis.transpose() * m;
  TranslatedFareyPoint p;
  p.source = source;
  p.alpha_prime = alpha.head(d - 1);
  p.alpha_d = alpha[d - 1];
  p.point = p.alpha_prime / p.alpha_d;
  return p;
}

std::vector<TranslatedFareyPoint> enumerate_translated_farey(const RealMatrix& L, double Q, const Box& box, Exec exec,
                                                             std::uint64_t budget) {
  if (!(Q >= 1.0)) throw Error(Errc::empty_range, "Q must be at least 1");
  const RealMatrix basis = farey_basis(L);
  const auto sources = collect_primitive(translated_farey_region(L, Q, box), exec, budget);
  std::vector<TranslatedFareyPoint> out;
  out.reserve(sources.size());
  for (const auto& s : sources) out.push_back(make_farey_point(basis, s));
  return out;
}

std::vector<TranslatedFareyPoint> enumerate_farey(int d, double Q, Exec exec) {
  if (d < 2) throw Error(Errc::invalid_dimension, "d must be at least 2");
  return enumerate_translated_farey(RealMatrix::Identity(d, d), Q, Box::unit(d - 1), exec);
}

std::vector<std::uint64_t> jordan_totients(int k, std::int64_t limit) {
  if (k < 1) throw Error(Errc::invalid_dimension, "Jordan totient order must be >= 1");
  limit = std::max<std::int64_t>(limit, 1);
  std::vector<std::uint64_t> j(static_cast<std::size_t>(limit + 1), 0);
  std::vector<std::int64_t> primes;
  std::vector<bool> composite(static_cast<std::size_t>(limit + 1), false);
  auto ipow = [k](std::uint64_t p) {
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return r;
  };
  j[1] = 1;
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (!composite[static_cast<std::size_t>(i)]) {
      primes.push_back(i);
      j[static_cast<std::size_t>(i)] = ipow(static_cast<std::uint64_t>(i)) - 1;
    }
    for (std::int64_t p : primes) {
      const std::int64_t ip = i * p;
      if (ip > limit) break;
      composite[static_cast<std::size_t>(ip)] = true;
      if (i % p == 0) {
        j[static_cast<std::size_t>(ip)] = j[static_cast<std::size_t>(i)] * ipow(static_cast<std::uint64_t>(p));
        break;
      }
      j[static_cast<std::size_t>(ip)] = j[static_cast<std::size_t>(i)] * (ipow(static_cast<std::uint64_t>(p)) - 1);
    }
  }
  return j;
}

FareyCount count_farey(int d, double Q) {
  if (d < 2) throw Error(Errc::invalid_dimension, "d must be at least 2");
  if (!(Q >= 1.0)) throw Error(Errc::empty_range, "Q must be at least 1");
  const auto qmax = static_cast<std::int64_t>(std::floor(Q));
  if (std::pow(static_cast<double>(qmax), d) > 1e18) throw Error(Errc::resource_exhausted, "Farey count overflows 64 bits");
  if (qmax > 200'000'000) throw Error(Errc::resource_exhausted, "Farey count sieve limited to Q <= 2e8");
  const auto j = jordan_totients(d - 1, qmax);
  FareyCount c;
  for (std::int64_t q = 1; q <= qmax; ++q) c.exact += j[static_cast<std::size_t>(q)];
  c.asymptotic = std::pow(Q, d) / (d * zeta(d));
  return c;
}

DuplicateRegion duplicate_region(const RealMatrix& L, bool generic) {
  require_square(L, "L");
  if (!is_unimodular(L, 1e-9)) throw Error(Errc::invalid_argument, "L must be unimodular");
  const int d = static_cast<int>(L.rows());
  DuplicateRegion r;
  if (generic) {
    r.kind = DuplicateRegion::Kind::all;
    return r;
  }
  const RealMatrix linv = L.inverse();
  auto from_block = [&](const RealMatrix& m) -> std::optional<RealMatrix> {
    const RealMatrix a = m.topLeftCorner(d - 1, d - 1);
    const double det = a.determinant();
    if (std::abs(det) <= 1e-9 * std::max(1.0, std::pow(max_abs(a), d - 1))) return std::nullopt;
    return RealMatrix(a.inverse() / det);
  };
  if (auto b = from_block(linv)) {
    r.period_basis = *b;
    return r;
  }
  for (int j = 1; j < d; ++j)
    if (auto b = from_block(linv * swap_element(j, d).to_real())) {
      r.period_basis = *b;
      return r;
    }
  throw Error(Errc::internal_invariant, "no swap element gives an invertible block");
}

bool fits_in_cell(const DuplicateRegion& region, const Box& A) {
  if (region.kind == DuplicateRegion::Kind::all) return true;
  const int n = A.dim();
  if (region.period_basis.rows() != n) throw Error(Errc::invalid_dimension, "region and box dimensions differ");
  const RealMatrix inv = region.period_basis.inverse();
  RealVector mn = RealVector::Constant(n, INFINITY), mx = RealVector::Constant(n, -INFINITY);
  for (std::uint64_t corner = 0; corner < (1ULL << n); ++corner) {
    RealVector p(n);
    for (int i = 0; i < n; ++i) p[i] = (corner >> i & 1) ? A.hi[i] : A.lo[i];
    const RealVector c = inv.transpose() * p;
    mn = mn.cwiseMin(c);
    mx = mx.cwiseMax(c);
  }
  return ((mx - mn).array() <= 1.0 + 1e-12).all();
}

bool is_gamma_duplicate(const RealMatrix& L, const RealVector& s) {
  require_square(L, "L");
  if (s.size() != L.rows() - 1) throw Error(Errc::invalid_dimension, "s must have length d-1");
  const RealMatrix c = L * unipotent_unstable(s) * L.inverse();
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (std::abs(c.data()[i] - std::round(c.data()[i])) > 1e-9) return false;
  return std::abs(c.array().round().matrix().determinant() - 1.0) < 0.5;
}

namespace {

RationalMatrix rational_inverse(RationalMatrix a) {
  const std::size_t n = a.size();
  RationalMatrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw Error(Errc::invalid_argument, "L is singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Rational p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

RationalMatrix rational_mul(const RationalMatrix& a, const RationalMatrix& b) {
  const std::size_t n = a.size();
  RationalMatrix c(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

}  // namespace

bool is_gamma_duplicate(const RationalMatrix& L, const std::vector<Rational>& s) {
  const std::size_t d = L.size();
  if (d < 2 || s.size() != d - 1) throw Error(Errc::invalid_dimension, "s must have length d-1");
  RationalMatrix n(d, std::vector<Rational>(d, Rational(0)));
  for (std::size_t i = 0; i < d; ++i) n[i][i] = 1;
  for (std::size_t i = 0; i + 1 < d; ++i) n[i][d - 1] = s[i];
  const RationalMatrix c = rational_mul(rational_mul(L, n), rational_inverse(L));
  IntegerMatrix ci(static_cast<int>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (denominator(c[i][j]) != 1) return false;
      ci(static_cast<int>(i), static_cast<int>(j)) = numerator(c[i][j]);
    }
  return ci.det() == 1;
}

RealMatrix to_real(const RationalMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  RealMatrix r(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      r(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].convert_to<double>();
  return r;
}

}  // namespace horolab
