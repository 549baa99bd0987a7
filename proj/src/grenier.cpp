#include "horolab/coords.hpp"

#include <cmath>

namespace horolab {

namespace {

IntegerMatrix diag_signs(int d, int e0, int e1) {
  IntegerMatrix m = IntegerMatrix::identity(d);
  m(0, 0) = e0;
  if (d > 2) m(1, 1) = e1;
  return m;
}

double nearest_shift(double x) { return -std::floor(x + 0.5); }

}  // namespace

bool in_grenier_domain(const GrenierCoords& c, ReductionGroup group, double tol) {
  const int d = static_cast<int>(c.ys.size()) + 1;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(c.x(i, j)) > 0.5 + tol) return false;
  for (int k = 0; k + 1 < d; ++k)
    if (c.ys[k] * c.ys[k] < 0.75 - tol) return false;
  if (d == 3 && c.x(0, 1) * c.x(0, 1) + c.ys[0] * c.ys[0] < 1.0 - tol) return false;
  if (group == ReductionGroup::gl) {
    for (int j = 1; j < d; ++j)
      if (c.x(0, j) < -tol) return false;
  } else if (d == 3 && c.x(0, 2) < -tol) {
    return false;
  }
  return true;
}

GrenierReduction grenier_reduce_element(const RealMatrix& g, ReductionGroup group) {
  require_square(g, "section element");
  const int d = static_cast<int>(g.rows());
  if (d > 3) throw Error(Errc::unsupported_dimension, "exact Grenier reduction is implemented for d in {2,3}");

  GrenierReduction out;
  out.gamma = IntegerMatrix::identity(d);
  out.reduced = g;
  auto apply = [&](const IntegerMatrix& e) {
    out.gamma = e * out.gamma;
    out.reduced = e.to_real() * out.reduced;
  };

  if (d == 3) {
    // Gauss reduction of the 2x2 block, tau = x_12 + i y_1
    int iter = 0;
    for (; iter < 500; ++iter) {
      GrenierCoords c = section_coords_of(out.reduced);
      const double n = nearest_shift(c.x(0, 1));
      if (n != 0.0) {
        IntegerMatrix e = IntegerMatrix::identity(d);
        e(0, 1) = static_cast<long long>(n);
        apply(e);
        c = section_coords_of(out.reduced);
      }
      if (c.x(0, 1) * c.x(0, 1) + c.ys[0] * c.ys[0] < 1.0 - 1e-13) {
        IntegerMatrix s = IntegerMatrix::identity(d);
        s(0, 0) = 0;
        s(1, 1) = 0;
        s(0, 1) = 1;
        s(1, 0) = -1;
        apply(s);
        continue;
      }
      break;
    }
    if (iter == 500) throw Error(Errc::internal_invariant, "Gauss reduction did not terminate");
  }

  {
    const GrenierCoords c = section_coords_of(out.reduced);
    IntegerMatrix e = IntegerMatrix::identity(d);
    bool any = false;
    for (int i = 0; i + 1 < d; ++i) {
      const double n = nearest_shift(c.x(i, d - 1));
      if (n != 0.0) {
        e(i, d - 1) = static_cast<long long>(n);
        any = true;
      }
    }
    if (any) apply(e);
  }

  const GrenierCoords c = section_coords_of(out.reduced);
  if (d == 2) {
    if (group == ReductionGroup::gl && c.x(0, 1) < 0) apply(diag_signs(2, -1, 1));
  } else if (group == ReductionGroup::sl) {
    if (c.x(0, 2) < 0) apply(diag_signs(3, -1, -1));
  } else {
    const int e0 = c.x(0, 2) < 0 ? -1 : 1;
    const int e1 = e0 * (c.x(0, 1) < 0 ? -1 : 1);
    if (e0 != 1 || e1 != 1) apply(diag_signs(3, e0, e1));
  }
  out.coords = section_coords_of(out.reduced);
  out.coords.in_domain = in_grenier_domain(out.coords, group);
  return out;
}

GrenierReduction grenier_reduce(const RealMatrix& m_h, double s, ReductionGroup group) {
  require_in_h(m_h);
  const int d = static_cast<int>(m_h.rows());
  if (d > 3) throw Error(Errc::unsupported_dimension, "exact Grenier reduction is implemented for d in {2,3}");
  return grenier_reduce_element(m_h * diagonal_flow(-s, d), group);
}

}  // namespace horolab
