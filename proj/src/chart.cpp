#include "horolab/coords.hpp"

#include <cmath>
#include <numbers>

namespace horolab {

bool Chart::hemisphere() const { return radius < std::numbers::pi / 2; }

double Chart::domain_volume() const {
  const double n = dim - 1;
  return std::pow(std::numbers::pi, n / 2) / std::tgamma(n / 2 + 1) * std::pow(radius, n);
}

void Chart::validate() const {
  if (dim < 2) throw Error(Errc::invalid_dimension, "chart needs d >= 2");
  if (!(radius > 0) || !(radius < std::numbers::pi)) throw Error(Errc::invalid_argument, "chart radius must lie in (0, pi)");
}

ChartPoint chart_matrix(const Chart& chart, const RealVector& z) {
  chart.validate();
  const int d = chart.dim;
  if (z.size() != d - 1) throw Error(Errc::invalid_dimension, "chart point must have length d-1");
  const double theta = z.norm();
  if (!(theta < chart.radius)) throw Error(Errc::out_of_domain, "chart point outside the domain");

  RealMatrix s = RealMatrix::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) {
    s(d - 1, i) = z[i];
    s(i, d - 1) = -z[i];
  }
  const double t2 = theta * theta;
  const double sinc = theta < 1e-6 ? 1.0 - t2 / 6.0 : std::sin(theta) / theta;
  const double cosc = theta < 1e-6 ? 0.5 - t2 / 24.0 : (1.0 - std::cos(theta)) / t2;

  ChartPoint p;
  p.e_inv = RealMatrix::Identity(d, d) + sinc * s + cosc * s * s;
  p.a_block = p.e_inv.topLeftCorner(d - 1, d - 1);
  p.w = p.e_inv.block(0, d - 1, d - 1, 1);
  p.v = p.e_inv.block(d - 1, 0, 1, d - 1).transpose();
  p.c = p.e_inv(d - 1, d - 1);
  if (p.c > 0) p.zprime = p.v / p.c;
  return p;
}

std::optional<RealVector> chart_point_from_zprime(const Chart& chart, const RealVector& zp) {
  const double r = zp.norm();
  const double theta = std::atan(r);
  if (!(theta < chart.radius)) return std::nullopt;
  if (r == 0.0) return RealVector::Zero(zp.size());
  return RealVector(zp * (theta / r));
}

std::optional<RealVector> antipode(const Chart& chart, const RealVector& z) {
  chart.validate();
  const double theta = z.norm();
  if (!(theta < chart.radius)) throw Error(Errc::out_of_domain, "chart point outside the domain");
  // z = 0 maps to the sphere of radius pi, never inside an open chart of radius < pi
  if (theta == 0.0) return std::nullopt;
  const double ap = std::numbers::pi - theta;
  if (!(ap < chart.radius)) return std::nullopt;
  return RealVector(-(ap / theta) * z);
}

RealMatrix rotation_factor(const RealMatrix& ktilde, const Chart& chart, const RealVector& z) {
  if (chart.dim < 3) throw Error(Errc::invalid_dimension, "rotation factor needs d >= 3");
  if (ktilde.rows() != chart.dim - 1 || ktilde.cols() != chart.dim - 1)
    throw Error(Errc::invalid_dimension, "ktilde must be (d-1)x(d-1)");
  const ChartPoint p = chart_matrix(chart, z);
  if (!(p.c > 0)) throw Error(Errc::outside_hemisphere, "c(z) must be positive");
  const RealVector u = ktilde * p.w / p.c;
  const RealMatrix b = reverse_cholesky(u);
  const RealMatrix core = ktilde * (p.a_block - p.w * p.zprime.transpose());
  return b.triangularView<Eigen::Upper>().solve(core);
}

AssociatedElement associated_element_height_check(const Chart& chart, const RealVector& z, const RealVector& z_ap,
                                                  const RealMatrix& m_h, double s) {
  require_in_h(m_h);
  const int d = static_cast<int>(m_h.rows());
  if (chart.dim != d) throw Error(Errc::invalid_dimension, "chart and section point dimensions differ");
  if (d > 3) throw Error(Errc::unsupported_dimension, "reduction of the associated element needs d in {2,3}");
  const ChartPoint pz = chart_matrix(chart, z);
  const ChartPoint pa = chart_matrix(chart, z_ap);
  if ((pz.v + pa.v).cwiseAbs().maxCoeff() > 1e-9 || std::abs(pz.c + pa.c) > 1e-9)
    throw Error(Errc::invalid_argument, "z and z_ap are not antipodal");

  AssociatedElement out;
  const RealMatrix p = m_h * diagonal_flow(-s, d);
  out.q = p * pz.e_inv * pa.e_inv.transpose();
  out.hrd = hrd_coords(out.q);
  const double s_q = -std::log(out.hrd.y[d - 1]) / (d - 1);
  out.reduced = grenier_reduce(out.hrd.m_h, s_q, ReductionGroup::gl).coords;
  out.height_p = section_coords(m_h, s).height;
  out.height_q = out.reduced.height;
  return out;
}

}  // namespace horolab
