#pragma once

#include "horolab/algebra.hpp"
#include "horolab/lattice.hpp"

#include <optional>

namespace horolab {

struct IwasawaNAK {
  RealMatrix n, a, k;
};

IwasawaNAK iwasawa(const RealMatrix& M);
// M = R Q with R upper triangular, positive diagonal, Q orthogonal (det Q = sign det M).
void rq_positive(const RealMatrix& M, RealMatrix& R, RealMatrix& Q);

enum class ParityPrefix { none, minus_identity, tilde_reflection };
const char* parity_prefix_name(ParityPrefix p);
RealMatrix prefix_matrix(ParityPrefix p, int d);

struct HRdCoords {
  RealMatrix m_h;
  RealVector y;  // y_d > 0
  ParityPrefix prefix = ParityPrefix::none;

  RealMatrix m_y() const;
  RealMatrix reconstruct() const;
};

// M_y = [[y_d^{-1/(d-1)} I, 0], [y', y_d]]
RealMatrix y_matrix(const RealVector& y);
HRdCoords hrd_coords(const RealMatrix& M);

struct GrenierCoords {
  RealMatrix x;    // strictly upper part holds x_ij
  RealVector ys;   // y_1..y_{d-1}
  double height = 0.0;
  RealMatrix kprime;  // (d-1)x(d-1); det = +1 unless reduced over GL with det(gamma) = -1
  bool in_domain = false;

  double height_from_ys() const;
};

void require_in_h(const RealMatrix& m_h);
GrenierCoords section_coords(const RealMatrix& m_h, double s);
// Coordinates of any g whose bottom row is a positive multiple of e_d.
GrenierCoords section_coords_of(const RealMatrix& g);

enum class ReductionGroup { gl, sl };

struct GrenierReduction {
  IntegerMatrix gamma;
  RealMatrix reduced;  // gamma * input
  GrenierCoords coords;
};

GrenierReduction grenier_reduce(const RealMatrix& m_h, double s, ReductionGroup group = ReductionGroup::gl);
GrenierReduction grenier_reduce_element(const RealMatrix& g, ReductionGroup group = ReductionGroup::gl);
bool in_grenier_domain(const GrenierCoords& c, ReductionGroup group, double tol = 1e-9);

RealMatrix reverse_cholesky(const RealVector& u);
RealMatrix reverse_cholesky_recursive(const RealVector& u);

struct Chart {
  int dim = 2;
  double radius = 0.0;
  bool hemisphere() const;
  double domain_volume() const;
  void validate() const;
};

struct ChartPoint {
  RealMatrix e_inv;    // E(z)^{-1}
  RealMatrix a_block;  // top-left (d-1)x(d-1)
  RealVector w;        // top-right column
  RealVector v;        // bottom-left row
  double c = 1.0;
  RealVector zprime;
};

ChartPoint chart_matrix(const Chart& chart, const RealVector& z);
// Chart point with z'(z) = zp on the hemisphere branch, if inside the domain.
std::optional<RealVector> chart_point_from_zprime(const Chart& chart, const RealVector& zp);
std::optional<RealVector> antipode(const Chart& chart, const RealVector& z);
RealMatrix rotation_factor(const RealMatrix& ktilde, const Chart& chart, const RealVector& z);

struct AssociatedElement {
  RealMatrix q;
  HRdCoords hrd;
  GrenierCoords reduced;
  double height_p = 0.0, height_q = 0.0;
};

AssociatedElement associated_element_height_check(const Chart& chart, const RealVector& z, const RealVector& z_ap,
                                                  const RealMatrix& m_h, double s);

// Integer matrix in SL(d,Z) whose last row is the primitive vector v.
IntegerMatrix complete_to_sl(const PrimitiveVec& v);

}  // namespace horolab
