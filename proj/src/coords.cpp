#include "horolab/coords.hpp"

#include <cmath>

namespace horolab {

void rq_positive(const RealMatrix& M, RealMatrix& R, RealMatrix& Q) {
  const Eigen::Index d = M.rows();
  // QR of the column-reversed transpose gives RQ of M.
  const RealMatrix A = M.transpose().rowwise().reverse();
  Eigen::HouseholderQR<RealMatrix> qr(A);
  const RealMatrix r1 = qr.matrixQR().triangularView<Eigen::Upper>();
  const RealMatrix q1 = qr.householderQ();
  R = r1.transpose().colwise().reverse().rowwise().reverse();
  Q = q1.transpose().colwise().reverse();
  for (Eigen::Index i = 0; i < d; ++i)
    if (R(i, i) < 0) {
      R.col(i) *= -1.0;
      Q.row(i) *= -1.0;
    }
}

IwasawaNAK iwasawa(const RealMatrix& M) {
  require_square(M, "M");
  if (!is_unimodular(M, std::max(tolerance(), 1e-9))) throw Error(Errc::invalid_argument, "iwasawa needs a unimodular matrix");
  RealMatrix R, Q;
  rq_positive(M, R, Q);
  IwasawaNAK f;
  f.a = R.diagonal().asDiagonal();
  f.n = R * R.diagonal().cwiseInverse().asDiagonal();
  for (Eigen::Index i = 0; i < M.rows(); ++i) f.n(i, i) = 1.0;
  f.k = Q;
  return f;
}

const char* parity_prefix_name(ParityPrefix p) {
  switch (p) {
    case ParityPrefix::none: return "none";
    case ParityPrefix::minus_identity: return "minus-identity";
    case ParityPrefix::tilde_reflection: return "tilde-reflection";
  }
  return "none";
}

RealMatrix prefix_matrix(ParityPrefix p, int d) {
  switch (p) {
    case ParityPrefix::none: return RealMatrix::Identity(d, d);
    case ParityPrefix::minus_identity: return -RealMatrix::Identity(d, d);
    case ParityPrefix::tilde_reflection: return tilde_reflection(d).to_real();
  }
  return RealMatrix::Identity(d, d);
}

RealMatrix y_matrix(const RealVector& y) {
  const int d = static_cast<int>(y.size());
  if (d < 2 || !(y[d - 1] > 0)) throw Error(Errc::invalid_argument, "M_y needs y_d > 0");
  RealMatrix m = RealMatrix::Zero(d, d);
  const double lambda = std::pow(y[d - 1], -1.0 / (d - 1));
  for (int i = 0; i + 1 < d; ++i) m(i, i) = lambda;
  m.row(d - 1) = y.transpose();
  return m;
}

namespace {

RealMatrix y_matrix_inverse(const RealVector& y) {
  const int d = static_cast<int>(y.size());
  const double yd = y[d - 1];
  const double lambda = std::pow(yd, -1.0 / (d - 1));
  RealMatrix m = RealMatrix::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) {
    m(i, i) = 1.0 / lambda;
    m(d - 1, i) = -y[i] / (lambda * yd);
  }
  m(d - 1, d - 1) = 1.0 / yd;
  return m;
}

}  // namespace

RealMatrix HRdCoords::m_y() const { return y_matrix(y); }

RealMatrix HRdCoords::reconstruct() const {
  return prefix_matrix(prefix, static_cast<int>(m_h.rows())) * m_h * m_y();
}

HRdCoords hrd_coords(const RealMatrix& M) {
  require_square(M, "M");
  const int d = static_cast<int>(M.rows());
  HRdCoords h;
  const double yd = M(d - 1, d - 1);
  if (std::abs(yd) < 1e-12) throw Error(Errc::on_boundary, "bottom-right entry vanishes");
  RealMatrix base = M;
  if (yd < 0) {
    h.prefix = (d % 2 == 0) ? ParityPrefix::minus_identity : ParityPrefix::tilde_reflection;
    base = prefix_matrix(h.prefix, d) * M;
  }
  h.y = base.row(d - 1).transpose();
  h.m_h = base * y_matrix_inverse(h.y);
  h.m_h.row(d - 1).setZero();
  h.m_h(d - 1, d - 1) = 1.0;
  return h;
}

double GrenierCoords::height_from_ys() const {
  const int d = static_cast<int>(ys.size()) + 1;
  double log_sum = 0.0;
  for (int k = 1; k < d; ++k) log_sum += 2.0 * k * std::log(ys[k - 1]);
  return std::exp(log_sum / d);
}

void require_in_h(const RealMatrix& m_h) {
  require_square(m_h, "M_H");
  const int d = static_cast<int>(m_h.rows());
  const double tol = std::max(tolerance(), 1e-9) * std::max(1.0, max_abs(m_h));
  for (int j = 0; j + 1 < d; ++j)
    if (std::abs(m_h(d - 1, j)) > tol) throw Error(Errc::invalid_argument, "M_H bottom row must be (0,...,0,1)");
  if (std::abs(m_h(d - 1, d - 1) - 1.0) > tol) throw Error(Errc::invalid_argument, "M_H bottom row must be (0,...,0,1)");
  const RealMatrix block = m_h.topLeftCorner(d - 1, d - 1);
  if (std::abs(block.determinant() - 1.0) > std::max(tolerance(), 1e-9) * std::max(1.0, std::pow(max_abs(block), d - 1)))
    throw Error(Errc::invalid_argument, "M_H block must have determinant 1");
}

GrenierCoords section_coords_of(const RealMatrix& g) {
  const int d = static_cast<int>(g.rows());
  const double last = g(d - 1, d - 1);
  if (!(last > 0)) throw Error(Errc::invalid_argument, "section element needs a positive bottom-right entry");
  for (int j = 0; j + 1 < d; ++j)
    if (std::abs(g(d - 1, j)) > 1e-9 * std::max(1.0, max_abs(g)))
      throw Error(Errc::invalid_argument, "section element bottom row must be a multiple of e_d");
  RealMatrix R, Q;
  rq_positive(g, R, Q);
  GrenierCoords c;
  c.x = RealMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) c.x(i, j) = R(i, j) / R(j, j);
  c.ys.resize(d - 1);
  for (int i = 0; i + 1 < d; ++i) c.ys[i] = R(i, i) / R(i + 1, i + 1);
  c.height = 1.0 / (R(d - 1, d - 1) * R(d - 1, d - 1));
  c.kprime = Q.topLeftCorner(d - 1, d - 1);
  return c;
}

GrenierCoords section_coords(const RealMatrix& m_h, double s) {
  require_in_h(m_h);
  return section_coords_of(m_h * diagonal_flow(-s, static_cast<int>(m_h.rows())));
}

IntegerMatrix complete_to_sl(const PrimitiveVec& v) {
  const int d = static_cast<int>(v.size());
  if (d < 2) throw Error(Errc::invalid_dimension, "need d >= 2");
  if (!is_primitive(v)) throw Error(Errc::invalid_argument, "vector is not primitive");
  using i128 = __int128;
  std::vector<i128> r(v.begin(), v.end());
  // inverse of the accumulated column transform, built from row operations
  std::vector<std::vector<i128>> uinv(static_cast<std::size_t>(d), std::vector<i128>(static_cast<std::size_t>(d), 0));
  for (int i = 0; i < d; ++i) uinv[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  const std::size_t last = static_cast<std::size_t>(d - 1);
  auto ext_gcd = [](i128 a, i128 b, i128& x, i128& y) {
    i128 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
      const i128 q = a / b;
      i128 t = a - q * b;
      a = b;
      b = t;
      t = x0 - q * x1;
      x0 = x1;
      x1 = t;
      t = y0 - q * y1;
      y0 = y1;
      y1 = t;
    }
    if (a < 0) {
      a = -a;
      x0 = -x0;
      y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
  };
  for (std::size_t i = 0; i < last; ++i) {
    const i128 a = r[i], b = r[last];
    if (a == 0) continue;
    i128 x, y;
    const i128 g = ext_gcd(a, b, x, y);
    // columns (i, last) <- (col_i, col_last) * [[b/g, x], [-a/g, y]]; det = 1
    const i128 p = b / g, q = -a / g;
    r[i] = 0;
    r[last] = g;
    // inverse [[y, -x], [a/g, b/g]] applied to rows (i, last)
    auto& ri = uinv[i];
    auto& rl = uinv[last];
    for (std::size_t j = 0; j < static_cast<std::size_t>(d); ++j) {
      const i128 ni = y * ri[j] - x * rl[j];
      const i128 nl = -q * ri[j] + p * rl[j];
      ri[j] = ni;
      rl[j] = nl;
    }
  }
  if (r[last] != 1) {
    // only possible when v = -e_d-type input; flip two rows to fix the sign
    for (std::size_t j = 0; j < static_cast<std::size_t>(d); ++j) {
      uinv[last][j] = -uinv[last][j];
      uinv[0][j] = -uinv[0][j];
    }
  }
  IntegerMatrix gamma(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const i128 e = uinv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      gamma(i, j) = static_cast<long long>(e);
    }
  for (int j = 0; j < d; ++j)
    if (gamma(d - 1, j) != v[static_cast<std::size_t>(j)]) throw Error(Errc::internal_invariant, "SL completion lost the last row");
  if (gamma.det() != 1) throw Error(Errc::internal_invariant, "SL completion has determinant != 1");
  return gamma;
}

}  // namespace horolab
