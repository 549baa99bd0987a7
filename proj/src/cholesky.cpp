#include "horolab/coords.hpp"

#include <cmath>

namespace horolab {

// B with B tB = I + tu u, B upper triangular; closed form per column.
RealMatrix reverse_cholesky(const RealVector& u) {
  const Eigen::Index l = u.size();
  if (l < 1) throw Error(Errc::invalid_dimension, "reverse_cholesky needs length >= 1");
  RealMatrix b = RealMatrix::Zero(l, l);
  double tail = 1.0;  // 1 + sum_{m > n} u_m^2
  for (Eigen::Index n = l - 1; n >= 0; --n) {
    const double un = u[n];
    const double head = tail + un * un;
    b(n, n) = std::sqrt(head / tail);
    const double scale = un / std::sqrt(tail * head);
    for (Eigen::Index i = 0; i < n; ++i) b(i, n) = u[i] * scale;
    tail = head;
  }
  return b;
}

RealMatrix reverse_cholesky_recursive(const RealVector& u) {
  const Eigen::Index l = u.size();
  if (l < 1) throw Error(Errc::invalid_dimension, "reverse_cholesky needs length >= 1");
  RealMatrix c = RealMatrix::Identity(l, l) + u * u.transpose();
  RealMatrix b = RealMatrix::Zero(l, l);
  for (Eigen::Index n = l - 1; n >= 0; --n) {
    const double beta = std::sqrt(c(n, n));
    b(n, n) = beta;
    if (n == 0) break;
    const RealVector r = c.block(0, n, n, 1);
    b.block(0, n, n, 1) = r / beta;
    const RealMatrix next = c.topLeftCorner(n, n) - r * r.transpose() / (beta * beta);
    c = next;
  }
  return b;
}

}  // namespace horolab
