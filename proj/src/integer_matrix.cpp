#include "horolab/algebra.hpp"

#include <sstream>

namespace horolab {

IntegerMatrix::IntegerMatrix(int dim) : dim_(dim), e_(static_cast<std::size_t>(dim * dim)) {
  if (dim < 1) throw Error(Errc::invalid_dimension, "integer matrix needs dim >= 1");
}

IntegerMatrix IntegerMatrix::identity(int dim) {
  IntegerMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

// Bareiss fraction-free elimination; exact.
BigInt IntegerMatrix::det() const {
  const int n = dim_;
  std::vector<BigInt> a = e_;
  auto at = [&](int i, int j) -> BigInt& { return a[static_cast<std::size_t>(i * n + j)]; };
  int sign = 1;
  BigInt prev = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      int piv = -1;
      for (int r = k + 1; r < n; ++r)
        if (at(r, k) != 0) {
          piv = r;
          break;
        }
      if (piv < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix& rhs) const {
  if (dim_ != rhs.dim_) throw Error(Errc::invalid_dimension, "integer matrix size mismatch");
  IntegerMatrix out(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int k = 0; k < dim_; ++k) {
      const BigInt& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < dim_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

RealMatrix IntegerMatrix::to_real() const {
  RealMatrix m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j).convert_to<double>();
  return m;
}

std::string IntegerMatrix::str() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < dim_; ++i) {
    os << (i ? ",[" : "[");
    for (int j = 0; j < dim_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace horolab
