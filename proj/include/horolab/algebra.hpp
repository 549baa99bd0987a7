#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace horolab {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Errc {
  invalid_dimension,
  invalid_argument,
  empty_range,
  out_of_domain,
  outside_hemisphere,
  on_boundary,
  unsupported_dimension,
  resource_exhausted,
  internal_invariant,
  disjointness_violation,
  unsupported_observable,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Relative tolerance for group identities on the max-norm.
double tolerance();
void set_tolerance(double tol);
// Reads HOROLAB_TOLERANCE if set; returns the active value.
double load_tolerance_from_env();

class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  explicit IntegerMatrix(int dim);
  static IntegerMatrix identity(int dim);

  int dim() const { return dim_; }
  BigInt& operator()(int i, int j) { return e_[static_cast<std::size_t>(i * dim_ + j)]; }
  const BigInt& operator()(int i, int j) const { return e_[static_cast<std::size_t>(i * dim_ + j)]; }

  BigInt det() const;
  IntegerMatrix operator*(const IntegerMatrix& rhs) const;
  bool operator==(const IntegerMatrix& rhs) const = default;
  RealMatrix to_real() const;
  std::string str() const;

 private:
  int dim_ = 0;
  std::vector<BigInt> e_;
};

struct Constants {
  int d;
  double zeta_d;
  double h0;
  double cd_lower;
};

Constants constants(int d);

RealMatrix diagonal_flow(double t, int d);
// n_+(xt): xt sits in the bottom-left row block.
RealMatrix unipotent_stable(const RealVector& xt);
// n_-(x): x sits in the top-right column block.
RealMatrix unipotent_unstable(const RealVector& x);

// Both sides of n_+(xt) = Phi^u n_+((T0/T) xt) Phi^-u, u = log(T/T0)/d.
std::pair<RealMatrix, RealMatrix> conjugate_flow_identity(double T, double T0, const RealVector& xt);

double zeta(int d);

// Row i <- e_d, row d <- -e_i (1-based), det +1.
IntegerMatrix swap_element(int i, int d);
// diag(1,..,1,-1 at d-1, -1): the odd-d parity prefix.
IntegerMatrix tilde_reflection(int d);

double max_abs(const RealMatrix& m);
// ||a - b||_max <= rel * max(1, ||a||_max, ||b||_max)
bool approx_equal(const RealMatrix& a, const RealMatrix& b, double rel);
bool is_unimodular(const RealMatrix& m, double rel);

void require_square(const RealMatrix& m, const char* what);

}  // namespace horolab
