#include "horolab/algebra.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

namespace horolab {

namespace {
std::atomic<double> g_tolerance{1e-9};
}

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_dimension: return "invalid-dimension";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::empty_range: return "empty-range";
    case Errc::out_of_domain: return "out-of-domain";
    case Errc::outside_hemisphere: return "outside-hemisphere";
    case Errc::on_boundary: return "on-boundary";
    case Errc::unsupported_dimension: return "unsupported-dimension";
    case Errc::resource_exhausted: return "resource-exhausted";
    case Errc::internal_invariant: return "internal-invariant";
    case Errc::disjointness_violation: return "disjointness-violation";
    case Errc::unsupported_observable: return "unsupported-observable";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

double tolerance() { return g_tolerance.load(std::memory_order_relaxed); }

void set_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw Error(Errc::invalid_argument, "tolerance must be positive");
  g_tolerance.store(tol, std::memory_order_relaxed);
}

double load_tolerance_from_env() {
  if (const char* env = std::getenv("HOROLAB_TOLERANCE")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end == env || *end != '\0') throw Error(Errc::invalid_argument, "HOROLAB_TOLERANCE is not a number");
    set_tolerance(v);
  }
  return tolerance();
}

Constants constants(int d) {
  if (d < 2) throw Error(Errc::invalid_dimension, "d must be at least 2");
  Constants c{d, zeta(d), 1.0, 1.0};
  if (d >= 3) {
    double dm1 = d - 1;
    c.h0 = std::sqrt(static_cast<double>(d)) * std::pow(4.0 / 3.0, dm1 / 2.0);
    c.cd_lower = std::pow(0.75, dm1 / 2.0) / std::sqrt(static_cast<double>(d));
  }
  return c;
}

RealMatrix diagonal_flow(double t, int d) {
  if (d < 2) throw Error(Errc::invalid_dimension, "d must be at least 2");
  RealMatrix m = RealMatrix::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) m(i, i) = std::exp(-t);
  m(d - 1, d - 1) = std::exp((d - 1) * t);
  return m;
}

RealMatrix unipotent_stable(const RealVector& xt) {
  const int d = static_cast<int>(xt.size()) + 1;
  RealMatrix m = RealMatrix::Identity(d, d);
  m.block(d - 1, 0, 1, d - 1) = xt.transpose();
  return m;
}

RealMatrix unipotent_unstable(const RealVector& x) {
  const int d = static_cast<int>(x.size()) + 1;
  RealMatrix m = RealMatrix::Identity(d, d);
  m.block(0, d - 1, d - 1, 1) = x;
  return m;
}

std::pair<RealMatrix, RealMatrix> conjugate_flow_identity(double T, double T0, const RealVector& xt) {
  if (!(T > 0.0) || !(T0 > 0.0)) throw Error(Errc::invalid_argument, "T and T0 must be positive");
  const int d = static_cast<int>(xt.size()) + 1;
  const double u = std::log(T / T0) / d;
  RealMatrix lhs = unipotent_stable(xt);
  RealMatrix rhs = diagonal_flow(u, d) * unipotent_stable((T0 / T) * xt) * diagonal_flow(-u, d);
  return {lhs, rhs};
}

double zeta(int d) {
  if (d < 2) throw Error(Errc::invalid_dimension, "zeta needs d >= 2");
  // Partial sum plus Euler-Maclaurin tail; the dropped term is O(N^{-d-5}).
  constexpr int N = 1000;
  long double sum = 0.0L;
  for (int n = N; n >= 1; --n) sum += std::pow(static_cast<long double>(n), -static_cast<long double>(d));
  const long double n = N, s = d;
  long double tail = std::pow(n, 1 - s) / (s - 1) - std::pow(n, -s) / 2 + s * std::pow(n, -s - 1) / 12 -
                     s * (s + 1) * (s + 2) * std::pow(n, -s - 3) / 720;
  return static_cast<double>(sum + tail);
}

IntegerMatrix swap_element(int i, int d) {
  if (d < 2) throw Error(Errc::invalid_dimension, "d must be at least 2");
  if (i < 1 || i > d) throw Error(Errc::invalid_argument, "swap index out of range");
  IntegerMatrix s = IntegerMatrix::identity(d);
  if (i == d) return s;
  const int r = i - 1, last = d - 1;
  s(r, r) = 0;
  s(last, last) = 0;
  s(r, last) = 1;
  s(last, r) = -1;
  return s;
}

IntegerMatrix tilde_reflection(int d) {
  IntegerMatrix m = IntegerMatrix::identity(d);
  m(d - 1, d - 1) = -1;
  if (d >= 2) m(d - 2, d - 2) = -1;
  return m;
}

double max_abs(const RealMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool approx_equal(const RealMatrix& a, const RealMatrix& b, double rel) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double scale = std::max({1.0, max_abs(a), max_abs(b)});
  return max_abs(a - b) <= rel * scale;
}

bool is_unimodular(const RealMatrix& m, double rel) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  const double scale = std::max(1.0, std::pow(max_abs(m), static_cast<double>(m.rows())));
  return std::abs(m.determinant() - 1.0) <= rel * scale;
}

void require_square(const RealMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 2)
    throw Error(Errc::invalid_dimension, std::string(what) + " must be a square matrix of size >= 2");
  if (!m.allFinite()) throw Error(Errc::invalid_argument, std::string(what) + " has non-finite entries");
}

}  // namespace horolab
