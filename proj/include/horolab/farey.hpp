#pragma once

#include "horolab/algebra.hpp"
#include "horolab/lattice.hpp"

#include <optional>
#include <vector>

namespace horolab {

// Axis-aligned box; lower faces closed, upper faces open unless closed_upper.
struct Box {
  RealVector lo, hi;
  bool closed_upper = false;

  static Box unit(int dim);
  static Box cube(int dim, double lo, double hi, bool closed_upper = false);
  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  bool contains(const RealVector& p, double tol = 1e-12) const;
  void validate() const;
};

struct TranslatedFareyPoint {
  PrimitiveVec source;
  RealVector alpha_prime;
  double alpha_d = 0.0;
  RealVector point;
};

// The lattice used for translated Farey points: rows of tL^{-1}.
RealMatrix farey_basis(const RealMatrix& L);

std::vector<TranslatedFareyPoint> enumerate_farey(int d, double Q, Exec exec = Exec::parallel);
std::vector<TranslatedFareyPoint> enumerate_translated_farey(const RealMatrix& L, double Q, const Box& box,
                                                             Exec exec = Exec::parallel,
                                                             std::uint64_t budget = 200'000'000ULL);

// Region of sources with 0 < alpha_d <= q_max and alpha'/alpha_d in box.
LatticeRegion translated_farey_region(const RealMatrix& L, double q_max, const Box& box);
TranslatedFareyPoint make_farey_point(const RealMatrix& basis, const PrimitiveVec& source);

struct FareyCount {
  std::uint64_t exact = 0;
  double asymptotic = 0.0;
};

FareyCount count_farey(int d, double Q);
// Jordan totient J_k(n) for n <= limit via a linear sieve.
std::vector<std::uint64_t> jordan_totients(int k, std::int64_t limit);

struct DuplicateRegion {
  enum class Kind { all, torus };
  Kind kind = Kind::torus;
  RealMatrix period_basis;  // rows generate the period lattice
};

DuplicateRegion duplicate_region(const RealMatrix& L, bool generic = false);
// Does box A fit into one fundamental cell of the period lattice?
bool fits_in_cell(const DuplicateRegion& region, const Box& A);

using RationalMatrix = std::vector<std::vector<Rational>>;

bool is_gamma_duplicate(const RealMatrix& L, const RealVector& s);
bool is_gamma_duplicate(const RationalMatrix& L, const std::vector<Rational>& s);
RealMatrix to_real(const RationalMatrix& m);

}  // namespace horolab
