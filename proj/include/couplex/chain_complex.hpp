#pragma once

#include <optional>
#include <string>
#include <vector>

#include "couplex/linalg.hpp"

namespace couplex {

/// A bounded chain complex of based vector spaces in degrees
/// lowest_degree .. lowest_degree + bases.size() - 1. Every other degree is zero.
///
/// boundaries[k] is the matrix of ∂ : C_n -> C_{n-1} for n = lowest_degree + k,
/// of shape dim C_{n-1} x dim C_n (so boundaries[0] has zero rows).
struct ChainComplex {
  FieldSpec field;
  int lowest_degree = 0;
  std::vector<LabeledBasis> bases;
  std::vector<Matrix> boundaries;

  /// Builds a complex whose basis vectors are the standard vectors and fills
  /// in the boundary of the lowest degree. `boundaries_above_lowest[k]` is ∂ in
  /// degree lowest + 1 + k.
  static ChainComplex from_labels(FieldSpec field, int lowest, std::vector<std::vector<std::string>> labels,
                                  std::vector<Matrix> boundaries_above_lowest);

  bool empty() const { return bases.empty(); }
  int highest_degree() const { return lowest_degree + static_cast<int>(bases.size()) - 1; }
  bool in_range(int n) const { return n >= lowest_degree && n <= highest_degree(); }
  std::size_t dim(int n) const;
  const std::vector<std::string>& labels(int n) const;
  /// ∂_n, a zero matrix of the right shape outside the stored range.
  Matrix boundary(int n) const;
  /// dim C_n for n = 0 .. highest_degree (negative degrees must be empty).
  std::vector<long long> dims_from_zero() const;
};

struct ChainViolation {
  int degree;
  std::string message;
};

/// Checks shapes and ∂∘∂ = 0; reports the first offending degree n (the
/// degree of the source of ∂_{n-1}∘∂_n).
std::optional<ChainViolation> validate(const ChainComplex& c);

struct HomologyResult {
  int lowest_degree = 0;
  std::vector<std::size_t> betti;
  std::vector<LabeledBasis> cycle_basis;

  std::size_t betti_at(int n) const;
  /// Betti numbers for degrees 0 .. highest stored degree.
  std::vector<long long> betti_from_zero() const;
};

/// Homology with representatives: the kernel RREF basis reduced modulo the
/// image. Throws ValidationError if the complex is invalid.
HomologyResult homology(const ChainComplex& c);

long long euler_characteristic(const ChainComplex& c);

struct MorseInequality {
  int degree = 0;
  long long lhs = 0;  // Σ_{i≤q} (-1)^{q+i} M_i
  long long rhs = 0;  // Σ_{i≤q} (-1)^{q+i} R_i
  bool holds = false;
  /// Set on the top degree (largest q with M_q or R_q nonzero), where the
  /// inequality must be an equality of Euler characteristics.
  bool top = false;
  bool equality = false;
};

/// One report per degree q = 0 .. len-1. Throws ValidationError on unequal
/// lengths or negative entries.
std::vector<MorseInequality> morse_inequalities(const std::vector<long long>& dims,
                                                const std::vector<long long>& betti);

/// True iff every inequality holds and the top-degree equality holds.
bool morse_inequalities_hold(const std::vector<MorseInequality>& report);

}  // namespace couplex
