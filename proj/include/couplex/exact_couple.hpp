#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "couplex/chain_complex.hpp"
#include "couplex/linalg.hpp"

namespace couplex {

struct Bidegree {
  int p = 0;
  int q = 0;

  int total() const { return p + q; }
  Bidegree operator+(const Bidegree& o) const { return {p + o.p, q + o.q}; }
  auto operator<=>(const Bidegree&) const = default;

  /// "p,q"
  std::string key() const;
  static Bidegree parse(const std::string& key);
};

/// Finitely supported bigraded vector space; each present term carries a
/// labeled basis. Absent bidegrees are zero.
struct BigradedSpace {
  std::map<Bidegree, LabeledBasis> terms;

  std::size_t dim(Bidegree b) const;
  const std::vector<std::string>& labels(Bidegree b) const;
  std::size_t total_dim(int n) const;
  /// Removes zero-dimensional terms.
  void prune();
  bool operator==(const BigradedSpace&) const = default;
};

/// Bigraded linear map of a fixed bidegree. blocks[src] is the matrix from
/// the term at src to the term at src + degree; missing blocks are zero.
struct BigradedMap {
  Bidegree degree;
  std::map<Bidegree, Matrix> blocks;

  /// Stored block or a zero matrix of shape rows x cols.
  Matrix block(Bidegree src, FieldSpec field, std::size_t rows, std::size_t cols) const;
  bool operator==(const BigradedMap&) const = default;
};

/// Exact couple (D, E, i, j, k) with bidegrees (1,-1), (-a,a), (-1,0).
///
/// When `colimit_level` c is set, D is constant above c: D_{p,q} is identified
/// with D_{c,q+p-c} for p > c, i is the identity from p = c onwards and j
/// vanishes for p > c. Only terms with p <= c are stored, no i block is stored
/// at p >= c and E is supported in p <= c. Filtration couples use c = top level.
struct ExactCouple {
  FieldSpec field;
  int order = 0;
  BigradedSpace D;
  BigradedSpace E;
  BigradedMap i{{1, -1}, {}};
  BigradedMap j{{0, 0}, {}};
  BigradedMap k{{-1, 0}, {}};
  std::optional<int> colimit_level;

  std::size_t d_dim(Bidegree b) const;
  std::vector<std::string> d_labels(Bidegree b) const;
  std::size_t e_dim(Bidegree b) const { return E.dim(b); }

  Matrix i_block(Bidegree src) const;
  Matrix j_block(Bidegree src) const;
  Matrix k_block(Bidegree src) const;
  /// i^r : D_src -> D_{src + r(1,-1)}; r = 0 gives the identity.
  Matrix i_power(Bidegree src, int r) const;

  /// Smallest and largest p over the supports of D and E (with the stable
  /// range of D counted up to c + 1). Empty couples give {0, -1}.
  std::pair<int, int> p_range() const;
  bool operator==(const ExactCouple&) const = default;
};

struct ExactnessViolation {
  std::string position;  // "ker(k)=im(j)", "ker(i)=im(k)", "ker(j)=im(i)", or "shape"
  Bidegree bidegree;
  std::string message;
};

/// Checks shapes, the stable-top convention, and the three exactness
/// equalities. Violations of ker(k)=im(j) are listed first, then ker(i)=im(k),
/// then ker(j)=im(i), each in increasing bidegree.
std::vector<ExactnessViolation> exactness_violations(const ExactCouple& ec);
std::optional<ExactnessViolation> validate_exactness(const ExactCouple& ec);

/// D' = i(D), E' = H(E, jk). Throws ValidationError on an inexact input.
ExactCouple derived_couple(const ExactCouple& ec);
/// E^(r) = Z^(r)/B^(r), D^(r) = i^r(D), built directly from the subspaces.
ExactCouple rth_derived(const ExactCouple& ec, int r);

/// One page of a spectral sequence. terms[b] is E^(r)_b realized as a
/// subquotient Z^(r)_b / B^(r)_b of the first page, d has bidegree
/// (-number, number - 1) and is expressed in the subquotient bases.
struct Page {
  int number = 1;
  std::map<Bidegree, Subquotient> terms;
  BigradedMap d;

  std::size_t dim(Bidegree b) const;
};

struct SpectralSequence {
  FieldSpec field;
  int start_page = 1;          // a + 1
  BigradedSpace first;         // E^(a+1) with its labels
  std::vector<Page> pages;     // pages[r] has number start_page + r
  std::vector<std::map<Bidegree, Subspace>> Z;  // Z[r]_b ⊆ first_b, r = 0..stable_r
  std::vector<std::map<Bidegree, Subspace>> B;
  int stable_r = 0;

  /// Page number from which every later differential vanishes.
  int stabilization_page() const { return start_page + stable_r; }
  const Page& infinity() const { return pages.back(); }
  /// Z^(r) and B^(r), constant for r >= stable_r.
  const std::map<Bidegree, Subspace>& z(int r) const { return Z[static_cast<std::size_t>(std::min(r, stable_r))]; }
  const std::map<Bidegree, Subspace>& b(int r) const { return B[static_cast<std::size_t>(std::min(r, stable_r))]; }
};

/// Spectral sequence of an exact couple. Z and B come from the direct
/// formulas and are cross-checked against the page recursion (InternalError
/// on disagreement); d∘d = 0 is asserted on every page.
SpectralSequence spectral_sequence(const ExactCouple& ec);

/// Spectral sequence from a first page and supplied differentials.
/// differentials[s] is d on page s (s >= start_page) in that page's canonical
/// subquotient bases. Throws ValidationError on shape mismatches or d∘d ≠ 0.
SpectralSequence sequence_from_pages(FieldSpec field, int start_page, const BigradedSpace& first,
                                     const std::map<int, BigradedMap>& differentials);

BigradedSpace infinity_page(const SpectralSequence& ss);

struct LimitHomology {
  std::size_t dim = 0;
  LabeledBasis basis;
};
/// lim_p D_{p,n-p}: the stable term D_{c,n-c}, or zero without a colimit level.
LimitHomology limit_homology(const ExactCouple& ec, int n);

/// Summand layout used when assembling C(E).
enum class ChainLayout {
  automatic,  // surface when applicable, strict otherwise
  strict,     // per bidegree: B1/B0 .. Bn/Bn-1, Zn/Bn, Zn-1/Zn .. Z0/Z1
  surface,    // the merged two-dimensional layout (start page 1, support in p <= 2 rows)
};

/// Whether the surface layout applies: start page 1 and first-page support
/// inside {(0,0),(0,1),(1,0),(1,1),(2,0),(2,-1)}.
bool surface_layout_applies(const SpectralSequence& ss);

ChainComplex chain_complex_of_sequence(const SpectralSequence& ss, ChainLayout layout = ChainLayout::automatic);
ChainComplex couple_chain_complex(const ExactCouple& ec, ChainLayout layout = ChainLayout::automatic);

struct InfinityComparison {
  bool matches = true;
  int lowest_degree = 0;                 // degree of the first entry below
  std::vector<long long> betti;          // of C(E)
  std::vector<long long> infinity_dims;  // Σ_{p+q=n} dim E^∞_{p,q}
};
InfinityComparison compare_homology_with_infinity(const SpectralSequence& ss, const ChainComplex& c);
InfinityComparison homology_matches_infinity(const ExactCouple& ec);

/// Σ_{p+q=n} dim of the terms, keyed by total degree n.
std::map<int, std::size_t> diagonal_dims(const Page& page);
std::map<int, std::size_t> diagonal_dims(const BigradedSpace& space);

}  // namespace couplex
