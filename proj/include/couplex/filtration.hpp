#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "couplex/chain_complex.hpp"
#include "couplex/exact_couple.hpp"

namespace couplex {

struct Cell {
  std::string id;
  int dim = 0;
  int level = 0;
  /// Sparse boundary: (face id, coefficient).
  std::vector<std::pair<std::string, Scalar>> boundary;

  bool operator==(const Cell&) const = default;
};

/// A finite cell complex with a filtration level per cell. L_p is the
/// subcomplex of cells with level <= p. Cells keep their input order inside
/// each dimension; that order fixes all chain bases.
struct FilteredChainComplex {
  FieldSpec field;
  std::vector<Cell> cells;

  /// -1 for an empty complex.
  int max_level() const;
  int max_dim() const;
  bool operator==(const FilteredChainComplex&) const = default;
};

/// Checks ids, dimensions, levels, face references, level monotonicity and
/// ∂∘∂ = 0. Returns a message naming the offending cell.
std::optional<std::string> validate_filtered(const FilteredChainComplex& f);
/// Throws ValidationError with the message of validate_filtered.
void require_valid(const FilteredChainComplex& f);

/// Subcomplex L_p (empty for p < 0), degrees 0 .. max_dim.
ChainComplex level_complex(const FilteredChainComplex& f, int p);
/// Quotient complex C(L_p)/C(L_{p-1}): level-p cells with boundaries truncated
/// to level-p faces, degrees 0 .. max_dim.
ChainComplex quotient_complex(const FilteredChainComplex& f, int p);

/// H_n(L_p, L_{p-1}) for n = 0 .. max_dim, bases in coordinates of the level-p
/// cells of each dimension.
std::vector<LabeledBasis> relative_homology(const FilteredChainComplex& f, int p);
/// H_n(L_p, L_{p-1}) -> H_{n-1}(L_{p-1}) in the bases of relative_homology
/// and of homology(level_complex(f, p-1)).
Matrix connecting_map(const FilteredChainComplex& f, int p, int n);

/// Matrices of the long exact sequences of the pairs (L_p, L_{p-1}), keyed
/// by (p, n) with n the degree of the source:
///   i[(p,n)] : H_n(L_p) -> H_n(L_{p+1})          (p < max level)
///   j[(p,n)] : H_n(L_p) -> H_n(L_p, L_{p-1})
///   k[(p,n)] : H_n(L_p, L_{p-1}) -> H_{n-1}(L_{p-1})
struct LesMaps {
  std::map<std::pair<int, int>, Matrix> i, j, k;
};
LesMaps les_maps(const FilteredChainComplex& f);

/// D_{p,q} = H_{p+q}(L_p), E_{p,q} = H_{p+q}(L_p, L_{p-1}), order 0, colimit
/// level = max level.
ExactCouple exact_couple_of_filtration(const FilteredChainComplex& f);

/// Betti numbers of the whole complex, degrees 0 .. max_dim.
std::vector<long long> total_homology(const FilteredChainComplex& f);

struct RandomComplexBounds {
  int max_vertices = 6;
  int max_dim = 3;
  int max_level = 3;
  int max_facets = 6;
  FieldSpec field;
};
/// Seed-deterministic random simplicial complex, oriented boundaries, with a
/// level function that is monotone on faces.
FilteredChainComplex random_filtered_complex(std::uint64_t seed, const RandomComplexBounds& bounds = {});

/// Simplicial complex from facets (vertex lists), closed under faces, with
/// oriented boundaries. Cell ids join the sorted vertex names with '-'. With
/// `skeleton_levels` each simplex sits at level = its dimension, otherwise
/// everything is at level 0.
FilteredChainComplex simplicial_complex(FieldSpec field, const std::vector<std::vector<std::string>>& facets,
                                        bool skeleton_levels = true);

}  // namespace couplex
