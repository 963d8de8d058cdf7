#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "couplex/filtration.hpp"
#include "couplex/linalg.hpp"
#include "couplex/morse_smale.hpp"

namespace couplex {

/// Filtered CW model of the first sphere example (F2): sinks q0, q1, q2 at
/// level 0, the saddle s at level 1, the repelling orbit cells γ⁻, γ⁺ at level 2.
FilteredChainComplex example1_complex();
/// Filtered CW model of the second sphere example (F2).
FilteredChainComplex example2_complex();

/// The sphere examples as Morse-Smale models, in pages or chain mode.
MorseSmaleModel example1_model(ModelMode mode = ModelMode::pages);
MorseSmaleModel example2_model(ModelMode mode = ModelMode::pages);

/// Skeleton-filtered triangulations (level = simplex dimension).
FilteredChainComplex circle_complex(FieldSpec field = {});
FilteredChainComplex sphere_complex(FieldSpec field = {});
FilteredChainComplex torus_complex(FieldSpec field = {});
FilteredChainComplex projective_plane_complex(FieldSpec field = {});

/// Product cell complex; cell ids "a×b", level = max of the factor levels,
/// boundary by the graded Leibniz rule.
FilteredChainComplex product_complex(const FilteredChainComplex& a, const FilteredChainComplex& b);
/// Boundary of the k-simplex (a (k-1)-sphere), all at level 0.
FilteredChainComplex simplex_boundary(FieldSpec field, int k);
/// Δᵏ × S¹ with ∂Δᵏ × S¹ at level 0 and the remaining cells at level 1, so
/// that the level-1 relative homology is that of the pair.
FilteredChainComplex disk_circle_pair(FieldSpec field, int k);

struct KunnethReport {
  int k = 0;
  std::vector<long long> betti;
  std::vector<long long> expected;
  bool matches = false;
};
/// Betti numbers of S^{k-1} × S¹ from the product model, k = 1, 2, 3.
KunnethReport kunneth_check(int k, FieldSpec field = {});

struct PairReport {
  int k = 0;
  std::vector<long long> relative;
  std::vector<long long> expected_relative;
  std::vector<long long> absolute;
  std::vector<long long> expected_absolute;
  bool matches = false;
};
/// H(Dᵏ × S¹, S^{k-1} × S¹) and H(Dᵏ × S¹), k = 1, 2.
PairReport disk_circle_pair_check(int k, FieldSpec field = {});

/// Golden data attached to a fixture; empty fields are not checked.
struct FixtureExpectation {
  std::vector<long long> betti;
  std::vector<long long> chain_dims;
  std::map<Bidegree, std::size_t> first_page;
  std::map<Bidegree, std::size_t> infinity_page;
  /// Named matrices, e.g. "d1 1,0", "d2 2,-1", "boundary 1".
  std::map<std::string, Matrix> matrices;
  std::vector<long long> relative;  // pair fixtures: H of the pair
  std::string provenance;
};

struct Fixture {
  std::string name;
  std::string description;
  std::optional<MorseSmaleModel> model;
  std::optional<FilteredChainComplex> complex;
  bool is_pair = false;
  FixtureExpectation expected;
};

std::vector<std::string> fixture_names();
/// Throws ValidationError for unknown names.
Fixture fixture(const std::string& name);
/// The fixture over another field: triangulations and pairs are rebuilt with
/// oriented signs, hand-written F2 data is read with the same 0/1 entries.
/// Expectations are dropped unless `field` is F2.
Fixture fixture(const std::string& name, FieldSpec field);

/// Runs the pipeline on the fixture payload and lists every mismatch with
/// its expected data; empty when the fixture reproduces.
std::vector<std::string> check_fixture(const Fixture& f);

}  // namespace couplex
