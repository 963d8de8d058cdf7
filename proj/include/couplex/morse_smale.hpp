#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "couplex/chain_complex.hpp"
#include "couplex/exact_couple.hpp"
#include "couplex/filtration.hpp"

namespace couplex {

enum class ElementKind { fixed, orbit };

std::string to_string(ElementKind kind);
ElementKind parse_element_kind(const std::string& text);

struct CriticalElement {
  std::string id;
  ElementKind kind = ElementKind::fixed;
  int index = 0;
  /// Elements whose unstable manifolds meet the boundary of this one's.
  std::vector<std::string> attaches;

  /// Dimension of the unstable manifold: k for a fixed point, k + 1 for an orbit.
  int unstable_dim() const { return kind == ElementKind::fixed ? index : index + 1; }
  bool operator==(const CriticalElement&) const = default;
};

enum class ModelMode { pages, chain };

std::string to_string(ModelMode mode);
ModelMode parse_model_mode(const std::string& text);

/// Combinatorial Morse-Smale model. In pages mode the differentials are given
/// in the canonical page bases (first page: generators sorted by element id,
/// β⁻ before β⁺); in chain mode a filtered complex realizes the filtration.
struct MorseSmaleModel {
  int ambient_dim = 0;
  FieldSpec field;
  std::vector<CriticalElement> elements;
  ModelMode mode = ModelMode::pages;
  /// d¹ blocks keyed by source bidegree.
  std::map<Bidegree, Matrix> d1;
  /// Page number (>= 2) -> d blocks keyed by source bidegree.
  std::map<int, std::map<Bidegree, Matrix>> higher;
  std::optional<FilteredChainComplex> complex;

  bool operator==(const MorseSmaleModel&) const = default;
};

/// Generator names of an orbit β.
std::string orbit_minus(const std::string& id);
std::string orbit_plus(const std::string& id);

/// Ids, kinds, index bounds, attaches references, acyclicity and mode data.
/// Index-0 elements with attaches are left to zero_term_check.
std::optional<std::string> validate_model(const MorseSmaleModel& model);
void require_valid(const MorseSmaleModel& model);

/// Height in the attaches order: 0 without attaches, else 1 + max over the
/// attached elements. Throws ValidationError on cycles or unknown ids.
std::map<std::string, int> filtration_levels(const MorseSmaleModel& model);

/// Canonical first page: at (p, q) with r = p + q, one generator per index-r
/// fixed point at level p, β⁺ per index-(r-1) orbit and β⁻ per index-r orbit.
BigradedSpace first_page_dims(const MorseSmaleModel& model);

struct ZeroTermFinding {
  std::string check;  // "index-0 attaches", "(i)", "(ii)", "(iii)"
  std::string message;
};
struct ZeroTermReport {
  std::vector<ZeroTermFinding> findings;
  bool ok() const { return findings.empty(); }
};
ZeroTermReport zero_term_check(const MorseSmaleModel& model);

/// Pages mode assembles the supplied differentials; chain mode goes through
/// the filtration couple after checking its first page against first_page_dims.
SpectralSequence build_spectral_sequence(const MorseSmaleModel& model);

/// Canonical chain complex of the model's spectral sequence.
ChainComplex vector_field_chain_complex(const MorseSmaleModel& model);

/// M_q = |Fix_q| + |Orb_{q-1}| + |Orb_q| for q = 0 .. ambient_dim.
std::vector<long long> morse_counts(const MorseSmaleModel& model);

struct InequalityReport {
  std::vector<long long> morse;  // M_q
  std::vector<long long> betti;  // R_q
  std::vector<MorseInequality> rows;
  bool holds = false;            // all rows hold
  bool euler_equality = false;   // top-degree equality
};
/// `betti` must cover degrees 0 .. ambient_dim; trailing entries beyond must be zero.
InequalityReport morse_inequality_report(const MorseSmaleModel& model, const std::vector<long long>& betti);

/// Renames elements (and, in chain mode, the cells named after them). Page
/// blocks are transported to the canonical bases of the renamed model.
/// Throws ValidationError unless `renaming` is a bijection of the element ids
/// (ids not mentioned stay fixed).
MorseSmaleModel relabel(const MorseSmaleModel& model, const std::map<std::string, std::string>& renaming);

struct RandomModelBounds {
  int ambient_dim = 2;
  int max_elements = 8;
  /// Probability of an extra nonzero higher differential attempt per page.
  double density = 0.6;
  FieldSpec field;
};
/// Seed-deterministic pages-mode model with valid d∘d = 0 on every page.
MorseSmaleModel random_model(std::uint64_t seed, const RandomModelBounds& bounds = {});

}  // namespace couplex
