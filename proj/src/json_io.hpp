#pragma once
// Internal JSON conversions shared by serialize.cpp and cli.cpp.

#include <optional>

#include "couplex/chain_complex.hpp"
#include "couplex/exact_couple.hpp"
#include "couplex/filtration.hpp"
#include "couplex/morse_smale.hpp"
#include "json.hpp"

namespace couplex::json_io {

using Json = nlohmann::ordered_json;

Json parse_text(std::string_view text);

Json scalar_json(const Scalar& s);
Scalar scalar_from(const Json& j, FieldSpec field);
Json matrix_json(const Matrix& m);
Matrix matrix_from(const Json& j, FieldSpec field);
Json basis_json(const LabeledBasis& b);
LabeledBasis basis_from(const Json& j, FieldSpec field);
Json space_json(const BigradedSpace& s);
BigradedSpace space_from(const Json& j, FieldSpec field);
Json blocks_json(const std::map<Bidegree, Matrix>& blocks);
std::map<Bidegree, Matrix> blocks_from(const Json& j, FieldSpec field);
Json map_json(const BigradedMap& m);
BigradedMap map_from(const Json& j, FieldSpec field);

Json complex_json(const FilteredChainComplex& f);
FilteredChainComplex complex_from(const Json& j, std::optional<FieldSpec> field);
Json model_json(const MorseSmaleModel& m);
MorseSmaleModel model_from(const Json& j, std::optional<FieldSpec> field);
Json couple_json(const ExactCouple& ec);
ExactCouple couple_from(const Json& j);
Json chain_json(const ChainComplex& c);
ChainComplex chain_from(const Json& j);
Json sequence_json(const SpectralSequence& ss);
SpectralSequence sequence_from(const Json& j);

}  // namespace couplex::json_io
