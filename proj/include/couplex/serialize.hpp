#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "couplex/chain_complex.hpp"
#include "couplex/exact_couple.hpp"
#include "couplex/filtration.hpp"
#include "couplex/morse_smale.hpp"

namespace couplex {

/// JSON text for each serializable structure (2-space indent, stable key
/// order). Parsers throw ParseError on malformed documents; `field` overrides
/// the document's field, reinterpreting every scalar literal in it.
std::string to_json(const FilteredChainComplex& f);
std::string to_json(const MorseSmaleModel& m);
std::string to_json(const ExactCouple& ec);
std::string to_json(const ChainComplex& c);
std::string to_json(const SpectralSequence& ss);

FilteredChainComplex complex_from_json(std::string_view text, std::optional<FieldSpec> field = {});
MorseSmaleModel model_from_json(std::string_view text, std::optional<FieldSpec> field = {});
ExactCouple couple_from_json(std::string_view text);
ChainComplex chain_complex_from_json(std::string_view text);
SpectralSequence spectral_sequence_from_json(std::string_view text);

enum class DocumentKind { model, complex };
/// A document with "elements" is a model, one with "cells" a filtered complex.
DocumentKind detect_document(std::string_view text);

}  // namespace couplex
