#include "couplex/corpus.hpp"
#include "couplex/errors.hpp"
#include "couplex/serialize.hpp"
#include "doctest.h"

using namespace couplex;

namespace {

void check_same(const ChainComplex& a, const ChainComplex& b) {
  CHECK(a.field == b.field);
  CHECK(a.lowest_degree == b.lowest_degree);
  CHECK(a.bases == b.bases);
  CHECK(a.boundaries == b.boundaries);
}

}  // namespace

TEST_CASE("filtered complexes round-trip") {
  for (const auto& f : {example1_complex(), torus_complex(FieldSpec::rational()), projective_plane_complex(),
                        disk_circle_pair(FieldSpec::prime(5), 2), FilteredChainComplex{}}) {
    CHECK(complex_from_json(to_json(f)) == f);
  }
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RandomComplexBounds bounds;
    bounds.field = seed % 2 ? FieldSpec::rational() : FieldSpec::prime(3);
    const auto f = random_filtered_complex(seed, bounds);
    CHECK(complex_from_json(to_json(f)) == f);
  }
}

TEST_CASE("complex input in the documented shape") {
  const auto f = complex_from_json(R"({"field": "F2", "cells": [
      {"id": "v0", "dim": 0, "level": 0},
      {"id": "v1", "dim": 0, "level": 0},
      {"id": "e3", "dim": 1, "level": 1, "boundary": {"v0": "1", "v1": "1"}}]})");
  REQUIRE(f.cells.size() == 3);
  CHECK(f.cells[2].boundary.size() == 2);
  CHECK(f.cells[2].boundary[1].first == "v1");
  CHECK(total_homology(f) == std::vector<long long>{1, 0});

  const auto q = complex_from_json(to_json(f), FieldSpec::rational());
  CHECK(q.field == FieldSpec::rational());
  CHECK(q.cells[2].boundary[0].second == Scalar::one(FieldSpec::rational()));
}

TEST_CASE("models round-trip") {
  for (auto mode : {ModelMode::pages, ModelMode::chain}) {
    for (const auto& m : {example1_model(mode), example2_model(mode)}) CHECK(model_from_json(to_json(m)) == m);
  }
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    RandomModelBounds bounds;
    bounds.field = seed % 3 == 0 ? FieldSpec::rational() : FieldSpec{};
    const auto m = random_model(seed, bounds);
    CHECK(model_from_json(to_json(m)) == m);
  }
  for (const auto& name : fixture_names()) {
    const auto fx = fixture(name);
    if (fx.model) CHECK(model_from_json(to_json(*fx.model)) == *fx.model);
    if (fx.complex) CHECK(complex_from_json(to_json(*fx.complex)) == *fx.complex);
  }
}

TEST_CASE("model input with integer matrix entries") {
  const auto m = model_from_json(R"({"ambient_dim": 2, "field": "F2",
      "elements": [{"id": "q1", "kind": "fixed", "index": 0, "attaches": []},
                   {"id": "q2", "kind": "fixed", "index": 0, "attaches": []},
                   {"id": "s", "kind": "fixed", "index": 1, "attaches": ["q1", "q2"]}],
      "mode": "pages", "d1": {"1,0": [[1], [1]]}, "higher": {}})");
  CHECK(m.d1.at({1, 0}) == Matrix::from_ints(FieldSpec{}, {{1}, {1}}));
  CHECK_FALSE(validate_model(m));
  CHECK(model_from_json(to_json(m)) == m);
}

TEST_CASE("couples, chain complexes and spectral sequences round-trip") {
  std::vector<ExactCouple> couples;
  for (const auto& f : {example1_complex(), example2_complex(), torus_complex(FieldSpec::rational())})
    couples.push_back(exact_couple_of_filtration(f));
  couples.push_back(derived_couple(couples[0]));
  couples.push_back(ExactCouple{});
  for (std::uint64_t seed = 0; seed < 20; ++seed) couples.push_back(exact_couple_of_filtration(random_filtered_complex(seed)));

  for (const auto& ec : couples) {
    CHECK(couple_from_json(to_json(ec)) == ec);
    const auto ss = spectral_sequence(ec);
    const std::string text = to_json(ss);
    const auto back = spectral_sequence_from_json(text);
    CHECK(to_json(back) == text);
    CHECK(back.stabilization_page() == ss.stabilization_page());
    CHECK(back.Z == ss.Z);
    CHECK(back.B == ss.B);
    CHECK(back.first == ss.first);
    const auto c = chain_complex_of_sequence(ss);
    check_same(chain_complex_from_json(to_json(c)), c);
    check_same(chain_complex_of_sequence(back), c);
  }
  const auto m = example2_model();
  const auto ss = build_spectral_sequence(m);
  CHECK(to_json(spectral_sequence_from_json(to_json(ss))) == to_json(ss));
}

TEST_CASE("emitted text is deterministic and readable") {
  const auto text = to_json(example1_model());
  CHECK(text == to_json(example1_model()));
  CHECK(text.find("\"ambient_dim\": 2") != std::string::npos);
  CHECK(text.find("\"1,0\"") != std::string::npos);
  const auto chain = to_json(vector_field_chain_complex(example1_model()));
  CHECK(chain.find("\"rows\": 0") != std::string::npos);
  CHECK(chain.find("\"cols\": 3") != std::string::npos);
}

TEST_CASE("malformed documents raise ParseError") {
  CHECK_THROWS_AS(complex_from_json("{"), ParseError);
  CHECK_THROWS_AS(complex_from_json("[]"), ParseError);
  CHECK_THROWS_AS(complex_from_json(R"({"cells": [{"id": "a", "dim": "zero", "level": 0}]})"), ParseError);
  CHECK_THROWS_AS(complex_from_json(R"({"field": "F4", "cells": []})"), Error);
  CHECK_THROWS_AS(model_from_json(R"({"elements": []})"), ParseError);
  CHECK_THROWS_AS(model_from_json(R"({"ambient_dim": 1, "elements": [{"id": "a", "kind": "saddle", "index": 0}]})"),
                  ParseError);
  CHECK_THROWS_AS(model_from_json(R"({"ambient_dim": 1, "elements": [], "d1": {"1;0": [[1]]}})"), ParseError);
  CHECK_THROWS_AS(model_from_json(R"({"ambient_dim": 1, "elements": [], "d1": {"1,0": [[1], [1, 0]]}})"),
                  ParseError);
  CHECK_THROWS_AS(model_from_json(R"({"ambient_dim": 1, "elements": [], "higher": {"two": {}}})"), ParseError);
  CHECK_THROWS_AS(detect_document(R"({"foo": 1})"), ParseError);
  CHECK(detect_document(to_json(example1_model())) == DocumentKind::model);
  CHECK(detect_document(to_json(circle_complex())) == DocumentKind::complex);
}
