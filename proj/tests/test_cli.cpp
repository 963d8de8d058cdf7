#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "couplex/cli.hpp"
#include "couplex/corpus.hpp"
#include "couplex/serialize.hpp"
#include "doctest.h"

using namespace couplex;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "couplex_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("golden outputs are byte-exact") {
  const std::vector<std::pair<std::string, std::vector<std::string>>> cases = {
      {"pages_example1.txt", {"pages", "--fixture", "example1"}},
      {"pages_example2.txt", {"pages", "--fixture", "example2"}},
      {"pages_empty.txt", {"pages", "--fixture", "empty"}},
      {"chain_example1.txt", {"chain", "--fixture", "example1"}},
      {"chain_example2.txt", {"chain", "--fixture", "example2"}},
      {"chain_gradient_sphere.txt", {"chain", "--fixture", "gradient_sphere"}},
      {"report_example1.txt", {"report", "--fixture", "example1"}},
      {"report_example2.txt", {"report", "--fixture", "example2"}},
      {"report_empty.txt", {"report", "--fixture", "empty"}},
      {"verify_example2.txt", {"verify", "--fixture", "example2", "-v"}},
      {"fixtures.txt", {"fixtures"}},
      {"pages_example1.json", {"pages", "--fixture", "example1", "--format", "json"}},
      {"chain_example2.json", {"chain", "--fixture", "example2", "--format", "json"}},
      {"fixture_example1.json", {"fixtures", "--fixture", "example1"}},
  };
  const bool update = std::getenv("COUPLEX_UPDATE_GOLDEN") != nullptr;
  for (const auto& [file, args] : cases) {
    CAPTURE(file);
    const auto r = cli(args);
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    const fs::path golden = fs::path(COUPLEX_GOLDEN_DIR) / file;
    if (update) write(golden, r.out);
    CHECK(r.out == slurp(golden));
    CHECK(cli(args).out == r.out);
  }
}

TEST_CASE("printed example matrices appear in the chain output") {
  const auto r1 = cli({"chain", "--fixture", "example1"});
  CHECK(r1.out.find("∂1: C1 -> C0\n  [0 1]\n  [0 1]\n  [1 0]\n") != std::string::npos);
  CHECK(r1.out.find("betti: (1, 0, 1)") != std::string::npos);
  const auto r2 = cli({"chain", "--fixture", "example2"});
  CHECK(r2.out.find("C2 dim 3") != std::string::npos);
  CHECK(r2.out.find("C1 dim 5") != std::string::npos);
  CHECK(r2.out.find("C0 dim 4") != std::string::npos);
  const auto rep = cli({"report", "--fixture", "example2"});
  CHECK(rep.out.find("counts M = (4, 5, 3)") != std::string::npos);
  CHECK(rep.out.find("Σ(-1)^q M_q = 2, Σ(-1)^q R_q = 2 (equal)") != std::string::npos);
}

TEST_CASE("every fixture verifies, in both modes and over Q where it makes sense") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto r = cli({"verify", "--fixture", name});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
  }
  CHECK(cli({"verify", "--fixture", "example1", "--mode", "chain"}).out.find("example1_chain") != std::string::npos);
  CHECK(cli({"verify", "--fixture", "example2_chain", "--mode", "pages"}).code == 0);
  for (const std::string name : {"torus", "sphere", "circle", "projective_plane", "annulus_pair"}) {
    CAPTURE(name);
    CHECK(cli({"verify", "--fixture", name, "--field", "Q"}).code == 0);
    CHECK(cli({"verify", "--fixture", name, "--field", "F3"}).code == 0);
  }
  const auto torus = cli({"chain", "--fixture", "torus", "--field", "Q", "--format", "json"});
  CHECK(torus.out.find("\"betti\": [\n    1,\n    2,\n    1\n  ]") != std::string::npos);
  const auto rp2 = cli({"report", "--fixture", "projective_plane", "--field", "Q"});
  CHECK(rp2.out.find("betti R = (1, 0, 0)") != std::string::npos);
}

TEST_CASE("input files, exports and --out") {
  const fs::path model = scratch("example2.json");
  REQUIRE(cli({"fixtures", "--fixture", "example2", "--out", model.string()}).code == 0);
  CHECK(model_from_json(slurp(model)) == *fixture("example2").model);
  const auto from_file = cli({"chain", "--input", model.string()});
  const auto from_fixture = cli({"chain", "--fixture", "example2"});
  CHECK(from_file.code == 0);
  CHECK(from_file.out.substr(from_file.out.find('\n')) == from_fixture.out.substr(from_fixture.out.find('\n')));

  const fs::path complex = scratch("torus.json");
  write(complex, to_json(torus_complex()));
  const auto pages = cli({"pages", "--input", complex.string(), "--format", "json"});
  REQUIRE(pages.code == 0);
  const auto ss = spectral_sequence_from_json(pages.out);
  CHECK(to_json(ss) == pages.out);
  CHECK(cli({"report", "--input", complex.string()}).out.find("betti R = (1, 2, 1)") != std::string::npos);

  const fs::path out = scratch("chain.txt");
  const auto quiet = cli({"chain", "--fixture", "example1", "--out", out.string()});
  CHECK(quiet.code == 0);
  CHECK(quiet.out.empty());
  CHECK(slurp(out) == cli({"chain", "--fixture", "example1"}).out);
}

TEST_CASE("corrupted d1 fails verification with a page-1 citation") {
  MorseSmaleModel m = example1_model();
  m.d1[{2, 0}] = Matrix::from_ints(FieldSpec{}, {{1}});
  const fs::path bad = scratch("bad_d1.json");
  write(bad, to_json(m));
  const auto v = cli({"verify", "--input", bad.string()});
  CHECK(v.code == 1);
  CHECK(v.out.find("FAIL spectral sequence: d∘d ≠ 0 on page 1") != std::string::npos);
  const auto c = cli({"chain", "--input", bad.string()});
  CHECK(c.code == 1);
  CHECK(c.err.find("page 1") != std::string::npos);
}

TEST_CASE("exit codes") {
  const fs::path junk = scratch("junk.json");
  write(junk, "{\"cells\": [");
  CHECK(cli({"pages", "--input", junk.string()}).code == 2);
  write(junk, R"({"nothing": true})");
  CHECK(cli({"pages", "--input", junk.string()}).code == 2);
  write(junk, R"({"field": "F2", "cells": [{"id": "e", "dim": 1, "level": 0, "boundary": {"v": "1"}}]})");
  const auto unknown_face = cli({"chain", "--input", junk.string()});
  CHECK(unknown_face.code == 1);
  CHECK(unknown_face.err.find("'e'") != std::string::npos);
  write(junk, R"({"ambient_dim": 1, "elements": [{"id": "a", "kind": "fixed", "index": 1, "attaches": ["b"]},
                                                 {"id": "b", "kind": "fixed", "index": 0, "attaches": ["a"]}]})");
  CHECK(cli({"verify", "--input", junk.string()}).code == 1);

  CHECK(cli({"pages", "--fixture", "klein_bottle"}).code == 2);
  CHECK(cli({"pages"}).code == 2);
  CHECK(cli({"pages", "--fixture", "example1", "--input", junk.string()}).code == 2);
  CHECK(cli({"pages", "--input", scratch("missing.json").string()}).code == 2);
  CHECK(cli({"pages", "--fixture", "example1", "--field", "F4"}).code == 2);
  CHECK(cli({"pages", "--fixture", "example1", "--format", "yaml"}).code == 2);
  CHECK(cli({"pages", "--fixture", "torus", "--mode", "chain"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}
