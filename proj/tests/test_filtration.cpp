#include "couplex/corpus.hpp"
#include "couplex/errors.hpp"
#include "couplex/exact_couple.hpp"
#include "couplex/filtration.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace couplex;

namespace {

const FieldSpec F2;

Cell cell(std::string id, int dim, int level, std::vector<std::pair<std::string, long>> faces, FieldSpec f = F2) {
  Cell c{std::move(id), dim, level, {}};
  for (auto& [face, coeff] : faces) c.boundary.emplace_back(face, Scalar(f, coeff));
  return c;
}

// Two level-0 vertices joined by a level-1 edge.
FilteredChainComplex interval() { return {F2, {cell("v0", 0, 0, {}), cell("v1", 0, 0, {}), cell("e", 1, 1, {{"v0", 1}, {"v1", 1}})}}; }

// Triangle boundary with vertices at level 0 and edges at level 1.
FilteredChainComplex triangle() { return circle_complex(); }

std::vector<long long> dims_of(const ChainComplex& c) {
  std::vector<long long> out;
  for (int n = 0; n <= c.highest_degree(); ++n) out.push_back(static_cast<long long>(c.dim(n)));
  return out;
}

std::vector<long long> relative_dims(const FilteredChainComplex& f, int p) {
  std::vector<long long> out;
  for (const auto& b : relative_homology(f, p)) out.push_back(static_cast<long long>(b.size()));
  return out;
}

}  // namespace

TEST_CASE("level complexes") {
  const auto t = triangle();
  CHECK(dims_of(level_complex(t, -1)) == std::vector<long long>{0, 0});
  CHECK(dims_of(level_complex(t, 0)) == std::vector<long long>{3, 0});
  CHECK(dims_of(level_complex(t, 1)) == std::vector<long long>{3, 3});
  CHECK(dims_of(level_complex(t, 7)) == std::vector<long long>{3, 3});
  CHECK(level_complex(t, 0).labels(0) == std::vector<std::string>{"v0", "v1", "v2"});
}

TEST_CASE("relative homology and the connecting map of the interval") {
  const auto f = interval();
  CHECK(relative_dims(f, 1) == std::vector<long long>{0, 1});
  CHECK(relative_dims(f, 0) == std::vector<long long>{2, 0});
  CHECK(relative_dims(f, 5) == std::vector<long long>{0, 0});
  CHECK(connecting_map(f, 1, 1) == Matrix::from_ints(F2, {{1}, {1}}));
  CHECK(connecting_map(f, 3, 1).is_zero());
  CHECK(connecting_map(f, 3, 1).cols() == 0);
}

TEST_CASE("connecting map of the first example vanishes on γ⁺") {
  const auto f = example1_complex();
  const auto rel = relative_homology(f, 2);
  REQUIRE(rel[2].labels == std::vector<std::string>{"γ⁺"});
  const Matrix k = connecting_map(f, 2, 2);
  CHECK(k.cols() == 1);
  CHECK(k.is_zero());
}

TEST_CASE("circle couple") {
  const auto ec = exact_couple_of_filtration(triangle());
  CHECK(ec.e_dim({0, 0}) == 3);
  CHECK(ec.e_dim({1, 0}) == 3);
  CHECK_FALSE(validate_exactness(ec));
  CHECK(limit_homology(ec, 0).dim == 1);
  CHECK(limit_homology(ec, 1).dim == 1);
  CHECK(limit_homology(ec, 2).dim == 0);
}

TEST_CASE("empty filtration gives the zero couple") {
  const auto ec = exact_couple_of_filtration(FilteredChainComplex{});
  CHECK(ec.D.terms.empty());
  CHECK(ec.E.terms.empty());
  CHECK_FALSE(ec.colimit_level);
  CHECK_FALSE(validate_exactness(ec));
  CHECK(total_homology(FilteredChainComplex{}).empty());
}

TEST_CASE("total homology of standard triangulations") {
  CHECK(total_homology(sphere_complex()) == std::vector<long long>{1, 0, 1});
  CHECK(total_homology(circle_complex()) == std::vector<long long>{1, 1});
  CHECK(total_homology(torus_complex()) == std::vector<long long>{1, 2, 1});
  CHECK(total_homology(torus_complex(FieldSpec::rational())) == std::vector<long long>{1, 2, 1});
  CHECK(total_homology(projective_plane_complex()) == std::vector<long long>{1, 1, 1});
  CHECK(total_homology(projective_plane_complex(FieldSpec::rational())) == std::vector<long long>{1, 0, 0});
  CHECK(total_homology(projective_plane_complex(FieldSpec::prime(3))) == std::vector<long long>{1, 0, 0});
  for (const auto& f : {sphere_complex(), torus_complex(), projective_plane_complex(),
                        projective_plane_complex(FieldSpec::rational())}) {
    CHECK(total_homology(f) == oracle::cell_betti(f, [](int) { return true; }));
  }
  CHECK(torus_complex().cells.size() == 7 + 21 + 14);
  CHECK(projective_plane_complex().cells.size() == 6 + 15 + 10);
}

TEST_CASE("validation messages name the cell") {
  auto unknown = interval();
  unknown.cells[2].boundary[0].first = "w";
  REQUIRE(validate_filtered(unknown));
  CHECK(validate_filtered(unknown)->find("'e'") != std::string::npos);

  auto level = interval();
  level.cells[0].level = 2;
  REQUIRE(validate_filtered(level));
  CHECK(validate_filtered(level)->find("higher level") != std::string::npos);

  auto dup = interval();
  dup.cells[1].id = "v0";
  CHECK(validate_filtered(dup));

  auto dimension = interval();
  dimension.cells[2].dim = 2;
  CHECK(validate_filtered(dimension));

  // ∂∂ ≠ 0: a 2-cell whose boundary is one edge.
  auto dd = interval();
  dd.cells.push_back(cell("t", 2, 1, {{"e", 1}}));
  REQUIRE(validate_filtered(dd));
  CHECK(validate_filtered(dd)->find("'t'") != std::string::npos);
  CHECK_THROWS_AS(exact_couple_of_filtration(dd), ValidationError);

  CHECK_FALSE(validate_filtered(example1_complex()));
  CHECK_FALSE(validate_filtered(example2_complex()));
}

TEST_CASE("first pages of the CW examples") {
  const auto e1 = exact_couple_of_filtration(example1_complex());
  CHECK(e1.E.labels({0, 0}) == std::vector<std::string>{"q0", "q1", "q2"});
  CHECK(e1.E.labels({1, 0}) == std::vector<std::string>{"s"});
  CHECK(e1.E.labels({2, 0}) == std::vector<std::string>{"γ⁺"});
  CHECK(e1.E.labels({2, -1}) == std::vector<std::string>{"γ⁻"});
  CHECK(e1.E.terms.size() == 4);

  const auto e2 = exact_couple_of_filtration(example2_complex());
  CHECK(e2.e_dim({0, 0}) == 4);
  CHECK(e2.e_dim({1, 0}) == 4);
  CHECK(e2.e_dim({2, 0}) == 3);
  CHECK(e2.e_dim({2, -1}) == 1);
  CHECK(e2.E.terms.size() == 4);
}

TEST_CASE("random filtrations: oracle ranks, exactness, convergence") {
  const FieldSpec fields[] = {F2, FieldSpec::prime(3), FieldSpec::rational()};
  std::uint64_t seed = 0;
  for (const auto& field : fields) {
    for (int t = 0; t < 40; ++t, ++seed) {
      RandomComplexBounds bounds;
      bounds.field = field;
      const auto f = random_filtered_complex(seed, bounds);
      REQUIRE_FALSE(validate_filtered(f));
      CHECK(f == random_filtered_complex(seed, bounds));

      CHECK(total_homology(f) == oracle::cell_betti(f, [](int) { return true; }));
      for (int p = 0; p <= f.max_level(); ++p) {
        CHECK(relative_dims(f, p) == oracle::cell_betti(f, [p](int l) { return l == p; }));
        const auto h = homology(level_complex(f, p));
        CHECK(h.betti_from_zero() == oracle::cell_betti(f, [p](int l) { return l <= p; }));
      }

      const LesMaps les = les_maps(f);
      for (const auto& [key, j] : les.j) {
        const auto [p, n] = key;
        const Matrix& k = les.k.at(key);
        if (n > 0 && p > 0) {
          CHECK((k * j).is_zero());
          if (p - 1 < f.max_level() && les.i.contains({p - 1, n - 1})) CHECK((les.i.at({p - 1, n - 1}) * k).is_zero());
        }
        if (les.i.contains(key) && les.j.contains({p + 1, n})) CHECK((les.j.at({p + 1, n}) * les.i.at(key)).is_zero());
      }

      const auto ec = exact_couple_of_filtration(f);
      CHECK_FALSE(validate_exactness(ec));
      const auto total = total_homology(f);
      for (int n = 0; n < static_cast<int>(total.size()); ++n) {
        CHECK(static_cast<long long>(limit_homology(ec, n).dim) == total[static_cast<std::size_t>(n)]);
      }
    }
  }
}
