#include <algorithm>
#include <random>

#include "couplex/corpus.hpp"
#include "couplex/errors.hpp"
#include "couplex/exact_couple.hpp"
#include "couplex/filtration.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace couplex;

namespace {

const FieldSpec F2;

using Dims = std::map<Bidegree, std::size_t>;

Dims e_dims(const ExactCouple& ec) {
  Dims out;
  for (const auto& [b, basis] : ec.E.terms)
    if (basis.size() > 0) out[b] = basis.size();
  return out;
}

Dims d_dims(const ExactCouple& ec) {
  Dims out;
  for (const auto& [b, basis] : ec.D.terms)
    if (basis.size() > 0) out[b] = basis.size();
  return out;
}

Dims page_dims(const Page& page) {
  Dims out;
  for (const auto& [b, term] : page.terms)
    if (term.dim() > 0) out[b] = term.dim();
  return out;
}

Matrix d_block(const Page& page, Bidegree src) {
  return page.d.block(src, F2, page.dim(src + page.d.degree), page.dim(src));
}

std::size_t total_d_dim(const ExactCouple& ec) {
  std::size_t out = 0;
  for (const auto& [b, basis] : ec.D.terms) out += basis.size();
  return out;
}

std::vector<long long> as_ll(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("bidegree keys") {
  CHECK(Bidegree{2, -1}.key() == "2,-1");
  CHECK(Bidegree::parse("2,-1") == Bidegree{2, -1});
  CHECK(Bidegree::parse("0,3") == Bidegree{0, 3});
  CHECK_THROWS_AS(Bidegree::parse("1"), ParseError);
  CHECK_THROWS_AS(Bidegree::parse("a,b"), ParseError);
}

TEST_CASE("exactness") {
  const auto ec = exact_couple_of_filtration(example1_complex());
  CHECK_FALSE(validate_exactness(ec));
  CHECK_FALSE(validate_exactness(ExactCouple{}));

  auto broken = ec;
  for (auto& [b, m] : broken.j.blocks) m = Matrix(F2, m.rows(), m.cols());
  const auto v = validate_exactness(broken);
  REQUIRE(v);
  CHECK(v->position == "ker(k)=im(j)");
  CHECK_THROWS_AS(derived_couple(broken), ValidationError);
  CHECK_THROWS_AS(spectral_sequence(broken), ValidationError);

  auto misshapen = ec;
  misshapen.k.blocks.begin()->second = Matrix(F2, 7, 7);
  REQUIRE(validate_exactness(misshapen));
  CHECK(validate_exactness(misshapen)->position == "shape");
}

TEST_CASE("first example: derived couple and pages") {
  const auto ec = exact_couple_of_filtration(example1_complex());
  const auto d1 = derived_couple(ec);
  CHECK_FALSE(validate_exactness(d1));
  CHECK(d1.order == 1);
  CHECK(d1.e_dim({0, 0}) == 2);
  CHECK(d1.e_dim({1, 0}) == 0);
  CHECK(d1.E.labels({2, 0}) == std::vector<std::string>{"γ⁺"});
  CHECK(d1.E.labels({2, -1}) == std::vector<std::string>{"γ⁻"});
  CHECK(d1.E.labels({0, 0}) == std::vector<std::string>{"[q0]", "[q1]"});
  CHECK(rth_derived(ec, 0) == ec);
  CHECK(rth_derived(ec, 1) == d1);

  const auto ss = spectral_sequence(ec);
  CHECK(ss.start_page == 1);
  CHECK(ss.stabilization_page() == 3);
  REQUIRE(ss.pages.size() == 3);
  CHECK(d_block(ss.pages[0], {1, 0}) == Matrix::from_ints(F2, {{0}, {1}, {1}}));
  CHECK(d_block(ss.pages[0], {2, 0}) == Matrix::from_ints(F2, {{0}}));
  CHECK(ss.pages[1].d.degree == Bidegree{-2, 1});
  CHECK(d_block(ss.pages[1], {2, -1}) == Matrix::from_ints(F2, {{1}, {1}}));

  const auto inf = infinity_page(ss);
  CHECK(inf.terms.size() == 2);
  CHECK(inf.dim({0, 0}) == 1);
  CHECK(inf.dim({2, 0}) == 1);
  CHECK(diagonal_dims(inf) == std::map<int, std::size_t>{{0, 1}, {2, 1}});

  CHECK(limit_homology(ec, 0).dim == 1);
  CHECK(limit_homology(ec, 1).dim == 0);
  CHECK(limit_homology(ec, 2).dim == 1);
  CHECK(limit_homology(ExactCouple{}, 0).dim == 0);

  // Beyond stabilization the derived couples are stationary.
  CHECK(e_dims(rth_derived(ec, 2)) == e_dims(rth_derived(ec, 6)));
  CHECK(e_dims(rth_derived(ec, 2)) == page_dims(ss.infinity()));
}

TEST_CASE("first example: chain complex") {
  const auto ec = exact_couple_of_filtration(example1_complex());
  REQUIRE(surface_layout_applies(spectral_sequence(ec)));
  const ChainComplex c = couple_chain_complex(ec);
  CHECK_FALSE(validate(c));
  CHECK(c.lowest_degree == 0);
  CHECK(c.labels(0) == std::vector<std::string>{"[q0]", "[q1]", "q1+q2"});
  CHECK(c.labels(1) == std::vector<std::string>{"s", "γ⁻"});
  CHECK(c.labels(2) == std::vector<std::string>{"γ⁺"});
  CHECK(c.boundary(1) == Matrix::from_ints(F2, {{0, 1}, {0, 1}, {1, 0}}));
  CHECK(c.boundary(2) == Matrix(F2, 2, 1));
  CHECK(homology(c).betti == std::vector<std::size_t>{1, 0, 1});
  CHECK(homology_matches_infinity(ec).matches);

  const ChainComplex strict = couple_chain_complex(ec, ChainLayout::strict);
  CHECK_FALSE(validate(strict));
  CHECK(strict.dims_from_zero() == std::vector<long long>{3, 2, 1});
  CHECK(homology(strict).betti == std::vector<std::size_t>{1, 0, 1});
}

TEST_CASE("second example") {
  const auto ec = exact_couple_of_filtration(example2_complex());
  const auto ss = spectral_sequence(ec);
  CHECK(d_block(ss.pages[0], {1, 0}) ==
        Matrix::from_ints(F2, {{0, 0, 0, 0}, {1, 0, 1, 0}, {1, 1, 0, 1}, {0, 1, 1, 1}}));
  CHECK(d_block(ss.pages[0], {2, 0}) == Matrix::from_ints(F2, {{1, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  CHECK(rref(Matrix::from_ints(F2, {{0, 1, 1, 0}, {0, 0, 1, 1}, {0, 1, 0, 1}})).reduced ==
        Matrix::from_ints(F2, {{0, 1, 0, 1}, {0, 0, 1, 1}, {0, 0, 0, 0}}));
  CHECK(image_basis(d_block(ss.pages[0], {1, 0})).basis() == Matrix::from_ints(F2, {{0, 1, 0, 1}, {0, 0, 1, 1}}));
  CHECK(kernel_basis(d_block(ss.pages[0], {2, 0})).basis() == Matrix::from_ints(F2, {{1, 1, 1}}));

  CHECK(page_dims(ss.pages[1]) == Dims{{{0, 0}, 2}, {{2, 0}, 1}, {{2, -1}, 1}});
  CHECK(ss.pages[1].terms.at({2, 0}).labels() == std::vector<std::string>{"p1+p2+γ⁺"});

  const ChainComplex c = couple_chain_complex(ec);
  CHECK(c.labels(0) == std::vector<std::string>{"[q0]", "[q1]", "q1+q3", "q2+q3"});
  CHECK(c.labels(1) == std::vector<std::string>{"s1", "s2", "s3", "s4", "γ⁻"});
  CHECK(c.labels(2) == std::vector<std::string>{"p1+p2+γ⁺", "[p1]", "[p2]"});
  CHECK(c.boundary(2) == Matrix::from_ints(F2, {{0, 1, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {0, 0, 0}}));
  CHECK(c.boundary(1) == Matrix::from_ints(F2, {{0, 0, 0, 0, 1}, {0, 0, 0, 0, 1}, {1, 0, 1, 0, 0}, {1, 1, 0, 1, 0}}));
  CHECK(homology(c).betti == std::vector<std::size_t>{1, 0, 1});
  CHECK(homology_matches_infinity(ec).matches);
}

TEST_CASE("degenerate couples") {
  SUBCASE("zero couple") {
    const ExactCouple zero;
    CHECK(derived_couple(zero).E.terms.empty());
    CHECK(derived_couple(zero).D.terms.empty());
    const auto ss = spectral_sequence(zero);
    CHECK(infinity_page(ss).terms.empty());
    CHECK(couple_chain_complex(zero).empty());
    CHECK(homology_matches_infinity(zero).matches);
  }
  SUBCASE("i invertible on the whole stored range") {
    // Everything at level 0: i is the identity from the colimit level on, j
    // is an isomorphism and every differential vanishes.
    auto f = torus_complex();
    for (auto& c : f.cells) c.level = 0;
    const auto ec = exact_couple_of_filtration(f);
    const auto d = derived_couple(ec);
    CHECK(e_dims(d) == e_dims(ec));
    // D' = i(D) sits one step up; it is the same space along the stable range.
    CHECK(d.colimit_level == 1);
    for (int n = 0; n <= 2; ++n) CHECK(limit_homology(d, n).dim == limit_homology(ec, n).dim);
    CHECK(total_d_dim(d) == total_d_dim(ec));
    CHECK(spectral_sequence(ec).stable_r == 0);
  }
  SUBCASE("all differentials zero") {
    // Two components, one point and one circle, on separate levels.
    FilteredChainComplex f{F2,
                           {{"a", 0, 0, {}},
                            {"b", 0, 1, {}},
                            {"c", 0, 1, {}},
                            {"e1", 1, 1, {{"b", Scalar::one(F2)}, {"c", Scalar::one(F2)}}},
                            {"e2", 1, 1, {{"b", Scalar::one(F2)}, {"c", Scalar::one(F2)}}}}};
    const auto ec = exact_couple_of_filtration(f);
    const auto ss = spectral_sequence(ec);
    CHECK(page_dims(ss.infinity()) == page_dims(ss.pages[0]));
    const ChainComplex c = couple_chain_complex(ec);
    for (int n = 0; n <= c.highest_degree(); ++n) CHECK(c.boundary(n).is_zero());
    CHECK(as_ll(homology(c).betti) == std::vector<long long>{2, 1});
  }
}

TEST_CASE("pages supplied directly") {
  BigradedSpace first;
  first.terms[{0, 0}] = {{"q0", "q1", "q2"}, Matrix::identity(F2, 3)};
  first.terms[{1, 0}] = {{"s"}, Matrix::identity(F2, 1)};
  first.terms[{2, 0}] = {{"γ⁺"}, Matrix::identity(F2, 1)};
  first.terms[{2, -1}] = {{"γ⁻"}, Matrix::identity(F2, 1)};
  std::map<int, BigradedMap> diffs;
  diffs[1] = {{-1, 0}, {{{1, 0}, Matrix::from_ints(F2, {{0}, {1}, {1}})}, {{2, 0}, Matrix::from_ints(F2, {{0}})}}};
  diffs[2] = {{-2, 1}, {{{2, -1}, Matrix::from_ints(F2, {{1}, {1}})}}};
  const auto ss = sequence_from_pages(F2, 1, first, diffs);
  CHECK(ss.stabilization_page() == 3);
  const auto coupled = spectral_sequence(exact_couple_of_filtration(example1_complex()));
  for (std::size_t r = 0; r < ss.pages.size(); ++r) CHECK(page_dims(ss.pages[r]) == page_dims(coupled.pages[r]));
  const ChainComplex c = chain_complex_of_sequence(ss);
  CHECK(c.boundary(1) == Matrix::from_ints(F2, {{0, 1}, {0, 1}, {1, 0}}));

  auto bad_shape = diffs;
  bad_shape[2].blocks[{2, -1}] = Matrix::from_ints(F2, {{1}, {1}, {1}});
  CHECK_THROWS_AS(sequence_from_pages(F2, 1, first, bad_shape), ValidationError);

  // d∘d ≠ 0 on page 1.
  BigradedSpace line;
  line.terms[{0, 0}] = {{"a"}, Matrix::identity(F2, 1)};
  line.terms[{1, 0}] = {{"b"}, Matrix::identity(F2, 1)};
  line.terms[{2, 0}] = {{"c"}, Matrix::identity(F2, 1)};
  std::map<int, BigradedMap> dd;
  dd[1] = {{-1, 0}, {{{1, 0}, Matrix::from_ints(F2, {{1}})}, {{2, 0}, Matrix::from_ints(F2, {{1}})}}};
  CHECK_THROWS_AS(sequence_from_pages(F2, 1, line, dd), ValidationError);
}

TEST_CASE("random filtration couples: derived coherence, flags, homology") {
  const FieldSpec fields[] = {F2, FieldSpec::prime(3), FieldSpec::rational()};
  std::uint64_t seed = 1000;
  for (const auto& field : fields) {
    for (int t = 0; t < 25; ++t, ++seed) {
      RandomComplexBounds bounds;
      bounds.field = field;
      const auto f = random_filtered_complex(seed, bounds);
      const auto ec = exact_couple_of_filtration(f);
      const auto ss = spectral_sequence(ec);

      ExactCouple iterated = ec;
      for (int r = 1; r <= ss.stable_r + 1; ++r) {
        iterated = derived_couple(iterated);
        CHECK_FALSE(validate_exactness(iterated));
        const auto direct = rth_derived(ec, r);
        CHECK(e_dims(direct) == e_dims(iterated));
        CHECK(d_dims(direct) == d_dims(iterated));
        CHECK(e_dims(direct) == page_dims(ss.pages[static_cast<std::size_t>(std::min(r, ss.stable_r))]));
      }
      CHECK(rth_derived(ec, 1) == derived_couple(ec));

      for (int r = 0; r < ss.stable_r; ++r) {
        for (const auto& [b, z] : ss.z(r)) {
          const Subspace& bb = ss.b(r).at(b);
          CHECK(ss.b(r + 1).at(b).contains(bb));
          CHECK(ss.z(r + 1).at(b).contains(ss.b(r + 1).at(b)));
          CHECK(z.contains(ss.z(r + 1).at(b)));
        }
      }

      // Page dims by oracle ranks of the differentials.
      for (std::size_t r = 0; r + 1 < ss.pages.size(); ++r) {
        const Page& page = ss.pages[r];
        for (const auto& [b, term] : page.terms) {
          const auto out = page.d.block(b, field, page.dim(b + page.d.degree), term.dim());
          const Bidegree from{b.p - page.d.degree.p, b.q - page.d.degree.q};
          const auto in = page.d.block(from, field, term.dim(), page.dim(from));
          const long long expected = static_cast<long long>(term.dim()) - static_cast<long long>(oracle::rank_of(out)) -
                                     static_cast<long long>(oracle::rank_of(in));
          CHECK(static_cast<long long>(ss.pages[r + 1].dim(b)) == expected);
        }
      }

      const ChainComplex c = couple_chain_complex(ec);
      CHECK_FALSE(validate(c));
      for (const auto& [n, dim] : diagonal_dims(ss.pages[0])) CHECK(c.dim(n) == dim);
      const auto cmp = homology_matches_infinity(ec);
      CHECK(cmp.matches);
      const auto total = total_homology(f);
      for (int n = 0; n < static_cast<int>(total.size()); ++n) {
        CHECK(static_cast<long long>(homology(c).betti_at(n)) == total[static_cast<std::size_t>(n)]);
      }
    }
  }
}

TEST_CASE("relabeling cells leaves dims and homology unchanged") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const auto f = random_filtered_complex(static_cast<std::uint64_t>(t) + 500);
    auto g = f;
    std::shuffle(g.cells.begin(), g.cells.end(), rng);
    for (auto& c : g.cells) c.id = "x" + c.id;
    for (auto& c : g.cells)
      for (auto& face : c.boundary) face.first = "x" + face.first;
    const auto a = exact_couple_of_filtration(f);
    const auto b = exact_couple_of_filtration(g);
    CHECK(e_dims(a) == e_dims(b));
    const auto sa = spectral_sequence(a);
    const auto sb = spectral_sequence(b);
    REQUIRE(sa.pages.size() == sb.pages.size());
    for (std::size_t r = 0; r < sa.pages.size(); ++r) CHECK(page_dims(sa.pages[r]) == page_dims(sb.pages[r]));
    CHECK(homology(couple_chain_complex(a)).betti == homology(couple_chain_complex(b)).betti);
  }
}
