#include <random>

#include "couplex/chain_complex.hpp"
#include "couplex/errors.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace couplex;

namespace {

const FieldSpec F2;

ChainComplex sphere_one() {
  return ChainComplex::from_labels(F2, 0, {{"[q0]", "[q1]", "q1+q2"}, {"s", "γ⁻"}, {"γ⁺"}},
                                   {Matrix::from_ints(F2, {{0, 1}, {0, 1}, {1, 0}}), Matrix(F2, 2, 1)});
}

ChainComplex sphere_two() {
  return ChainComplex::from_labels(
      F2, 0, {{"[q0]", "[q1]", "q1+q3", "q2+q3"}, {"s1", "s2", "s3", "s4", "γ⁻"}, {"p1+p2+γ⁺", "[p1]", "[p2]"}},
      {Matrix::from_ints(F2, {{0, 0, 0, 0, 1}, {0, 0, 0, 0, 1}, {1, 0, 1, 0, 0}, {1, 1, 0, 1, 0}}),
       Matrix::from_ints(F2, {{0, 1, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {0, 0, 0}})});
}

// Random complex with ∂∘∂ = 0: the columns of ∂_n are drawn from ker ∂_{n-1}.
ChainComplex random_complex(std::mt19937_64& rng, FieldSpec f, int top) {
  std::uniform_int_distribution<std::size_t> dimd(0, 6);
  std::vector<std::vector<std::string>> labels;
  std::vector<std::size_t> dims;
  for (int n = 0; n <= top; ++n) {
    dims.push_back(dimd(rng));
    labels.push_back(default_labels(dims.back()));
  }
  std::vector<Matrix> bds;
  Matrix prev(f, 0, dims[0]);
  for (int n = 1; n <= top; ++n) {
    const Subspace ker = kernel_basis(prev);
    const Matrix coeff = oracle::random_matrix(rng, f, dims[static_cast<std::size_t>(n)], ker.dim(), 0.5);
    Matrix d = (coeff * ker.basis()).transpose();
    bds.push_back(d);
    prev = d;
  }
  return ChainComplex::from_labels(f, 0, labels, bds);
}

}  // namespace

TEST_CASE("validate") {
  CHECK_FALSE(validate(sphere_one()));
  CHECK_FALSE(validate(ChainComplex{}));
  auto bad = ChainComplex::from_labels(F2, 0, {{"a"}, {"b"}, {"c"}},
                                       {Matrix::from_ints(F2, {{1}}), Matrix::from_ints(F2, {{1}})});
  auto v = validate(bad);
  REQUIRE(v);
  CHECK(v->degree == 2);
  auto shape = ChainComplex::from_labels(F2, 0, {{"a"}, {"b"}}, {Matrix(F2, 2, 1)});
  REQUIRE(validate(shape));
  CHECK(validate(shape)->degree == 1);
}

TEST_CASE("homology of the sphere examples") {
  CHECK(homology(sphere_one()).betti == std::vector<std::size_t>{1, 0, 1});
  CHECK(homology(sphere_two()).betti == std::vector<std::size_t>{1, 0, 1});
  const auto h = homology(sphere_one());
  CHECK(h.cycle_basis[2].labels == std::vector<std::string>{"γ⁺"});
  auto zero = ChainComplex::from_labels(F2, 0, {{"a", "b"}, {"c"}, {"d", "e", "f"}}, {Matrix(F2, 2, 1), Matrix(F2, 1, 3)});
  CHECK(homology(zero).betti == std::vector<std::size_t>{2, 1, 3});
  CHECK(euler_characteristic(zero) == 4);
}

TEST_CASE("euler characteristic") {
  CHECK(euler_characteristic(sphere_one()) == 2);
  CHECK(euler_characteristic(ChainComplex{}) == 0);
  auto betti101 = ChainComplex::from_labels(F2, 0, {{"a"}, {}, {"b"}}, {Matrix(F2, 1, 0), Matrix(F2, 0, 1)});
  CHECK(euler_characteristic(betti101) == 2);
}

TEST_CASE("Morse inequality examples") {
  const auto r = morse_inequalities({4, 5, 3}, {1, 0, 1});
  REQUIRE(r.size() == 3);
  CHECK(r[0].lhs == 4);
  CHECK(r[0].rhs == 1);
  CHECK(r[1].lhs == 1);
  CHECK(r[1].rhs == -1);
  CHECK(r[2].lhs == 2);
  CHECK(r[2].rhs == 2);
  CHECK(r[2].top);
  CHECK(r[2].equality);
  CHECK(morse_inequalities_hold(r));

  const auto same = morse_inequalities({2, 3, 1}, {2, 3, 1});
  for (const auto& m : same) CHECK(m.equality);
  const auto one = morse_inequalities({1}, {1});
  CHECK(one[0].lhs == 1);
  CHECK(one[0].top);
  CHECK(one[0].equality);
  CHECK_THROWS_AS(morse_inequalities({1, 2}, {1}), ValidationError);
  CHECK_FALSE(morse_inequalities_hold(morse_inequalities({1, 1}, {1, 0})));
}

TEST_CASE("random complexes: oracle ranks, Euler-Poincare, Morse inequalities") {
  std::mt19937_64 rng(29);
  const FieldSpec fields[] = {F2, FieldSpec::prime(3), FieldSpec::rational()};
  for (const auto& f : fields) {
    for (int t = 0; t < 40; ++t) {
      const ChainComplex c = random_complex(rng, f, 3);
      REQUIRE_FALSE(validate(c));
      const auto h = homology(c);
      long long chi_h = 0;
      for (int n = 0; n <= c.highest_degree(); ++n) {
        const long long expected = static_cast<long long>(c.dim(n)) -
                                   static_cast<long long>(oracle::rank_of(c.boundary(n))) -
                                   static_cast<long long>(oracle::rank_of(c.boundary(n + 1)));
        CHECK(static_cast<long long>(h.betti_at(n)) == expected);
        chi_h += (n % 2 == 0 ? 1 : -1) * expected;
      }
      CHECK(chi_h == euler_characteristic(c));
      CHECK(morse_inequalities_hold(morse_inequalities(c.dims_from_zero(), h.betti_from_zero())));
    }
  }
}
