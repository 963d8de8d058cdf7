#include <random>

#include "couplex/errors.hpp"
#include "couplex/field.hpp"
#include "doctest.h"

using namespace couplex;

namespace {

Scalar q(long n, long d) { return Scalar(FieldSpec::rational(), mpq_class(n, d)); }

}  // namespace

TEST_CASE("field spec construction") {
  CHECK(FieldSpec().to_string() == "F2");
  CHECK(FieldSpec::parse("F5").characteristic() == 5);
  CHECK(FieldSpec::parse("Q").is_rational());
  CHECK_THROWS_AS(FieldSpec::prime(4), ValidationError);
  CHECK_THROWS_AS(FieldSpec::parse("F6"), ParseError);
  CHECK_THROWS_AS(FieldSpec::parse("R"), ParseError);
}

TEST_CASE("addition examples") {
  const FieldSpec f2;
  CHECK(add(Scalar(f2, 1L), Scalar(f2, 1L)) == Scalar::zero(f2));
  CHECK(add(Scalar(f2, 1L), Scalar(f2, 0L)) == Scalar::one(f2));
  CHECK(add(q(1, 2), q(1, 3)) == q(5, 6));
  CHECK(add(q(1, 2), q(1, 3)).to_string() == "5/6");
}

TEST_CASE("multiplication examples") {
  const FieldSpec f2;
  const FieldSpec f5 = FieldSpec::prime(5);
  CHECK(mul(Scalar(f2, 1L), Scalar(f2, 1L)) == Scalar::one(f2));
  CHECK(mul(Scalar(f5, 3L), Scalar(f5, 4L)) == Scalar(f5, 2L));
  CHECK(mul(q(2, 3), q(3, 4)) == q(1, 2));
}

TEST_CASE("inverse examples") {
  const FieldSpec f2;
  const FieldSpec f5 = FieldSpec::prime(5);
  CHECK(inv(Scalar(f2, 1L)) == Scalar::one(f2));
  CHECK(inv(Scalar(f5, 3L)) == Scalar(f5, 2L));
  CHECK(inv(q(-2, 7)) == q(-7, 2));
  CHECK(inv(q(-2, 7)).to_string() == "-7/2");
  CHECK_THROWS_AS(inv(Scalar::zero(f5)), ValidationError);
  CHECK_THROWS_AS(inv(q(0, 1)), ValidationError);
}

TEST_CASE("mismatched fields are rejected") {
  CHECK_THROWS_AS(add(Scalar(FieldSpec(), 1L), Scalar(FieldSpec::prime(3), 1L)), FieldMismatch);
  CHECK_THROWS_AS(mul(Scalar(FieldSpec(), 1L), q(1, 2)), FieldMismatch);
}

TEST_CASE("canonical form") {
  const FieldSpec f3 = FieldSpec::prime(3);
  CHECK(Scalar(f3, -1L) == Scalar(f3, 2L));
  CHECK(Scalar(f3, 7L).residue() == 1);
  CHECK(q(4, -6) == q(-2, 3));
  CHECK(q(4, -6).to_string() == "-2/3");
  CHECK(Scalar::parse(f3, "1/2") == Scalar(f3, 2L));
  CHECK_THROWS_AS(Scalar::parse(f3, "1/3"), ParseError);
  CHECK_THROWS_AS(Scalar::parse(f3, "x"), ParseError);
  CHECK_THROWS_AS(Scalar::parse(FieldSpec::rational(), "1/0"), ParseError);
}

TEST_CASE("field axioms on sampled triples") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-50, 50);
  std::uniform_int_distribution<long> den(1, 30);
  const FieldSpec fields[] = {FieldSpec(), FieldSpec::prime(3), FieldSpec::prime(5), FieldSpec::prime(101),
                              FieldSpec::rational()};
  for (const auto& f : fields) {
    auto sample = [&] {
      return f.is_rational() ? Scalar(f, mpq_class(num(rng), den(rng))) : Scalar(f, num(rng));
    };
    for (int t = 0; t < 300; ++t) {
      const Scalar a = sample(), b = sample(), c = sample();
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + b == b + a);
      CHECK(a - a == Scalar::zero(f));
      if (!a.is_zero()) CHECK(a * a.inverse() == Scalar::one(f));
      CHECK(Scalar::parse(f, a.to_string()) == a);
    }
  }
}
