#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace couplex {

/// Coefficient field: a prime field F_p or the rationals.
///
/// A default-constructed FieldSpec is F_2.
class FieldSpec {
 public:
  enum class Kind { prime, rational };

  FieldSpec() = default;

  /// Throws ValidationError unless `p` is prime.
  static FieldSpec prime(std::uint32_t p);
  static FieldSpec rational();

  /// Accepts "F2", "F3", "F5", ..., "Fp" for any prime p, and "Q".
  static FieldSpec parse(std::string_view text);

  Kind kind() const { return kind_; }
  bool is_rational() const { return kind_ == Kind::rational; }
  /// p for F_p, 0 for the rationals.
  std::uint32_t characteristic() const { return kind_ == Kind::prime ? p_ : 0; }

  std::string to_string() const;

  bool operator==(const FieldSpec&) const = default;

 private:
  FieldSpec(Kind kind, std::uint32_t p) : kind_(kind), p_(p) {}

  Kind kind_ = Kind::prime;
  std::uint32_t p_ = 2;
};

bool is_prime(std::uint64_t n);

/// An element of a FieldSpec in canonical form: a residue in [0, p) or a
/// reduced fraction with positive denominator. Equality is structural.
class Scalar {
 public:
  Scalar() = default;
  explicit Scalar(FieldSpec field) : field_(field) {}
  Scalar(FieldSpec field, long value);
  Scalar(FieldSpec field, const mpq_class& value);

  static Scalar zero(FieldSpec field) { return Scalar(field); }
  static Scalar one(FieldSpec field) { return Scalar(field, 1L); }

  /// Decimal integers for F_p (reduced mod p, "a/b" also accepted);
  /// "n" or "n/d" for the rationals.
  static Scalar parse(FieldSpec field, std::string_view text);

  const FieldSpec& field() const { return field_; }
  bool is_zero() const;
  bool is_one() const;

  std::uint32_t residue() const { return residue_; }
  const mpq_class& rational() const { return rational_; }

  Scalar operator+(const Scalar& rhs) const;
  Scalar operator-(const Scalar& rhs) const;
  Scalar operator*(const Scalar& rhs) const;
  Scalar operator/(const Scalar& rhs) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);

  /// Throws ValidationError on zero.
  Scalar inverse() const;

  bool operator==(const Scalar& rhs) const;

  /// Residue as decimal, rationals as "n" or "n/d".
  std::string to_string() const;

 private:
  void require_same_field(const Scalar& rhs) const;

  FieldSpec field_;
  std::uint32_t residue_ = 0;
  mpq_class rational_;
};

Scalar add(const Scalar& a, const Scalar& b);
Scalar mul(const Scalar& a, const Scalar& b);
Scalar inv(const Scalar& a);

}  // namespace couplex
