#include "couplex/field.hpp"

#include <cctype>
#include <charconv>
#include <limits>

#include "couplex/errors.hpp"

namespace couplex {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

FieldSpec FieldSpec::prime(std::uint32_t p) {
  if (!is_prime(p)) {
    throw ValidationError("field characteristic " + std::to_string(p) + " is not prime");
  }
  return FieldSpec(Kind::prime, p);
}

FieldSpec FieldSpec::rational() { return FieldSpec(Kind::rational, 0); }

FieldSpec FieldSpec::parse(std::string_view text) {
  if (text == "Q") return rational();
  if (text.size() >= 2 && text.front() == 'F') {
    std::uint32_t p = 0;
    const char* first = text.data() + 1;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, p);
    if (ec == std::errc() && ptr == last) {
      if (!is_prime(p)) throw ParseError("field '" + std::string(text) + "': characteristic is not prime");
      return FieldSpec(Kind::prime, p);
    }
  }
  throw ParseError("unknown field '" + std::string(text) + "' (expected F<p> or Q)");
}

std::string FieldSpec::to_string() const {
  return is_rational() ? std::string("Q") : "F" + std::to_string(p_);
}

namespace {

std::uint32_t reduce_mod(long value, std::uint32_t p) {
  long r = value % static_cast<long>(p);
  if (r < 0) r += p;
  return static_cast<std::uint32_t>(r);
}

std::uint32_t reduce_mod(const mpz_class& value, std::uint32_t p) {
  mpz_class r = value % p;
  if (r < 0) r += p;
  return static_cast<std::uint32_t>(r.get_ui());
}

std::uint32_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint32_t p) {
  std::uint64_t result = 1;
  base %= p;
  while (exp > 0) {
    if (exp & 1U) result = result * base % p;
    base = base * base % p;
    exp >>= 1U;
  }
  return static_cast<std::uint32_t>(result);
}

}  // namespace

Scalar::Scalar(FieldSpec field, long value) : field_(field) {
  if (field_.is_rational()) {
    rational_ = value;
  } else {
    residue_ = reduce_mod(value, field_.characteristic());
  }
}

Scalar::Scalar(FieldSpec field, const mpq_class& value) : field_(field) {
  mpq_class canonical = value;
  canonical.canonicalize();
  if (field_.is_rational()) {
    rational_ = canonical;
    return;
  }
  const std::uint32_t p = field_.characteristic();
  const std::uint32_t den = reduce_mod(canonical.get_den(), p);
  if (den == 0) throw ValidationError("denominator vanishes in " + field_.to_string());
  const std::uint32_t num = reduce_mod(canonical.get_num(), p);
  residue_ = static_cast<std::uint32_t>(std::uint64_t{num} * pow_mod(den, p - 2, p) % p);
}

Scalar Scalar::parse(FieldSpec field, std::string_view text) {
  std::string s(text);
  // mpq_class accepts "n" and "n/d"; it rejects leading '+' and whitespace.
  if (s.empty()) throw ParseError("empty scalar literal");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/')) {
      throw ParseError("malformed scalar literal '" + s + "'");
    }
  }
  mpq_class value;
  if (value.set_str(s, 10) != 0) throw ParseError("malformed scalar literal '" + s + "'");
  if (value.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
  try {
    return Scalar(field, value);
  } catch (const ValidationError& e) {
    throw ParseError(std::string("scalar literal '") + s + "': " + e.what());
  }
}

bool Scalar::is_zero() const { return field_.is_rational() ? rational_ == 0 : residue_ == 0; }

bool Scalar::is_one() const { return field_.is_rational() ? rational_ == 1 : residue_ == 1; }

void Scalar::require_same_field(const Scalar& rhs) const {
  if (!(field_ == rhs.field_)) {
    throw FieldMismatch("scalar field mismatch: " + field_.to_string() + " vs " + rhs.field_.to_string());
  }
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  require_same_field(rhs);
  if (field_.is_rational()) {
    rational_ += rhs.rational_;
  } else {
    const std::uint32_t p = field_.characteristic();
    residue_ = static_cast<std::uint32_t>((std::uint64_t{residue_} + rhs.residue_) % p);
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  require_same_field(rhs);
  if (field_.is_rational()) {
    rational_ -= rhs.rational_;
  } else {
    const std::uint32_t p = field_.characteristic();
    residue_ = static_cast<std::uint32_t>((std::uint64_t{residue_} + p - rhs.residue_) % p);
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  require_same_field(rhs);
  if (field_.is_rational()) {
    rational_ *= rhs.rational_;
  } else {
    residue_ = static_cast<std::uint32_t>(std::uint64_t{residue_} * rhs.residue_ % field_.characteristic());
  }
  return *this;
}

Scalar Scalar::operator+(const Scalar& rhs) const {
  Scalar out = *this;
  out += rhs;
  return out;
}

Scalar Scalar::operator-(const Scalar& rhs) const {
  Scalar out = *this;
  out -= rhs;
  return out;
}

Scalar Scalar::operator*(const Scalar& rhs) const {
  Scalar out = *this;
  out *= rhs;
  return out;
}

Scalar Scalar::operator/(const Scalar& rhs) const { return *this * rhs.inverse(); }

Scalar Scalar::operator-() const { return Scalar(field_) - *this; }

Scalar Scalar::inverse() const {
  if (is_zero()) throw ValidationError("inversion of zero");
  if (field_.is_rational()) return Scalar(field_, mpq_class(1) / rational_);
  Scalar out(field_);
  const std::uint32_t p = field_.characteristic();
  out.residue_ = pow_mod(residue_, p - 2, p);
  return out;
}

bool Scalar::operator==(const Scalar& rhs) const {
  if (!(field_ == rhs.field_)) return false;
  return field_.is_rational() ? rational_ == rhs.rational_ : residue_ == rhs.residue_;
}

std::string Scalar::to_string() const {
  if (!field_.is_rational()) return std::to_string(residue_);
  return rational_.get_str(10);
}

Scalar add(const Scalar& a, const Scalar& b) { return a + b; }
Scalar mul(const Scalar& a, const Scalar& b) { return a * b; }
Scalar inv(const Scalar& a) { return a.inverse(); }

}  // namespace couplex
