#pragma once

#include <cstdint>
#include <ostream>

#include "diagfp/error.hpp"

namespace diagfp {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// The prime field F_p. Residues are stored as uint32_t in [0, p); the
/// modulus is restricted to p < 2^31 so that products fit in 64 bits.
class PrimeField {
 public:
  using value_type = std::uint32_t;

  explicit PrimeField(std::uint64_t p) : p_(static_cast<value_type>(p)) {
    if (p >= (1ULL << 31) || !is_prime(p)) fail(ErrorCode::BadPrime, "modulus " + std::to_string(p) + " is not a prime below 2^31");
  }

  value_type prime() const noexcept { return p_; }

  value_type reduce(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<value_type>(r < 0 ? r + p_ : r);
  }
  value_type reduce_u(std::uint64_t v) const noexcept { return static_cast<value_type>(v % p_); }

  value_type add(value_type a, value_type b) const noexcept {
    value_type s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  value_type neg(value_type a) const noexcept { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const noexcept {
    return static_cast<value_type>(static_cast<std::uint64_t>(a) * b % p_);
  }
  value_type pow(value_type a, std::uint64_t e) const noexcept {
    std::uint64_t result = 1 % p_, base = a;
    while (e) {
      if (e & 1) result = result * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return static_cast<value_type>(result);
  }
  value_type inv(value_type a) const {
    if (a == 0) fail(ErrorCode::Precondition, "inverse of zero in F_" + std::to_string(p_));
    return pow(a, p_ - 2);
  }

  bool operator==(const PrimeField&) const = default;

 private:
  value_type p_;
};

/// A residue together with its modulus; the value-semantics face of F_p used
/// at API boundaries. Containers store bare residues plus one PrimeField.
class FieldElement {
 public:
  FieldElement(const PrimeField& field, std::int64_t v) : field_(field), value_(field.reduce(v)) {}

  std::uint32_t value() const noexcept { return value_; }
  const PrimeField& field() const noexcept { return field_; }
  std::uint32_t modulus() const noexcept { return field_.prime(); }
  bool is_zero() const noexcept { return value_ == 0; }

  FieldElement inverse() const { return raw(field_.inv(value_)); }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return a.raw(a.field_.add(a.value_, b.value_));
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return a.raw(a.field_.sub(a.value_, b.value_));
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return a.raw(a.field_.mul(a.value_, b.value_));
  }
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }
  FieldElement operator-() const { return raw(field_.neg(value_)); }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, const FieldElement& a) { return os << a.value_; }

 private:
  FieldElement raw(std::uint32_t v) const {
    FieldElement r = *this;
    r.value_ = v;
    return r;
  }
  static void check(const FieldElement& a, const FieldElement& b) {
    if (!(a.field_ == b.field_)) fail(ErrorCode::DimMismatch, "mixed moduli in field arithmetic");
  }

  PrimeField field_;
  std::uint32_t value_;
};

}  // namespace diagfp
