#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "plwe/errors.hpp"

namespace plwe {

namespace detail {
__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;
}  // namespace detail

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

// Distinct prime factors in increasing order, by trial division.
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n);

// An odd prime 2 < q < 2^62. Products of two residues fit in 128 bits.
class PrimeModulus {
 public:
  static constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;

  explicit PrimeModulus(std::uint64_t q);

  std::uint64_t value() const noexcept { return q_; }
  std::uint64_t q_mod4() const noexcept { return q_ & 3U; }

  std::uint64_t reduce(std::int64_t x) const noexcept;
  std::uint64_t reduce_unsigned(std::uint64_t x) const noexcept { return x % q_; }

  std::uint64_t add(std::uint64_t x, std::uint64_t y) const noexcept {
    const std::uint64_t s = x + y;
    return s >= q_ ? s - q_ : s;
  }
  std::uint64_t sub(std::uint64_t x, std::uint64_t y) const noexcept {
    return x >= y ? x - y : x + q_ - y;
  }
  std::uint64_t neg(std::uint64_t x) const noexcept { return x == 0 ? 0 : q_ - x; }
  std::uint64_t mul(std::uint64_t x, std::uint64_t y) const noexcept {
    return static_cast<std::uint64_t>(static_cast<detail::u128>(x) * y % q_);
  }
  std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const noexcept;
  // Throws DivisionByZero for x == 0.
  std::uint64_t inv(std::uint64_t x) const;

  // Unique c = x (mod q) with -(q-1)/2 <= c <= (q-1)/2.
  std::int64_t centered(std::uint64_t x) const noexcept {
    return x > q_ / 2 ? static_cast<std::int64_t>(x) - static_cast<std::int64_t>(q_)
                      : static_cast<std::int64_t>(x);
  }

  // Centered representative lies in [-q/4, q/4), tested as -q <= 4c < q.
  bool in_quarter_interval(std::uint64_t x) const noexcept {
    const detail::i128 c4 = static_cast<detail::i128>(centered(x)) * 4;
    const auto q = static_cast<detail::i128>(q_);
    return -q <= c4 && c4 < q;
  }

  // Number of residues passing in_quarter_interval: (q+1)/2 if q = 1 mod 4,
  // (q-1)/2 if q = 3 mod 4.
  std::uint64_t quarter_interval_count() const noexcept {
    return q_mod4() == 1 ? (q_ + 1) / 2 : (q_ - 1) / 2;
  }

  friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

 private:
  std::uint64_t q_;
};

class FieldElement {
 public:
  FieldElement(PrimeModulus modulus, std::uint64_t value)
      : modulus_(modulus), value_(modulus.reduce_unsigned(value)) {}

  static FieldElement from_signed(PrimeModulus modulus, std::int64_t value) {
    return FieldElement(modulus, modulus.reduce(value));
  }
  static FieldElement zero(PrimeModulus modulus) { return FieldElement(modulus, 0); }
  static FieldElement one(PrimeModulus modulus) { return FieldElement(modulus, 1); }

  std::uint64_t value() const noexcept { return value_; }
  const PrimeModulus& modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return value_ == 0; }

  std::int64_t centered() const noexcept { return modulus_.centered(value_); }
  bool in_quarter_interval() const noexcept { return modulus_.in_quarter_interval(value_); }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const { return FieldElement(modulus_, modulus_.neg(value_)); }
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  FieldElement pow(std::uint64_t exp) const {
    return FieldElement(modulus_, modulus_.pow(value_, exp));
  }
  FieldElement inverse() const { return FieldElement(modulus_, modulus_.inv(value_)); }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  void check_same(const FieldElement& o) const;

  PrimeModulus modulus_;
  std::uint64_t value_;
};

// Least r >= 1 with a^r = 1. Throws ZeroHasNoOrder for a = 0.
std::uint64_t mult_order(const FieldElement& a);

// True iff x^n - a is irreducible over F_q. Uses the classical criterion:
// every prime factor of n divides ord(a) but not (q-1)/ord(a), and 4 | n
// forces q = 1 (mod 4). n = 1 is always irreducible.
bool is_irreducible_binomial(unsigned n, const FieldElement& a);

class ExtFieldElement;

// F_{q^n} = F_q[y]/(y^n - a). Validated irreducible at construction.
class ExtFieldCtx {
 public:
  ExtFieldCtx(unsigned n, FieldElement a);

  unsigned degree() const noexcept { return n_; }
  const FieldElement& constant() const noexcept { return a_; }
  const PrimeModulus& modulus() const noexcept { return a_.modulus(); }

  ExtFieldElement zero() const;
  ExtFieldElement one() const;
  // The class of y, a root of x^n - a.
  ExtFieldElement generator() const;
  ExtFieldElement embed(const FieldElement& x) const;
  ExtFieldElement from_coeffs(std::vector<std::uint64_t> coeffs) const;

  friend bool operator==(const ExtFieldCtx&, const ExtFieldCtx&) = default;

 private:
  unsigned n_;
  FieldElement a_;
};

class ExtFieldElement {
 public:
  ExtFieldElement(ExtFieldCtx ctx, std::vector<std::uint64_t> coeffs);

  const ExtFieldCtx& context() const noexcept { return ctx_; }
  std::span<const std::uint64_t> coeffs() const noexcept { return coeffs_; }
  FieldElement coeff(unsigned i) const { return FieldElement(ctx_.modulus(), coeffs_.at(i)); }

  bool is_zero() const noexcept;
  // Coordinates 1..n-1 vanish.
  bool in_base_field() const noexcept;
  // Throws DomainError unless in_base_field().
  FieldElement to_base() const;

  ExtFieldElement operator+(const ExtFieldElement& o) const;
  ExtFieldElement operator-(const ExtFieldElement& o) const;
  ExtFieldElement operator*(const ExtFieldElement& o) const;
  ExtFieldElement operator*(const FieldElement& s) const;
  ExtFieldElement operator-() const;
  ExtFieldElement& operator+=(const ExtFieldElement& o) { return *this = *this + o; }
  ExtFieldElement& operator*=(const ExtFieldElement& o) { return *this = *this * o; }

  ExtFieldElement pow(std::uint64_t exp) const;
  // beta -> beta^q.
  ExtFieldElement frobenius() const;
  // Sum of the n Frobenius conjugates; always lands in F_q.
  FieldElement trace() const;
  // Product of the n Frobenius conjugates.
  FieldElement norm() const;
  ExtFieldElement inverse() const;

  friend bool operator==(const ExtFieldElement&, const ExtFieldElement&) = default;

 private:
  void check_same(const ExtFieldElement& o) const;

  ExtFieldCtx ctx_;
  std::vector<std::uint64_t> coeffs_;
};

}  // namespace plwe
