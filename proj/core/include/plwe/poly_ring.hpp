#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "plwe/modular_field.hpp"

namespace plwe {

// R_q = F_q[x]/(f(x)) with f monic of degree N. The integer coefficients of f
// are kept so the same polynomial can be reduced under several primes.
class RqContext {
 public:
  // f_coeffs is low-to-high, length N+1, leading coefficient 1.
  RqContext(std::vector<std::int64_t> f_coeffs, PrimeModulus modulus);

  std::size_t degree() const noexcept { return f_reduced_.size() - 1; }
  const PrimeModulus& modulus() const noexcept { return modulus_; }
  std::span<const std::int64_t> integer_coeffs() const noexcept { return f_integer_; }
  // f reduced modulo q, length N+1.
  std::span<const std::uint64_t> coeffs() const noexcept { return f_reduced_; }

 private:
  std::vector<std::int64_t> f_integer_;
  std::vector<std::uint64_t> f_reduced_;
  PrimeModulus modulus_;
};

// Element of R_q: exactly N canonical residues, index = degree.
class RingPoly {
 public:
  RingPoly() = default;
  explicit RingPoly(std::vector<std::uint64_t> coeffs) : coeffs_(std::move(coeffs)) {}

  static RingPoly zero(const RqContext& ctx) { return RingPoly(std::vector<std::uint64_t>(ctx.degree(), 0)); }
  static RingPoly constant(const RqContext& ctx, std::uint64_t c);
  static RingPoly monomial(const RqContext& ctx, std::size_t degree);
  static RingPoly from_signed(const RqContext& ctx, std::span<const std::int64_t> coeffs);
  // Reduces each value mod q; throws ContextMismatch on a length mismatch.
  static RingPoly from_residues(const RqContext& ctx, std::vector<std::uint64_t> coeffs);

  std::size_t size() const noexcept { return coeffs_.size(); }
  std::span<const std::uint64_t> coeffs() const noexcept { return coeffs_; }
  std::uint64_t operator[](std::size_t i) const { return coeffs_[i]; }
  std::uint64_t& operator[](std::size_t i) { return coeffs_[i]; }
  bool is_zero() const noexcept;

  friend bool operator==(const RingPoly&, const RingPoly&) = default;

 private:
  std::vector<std::uint64_t> coeffs_;
};

RingPoly ring_add(const RingPoly& p, const RingPoly& s, const RqContext& ctx);
RingPoly ring_sub(const RingPoly& p, const RingPoly& s, const RqContext& ctx);
// Schoolbook product followed by long division by the monic f.
RingPoly ring_mul(const RingPoly& p, const RingPoly& s, const RqContext& ctx);

// Horner evaluation at an F_q point.
FieldElement eval(const RingPoly& p, const FieldElement& x);
// Horner evaluation at an extension element.
ExtFieldElement eval(const RingPoly& p, const ExtFieldElement& beta);
// p(alpha) for alpha the class of y in F_q[y]/(y^n - a), computed blockwise:
// coordinate k is sum_j a^j p_{nj+k}.
ExtFieldElement eval_at_generator(const RingPoly& p, const ExtFieldCtx& ext);

struct RootInfo {
  FieldElement root;
  // Multiplicative order; 0 is reserved for the root 0.
  std::uint64_t order;
};

struct BinomialFactor {
  unsigned n;
  FieldElement a;
  std::uint64_t order_of_a;
};

struct RootReport {
  std::vector<RootInfo> fq_roots;
  std::vector<BinomialFactor> binomial_factors;
};

// All roots of f in F_q, sorted, annotated with their order. r_max > 0 keeps
// only roots of order <= r_max (the root 0 is dropped in that case).
std::vector<RootInfo> find_fq_roots(const RqContext& ctx, std::uint64_t r_max = 0);

// All a in F_q* with x^n - a irreducible and dividing f mod q.
std::vector<BinomialFactor> find_binomial_factors(const RqContext& ctx, unsigned n);

// x^n - a divides f mod q (irreducibility not checked).
bool binomial_divides(const RqContext& ctx, unsigned n, const FieldElement& a);

RootReport root_report(const RqContext& ctx, unsigned n_max, std::uint64_t r_max = 0);

struct Rq0Membership {
  bool is_member;
  // sum_j a^j p_{nj+k} for k = 1..n-1.
  std::vector<FieldElement> witness_sums;
};

Rq0Membership rq0_membership(const RingPoly& p, const ExtFieldCtx& ext);

// Dense univariate helpers over F_q used by the root finders. Polynomials are
// low-to-high coefficient vectors with no trailing zeros (zero = empty).
namespace fq_poly {

using Poly = std::vector<std::uint64_t>;

void trim(Poly& p);
Poly sub(const Poly& a, const Poly& b, const PrimeModulus& m);
Poly mul(const Poly& a, const Poly& b, const PrimeModulus& m);
// Quotient and remainder of a by nonzero b.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, const PrimeModulus& m);
Poly mod(const Poly& a, const Poly& b, const PrimeModulus& m);
Poly gcd(Poly a, Poly b, const PrimeModulus& m);
// base^exp mod modulus.
Poly powmod(const Poly& base, std::uint64_t exp, const Poly& modulus, const PrimeModulus& m);
std::uint64_t eval(const Poly& p, std::uint64_t x, const PrimeModulus& m);

// Distinct roots in F_q, sorted. Exhaustive scan for small q; otherwise
// gcd with x^q - x followed by Cantor-Zassenhaus splitting.
std::vector<std::uint64_t> roots(const Poly& p, const PrimeModulus& m);
std::vector<std::uint64_t> roots_exhaustive(const Poly& p, const PrimeModulus& m);
std::vector<std::uint64_t> roots_by_splitting(const Poly& p, const PrimeModulus& m);

}  // namespace fq_poly

}  // namespace plwe
