#include "plwe/modular_field.hpp"

#include <string>

namespace plwe {

namespace {

using detail::u128;

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mulmod64(result, base, m);
    base = mulmod64(base, base, m);
    exp >>= 1U;
  }
  return result;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // Witness set proven sufficient for n < 2^64.
  for (std::uint64_t w : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    const std::uint64_t a = w % n;
    if (a == 0) continue;
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

PrimeModulus::PrimeModulus(std::uint64_t q) : q_(q) {
  if (q <= 2 || q >= kMaxModulus) {
    throw InvalidModulus("q must be an odd prime below 2^62, got " + std::to_string(q));
  }
  if (!is_prime(q)) {
    throw InvalidModulus("q must be prime, got " + std::to_string(q));
  }
}

std::uint64_t PrimeModulus::reduce(std::int64_t x) const noexcept {
  const auto q = static_cast<std::int64_t>(q_);
  std::int64_t r = x % q;
  if (r < 0) r += q;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t PrimeModulus::pow(std::uint64_t base, std::uint64_t exp) const noexcept {
  return powmod64(base, exp, q_);
}

std::uint64_t PrimeModulus::inv(std::uint64_t x) const {
  x %= q_;
  if (x == 0) throw DivisionByZero();
  return powmod64(x, q_ - 2, q_);
}

void FieldElement::check_same(const FieldElement& o) const {
  if (modulus_ != o.modulus_) {
    throw ContextMismatch("field elements over different moduli (" + std::to_string(modulus_.value()) +
                          " vs " + std::to_string(o.modulus_.value()) + ")");
  }
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_same(o);
  return FieldElement(modulus_, modulus_.add(value_, o.value_));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  check_same(o);
  return FieldElement(modulus_, modulus_.sub(value_, o.value_));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same(o);
  return FieldElement(modulus_, modulus_.mul(value_, o.value_));
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  check_same(o);
  return *this * o.inverse();
}

std::uint64_t mult_order(const FieldElement& a) {
  if (a.is_zero()) throw ZeroHasNoOrder();
  const PrimeModulus& m = a.modulus();
  std::uint64_t order = m.value() - 1;
  for (std::uint64_t p : distinct_prime_factors(order)) {
    while (order % p == 0 && m.pow(a.value(), order / p) == 1) order /= p;
  }
  return order;
}

bool is_irreducible_binomial(unsigned n, const FieldElement& a) {
  if (n == 0) throw DomainError("binomial degree must be at least 1");
  if (n == 1) return true;
  if (a.is_zero()) return false;
  const std::uint64_t order = mult_order(a);
  const std::uint64_t cofactor = (a.modulus().value() - 1) / order;
  for (std::uint64_t p : distinct_prime_factors(n)) {
    if (order % p != 0) return false;
    if (cofactor % p == 0) return false;
  }
  if (n % 4 == 0 && a.modulus().q_mod4() != 1) return false;
  return true;
}

ExtFieldCtx::ExtFieldCtx(unsigned n, FieldElement a) : n_(n), a_(a) {
  if (n == 0) throw DomainError("extension degree must be at least 1");
  if (n >= 2 && a.is_zero()) throw ReducibleBinomial("x^n - 0 is reducible for n >= 2");
  if (!is_irreducible_binomial(n, a)) {
    throw ReducibleBinomial("x^" + std::to_string(n) + " - " + std::to_string(a.value()) +
                            " is reducible over F_" + std::to_string(a.modulus().value()));
  }
}

ExtFieldElement ExtFieldCtx::zero() const { return ExtFieldElement(*this, std::vector<std::uint64_t>(n_, 0)); }

ExtFieldElement ExtFieldCtx::one() const {
  std::vector<std::uint64_t> c(n_, 0);
  c[0] = 1;
  return ExtFieldElement(*this, std::move(c));
}

ExtFieldElement ExtFieldCtx::generator() const {
  std::vector<std::uint64_t> c(n_, 0);
  if (n_ == 1) {
    c[0] = a_.value();
  } else {
    c[1] = 1;
  }
  return ExtFieldElement(*this, std::move(c));
}

ExtFieldElement ExtFieldCtx::embed(const FieldElement& x) const {
  if (x.modulus() != modulus()) throw ContextMismatch("embedding an element of a different prime field");
  std::vector<std::uint64_t> c(n_, 0);
  c[0] = x.value();
  return ExtFieldElement(*this, std::move(c));
}

ExtFieldElement ExtFieldCtx::from_coeffs(std::vector<std::uint64_t> coeffs) const {
  return ExtFieldElement(*this, std::move(coeffs));
}

ExtFieldElement::ExtFieldElement(ExtFieldCtx ctx, std::vector<std::uint64_t> coeffs)
    : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != ctx_.degree()) {
    throw DomainError("extension element needs exactly " + std::to_string(ctx_.degree()) + " coordinates");
  }
  for (auto& c : coeffs_) c = ctx_.modulus().reduce_unsigned(c);
}

void ExtFieldElement::check_same(const ExtFieldElement& o) const {
  if (!(ctx_ == o.ctx_)) throw ContextMismatch("extension elements from different contexts");
}

bool ExtFieldElement::is_zero() const noexcept {
  for (auto c : coeffs_) {
    if (c != 0) return false;
  }
  return true;
}

bool ExtFieldElement::in_base_field() const noexcept {
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0) return false;
  }
  return true;
}

FieldElement ExtFieldElement::to_base() const {
  if (!in_base_field()) throw DomainError("extension element is not in the base field");
  return FieldElement(ctx_.modulus(), coeffs_[0]);
}

ExtFieldElement ExtFieldElement::operator+(const ExtFieldElement& o) const {
  check_same(o);
  const auto& m = ctx_.modulus();
  std::vector<std::uint64_t> c(coeffs_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = m.add(coeffs_[i], o.coeffs_[i]);
  return ExtFieldElement(ctx_, std::move(c));
}

ExtFieldElement ExtFieldElement::operator-(const ExtFieldElement& o) const {
  check_same(o);
  const auto& m = ctx_.modulus();
  std::vector<std::uint64_t> c(coeffs_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = m.sub(coeffs_[i], o.coeffs_[i]);
  return ExtFieldElement(ctx_, std::move(c));
}

ExtFieldElement ExtFieldElement::operator-() const {
  const auto& m = ctx_.modulus();
  std::vector<std::uint64_t> c(coeffs_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = m.neg(coeffs_[i]);
  return ExtFieldElement(ctx_, std::move(c));
}

ExtFieldElement ExtFieldElement::operator*(const FieldElement& s) const {
  if (s.modulus() != ctx_.modulus()) throw ContextMismatch("scalar from a different prime field");
  const auto& m = ctx_.modulus();
  std::vector<std::uint64_t> c(coeffs_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = m.mul(coeffs_[i], s.value());
  return ExtFieldElement(ctx_, std::move(c));
}

ExtFieldElement ExtFieldElement::operator*(const ExtFieldElement& o) const {
  check_same(o);
  const auto& m = ctx_.modulus();
  const std::size_t n = coeffs_.size();
  // Schoolbook product, then fold y^(n+k) -> a * y^k.
  std::vector<std::uint64_t> wide(2 * n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      wide[i + j] = m.add(wide[i + j], m.mul(coeffs_[i], o.coeffs_[j]));
    }
  }
  std::vector<std::uint64_t> c(wide.begin(), wide.begin() + static_cast<std::ptrdiff_t>(n));
  const std::uint64_t a = ctx_.constant().value();
  for (std::size_t k = n; k < wide.size(); ++k) {
    c[k - n] = m.add(c[k - n], m.mul(a, wide[k]));
  }
  return ExtFieldElement(ctx_, std::move(c));
}

ExtFieldElement ExtFieldElement::pow(std::uint64_t exp) const {
  ExtFieldElement result = ctx_.one();
  ExtFieldElement base = *this;
  while (exp > 0) {
    if (exp & 1U) result = result * base;
    base = base * base;
    exp >>= 1U;
  }
  return result;
}

ExtFieldElement ExtFieldElement::frobenius() const { return pow(ctx_.modulus().value()); }

FieldElement ExtFieldElement::trace() const {
  ExtFieldElement acc = *this;
  ExtFieldElement conj = *this;
  for (unsigned i = 1; i < ctx_.degree(); ++i) {
    conj = conj.frobenius();
    acc = acc + conj;
  }
  return acc.to_base();
}

FieldElement ExtFieldElement::norm() const {
  ExtFieldElement acc = *this;
  ExtFieldElement conj = *this;
  for (unsigned i = 1; i < ctx_.degree(); ++i) {
    conj = conj.frobenius();
    acc = acc * conj;
  }
  return acc.to_base();
}

ExtFieldElement ExtFieldElement::inverse() const {
  if (is_zero()) throw DivisionByZero();
  // beta^-1 = (product of the other conjugates) / norm(beta).
  ExtFieldElement others = ctx_.one();
  ExtFieldElement conj = *this;
  for (unsigned i = 1; i < ctx_.degree(); ++i) {
    conj = conj.frobenius();
    others = others * conj;
  }
  const FieldElement norm = (*this * others).to_base();
  return others * norm.inverse();
}

}  // namespace plwe
