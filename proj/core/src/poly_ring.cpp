#include "plwe/poly_ring.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace plwe {

namespace {

constexpr std::uint64_t kExhaustiveRootLimit = std::uint64_t{1} << 22;
// Beyond this many Horner steps the splitting path is cheaper.
constexpr std::uint64_t kExhaustiveWorkLimit = std::uint64_t{1} << 28;

void check_size(const RingPoly& p, const RqContext& ctx) {
  if (p.size() != ctx.degree()) {
    throw ContextMismatch("ring element has " + std::to_string(p.size()) + " coefficients, ring degree is " +
                          std::to_string(ctx.degree()));
  }
}

}  // namespace

RqContext::RqContext(std::vector<std::int64_t> f_coeffs, PrimeModulus modulus)
    : f_integer_(std::move(f_coeffs)), modulus_(modulus) {
  if (f_integer_.size() < 2) throw InvalidPolynomial("f must have degree at least 1");
  if (f_integer_.back() != 1) throw InvalidPolynomial("f must be monic");
  f_reduced_.reserve(f_integer_.size());
  for (auto c : f_integer_) f_reduced_.push_back(modulus_.reduce(c));
}

RingPoly RingPoly::constant(const RqContext& ctx, std::uint64_t c) {
  RingPoly p = zero(ctx);
  p.coeffs_[0] = ctx.modulus().reduce_unsigned(c);
  return p;
}

RingPoly RingPoly::monomial(const RqContext& ctx, std::size_t degree) {
  if (degree >= ctx.degree()) throw DomainError("monomial degree must be below the ring degree");
  RingPoly p = zero(ctx);
  p.coeffs_[degree] = 1;
  return p;
}

RingPoly RingPoly::from_signed(const RqContext& ctx, std::span<const std::int64_t> coeffs) {
  if (coeffs.size() != ctx.degree()) throw ContextMismatch("signed coefficient vector has the wrong length");
  std::vector<std::uint64_t> out(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) out[i] = ctx.modulus().reduce(coeffs[i]);
  return RingPoly(std::move(out));
}

RingPoly RingPoly::from_residues(const RqContext& ctx, std::vector<std::uint64_t> coeffs) {
  if (coeffs.size() != ctx.degree()) throw ContextMismatch("residue vector has the wrong length");
  for (auto& c : coeffs) c = ctx.modulus().reduce_unsigned(c);
  return RingPoly(std::move(coeffs));
}

bool RingPoly::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](std::uint64_t c) { return c == 0; });
}

RingPoly ring_add(const RingPoly& p, const RingPoly& s, const RqContext& ctx) {
  check_size(p, ctx);
  check_size(s, ctx);
  std::vector<std::uint64_t> out(p.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ctx.modulus().add(p[i], s[i]);
  return RingPoly(std::move(out));
}

RingPoly ring_sub(const RingPoly& p, const RingPoly& s, const RqContext& ctx) {
  check_size(p, ctx);
  check_size(s, ctx);
  std::vector<std::uint64_t> out(p.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ctx.modulus().sub(p[i], s[i]);
  return RingPoly(std::move(out));
}

RingPoly ring_mul(const RingPoly& p, const RingPoly& s, const RqContext& ctx) {
  check_size(p, ctx);
  check_size(s, ctx);
  const auto& m = ctx.modulus();
  const std::size_t n = ctx.degree();
  std::vector<std::uint64_t> wide(2 * n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      wide[i + j] = m.add(wide[i + j], m.mul(p[i], s[j]));
    }
  }
  // x^k = -sum_{i<N} f_i x^(k-N+i) for k >= N, top down.
  const auto f = ctx.coeffs();
  for (std::size_t k = wide.size(); k-- > n;) {
    const std::uint64_t lead = wide[k];
    if (lead == 0) continue;
    wide[k] = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (f[i] == 0) continue;
      const std::size_t idx = k - n + i;
      wide[idx] = m.sub(wide[idx], m.mul(lead, f[i]));
    }
  }
  wide.resize(n);
  return RingPoly(std::move(wide));
}

FieldElement eval(const RingPoly& p, const FieldElement& x) {
  const auto& m = x.modulus();
  std::uint64_t acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = m.add(m.mul(acc, x.value()), m.reduce_unsigned(p[i]));
  return FieldElement(m, acc);
}

ExtFieldElement eval(const RingPoly& p, const ExtFieldElement& beta) {
  const ExtFieldCtx& ctx = beta.context();
  ExtFieldElement acc = ctx.zero();
  for (std::size_t i = p.size(); i-- > 0;) {
    acc = acc * beta + ctx.embed(FieldElement(ctx.modulus(), p[i]));
  }
  return acc;
}

ExtFieldElement eval_at_generator(const RingPoly& p, const ExtFieldCtx& ext) {
  const auto& m = ext.modulus();
  const unsigned n = ext.degree();
  const std::uint64_t a = ext.constant().value();
  std::vector<std::uint64_t> out(n, 0);
  if (n == 1) {
    return ext.embed(eval(p, ext.constant()));
  }
  std::uint64_t a_pow = 1;
  for (std::size_t base = 0; base < p.size(); base += n) {
    for (unsigned k = 0; k < n && base + k < p.size(); ++k) {
      out[k] = m.add(out[k], m.mul(a_pow, p[base + k]));
    }
    a_pow = m.mul(a_pow, a);
  }
  return ext.from_coeffs(std::move(out));
}

std::vector<RootInfo> find_fq_roots(const RqContext& ctx, std::uint64_t r_max) {
  const auto& m = ctx.modulus();
  fq_poly::Poly f(ctx.coeffs().begin(), ctx.coeffs().end());
  fq_poly::trim(f);
  std::vector<RootInfo> out;
  for (std::uint64_t x : fq_poly::roots(f, m)) {
    const FieldElement root(m, x);
    const std::uint64_t order = x == 0 ? 0 : mult_order(root);
    if (r_max > 0 && (order == 0 || order > r_max)) continue;
    out.push_back({root, order});
  }
  return out;
}

std::vector<BinomialFactor> find_binomial_factors(const RqContext& ctx, unsigned n) {
  std::vector<BinomialFactor> out;
  if (n < 2 || n > ctx.degree()) return out;
  const auto& m = ctx.modulus();
  const auto f = ctx.coeffs();
  // f mod (x^n - a) = sum_k x^k P_k(a) with P_k(t) = sum_j f_{nj+k} t^j, so the
  // admissible a are the common roots of P_0..P_{n-1}.
  std::vector<fq_poly::Poly> parts(n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto& part = parts[i % n];
    const std::size_t j = i / n;
    if (part.size() <= j) part.resize(j + 1, 0);
    part[j] = f[i];
  }
  for (auto& part : parts) fq_poly::trim(part);

  std::vector<std::uint64_t> candidates;
  const std::uint64_t q = m.value();
  if (q < kExhaustiveRootLimit && q * (f.size() + 1) <= kExhaustiveWorkLimit) {
    for (std::uint64_t a = 1; a < q; ++a) {
      bool divides = true;
      for (const auto& part : parts) {
        if (fq_poly::eval(part, a, m) != 0) {
          divides = false;
          break;
        }
      }
      if (divides) candidates.push_back(a);
    }
  } else {
    fq_poly::Poly g = parts[0];
    for (unsigned k = 1; k < n; ++k) g = fq_poly::gcd(g, parts[k], m);
    if (g.empty()) throw InvalidPolynomial("f vanishes identically modulo q");
    for (std::uint64_t a : fq_poly::roots(g, m)) {
      if (a != 0) candidates.push_back(a);
    }
  }
  for (std::uint64_t a : candidates) {
    const FieldElement fa(m, a);
    if (!is_irreducible_binomial(n, fa)) continue;
    out.push_back({n, fa, mult_order(fa)});
  }
  return out;
}

bool binomial_divides(const RqContext& ctx, unsigned n, const FieldElement& a) {
  if (n == 0 || n > ctx.degree()) return false;
  const auto& m = ctx.modulus();
  const auto f = ctx.coeffs();
  std::vector<std::uint64_t> rem(n, 0);
  std::uint64_t a_pow = 1;
  for (std::size_t base = 0; base < f.size(); base += n) {
    for (unsigned k = 0; k < n && base + k < f.size(); ++k) rem[k] = m.add(rem[k], m.mul(a_pow, f[base + k]));
    a_pow = m.mul(a_pow, a.value());
  }
  return std::all_of(rem.begin(), rem.end(), [](std::uint64_t c) { return c == 0; });
}

RootReport root_report(const RqContext& ctx, unsigned n_max, std::uint64_t r_max) {
  RootReport report;
  report.fq_roots = find_fq_roots(ctx, r_max);
  for (unsigned n = 2; n <= n_max; ++n) {
    auto factors = find_binomial_factors(ctx, n);
    report.binomial_factors.insert(report.binomial_factors.end(), factors.begin(), factors.end());
  }
  return report;
}

Rq0Membership rq0_membership(const RingPoly& p, const ExtFieldCtx& ext) {
  const auto& m = ext.modulus();
  const unsigned n = ext.degree();
  const std::uint64_t a = ext.constant().value();
  std::vector<std::uint64_t> sums(n > 0 ? n - 1 : 0, 0);
  std::uint64_t a_pow = 1;
  for (std::size_t base = 0; base < p.size(); base += n) {
    for (unsigned k = 1; k < n && base + k < p.size(); ++k) {
      sums[k - 1] = m.add(sums[k - 1], m.mul(a_pow, p[base + k]));
    }
    a_pow = m.mul(a_pow, a);
  }
  Rq0Membership result{true, {}};
  result.witness_sums.reserve(sums.size());
  for (auto s : sums) {
    if (s != 0) result.is_member = false;
    result.witness_sums.emplace_back(m, s);
  }
  return result;
}

namespace fq_poly {

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly sub(const Poly& a, const Poly& b, const PrimeModulus& m) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint64_t x = i < a.size() ? a[i] : 0;
    const std::uint64_t y = i < b.size() ? b[i] : 0;
    out[i] = m.sub(x, y);
  }
  trim(out);
  return out;
}

Poly mul(const Poly& a, const Poly& b, const PrimeModulus& m) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = m.add(out[i + j], m.mul(a[i], b[j]));
  }
  trim(out);
  return out;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, const PrimeModulus& m) {
  if (b.empty()) throw DivisionByZero();
  Poly rem = a;
  trim(rem);
  if (rem.size() < b.size()) return {{}, rem};
  Poly quot(rem.size() - b.size() + 1, 0);
  const std::uint64_t lead_inv = m.inv(b.back());
  for (std::size_t k = rem.size(); k-- >= b.size();) {
    const std::uint64_t c = m.mul(rem[k], lead_inv);
    const std::size_t shift = k - (b.size() - 1);
    quot[shift] = c;
    if (c != 0) {
      for (std::size_t i = 0; i < b.size(); ++i) rem[shift + i] = m.sub(rem[shift + i], m.mul(c, b[i]));
    }
    if (k == b.size() - 1) break;
  }
  trim(quot);
  rem.resize(b.size() - 1);
  trim(rem);
  return {quot, rem};
}

Poly mod(const Poly& a, const Poly& b, const PrimeModulus& m) { return divmod(a, b, m).second; }

Poly gcd(Poly a, Poly b, const PrimeModulus& m) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(a, b, m);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::uint64_t inv = m.inv(a.back());
    for (auto& c : a) c = m.mul(c, inv);
  }
  return a;
}

Poly powmod(const Poly& base, std::uint64_t exp, const Poly& modulus, const PrimeModulus& m) {
  Poly result = mod(Poly{1}, modulus, m);
  Poly b = mod(base, modulus, m);
  while (exp > 0) {
    if (exp & 1U) result = mod(mul(result, b, m), modulus, m);
    b = mod(mul(b, b, m), modulus, m);
    exp >>= 1U;
  }
  return result;
}

std::uint64_t eval(const Poly& p, std::uint64_t x, const PrimeModulus& m) {
  std::uint64_t acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = m.add(m.mul(acc, x), p[i]);
  return acc;
}

std::vector<std::uint64_t> roots_exhaustive(const Poly& p, const PrimeModulus& m) {
  std::vector<std::uint64_t> out;
  if (p.empty()) throw InvalidPolynomial("the zero polynomial has every element as a root");
  for (std::uint64_t x = 0; x < m.value(); ++x) {
    if (eval(p, x, m) == 0) out.push_back(x);
  }
  return out;
}

namespace {

void split_roots(const Poly& g, const PrimeModulus& m, std::mt19937_64& rng, std::vector<std::uint64_t>& out) {
  if (g.size() <= 1) return;
  if (g.size() == 2) {
    // g = g0 + g1 x, monic after gcd normalization.
    out.push_back(m.neg(m.mul(g[0], m.inv(g[1]))));
    return;
  }
  std::uniform_int_distribution<std::uint64_t> pick(0, m.value() - 1);
  for (;;) {
    const Poly shifted{pick(rng), 1};
    Poly h = powmod(shifted, (m.value() - 1) / 2, g, m);
    h = sub(h, Poly{1}, m);
    Poly d = gcd(g, h, m);
    if (d.size() > 1 && d.size() < g.size()) {
      split_roots(d, m, rng, out);
      split_roots(gcd(divmod(g, d, m).first, g, m), m, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::uint64_t> roots_by_splitting(const Poly& p, const PrimeModulus& m) {
  Poly f = p;
  trim(f);
  if (f.empty()) throw InvalidPolynomial("the zero polynomial has every element as a root");
  std::vector<std::uint64_t> out;
  if (f[0] == 0) {
    out.push_back(0);
    while (!f.empty() && f[0] == 0) f.erase(f.begin());
  }
  if (f.size() > 1) {
    // Product of the distinct linear factors: gcd(f, x^q - x).
    Poly xq = powmod(Poly{0, 1}, m.value(), f, m);
    Poly g = gcd(f, sub(xq, Poly{0, 1}, m), m);
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ m.value());
    split_roots(g, m, rng, out);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint64_t> roots(const Poly& p, const PrimeModulus& m) {
  const std::uint64_t q = m.value();
  if (q < kExhaustiveRootLimit && q * (p.size() + 1) <= kExhaustiveWorkLimit) return roots_exhaustive(p, m);
  return roots_by_splitting(p, m);
}

}  // namespace fq_poly

}  // namespace plwe
