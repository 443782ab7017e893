#include "plwe/samplers.hpp"

#include <cmath>
#include <string>

namespace plwe {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

std::int64_t GaussianSpec::support_bound() const {
  return static_cast<std::int64_t>(std::floor(2.0 * sigma));
}

void GaussianSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("sigma must be positive, got " + std::to_string(sigma));
  }
}

std::int64_t draw_gaussian(const GaussianSpec& spec, Rng& rng) {
  std::normal_distribution<double> normal(0.0, spec.sigma);
  if (!spec.truncated) return std::llround(normal(rng));
  const double width = 2.0 * spec.sigma;
  const std::int64_t bound = spec.support_bound();
  for (;;) {
    const double x = normal(rng);
    if (std::abs(x) > width) continue;
    const std::int64_t e = std::llround(x);
    if (std::abs(e) <= bound) return e;
  }
}

std::vector<std::int64_t> draw_error(const GaussianSpec& spec, std::size_t n, Rng& rng) {
  std::vector<std::int64_t> e(n);
  for (auto& c : e) c = draw_gaussian(spec, rng);
  return e;
}

RingPoly uniform_poly(const RqContext& ctx, Rng& rng) {
  std::uniform_int_distribution<std::uint64_t> pick(0, ctx.modulus().value() - 1);
  std::vector<std::uint64_t> c(ctx.degree());
  for (auto& x : c) x = pick(rng);
  return RingPoly(std::move(c));
}

Sample uniform_oracle(const RqContext& ctx, Rng& rng) {
  RingPoly a = uniform_poly(ctx, rng);
  RingPoly b = uniform_poly(ctx, rng);
  return {std::move(a), std::move(b)};
}

PlweInstance::PlweInstance(RqContext ctx, GaussianSpec gauss, Rng& rng)
    : ctx_(std::move(ctx)), gauss_(gauss), secret_(uniform_poly(ctx_, rng)) {
  gauss_.validate();
}

PlweInstance::PlweInstance(RqContext ctx, GaussianSpec gauss, RingPoly secret)
    : ctx_(std::move(ctx)), gauss_(gauss), secret_(std::move(secret)) {
  gauss_.validate();
  if (secret_.size() != ctx_.degree()) throw ContextMismatch("secret length differs from the ring degree");
}

Sample PlweInstance::sample_with(const RingPoly& a, std::span<const std::int64_t> error) const {
  const RingPoly e = RingPoly::from_signed(ctx_, error);
  RingPoly b = ring_add(ring_mul(a, secret_, ctx_), e, ctx_);
  return {a, std::move(b)};
}

PlweDraw plwe_oracle_detailed(const PlweInstance& inst, Rng& rng) {
  RingPoly a = uniform_poly(inst.context(), rng);
  auto e = draw_error(inst.gaussian(), inst.context().degree(), rng);
  Sample s = inst.sample_with(a, e);
  return {std::move(s), std::move(e)};
}

Sample plwe_oracle(const PlweInstance& inst, Rng& rng) { return plwe_oracle_detailed(inst, rng).sample; }

Rq0Draw sample_rq0(const SampleSource& source, const ExtFieldCtx& ext, Rng& rng, std::uint64_t cap) {
  for (std::uint64_t count = 1; count <= cap; ++count) {
    Sample s = source(rng);
    if (rq0_membership(s.a, ext).is_member) return {std::move(s), count};
  }
  throw BudgetExhausted("no R_{q,0} sample within " + std::to_string(cap) + " oracle calls");
}

RingPoly uniform_rq0_poly(const RqContext& ctx, const ExtFieldCtx& ext, Rng& rng) {
  if (ext.modulus() != ctx.modulus()) throw ContextMismatch("extension and ring use different primes");
  const unsigned n = ext.degree();
  if (n > ctx.degree()) throw DomainError("extension degree exceeds the ring degree");
  RingPoly p = uniform_poly(ctx, rng);
  if (n == 1) return p;
  const auto& m = ctx.modulus();
  const std::uint64_t a = ext.constant().value();
  for (unsigned k = 1; k < n; ++k) {
    std::uint64_t tail = 0;
    std::uint64_t a_pow = a;
    for (std::size_t idx = n + k; idx < p.size(); idx += n) {
      tail = m.add(tail, m.mul(a_pow, p[idx]));
      a_pow = m.mul(a_pow, a);
    }
    p[k] = m.neg(tail);
  }
  return p;
}

Sample uniform_oracle_rq0(const RqContext& ctx, const ExtFieldCtx& ext, Rng& rng) {
  RingPoly a = uniform_rq0_poly(ctx, ext, rng);
  RingPoly b = uniform_poly(ctx, rng);
  return {std::move(a), std::move(b)};
}

PlweDraw plwe_oracle_rq0(const PlweInstance& inst, const ExtFieldCtx& ext, Rng& rng) {
  RingPoly a = uniform_rq0_poly(inst.context(), ext, rng);
  auto e = draw_error(inst.gaussian(), inst.context().degree(), rng);
  Sample s = inst.sample_with(a, e);
  return {std::move(s), std::move(e)};
}

}  // namespace plwe
