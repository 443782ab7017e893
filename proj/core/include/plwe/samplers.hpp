#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "plwe/modular_field.hpp"
#include "plwe/poly_ring.hpp"

namespace plwe {

using Rng = std::mt19937_64;

// Independent stream seed for (master, index), via splitmix64.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

struct GaussianSpec {
  double sigma = 1.0;
  bool truncated = false;

  static constexpr double kUntruncatedP0 = 0.954500;

  // Mass of the error inside [-2 sigma, 2 sigma].
  double p0() const noexcept { return truncated ? 1.0 : kUntruncatedP0; }
  // Largest magnitude a truncated draw can take.
  std::int64_t support_bound() const;
  void validate() const;
};

// round(x) for x ~ N(0, sigma^2). Truncated specs resample until |x| <= 2 sigma
// and |round(x)| <= floor(2 sigma).
std::int64_t draw_gaussian(const GaussianSpec& spec, Rng& rng);
std::vector<std::int64_t> draw_error(const GaussianSpec& spec, std::size_t n, Rng& rng);

RingPoly uniform_poly(const RqContext& ctx, Rng& rng);

struct Sample {
  RingPoly a;
  RingPoly b;

  friend bool operator==(const Sample&, const Sample&) = default;
};

Sample uniform_oracle(const RqContext& ctx, Rng& rng);

class PlweInstance {
 public:
  // Secret drawn uniformly from R_q.
  PlweInstance(RqContext ctx, GaussianSpec gauss, Rng& rng);
  PlweInstance(RqContext ctx, GaussianSpec gauss, RingPoly secret);

  const RqContext& context() const noexcept { return ctx_; }
  const GaussianSpec& gaussian() const noexcept { return gauss_; }
  const RingPoly& secret_for_testing() const noexcept { return secret_; }

  // (a, a*s + e) for caller-chosen a and e.
  Sample sample_with(const RingPoly& a, std::span<const std::int64_t> error) const;

 private:
  RqContext ctx_;
  GaussianSpec gauss_;
  RingPoly secret_;
};

struct PlweDraw {
  Sample sample;
  std::vector<std::int64_t> error;
};

PlweDraw plwe_oracle_detailed(const PlweInstance& inst, Rng& rng);
Sample plwe_oracle(const PlweInstance& inst, Rng& rng);

using SampleSource = std::function<Sample(Rng&)>;

struct Rq0Draw {
  Sample sample;
  std::uint64_t count;
};

// Calls source until sample.a lies in R_{q,0}. count includes the accepted call.
Rq0Draw sample_rq0(const SampleSource& source, const ExtFieldCtx& ext, Rng& rng,
                   std::uint64_t cap = 100'000'000);

// Uniform element of R_{q,0}: free coefficients drawn uniformly, then p_k for
// k = 1..n-1 solved so that the witness sums vanish.
RingPoly uniform_rq0_poly(const RqContext& ctx, const ExtFieldCtx& ext, Rng& rng);

Sample uniform_oracle_rq0(const RqContext& ctx, const ExtFieldCtx& ext, Rng& rng);
PlweDraw plwe_oracle_rq0(const PlweInstance& inst, const ExtFieldCtx& ext, Rng& rng);

}  // namespace plwe
