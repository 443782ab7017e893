#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "instances.hpp"
#include "plwe/errors.hpp"
#include "plwe/samplers.hpp"

using namespace plwe;
using namespace plwe::testing;

namespace {

double normal_cdf(double x, double sigma) { return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0))); }

std::int64_t coeff_centered(const RqContext& ctx, std::uint64_t x) { return ctx.modulus().centered(x); }

}  // namespace

TEST(Seeds, DerivedStreamsAreDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
  EXPECT_EQ(seen.size(), 1000U);
  EXPECT_EQ(derive_seed(42, 7), derive_seed(42, 7));
  EXPECT_NE(derive_seed(42, 7), derive_seed(43, 7));
}

TEST(Gaussian, SameSeedSameDraws) {
  const GaussianSpec g{2.5, false};
  Rng a(99);
  Rng b(99);
  EXPECT_EQ(draw_error(g, 200, a), draw_error(g, 200, b));
}

TEST(Gaussian, RejectsNonPositiveSigma) {
  EXPECT_THROW((GaussianSpec{0.0, false}.validate()), DomainError);
  EXPECT_THROW((GaussianSpec{-1.0, true}.validate()), DomainError);
}

TEST(Gaussian, TruncatedSupportIsRespected) {
  for (double sigma : {0.7, 2.5, 3.0, 8.0}) {
    const GaussianSpec g{sigma, true};
    Rng rng(1);
    const auto bound = g.support_bound();
    EXPECT_EQ(bound, static_cast<std::int64_t>(std::floor(2 * sigma)));
    std::int64_t seen_max = 0;
    for (auto x : draw_error(g, 100000, rng)) {
      ASSERT_LE(std::llabs(x), bound);
      seen_max = std::max<std::int64_t>(seen_max, std::llabs(x));
    }
    EXPECT_EQ(seen_max, bound) << sigma;
  }
}

TEST(Gaussian, RoundedHistogramPassesChiSquare) {
  const double sigma = 2.5;
  const GaussianSpec g{sigma, false};
  Rng rng(2024);
  const int n = 200000;
  std::map<std::int64_t, int> counts;
  for (auto x : draw_error(g, n, rng)) counts[std::clamp<std::int64_t>(x, -7, 7)]++;
  double chi2 = 0.0;
  for (std::int64_t k = -7; k <= 7; ++k) {
    double p = 0.0;
    if (k == -7) {
      p = normal_cdf(-6.5, sigma);
    } else if (k == 7) {
      p = 1.0 - normal_cdf(6.5, sigma);
    } else {
      p = normal_cdf(k + 0.5, sigma) - normal_cdf(k - 0.5, sigma);
    }
    const double expected = p * n;
    chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
  }
  // 14 degrees of freedom; 36.1 is the 0.001 quantile.
  EXPECT_LT(chi2, 36.1);
}

TEST(Gaussian, UntruncatedMassInsideTwoSigma) {
  const GaussianSpec g{40.0, false};
  Rng rng(5);
  const int n = 400000;
  int inside = 0;
  for (auto x : draw_error(g, n, rng)) inside += std::llabs(x) <= 80 ? 1 : 0;
  // Rounding adds the sliver (80, 80.5) on each side.
  const double expected = 2 * normal_cdf(80.5, 40.0) - 1;
  EXPECT_NEAR(static_cast<double>(inside) / n, expected, 0.003);
  EXPECT_NEAR(g.p0(), 0.9545, 1e-9);
  EXPECT_EQ((GaussianSpec{1.0, true}.p0()), 1.0);
}

TEST(UniformOracle, ResiduesAreUniform) {
  const RqContext ctx(trinomial(8, 3), PrimeModulus(7));
  Rng rng(8);
  std::vector<int> counts(7, 0);
  const int samples = 20000;
  for (int i = 0; i < samples; ++i) {
    const auto s = uniform_oracle(ctx, rng);
    for (auto c : s.a.coeffs()) counts[c]++;
    for (auto c : s.b.coeffs()) counts[c]++;
  }
  const double expected = samples * 16.0 / 7.0;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 22.5);  // 6 dof, 0.001 quantile
}

TEST(PlweOracle, ErrorIsRecoverable) {
  const RqContext ctx(instance2_f(), PrimeModulus(4099));
  Rng rng(31);
  const PlweInstance inst(ctx, GaussianSpec{2.5, true}, rng);
  for (int i = 0; i < 50; ++i) {
    const auto d = plwe_oracle_detailed(inst, rng);
    const auto e = ring_sub(d.sample.b, ring_mul(d.sample.a, inst.secret_for_testing(), ctx), ctx);
    for (std::size_t k = 0; k < ctx.degree(); ++k) {
      EXPECT_EQ(coeff_centered(ctx, e[k]), d.error[k]);
      EXPECT_LE(std::llabs(d.error[k]), 5);
    }
  }
}

TEST(PlweOracle, SampleWithIsExact) {
  const RqContext ctx(binomial(6, 1), PrimeModulus(4099));
  const PlweInstance inst(ctx, GaussianSpec{1.0, false}, RingPoly::constant(ctx, 3));
  const auto a = RingPoly::monomial(ctx, 1);
  const std::vector<std::int64_t> e{1, -1, 0, 0, 0, 2};
  const auto s = inst.sample_with(a, e);
  // x * 3 + e
  EXPECT_EQ(s.b.coeffs()[0], 1U);
  EXPECT_EQ(s.b.coeffs()[1], 2U);
  EXPECT_EQ(s.b.coeffs()[5], 2U);
}

TEST(Rq0Sampling, RejectionCountIsGeometricWithMeanQToTheNMinusOne) {
  // x^4 - 4 = (x^2 - 2)(x^2 + 2) over F_5.
  const RqContext ctx(binomial(4, 4), PrimeModulus(5));
  const ExtFieldCtx ext(2, FieldElement(ctx.modulus(), 2));
  Rng rng(77);
  const SampleSource source = [&ctx](Rng& r) { return uniform_oracle(ctx, r); };
  double total = 0;
  const int runs = 4000;
  for (int i = 0; i < runs; ++i) {
    const auto d = sample_rq0(source, ext, rng);
    ASSERT_TRUE(rq0_membership(d.sample.a, ext).is_member);
    total += static_cast<double>(d.count);
  }
  EXPECT_NEAR(total / runs, 5.0, 0.5);
}

TEST(Rq0Sampling, BudgetIsEnforced) {
  const RqContext ctx(instance2_f(), PrimeModulus(4099));
  const ExtFieldCtx ext(3, FieldElement(ctx.modulus(), 2017));
  Rng rng(1);
  const SampleSource source = [&ctx](Rng& r) { return uniform_oracle(ctx, r); };
  EXPECT_THROW(sample_rq0(source, ext, rng, 10), BudgetExhausted);
}

TEST(Rq0Sampling, DirectConstructionIsUniformOverTheSubring) {
  const PrimeModulus m(3);
  const RqContext ctx({0, 0, -2, 0, 1}, m);
  const ExtFieldCtx ext(2, FieldElement(m, 2));
  Rng rng(4);
  std::map<std::vector<std::uint64_t>, int> counts;
  const int draws = 27000;
  for (int i = 0; i < draws; ++i) {
    const auto p = uniform_rq0_poly(ctx, ext, rng);
    ASSERT_TRUE(rq0_membership(p, ext).is_member);
    counts[std::vector<std::uint64_t>(p.coeffs().begin(), p.coeffs().end())]++;
  }
  EXPECT_EQ(counts.size(), 27U);
  double chi2 = 0.0;
  for (const auto& [k, c] : counts) chi2 += (c - 1000.0) * (c - 1000.0) / 1000.0;
  EXPECT_LT(chi2, 54.1);  // 26 dof, 0.001 quantile
}

TEST(Rq0Sampling, PlweSamplesOverTheSubringKeepTheirShape) {
  const RqContext ctx(instance1_f(), PrimeModulus(4099));
  const ExtFieldCtx ext(3, FieldElement(ctx.modulus(), 2018));
  Rng rng(12);
  const PlweInstance inst(ctx, GaussianSpec{2.5, false}, rng);
  for (int i = 0; i < 20; ++i) {
    const auto d = plwe_oracle_rq0(inst, ext, rng);
    EXPECT_TRUE(rq0_membership(d.sample.a, ext).is_member);
    const auto e = ring_sub(d.sample.b, ring_mul(d.sample.a, inst.secret_for_testing(), ctx), ctx);
    for (std::size_t k = 0; k < ctx.degree(); ++k) EXPECT_EQ(coeff_centered(ctx, e[k]), d.error[k]);
  }
}

TEST(Rq0Sampling, TracedErrorCollapsesToEveryNthCoefficient) {
  // n^-1 Tr(e(alpha)) = sum_j a^j e_{nj}
  const RqContext ctx(instance1_f(), PrimeModulus(4099));
  const auto& m = ctx.modulus();
  const FieldElement a(m, 2018);
  const ExtFieldCtx ext(3, a);
  Rng rng(6);
  const FieldElement inv3 = FieldElement(m, 3).inverse();
  for (int i = 0; i < 100; ++i) {
    const auto e = draw_error(GaussianSpec{2.5, false}, ctx.degree(), rng);
    const RingPoly ep = RingPoly::from_signed(ctx, e);
    FieldElement expected = FieldElement::zero(m);
    for (std::size_t j = 0; 3 * j < ctx.degree(); ++j) expected += a.pow(j) * FieldElement::from_signed(m, e[3 * j]);
    EXPECT_EQ(eval_at_generator(ep, ext).trace() * inv3, expected);
  }
}
