#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "instances.hpp"
#include "plwe/analysis.hpp"
#include "plwe/attacks.hpp"
#include "plwe/errors.hpp"

using namespace plwe;
using namespace plwe::testing;

namespace {

// Every residue sum_j x_j w^j with |x_j| <= B, by direct tuple enumeration.
std::set<std::uint64_t> enumerate_tuples(const FieldElement& w, std::uint64_t r, std::int64_t B) {
  const auto& m = w.modulus();
  std::set<std::uint64_t> out;
  std::vector<std::int64_t> x(r, -B);
  for (;;) {
    FieldElement acc = FieldElement::zero(m);
    for (std::uint64_t j = 0; j < r; ++j) acc += FieldElement::from_signed(m, x[j]) * w.pow(j);
    out.insert(acc.value());
    std::uint64_t k = 0;
    while (k < r && x[k] == B) x[k++] = -B;
    if (k == r) break;
    ++x[k];
  }
  return out;
}

SampleSet draw_plwe(const PlweInstance& inst, std::size_t M, Rng& rng) {
  SampleSet S;
  for (std::size_t i = 0; i < M; ++i) S.push_back(plwe_oracle(inst, rng));
  return S;
}

SampleSet draw_uniform(const RqContext& ctx, std::size_t M, Rng& rng) {
  SampleSet S;
  for (std::size_t i = 0; i < M; ++i) S.push_back(uniform_oracle(ctx, rng));
  return S;
}

}  // namespace

TEST(SigmaTable, MatchesTupleEnumeration) {
  const PrimeModulus m(4099);
  struct Case {
    std::uint64_t w, r, block_len;
    double sigma;
  };
  for (const Case& c : {Case{2018, 6, 1, 0.7}, Case{2017, 3, 2, 1.1}, Case{4098, 2, 5, 1.3}, Case{1, 1, 23, 2.5},
                        Case{2018, 3, 1, 2.5}}) {
    const FieldElement w(m, c.w);
    const SigmaTable t(w, c.r, c.block_len, c.sigma);
    const auto brute = enumerate_tuples(w, c.r, t.coeff_bound());
    EXPECT_EQ(std::vector<std::uint64_t>(t.values().begin(), t.values().end()),
              std::vector<std::uint64_t>(brute.begin(), brute.end()));
    EXPECT_EQ(t.coeff_bound(), static_cast<std::int64_t>(std::floor(2 * std::sqrt(double(c.block_len)) * c.sigma)));
    for (std::uint64_t x = 0; x < 4099; ++x) EXPECT_EQ(t.contains(x), brute.count(x) == 1);
  }
}

TEST(SigmaTable, InstanceSizes) {
  const PrimeModulus m(4099);
  const auto t1 = build_sigma_table_trace(FieldElement(m, 2018), 6, 8 / 6, 0.7);
  EXPECT_EQ(t1.size(), 61U);
  EXPECT_NEAR(t1.analytic_bound(), 3010.936, 1e-3);
  const auto t2 = build_sigma_table_trace(FieldElement(m, 2017), 3, 8 / 3, 2.5);
  EXPECT_EQ(t2.size(), 631U);
  EXPECT_NEAR(t2.analytic_bound(), 3471.854, 1e-3);
}

TEST(SigmaTable, RefusesOversizedEnumeration) {
  const PrimeModulus m(3329);
  EXPECT_THROW(SigmaTable(FieldElement(m, 17), 256, 1, 8.0), TableTooLarge);
}

TEST(SmallSet, TruncatedPlweNeverRejectsAndKeepsTheTrueValue) {
  const RqContext ctx(binomial(6, 1), PrimeModulus(4099));
  const FieldElement alpha(ctx.modulus(), 2018);
  const auto table = build_sigma_table_fq(alpha, 6, 6, 0.7);
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const PlweInstance inst(ctx, GaussianSpec{0.7, true}, rng);
    const auto S = draw_plwe(inst, 15, rng);
    const auto v = small_set_attack(S, table, alpha);
    ASSERT_NE(v.kind, VerdictKind::NotPlwe);
    const auto truth = eval(inst.secret_for_testing(), alpha).value();
    EXPECT_TRUE(std::binary_search(v.survivors.begin(), v.survivors.end(), truth));
  }
}

TEST(SmallSet, UniformInputIsRejected) {
  const RqContext ctx(binomial(6, 1), PrimeModulus(4099));
  const FieldElement alpha(ctx.modulus(), 2018);
  const auto table = build_sigma_table_fq(alpha, 6, 6, 0.7);
  Rng rng(4);
  int rejected = 0;
  for (int trial = 0; trial < 40; ++trial) {
    rejected += small_set_attack(draw_uniform(ctx, 15, rng), table, alpha).kind == VerdictKind::NotPlwe ? 1 : 0;
  }
  EXPECT_EQ(rejected, 40);
}

TEST(SmallSet, ThreadedSearchMatchesSequential) {
  const RqContext ctx(instance2_f(), PrimeModulus(4099));
  const ExtFieldCtx ext(3, FieldElement(ctx.modulus(), 2017));
  const auto table = build_sigma_table_trace(ext.constant(), 3, 2, 2.5);
  Rng rng(8);
  const PlweInstance inst(ctx, GaussianSpec{2.5, false}, rng);
  for (int trial = 0; trial < 5; ++trial) {
    SampleSet S;
    for (int i = 0; i < 4; ++i) S.push_back(plwe_oracle_rq0(inst, ext, rng).sample);
    const auto seq = small_set_attack_trace(S, table, ext, {1});
    for (unsigned t : {2U, 3U, 7U}) {
      const auto par = small_set_attack_trace(S, table, ext, {t});
      EXPECT_EQ(par.kind, seq.kind);
      EXPECT_EQ(par.survivors, seq.survivors);
    }
    const auto pairs = trace_test_pairs(S, ext);
    EXPECT_EQ(quarter_votes(pairs, ctx.modulus(), {1}), quarter_votes(pairs, ctx.modulus(), {4}));
  }
}

TEST(TraceAttack, DegreeOneReducesToTheFqAttack) {
  const RqContext ctx(binomial(6, 1), PrimeModulus(4099));
  const FieldElement alpha(ctx.modulus(), 2018);
  const ExtFieldCtx ext(1, alpha);
  const auto table = build_sigma_table_fq(alpha, 6, 6, 0.7);
  Rng rng(10);
  const PlweInstance inst(ctx, GaussianSpec{0.7, true}, rng);
  for (int trial = 0; trial < 10; ++trial) {
    const auto S = trial % 2 == 0 ? draw_plwe(inst, 6, rng) : draw_uniform(ctx, 3, rng);
    const auto a = small_set_attack(S, table, alpha);
    const auto b = small_set_attack_trace(S, table, ext);
    EXPECT_EQ(a.kind, b.kind);
    EXPECT_EQ(a.survivors, b.survivors);
    const auto c = small_values_attack(S, alpha);
    const auto d = small_values_attack_trace(S, ext);
    EXPECT_EQ(c.survivors, d.survivors);
  }
}

TEST(TraceAttack, RejectsSamplesOutsideTheSubring) {
  const RqContext ctx(instance2_f(), PrimeModulus(4099));
  const ExtFieldCtx ext(3, FieldElement(ctx.modulus(), 2017));
  SampleSet S{{RingPoly::monomial(ctx, 1), RingPoly::zero(ctx)}};
  EXPECT_THROW(trace_test_pairs(S, ext), NonMemberSample);
  EXPECT_THROW(small_values_attack_trace(S, ext), NonMemberSample);
}

TEST(Attacks, EmptySampleSetThrows) {
  const RqContext ctx(binomial(6, 1), PrimeModulus(4099));
  const FieldElement alpha(ctx.modulus(), 2018);
  EXPECT_THROW(small_values_attack({}, alpha), NoSamples);
}

TEST(SmallValues, TruncatedPlweKeepsTheTrueValue) {
  const RqContext ctx(trinomial(64, 3677), PrimeModulus(3677));
  const FieldElement alpha = FieldElement::from_signed(ctx.modulus(), -1);
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const PlweInstance inst(ctx, GaussianSpec{3.0, true}, rng);
    const auto v = small_values_attack(draw_plwe(inst, 30, rng), alpha);
    ASSERT_NE(v.kind, VerdictKind::NotPlwe);
    const auto truth = eval(inst.secret_for_testing(), alpha).value();
    EXPECT_TRUE(std::binary_search(v.survivors.begin(), v.survivors.end(), truth));
  }
}

TEST(Unbounded, VoteCountIsFixedByTheSampleCount) {
  // For v != 0 the map g -> u - v g is a bijection of F_q, so each sample
  // contributes exactly the quarter-interval count whatever the input.
  const RqContext ctx(trinomial(16, 3677), PrimeModulus(3677));
  const FieldElement alpha = FieldElement::from_signed(ctx.modulus(), -1);
  const auto per_sample = static_cast<std::int64_t>(ctx.modulus().quarter_interval_count());
  Rng rng(15);
  const PlweInstance inst(ctx, GaussianSpec{8.0, false}, rng);
  for (int trial = 0; trial < 6; ++trial) {
    const auto S = trial % 2 == 0 ? draw_plwe(inst, 50, rng) : draw_uniform(ctx, 50, rng);
    const auto pairs = fq_test_pairs(S, alpha);
    std::int64_t expected = 0;
    for (const auto& p : pairs) {
      expected += p.v == 0 ? (ctx.modulus().in_quarter_interval(p.u) ? 3677 : 0) : per_sample;
    }
    EXPECT_EQ(quarter_votes(pairs, ctx.modulus()), expected);
    const auto d = unbounded_small_values_attack(S, 0.3, alpha);
    EXPECT_EQ(d.votes, expected);
    EXPECT_EQ(d.threshold, usva_threshold(50, ctx.modulus(), 0.3));
  }
}

TEST(Extended, VotesCountNonRejectingChunks) {
  const RqContext ctx(binomial(6, 1), PrimeModulus(4099));
  const FieldElement alpha(ctx.modulus(), 2018);
  const auto table = build_sigma_table_fq(alpha, 6, 6, 0.7);
  const SubAttack sub = [&](std::span<const Sample> S) { return small_set_attack(S, table, alpha); };
  Rng rng(16);
  const PlweInstance inst(ctx, GaussianSpec{0.7, true}, rng);
  const auto plwe = extended_attack(draw_plwe(inst, 45, rng), 10, sub, 6, 1.0);
  EXPECT_EQ(plwe.votes, 4);
  EXPECT_EQ(plwe.threshold, 4);
  EXPECT_EQ(plwe.kind, DecisionKind::Plwe);
  const auto unif = extended_attack(draw_uniform(ctx, 40, rng), 10, sub, 6, 1.0);
  EXPECT_EQ(unif.votes, 0);
  EXPECT_EQ(unif.kind, DecisionKind::Uniform);
  EXPECT_THROW(extended_attack(draw_uniform(ctx, 5, rng), 10, sub, 6, 1.0), InsufficientSamples);
}
