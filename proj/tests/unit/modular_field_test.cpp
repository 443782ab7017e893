#include <gtest/gtest.h>

#include <random>
#include <set>

#include "plwe/errors.hpp"
#include "plwe/modular_field.hpp"
#include "plwe/poly_ring.hpp"

using namespace plwe;

namespace {

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t brute_order(std::uint64_t a, std::uint64_t q) {
  std::uint64_t x = a % q;
  for (std::uint64_t r = 1;; ++r) {
    if (x == 1) return r;
    x = x * a % q;
  }
}

// x^n - a irreducible iff no monic factor of degree 1..n/2 divides it.
bool brute_irreducible(unsigned n, std::uint64_t a, const PrimeModulus& m) {
  const std::uint64_t q = m.value();
  fq_poly::Poly target(n + 1, 0);
  target[0] = m.neg(a);
  target[n] = 1;
  for (unsigned d = 1; d <= n / 2; ++d) {
    std::uint64_t count = 1;
    for (unsigned i = 0; i < d; ++i) count *= q;
    for (std::uint64_t code = 0; code < count; ++code) {
      fq_poly::Poly g(d + 1, 0);
      std::uint64_t c = code;
      for (unsigned i = 0; i < d; ++i) {
        g[i] = c % q;
        c /= q;
      }
      g[d] = 1;
      if (fq_poly::divmod(target, g, m).second.empty()) return false;
    }
  }
  return true;
}

}  // namespace

TEST(PrimeModulus, PrimalityMatchesTrialDivision) {
  for (std::uint64_t n = 0; n < 5000; ++n) EXPECT_EQ(is_prime(n), trial_division_prime(n)) << n;
  EXPECT_TRUE(is_prime(2305843009213693951ULL));  // 2^61 - 1
  EXPECT_FALSE(is_prime(2305843009213693953ULL));
}

TEST(PrimeModulus, RejectsCompositeAndOutOfRange) {
  EXPECT_THROW(PrimeModulus(1), InvalidModulus);
  EXPECT_THROW(PrimeModulus(2), InvalidModulus);
  EXPECT_THROW(PrimeModulus(4101), InvalidModulus);
  EXPECT_THROW(PrimeModulus((std::uint64_t{1} << 62) + 1), InvalidModulus);
  EXPECT_NO_THROW(PrimeModulus(4099));
}

TEST(PrimeModulus, MulMatchesWideProduct) {
  const PrimeModulus m(2305843009213693951ULL);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t x = rng() % m.value();
    const std::uint64_t y = rng() % m.value();
    __extension__ const unsigned __int128 wide = static_cast<unsigned __int128>(x) * y;
    EXPECT_EQ(m.mul(x, y), static_cast<std::uint64_t>(wide % m.value()));
  }
}

TEST(PrimeModulus, InverseAndPow) {
  const PrimeModulus m(101);
  for (std::uint64_t x = 1; x < 101; ++x) {
    EXPECT_EQ(m.mul(x, m.inv(x)), 1U);
    EXPECT_EQ(m.pow(x, 100), 1U);
  }
  EXPECT_THROW(m.inv(0), DivisionByZero);
}

TEST(PrimeModulus, SignedReductionIsCanonical) {
  const PrimeModulus m(4099);
  EXPECT_EQ(m.reduce(-1), 4098U);
  EXPECT_EQ(m.reduce(-4099), 0U);
  EXPECT_EQ(m.reduce(-8199), 4098U);
  EXPECT_EQ(m.centered(4098), -1);
  EXPECT_EQ(m.centered(2049), 2049);
  EXPECT_EQ(m.centered(2050), -2049);
}

TEST(PrimeModulus, QuarterCountMatchesEnumeration) {
  for (std::uint64_t q : {5, 7, 11, 13, 17, 19, 2887, 3329, 3677, 4099, 4111}) {
    const PrimeModulus m(q);
    std::uint64_t hits = 0;
    for (std::uint64_t x = 0; x < q; ++x) {
      const std::int64_t c = m.centered(x);
      if (-static_cast<std::int64_t>(q) <= 4 * c && 4 * c < static_cast<std::int64_t>(q)) ++hits;
      EXPECT_EQ(m.in_quarter_interval(x), -static_cast<std::int64_t>(q) <= 4 * c && 4 * c < static_cast<std::int64_t>(q));
    }
    EXPECT_EQ(m.quarter_interval_count(), hits) << q;
    EXPECT_EQ(2 * hits, q % 4 == 1 ? q + 1 : q - 1) << q;
  }
}

TEST(FieldElement, OrderMatchesBruteForce) {
  const PrimeModulus m(4099);
  for (std::uint64_t a : {1, 2, 3, 2017, 2018, 3330, 4098}) {
    EXPECT_EQ(mult_order(FieldElement(m, a)), brute_order(a, 4099)) << a;
  }
  EXPECT_EQ(mult_order(FieldElement(m, 2018)), 6U);
  EXPECT_EQ(mult_order(FieldElement(m, 2017)), 3U);
  EXPECT_THROW(mult_order(FieldElement::zero(m)), ZeroHasNoOrder);
}

TEST(FieldElement, MixedModuliThrow) {
  const FieldElement x(PrimeModulus(5), 2);
  const FieldElement y(PrimeModulus(7), 2);
  EXPECT_THROW(x + y, ContextMismatch);
  EXPECT_THROW(x * y, ContextMismatch);
}

TEST(IrreducibleBinomial, CriterionMatchesBruteForceOnSmallFields) {
  for (std::uint64_t q : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
    const PrimeModulus m(q);
    for (unsigned n = 1; n <= 4; ++n) {
      for (std::uint64_t a = 1; a < q; ++a) {
        EXPECT_EQ(is_irreducible_binomial(n, FieldElement(m, a)), brute_irreducible(n, a, m))
            << "q=" << q << " n=" << n << " a=" << a;
      }
    }
  }
}

TEST(ExtField, ConstructionRejectsReducibleBinomial) {
  const PrimeModulus m(5);
  EXPECT_THROW(ExtFieldCtx(2, FieldElement(m, 4)), ReducibleBinomial);
  EXPECT_NO_THROW(ExtFieldCtx(2, FieldElement(m, 2)));
}

TEST(ExtField, FieldAxiomsOnRandomElements) {
  const PrimeModulus m(4099);
  const ExtFieldCtx ctx(3, FieldElement(m, 2018));
  std::mt19937_64 rng(11);
  auto random_elem = [&] {
    return ctx.from_coeffs({rng() % 4099, rng() % 4099, rng() % 4099});
  };
  for (int i = 0; i < 200; ++i) {
    const auto x = random_elem();
    const auto y = random_elem();
    const auto z = random_elem();
    EXPECT_EQ(x * (y + z), x * y + x * z);
    EXPECT_EQ((x * y) * z, x * (y * z));
    if (!x.is_zero()) {
      EXPECT_EQ(x * x.inverse(), ctx.one());
    }
  }
}

TEST(ExtField, FrobeniusIsAnAutomorphismOfOrderN) {
  const PrimeModulus m(4099);
  const ExtFieldCtx ctx(3, FieldElement(m, 2017));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto x = ctx.from_coeffs({rng() % 4099, rng() % 4099, rng() % 4099});
    const auto y = ctx.from_coeffs({rng() % 4099, rng() % 4099, rng() % 4099});
    EXPECT_EQ((x * y).frobenius(), x.frobenius() * y.frobenius());
    EXPECT_EQ(x.frobenius(), x.pow(4099));
    EXPECT_EQ(x.frobenius().frobenius().frobenius(), x);
  }
}

TEST(ExtField, TraceIsLinearAndNormMultiplicative) {
  const PrimeModulus m(13);
  const ExtFieldCtx ctx(2, FieldElement(m, 2));
  for (std::uint64_t a0 = 0; a0 < 13; a0 += 3) {
    for (std::uint64_t a1 = 0; a1 < 13; a1 += 2) {
      const auto x = ctx.from_coeffs({a0, a1});
      const auto y = ctx.from_coeffs({a1, 5});
      const FieldElement c(m, 7);
      EXPECT_EQ((x + y).trace(), x.trace() + y.trace());
      EXPECT_EQ((x * c).trace(), x.trace() * c);
      EXPECT_EQ((x * y).norm(), x.norm() * y.norm());
      EXPECT_EQ(x.trace(), FieldElement(m, 2 * a0));
    }
  }
  EXPECT_EQ(ctx.embed(FieldElement(m, 5)).trace(), FieldElement(m, 10));
}

TEST(ExtField, TracesOfGeneratorPowers) {
  for (std::uint64_t a : {2017, 2018}) {
    const PrimeModulus m(4099);
    const FieldElement af(m, a);
    const ExtFieldCtx ctx(3, af);
    const auto alpha = ctx.generator();
    for (unsigned j = 1; j <= 30; ++j) {
      const FieldElement t = alpha.pow(j).trace();
      if (j % 3 != 0) {
        EXPECT_TRUE(t.is_zero()) << "a=" << a << " j=" << j;
      } else {
        EXPECT_EQ(t, FieldElement(m, 3) * af.pow(j / 3)) << "a=" << a << " j=" << j;
      }
    }
  }
}

TEST(ExtField, DegreeOneIsTheBaseField) {
  const PrimeModulus m(11);
  const ExtFieldCtx ctx(1, FieldElement(m, 4));
  EXPECT_EQ(ctx.generator().to_base(), FieldElement(m, 4));
  EXPECT_EQ(ctx.generator().trace(), FieldElement(m, 4));
}
