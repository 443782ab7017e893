#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plwe/modular_field.hpp"
#include "plwe/poly_ring.hpp"
#include "plwe/samplers.hpp"

namespace plwe {

enum class Setting { Fq, Trace };
enum class CaseKind { PmOne, SmallOrder, General };

const char* to_string(Setting s) noexcept;
const char* to_string(CaseKind k) noexcept;

// +1 for q = 1 mod 4, -1 for q = 3 mod 4: the sign in 1/2 +- 1/(2q).
int uniform_offset_sign(const PrimeModulus& q) noexcept;
// P(U in [-q/4, q/4)) = 1/2 +- 1/(2q).
double uniform_quarter_rate(const PrimeModulus& q) noexcept;

struct VarianceTerm {
  std::int64_t weight;  // centered w^i
  std::uint64_t multiplicity;
};

struct VarianceCase {
  Setting setting = Setting::Fq;
  CaseKind kind = CaseKind::General;
  std::uint64_t order = 0;       // 0 for w = 0
  std::uint64_t terms_total = 0;  // N for F_q, N' for trace
  std::uint64_t block_len = 1;   // floor(terms_total / order) for small order
  std::vector<VarianceTerm> terms;
};

// N' = ceil(N / n): number of indices nj below N.
std::uint64_t trace_term_count(std::uint64_t N, unsigned n) noexcept;

// Image variance of e(alpha) for alpha in F_q.
VarianceCase classify_fq(const FieldElement& alpha, std::uint64_t N);
// Image variance of n^-1 Tr(e(alpha)) = sum_j a^j e_{nj}, j < n_prime.
VarianceCase classify_trace(const FieldElement& a, std::uint64_t n_prime);

double sigma_bar(const VarianceCase& c, double sigma);

// Block layout of the small-set table for a weight of the given order over
// `total` terms: order <= total gives (order, floor(total/order)); a larger
// order gives one term per block; order 0 (w = 0) keeps the constant only.
struct TableShape {
  std::uint64_t r;
  std::uint64_t block_len;
};
TableShape sigma_table_shape(std::uint64_t order, std::uint64_t total) noexcept;

struct ProbabilityReport {
  double p_event;
  double delta;
  double big_delta;
  double ratio;
  unsigned terms_used;
};

// P(e in [-q/4, q/4) mod q) for e ~ N(0, sigma_bar^2), by the erf series.
ProbabilityReport delta_probability(const PrimeModulus& q, double sigma_bar, double tol = 1e-12);

// erf(r/4) + sum_j (erf(r(5/4+j)) - erf(r(3/4+j))). Throws DomainError for r <= 0.
double f_of_r(double ratio, double tol = 1e-12);
// Largest ratio for which the unbounded attack is the relevant one.
inline constexpr double kMaxUnboundedRatio = 5.656854249492380195;  // 4 sqrt 2

// sum_{i <= k} C(n, i) p^i (1-p)^(n-i), in log space.
double cumulative_binomial(std::int64_t k, std::int64_t n, double p);

enum class Family { SmallSet, SmallValues };

struct PosteriorBounds {
  // Lower bound on P(PLWE | verdict != NOT PLWE).
  double plwe_posterior;
  // P(verdict != NOT PLWE | PLWE): p0^(M r) or p0^M.
  double success;
  // Lower bound on P(uniform | NOT PLWE); 1 for these attacks.
  double uniform_posterior;
  // The per-sample pass rate x in 1 - q x^M.
  double pass_rate;
};

// sigma_size is |Sigma| (ignored for SmallValues); r is ignored for SmallValues.
PosteriorBounds posterior_bounds(Family family, std::uint64_t M, const PrimeModulus& q, double sigma_size,
                                 double p0, std::uint64_t r);

// Least M with plwe_posterior >= target, if the bound ever gets there.
std::optional<std::uint64_t> min_samples_for(Family family, double target, const PrimeModulus& q,
                                             double sigma_size, double p0, std::uint64_t r);

// ceil(1/2 (l q + 2 l delta +- l (1 - 1/q))).
std::int64_t usva_threshold(std::uint64_t ell, const PrimeModulus& q, double delta);
// ceil(l (q-1)(1/2 +- 1/(2q)) + l (1/2 + delta)); equal to usva_threshold.
std::int64_t usva_threshold_expanded(std::uint64_t ell, const PrimeModulus& q, double delta);

// ceil(c p0^(M0 r_eff)).
std::int64_t extended_threshold(std::uint64_t chunks, double p0, std::uint64_t M0, std::uint64_t r_eff);

struct Predicate {
  bool holds;
  double lhs;
  double rhs;
  std::string text;
};

// 1 - (|Sigma|/q)^M0 < p0^(M0 r).
Predicate extended_small_set_naive_predicate(double sigma_size, const PrimeModulus& q, std::uint64_t M0,
                                             double p0, std::uint64_t r);
// q (|Sigma|/q)^M0 < p0^(M0 r): a uniform chunk rarely survives while a PLWE
// chunk usually does.
Predicate extended_small_set_separation(double sigma_size, const PrimeModulus& q, std::uint64_t M0, double p0,
                                        std::uint64_t r);
Predicate extended_small_values_naive_predicate(const PrimeModulus& q, std::uint64_t M0, double p0);
Predicate extended_small_values_separation(const PrimeModulus& q, std::uint64_t M0, double p0);

// |Sigma| < q p0^r.
Predicate small_set_precondition(double sigma_size, const PrimeModulus& q, double p0, std::uint64_t r);
// 2 sigma_bar <= q / 4.
Predicate small_values_precondition(double sigma_bar, const PrimeModulus& q);
// Delta > 0.
Predicate unbounded_precondition(double delta, const PrimeModulus& q);

// Fraction of rounded N(0, sigma_bar^2) draws landing in [-q/4, q/4) mod q.
double mc_quarter_rate(const PrimeModulus& q, double sigma_bar, std::uint64_t draws, Rng& rng);

// Fraction of error polynomials e with e(alpha) in the quarter interval.
double mc_event_rate_fq(const RqContext& ctx, const GaussianSpec& gauss, const FieldElement& alpha,
                        std::uint64_t draws, Rng& rng);
// Same for n^-1 Tr(e(alpha)).
double mc_event_rate_trace(const RqContext& ctx, const GaussianSpec& gauss, const ExtFieldCtx& ext,
                           std::uint64_t draws, Rng& rng);

struct VulnEntry {
  Setting setting;
  unsigned n;                // 1 for F_q roots
  FieldElement w;            // alpha, or a for trace
  std::uint64_t order;       // 0 for the root 0
  VarianceCase variance;
  double sigma_bar;
  ProbabilityReport probability;
  // Small-set table shape: r_used blocks of block_len terms.
  std::uint64_t table_r;
  std::uint64_t table_block_len;
  double table_analytic_size;
  double table_tuple_count;
  bool table_feasible;
  Predicate small_set;
  Predicate small_values;
  Predicate unbounded;
  std::optional<std::uint64_t> min_M_small_set;  // for posterior 0.99
};

struct VulnReport {
  std::uint64_t q;
  std::uint64_t N;
  double sigma;
  bool truncated;
  std::vector<VulnEntry> entries;
};

VulnReport scan_instance(const RqContext& ctx, double sigma, bool truncated, unsigned n_max = 4,
                         double table_cap = 1e8);

}  // namespace plwe
