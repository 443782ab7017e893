#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "plwe/modular_field.hpp"
#include "plwe/poly_ring.hpp"
#include "plwe/samplers.hpp"

namespace plwe {

// Residues sum_{j<r} x_j w^j mod q over integer tuples with |x_j| <= coeff_bound.
class SigmaTable {
 public:
  static constexpr double kDefaultCap = 1e8;

  SigmaTable(const FieldElement& w, std::uint64_t r, std::uint64_t block_len, double sigma,
             double cap = kDefaultCap);

  bool contains(std::uint64_t residue) const noexcept;
  std::size_t size() const noexcept { return values_.size(); }
  // Sorted distinct residues.
  std::span<const std::uint64_t> values() const noexcept { return values_; }

  std::uint64_t r() const noexcept { return r_; }
  std::uint64_t block_len() const noexcept { return block_len_; }
  // 2 sqrt(block_len) sigma.
  double block_sigma() const noexcept { return block_sigma_; }
  std::int64_t coeff_bound() const noexcept { return coeff_bound_; }
  // (4 sqrt(block_len) sigma + 1)^r.
  double analytic_bound() const noexcept { return analytic_bound_; }
  // floor(analytic_bound()).
  double analytic_size() const noexcept;
  // (2 coeff_bound + 1)^r.
  double tuple_count() const noexcept { return tuple_count_; }
  const PrimeModulus& modulus() const noexcept { return modulus_; }

 private:
  PrimeModulus modulus_;
  std::uint64_t r_;
  std::uint64_t block_len_;
  double block_sigma_;
  std::int64_t coeff_bound_;
  double analytic_bound_;
  double tuple_count_;
  std::vector<std::uint64_t> values_;
  std::vector<bool> member_;
};

double sigma_tuple_count(std::uint64_t r, std::uint64_t block_len, double sigma);

// r = ord(alpha), blocks of floor(N / r) coefficients.
SigmaTable build_sigma_table_fq(const FieldElement& alpha, std::uint64_t r, std::uint64_t N, double sigma,
                                double cap = SigmaTable::kDefaultCap);
// r = ord(a), blocks of N'' = floor(N' / r) terms.
SigmaTable build_sigma_table_trace(const FieldElement& a, std::uint64_t r, std::uint64_t n_double_prime,
                                   double sigma, double cap = SigmaTable::kDefaultCap);

enum class VerdictKind { Guess, NotPlwe, NotEnoughSamples };
const char* to_string(VerdictKind k) noexcept;

struct AttackVerdict {
  VerdictKind kind;
  // Every surviving g, ascending. One entry for Guess, none for NotPlwe.
  std::vector<std::uint64_t> survivors;

  std::uint64_t guess() const;
};

enum class DecisionKind { Plwe, Uniform };
const char* to_string(DecisionKind k) noexcept;

struct Decision {
  DecisionKind kind;
  std::int64_t votes;
  std::int64_t threshold;
};

struct AttackOptions {
  // Workers for the loop over g; results match the sequential loop.
  unsigned threads = 1;
};

using SampleSet = std::vector<Sample>;

// Per-sample pair (u_i, v_i); the test quantity for a guess g is u_i - v_i g.
struct TestPair {
  std::uint64_t u;
  std::uint64_t v;
};

std::vector<TestPair> fq_test_pairs(std::span<const Sample> S, const FieldElement& alpha);
// u_i = n^-1 Tr(b_i(alpha)), v_i = n^-1 a_i(alpha). Throws NonMemberSample if
// some a_i is outside R_{q,0}.
std::vector<TestPair> trace_test_pairs(std::span<const Sample> S, const ExtFieldCtx& ext);

AttackVerdict small_set_attack(std::span<const Sample> S, const SigmaTable& sigma, const FieldElement& alpha,
                               const AttackOptions& opts = {});
// g ranges over guesses of Tr(s(alpha)).
AttackVerdict small_set_attack_trace(std::span<const Sample> S, const SigmaTable& sigma, const ExtFieldCtx& ext,
                                     const AttackOptions& opts = {});
AttackVerdict small_values_attack(std::span<const Sample> S, const FieldElement& alpha,
                                  const AttackOptions& opts = {});
AttackVerdict small_values_attack_trace(std::span<const Sample> S, const ExtFieldCtx& ext,
                                        const AttackOptions& opts = {});

// Survivor search over all g in F_q given precomputed pairs.
AttackVerdict survivor_search(std::span<const TestPair> pairs, const PrimeModulus& q,
                              const std::function<bool(std::uint64_t)>& accept, const AttackOptions& opts);

// Number of (g, i) with u_i - v_i g in [-q/4, q/4).
std::int64_t quarter_votes(std::span<const TestPair> pairs, const PrimeModulus& q, const AttackOptions& opts = {});

Decision unbounded_small_values_attack(std::span<const Sample> S, double delta, const FieldElement& alpha,
                                       const AttackOptions& opts = {});
Decision unbounded_small_values_attack_trace(std::span<const Sample> S, double delta, const ExtFieldCtx& ext,
                                             const AttackOptions& opts = {});

using SubAttack = std::function<AttackVerdict(std::span<const Sample>)>;

// floor(|S| / M0) consecutive chunks; votes count chunks not answered NotPlwe.
Decision extended_attack(std::span<const Sample> S, std::uint64_t M0, const SubAttack& sub, std::uint64_t r_eff,
                         double p0);

}  // namespace plwe
