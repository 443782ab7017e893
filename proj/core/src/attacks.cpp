#include "plwe/attacks.hpp"

#include <algorithm>
#include <string>
#include <thread>

#include "plwe/analysis.hpp"

namespace plwe {

namespace {

std::uint64_t inverse_of_degree(const ExtFieldCtx& ext) {
  const auto& m = ext.modulus();
  const std::uint64_t n = m.reduce_unsigned(ext.degree());
  if (n == 0) throw DomainError("extension degree is not invertible modulo q");
  return m.inv(n);
}

// Runs body(lo, hi) over [0, count) split into contiguous slices.
template <typename Body>
void split_range(std::uint64_t count, unsigned threads, Body&& body) {
  if (threads <= 1 || count < 2 * threads) {
    body(0, count, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::uint64_t slice = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t lo = std::min<std::uint64_t>(count, t * slice);
    const std::uint64_t hi = std::min<std::uint64_t>(count, lo + slice);
    pool.emplace_back([&body, lo, hi, t] { body(lo, hi, t); });
  }
  for (auto& th : pool) th.join();
}

void require_samples(std::span<const Sample> S) {
  if (S.empty()) throw NoSamples();
}

}  // namespace

const char* to_string(VerdictKind k) noexcept {
  switch (k) {
    case VerdictKind::Guess: return "guess";
    case VerdictKind::NotPlwe: return "not_plwe";
    case VerdictKind::NotEnoughSamples: return "not_enough_samples";
  }
  return "?";
}

const char* to_string(DecisionKind k) noexcept { return k == DecisionKind::Plwe ? "plwe" : "uniform"; }

std::uint64_t AttackVerdict::guess() const {
  if (kind != VerdictKind::Guess) throw DomainError("verdict carries no unique guess");
  return survivors.front();
}

std::vector<TestPair> fq_test_pairs(std::span<const Sample> S, const FieldElement& alpha) {
  std::vector<TestPair> out;
  out.reserve(S.size());
  for (const auto& s : S) out.push_back({eval(s.b, alpha).value(), eval(s.a, alpha).value()});
  return out;
}

std::vector<TestPair> trace_test_pairs(std::span<const Sample> S, const ExtFieldCtx& ext) {
  const auto& m = ext.modulus();
  const std::uint64_t n_inv = inverse_of_degree(ext);
  std::vector<TestPair> out;
  out.reserve(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) {
    const ExtFieldElement a_at = eval_at_generator(S[i].a, ext);
    if (!a_at.in_base_field()) {
      throw NonMemberSample("sample " + std::to_string(i) + " has a(x) outside R_{q,0}");
    }
    const FieldElement tr = eval_at_generator(S[i].b, ext).trace();
    out.push_back({m.mul(n_inv, tr.value()), m.mul(n_inv, a_at.coeffs()[0])});
  }
  return out;
}

AttackVerdict survivor_search(std::span<const TestPair> pairs, const PrimeModulus& q,
                              const std::function<bool(std::uint64_t)>& accept, const AttackOptions& opts) {
  if (pairs.empty()) throw NoSamples();
  const unsigned threads = std::max(1U, opts.threads);
  std::vector<std::vector<std::uint64_t>> found(threads);
  split_range(q.value(), threads, [&](std::uint64_t lo, std::uint64_t hi, unsigned slot) {
    auto& local = found[slot];
    for (std::uint64_t g = lo; g < hi; ++g) {
      bool ok = true;
      for (const auto& p : pairs) {
        if (!accept(q.sub(p.u, q.mul(p.v, g)))) {
          ok = false;
          break;
        }
      }
      if (ok) local.push_back(g);
    }
  });
  AttackVerdict v{VerdictKind::NotPlwe, {}};
  for (auto& part : found) v.survivors.insert(v.survivors.end(), part.begin(), part.end());
  if (v.survivors.size() == 1) {
    v.kind = VerdictKind::Guess;
  } else if (v.survivors.size() > 1) {
    v.kind = VerdictKind::NotEnoughSamples;
  }
  return v;
}

AttackVerdict small_set_attack(std::span<const Sample> S, const SigmaTable& sigma, const FieldElement& alpha,
                               const AttackOptions& opts) {
  require_samples(S);
  if (sigma.modulus() != alpha.modulus()) throw ContextMismatch("sigma table built over another prime");
  const auto pairs = fq_test_pairs(S, alpha);
  return survivor_search(pairs, alpha.modulus(), [&](std::uint64_t x) { return sigma.contains(x); }, opts);
}

AttackVerdict small_set_attack_trace(std::span<const Sample> S, const SigmaTable& sigma, const ExtFieldCtx& ext,
                                     const AttackOptions& opts) {
  require_samples(S);
  if (sigma.modulus() != ext.modulus()) throw ContextMismatch("sigma table built over another prime");
  const auto pairs = trace_test_pairs(S, ext);
  return survivor_search(pairs, ext.modulus(), [&](std::uint64_t x) { return sigma.contains(x); }, opts);
}

AttackVerdict small_values_attack(std::span<const Sample> S, const FieldElement& alpha, const AttackOptions& opts) {
  require_samples(S);
  const auto& q = alpha.modulus();
  const auto pairs = fq_test_pairs(S, alpha);
  return survivor_search(pairs, q, [&q](std::uint64_t x) { return q.in_quarter_interval(x); }, opts);
}

AttackVerdict small_values_attack_trace(std::span<const Sample> S, const ExtFieldCtx& ext,
                                        const AttackOptions& opts) {
  require_samples(S);
  const auto& q = ext.modulus();
  const auto pairs = trace_test_pairs(S, ext);
  return survivor_search(pairs, q, [&q](std::uint64_t x) { return q.in_quarter_interval(x); }, opts);
}

std::int64_t quarter_votes(std::span<const TestPair> pairs, const PrimeModulus& q, const AttackOptions& opts) {
  const unsigned threads = std::max(1U, opts.threads);
  std::vector<std::int64_t> partial(threads, 0);
  split_range(q.value(), threads, [&](std::uint64_t lo, std::uint64_t hi, unsigned slot) {
    std::int64_t c = 0;
    for (std::uint64_t g = lo; g < hi; ++g) {
      for (const auto& p : pairs) {
        if (q.in_quarter_interval(q.sub(p.u, q.mul(p.v, g)))) ++c;
      }
    }
    partial[slot] = c;
  });
  std::int64_t total = 0;
  for (auto c : partial) total += c;
  return total;
}

namespace {

Decision decide_unbounded(std::span<const TestPair> pairs, double delta, const PrimeModulus& q,
                          const AttackOptions& opts) {
  const std::int64_t votes = quarter_votes(pairs, q, opts);
  const std::int64_t threshold = usva_threshold(pairs.size(), q, delta);
  return {votes >= threshold ? DecisionKind::Plwe : DecisionKind::Uniform, votes, threshold};
}

}  // namespace

Decision unbounded_small_values_attack(std::span<const Sample> S, double delta, const FieldElement& alpha,
                                       const AttackOptions& opts) {
  require_samples(S);
  return decide_unbounded(fq_test_pairs(S, alpha), delta, alpha.modulus(), opts);
}

Decision unbounded_small_values_attack_trace(std::span<const Sample> S, double delta, const ExtFieldCtx& ext,
                                             const AttackOptions& opts) {
  require_samples(S);
  return decide_unbounded(trace_test_pairs(S, ext), delta, ext.modulus(), opts);
}

Decision extended_attack(std::span<const Sample> S, std::uint64_t M0, const SubAttack& sub, std::uint64_t r_eff,
                         double p0) {
  if (M0 == 0) throw DomainError("chunk size M0 must be positive");
  if (M0 > S.size()) {
    throw InsufficientSamples("chunk size " + std::to_string(M0) + " exceeds the " + std::to_string(S.size()) +
                              " available samples");
  }
  const std::uint64_t chunks = S.size() / M0;
  std::int64_t votes = 0;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    if (sub(S.subspan(c * M0, M0)).kind != VerdictKind::NotPlwe) ++votes;
  }
  const std::int64_t threshold = extended_threshold(chunks, p0, M0, r_eff);
  return {votes >= threshold ? DecisionKind::Plwe : DecisionKind::Uniform, votes, threshold};
}

}  // namespace plwe
