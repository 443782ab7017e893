#include "plwe/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace plwe {

namespace {

constexpr unsigned kMaxSeriesTerms = 50'000'000;

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

VarianceCase classify(Setting setting, const FieldElement& w, std::uint64_t total) {
  if (total == 0) throw DomainError("variance case needs at least one term");
  VarianceCase c;
  c.setting = setting;
  c.terms_total = total;
  const auto& m = w.modulus();
  if (w.is_zero()) {
    // Only the constant coefficient survives evaluation at 0.
    c.kind = CaseKind::General;
    c.order = 0;
    c.terms.push_back({1, 1});
    return c;
  }
  c.order = mult_order(w);
  if (c.order <= 2) {
    c.kind = CaseKind::PmOne;
    c.block_len = total / c.order;
    if (c.order == 1) {
      c.terms.push_back({1, total});
    } else {
      c.terms.push_back({1, (total + 1) / 2});
      c.terms.push_back({-1, total / 2});
    }
    return c;
  }
  if (c.order <= total) {
    c.kind = CaseKind::SmallOrder;
    c.block_len = total / c.order;
    std::uint64_t p = 1;
    for (std::uint64_t i = 0; i < c.order; ++i) {
      c.terms.push_back({m.centered(p), c.block_len});
      p = m.mul(p, w.value());
    }
    return c;
  }
  c.kind = CaseKind::General;
  std::uint64_t p = 1;
  for (std::uint64_t i = 0; i < total; ++i) {
    c.terms.push_back({m.centered(p), 1});
    p = m.mul(p, w.value());
  }
  return c;
}

// q x^M computed through logs so tiny x^M does not underflow to a wrong 0.
double q_times_power(double q, double x, std::uint64_t M) {
  if (x <= 0.0) return 0.0;
  return std::exp(std::log(q) + static_cast<double>(M) * std::log(x));
}

double family_pass_rate(Family family, const PrimeModulus& q, double sigma_size, double p0, std::uint64_t r) {
  const double qd = static_cast<double>(q.value());
  if (family == Family::SmallSet) return sigma_size / (qd * std::pow(p0, static_cast<double>(r)));
  return uniform_quarter_rate(q) / p0;
}

}  // namespace

const char* to_string(Setting s) noexcept { return s == Setting::Fq ? "fq" : "trace"; }

const char* to_string(CaseKind k) noexcept {
  switch (k) {
    case CaseKind::PmOne: return "root_is_pm_one";
    case CaseKind::SmallOrder: return "small_order";
    case CaseKind::General: return "general";
  }
  return "?";
}

int uniform_offset_sign(const PrimeModulus& q) noexcept { return q.q_mod4() == 1 ? 1 : -1; }

double uniform_quarter_rate(const PrimeModulus& q) noexcept {
  return 0.5 + uniform_offset_sign(q) / (2.0 * static_cast<double>(q.value()));
}

std::uint64_t trace_term_count(std::uint64_t N, unsigned n) noexcept { return n == 0 ? 0 : (N + n - 1) / n; }

VarianceCase classify_fq(const FieldElement& alpha, std::uint64_t N) { return classify(Setting::Fq, alpha, N); }

VarianceCase classify_trace(const FieldElement& a, std::uint64_t n_prime) {
  return classify(Setting::Trace, a, n_prime);
}

double sigma_bar(const VarianceCase& c, double sigma) {
  double var = 0.0;
  for (const auto& t : c.terms) {
    const auto w = static_cast<double>(t.weight);
    var += static_cast<double>(t.multiplicity) * sigma * sigma * w * w;
  }
  return std::sqrt(var);
}

TableShape sigma_table_shape(std::uint64_t order, std::uint64_t total) noexcept {
  if (order == 0) return {1, 1};
  if (order <= total) return {order, total / order};
  return {total, 1};
}

double f_of_r(double ratio, double tol) {
  if (!(ratio > 0.0)) throw DomainError("distribution ratio must be positive");
  double p = std::erf(ratio / 4.0);
  for (unsigned j = 0; j < kMaxSeriesTerms; ++j) {
    const double lo = (0.75 + j) * ratio;
    const double hi = (1.25 + j) * ratio;
    const double term = std::erfc(lo) - std::erfc(hi);
    p += term;
    if (term < tol) break;
  }
  return p;
}

ProbabilityReport delta_probability(const PrimeModulus& q, double sigma_bar_value, double tol) {
  if (!(sigma_bar_value > 0.0)) throw DomainError("sigma_bar must be positive");
  const double ratio = static_cast<double>(q.value()) / (std::sqrt(2.0) * sigma_bar_value);
  double p = std::erf(ratio / 4.0);
  unsigned used = 1;
  for (unsigned j = 0; j < kMaxSeriesTerms; ++j) {
    const double term = std::erfc((0.75 + j) * ratio) - std::erfc((1.25 + j) * ratio);
    p += term;
    ++used;
    if (term < tol) break;
  }
  ProbabilityReport r{};
  r.p_event = p;
  r.delta = p - 0.5;
  r.big_delta = r.delta - uniform_offset_sign(q) / (2.0 * static_cast<double>(q.value()));
  r.ratio = ratio;
  r.terms_used = used;
  return r;
}

double cumulative_binomial(std::int64_t k, std::int64_t n, double p) {
  if (n < 0) throw DomainError("binomial trial count must be nonnegative");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial probability must lie in [0, 1]");
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double lfn = std::lgamma(static_cast<double>(n) + 1.0);
  auto log_pmf = [&](std::int64_t i) {
    const auto di = static_cast<double>(i);
    const auto dn = static_cast<double>(n);
    return lfn - std::lgamma(di + 1.0) - std::lgamma(dn - di + 1.0) + di * lp + (dn - di) * lq;
  };
  auto log_sum = [&](std::int64_t lo, std::int64_t hi) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = lo; i <= hi; ++i) peak = std::max(peak, log_pmf(i));
    double s = 0.0;
    for (std::int64_t i = lo; i <= hi; ++i) s += std::exp(log_pmf(i) - peak);
    return std::exp(peak) * s;
  };
  const double mean = static_cast<double>(n) * p;
  if (static_cast<double>(k) < mean) return std::min(1.0, log_sum(0, k));
  return std::max(0.0, 1.0 - log_sum(k + 1, n));
}

PosteriorBounds posterior_bounds(Family family, std::uint64_t M, const PrimeModulus& q, double sigma_size,
                                 double p0, std::uint64_t r) {
  PosteriorBounds b{};
  b.pass_rate = family_pass_rate(family, q, sigma_size, p0, r);
  b.plwe_posterior = std::max(0.0, 1.0 - q_times_power(static_cast<double>(q.value()), b.pass_rate, M));
  const double exponent = family == Family::SmallSet ? static_cast<double>(M * r) : static_cast<double>(M);
  b.success = std::pow(p0, exponent);
  b.uniform_posterior = 1.0;
  return b;
}

std::optional<std::uint64_t> min_samples_for(Family family, double target, const PrimeModulus& q,
                                             double sigma_size, double p0, std::uint64_t r) {
  if (!(target < 1.0)) return std::nullopt;
  const double x = family_pass_rate(family, q, sigma_size, p0, r);
  if (!(x < 1.0)) return std::nullopt;
  if (x <= 0.0) return 1;
  const double need = std::log((1.0 - target) / static_cast<double>(q.value())) / std::log(x);
  auto M = static_cast<std::uint64_t>(std::max(1.0, std::ceil(need)));
  while (M > 1 && posterior_bounds(family, M - 1, q, sigma_size, p0, r).plwe_posterior >= target) --M;
  while (posterior_bounds(family, M, q, sigma_size, p0, r).plwe_posterior < target) ++M;
  return M;
}

std::int64_t usva_threshold(std::uint64_t ell, const PrimeModulus& q, double delta) {
  const auto l = static_cast<long double>(ell);
  const auto qd = static_cast<long double>(q.value());
  const long double sign = uniform_offset_sign(q);
  const long double value = 0.5L * (l * qd + 2.0L * l * delta + sign * l * (1.0L - 1.0L / qd));
  return static_cast<std::int64_t>(std::ceil(value));
}

std::int64_t usva_threshold_expanded(std::uint64_t ell, const PrimeModulus& q, double delta) {
  const auto l = static_cast<long double>(ell);
  const auto qd = static_cast<long double>(q.value());
  const long double sign = uniform_offset_sign(q);
  const long double value = l * (qd - 1.0L) * (0.5L + sign / (2.0L * qd)) + l * (0.5L + delta);
  return static_cast<std::int64_t>(std::ceil(value));
}

std::int64_t extended_threshold(std::uint64_t chunks, double p0, std::uint64_t M0, std::uint64_t r_eff) {
  const double expected = static_cast<double>(chunks) * std::pow(p0, static_cast<double>(M0 * r_eff));
  return static_cast<std::int64_t>(std::ceil(expected));
}

Predicate extended_small_set_naive_predicate(double sigma_size, const PrimeModulus& q, std::uint64_t M0,
                                             double p0, std::uint64_t r) {
  const double qd = static_cast<double>(q.value());
  const double lhs = 1.0 - std::pow(sigma_size / qd, static_cast<double>(M0));
  const double rhs = std::pow(p0, static_cast<double>(M0 * r));
  return {lhs < rhs, lhs, rhs,
          "1 - (|Sigma|/q)^M0 = " + format_double(lhs) + " < p0^(M0 r) = " + format_double(rhs)};
}

Predicate extended_small_set_separation(double sigma_size, const PrimeModulus& q, std::uint64_t M0, double p0,
                                        std::uint64_t r) {
  const double qd = static_cast<double>(q.value());
  const double lhs = q_times_power(qd, sigma_size / qd, M0);
  const double rhs = std::pow(p0, static_cast<double>(M0 * r));
  return {lhs < rhs, lhs, rhs,
          "q (|Sigma|/q)^M0 = " + format_double(lhs) + " < p0^(M0 r) = " + format_double(rhs)};
}

Predicate extended_small_values_naive_predicate(const PrimeModulus& q, std::uint64_t M0, double p0) {
  const double lhs = 1.0 - std::pow(uniform_quarter_rate(q), static_cast<double>(M0));
  const double rhs = std::pow(p0, static_cast<double>(M0));
  return {lhs < rhs, lhs, rhs,
          "1 - (1/2 +- 1/(2q))^M0 = " + format_double(lhs) + " < p0^M0 = " + format_double(rhs)};
}

Predicate extended_small_values_separation(const PrimeModulus& q, std::uint64_t M0, double p0) {
  const double lhs = q_times_power(static_cast<double>(q.value()), uniform_quarter_rate(q), M0);
  const double rhs = std::pow(p0, static_cast<double>(M0));
  return {lhs < rhs, lhs, rhs,
          "q (1/2 +- 1/(2q))^M0 = " + format_double(lhs) + " < p0^M0 = " + format_double(rhs)};
}

Predicate small_set_precondition(double sigma_size, const PrimeModulus& q, double p0, std::uint64_t r) {
  const double rhs = static_cast<double>(q.value()) * std::pow(p0, static_cast<double>(r));
  return {sigma_size < rhs, sigma_size, rhs,
          "|Sigma| = " + format_double(sigma_size) + " < q p0^r = " + format_double(rhs)};
}

Predicate small_values_precondition(double sigma_bar_value, const PrimeModulus& q) {
  const double lhs = 2.0 * sigma_bar_value;
  const double rhs = static_cast<double>(q.value()) / 4.0;
  return {lhs <= rhs, lhs, rhs, "2 sigma_bar = " + format_double(lhs) + " <= q/4 = " + format_double(rhs)};
}

Predicate unbounded_precondition(double delta, const PrimeModulus& q) {
  const double offset = uniform_offset_sign(q) / (2.0 * static_cast<double>(q.value()));
  const double big_delta = delta - offset;
  return {big_delta > 0.0, big_delta, 0.0,
          "Delta = delta - (+-1/(2q)) = " + format_double(big_delta) + " > 0"};
}

double mc_quarter_rate(const PrimeModulus& q, double sigma_bar_value, std::uint64_t draws, Rng& rng) {
  if (draws == 0) throw DomainError("Monte Carlo needs at least one draw");
  std::normal_distribution<double> normal(0.0, sigma_bar_value);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < draws; ++i) {
    if (q.in_quarter_interval(q.reduce(std::llround(normal(rng))))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(draws);
}

double mc_event_rate_fq(const RqContext& ctx, const GaussianSpec& gauss, const FieldElement& alpha,
                        std::uint64_t draws, Rng& rng) {
  if (draws == 0) throw DomainError("Monte Carlo needs at least one draw");
  const auto& q = ctx.modulus();
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const auto e = draw_error(gauss, ctx.degree(), rng);
    std::uint64_t acc = 0;
    for (std::size_t k = e.size(); k-- > 0;) acc = q.add(q.mul(acc, alpha.value()), q.reduce(e[k]));
    if (q.in_quarter_interval(acc)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(draws);
}

double mc_event_rate_trace(const RqContext& ctx, const GaussianSpec& gauss, const ExtFieldCtx& ext,
                           std::uint64_t draws, Rng& rng) {
  if (draws == 0) throw DomainError("Monte Carlo needs at least one draw");
  const auto& q = ctx.modulus();
  const unsigned n = ext.degree();
  const std::uint64_t a = ext.constant().value();
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const auto e = draw_error(gauss, ctx.degree(), rng);
    // n^-1 Tr(e(alpha)) is the y^0 coordinate of e(alpha).
    std::uint64_t acc = 0;
    std::uint64_t a_pow = 1;
    for (std::size_t idx = 0; idx < e.size(); idx += n) {
      acc = q.add(acc, q.mul(a_pow, q.reduce(e[idx])));
      a_pow = q.mul(a_pow, a);
    }
    if (q.in_quarter_interval(acc)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(draws);
}

}  // namespace plwe
