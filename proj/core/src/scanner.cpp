#include <cmath>

#include "plwe/analysis.hpp"
#include "plwe/attacks.hpp"

namespace plwe {

namespace {

VulnEntry make_entry(Setting setting, unsigned n, const FieldElement& w, std::uint64_t order, VarianceCase variance,
                     double sigma, bool truncated, double table_cap) {
  const auto& q = w.modulus();
  const double p0 = GaussianSpec{sigma, truncated}.p0();
  const std::uint64_t total = variance.terms_total;
  VulnEntry e{setting,
              n,
              w,
              order,
              std::move(variance),
              0.0,
              {},
              1,
              1,
              0.0,
              0.0,
              false,
              {},
              {},
              {},
              std::nullopt};
  e.sigma_bar = sigma_bar(e.variance, sigma);
  e.probability = delta_probability(q, e.sigma_bar);
  const TableShape shape = sigma_table_shape(order, total);
  e.table_r = shape.r;
  e.table_block_len = shape.block_len;
  const double root_len = std::sqrt(static_cast<double>(e.table_block_len));
  e.table_analytic_size = std::pow(4.0 * root_len * sigma + 1.0, static_cast<double>(e.table_r));
  e.table_tuple_count = sigma_tuple_count(e.table_r, e.table_block_len, sigma);
  e.table_feasible = e.table_tuple_count <= table_cap;
  e.small_set = small_set_precondition(e.table_analytic_size, q, p0, e.table_r);
  e.small_values = small_values_precondition(e.sigma_bar, q);
  e.unbounded = unbounded_precondition(e.probability.delta, q);
  if (e.small_set.holds) {
    e.min_M_small_set = min_samples_for(Family::SmallSet, 0.99, q, std::floor(e.table_analytic_size), p0, e.table_r);
  }
  return e;
}

}  // namespace

VulnReport scan_instance(const RqContext& ctx, double sigma, bool truncated, unsigned n_max, double table_cap) {
  GaussianSpec{sigma, truncated}.validate();
  VulnReport report{ctx.modulus().value(), ctx.degree(), sigma, truncated, {}};
  const std::uint64_t N = ctx.degree();
  for (const auto& root : find_fq_roots(ctx)) {
    report.entries.push_back(
        make_entry(Setting::Fq, 1, root.root, root.order, classify_fq(root.root, N), sigma, truncated, table_cap));
  }
  for (unsigned n = 2; n <= n_max; ++n) {
    const std::uint64_t n_prime = trace_term_count(N, n);
    for (const auto& factor : find_binomial_factors(ctx, n)) {
      report.entries.push_back(make_entry(Setting::Trace, n, factor.a, factor.order_of_a,
                                          classify_trace(factor.a, n_prime), sigma, truncated, table_cap));
    }
  }
  return report;
}

}  // namespace plwe
