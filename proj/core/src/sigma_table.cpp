#include <algorithm>
#include <cmath>
#include <string>

#include "plwe/attacks.hpp"

namespace plwe {

namespace {

// Moduli up to this size get a membership bitmap; larger ones use binary search.
constexpr std::uint64_t kBitmapLimit = std::uint64_t{1} << 30;

}  // namespace

double sigma_tuple_count(std::uint64_t r, std::uint64_t block_len, double sigma) {
  const double bound = std::floor(2.0 * std::sqrt(static_cast<double>(block_len)) * sigma);
  return std::pow(2.0 * bound + 1.0, static_cast<double>(r));
}

SigmaTable::SigmaTable(const FieldElement& w, std::uint64_t r, std::uint64_t block_len, double sigma, double cap)
    : modulus_(w.modulus()), r_(r), block_len_(block_len) {
  if (r == 0) throw DomainError("sigma table needs r >= 1");
  if (block_len == 0) throw DomainError("sigma table needs a block length >= 1");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  const double root_len = std::sqrt(static_cast<double>(block_len));
  block_sigma_ = 2.0 * root_len * sigma;
  coeff_bound_ = static_cast<std::int64_t>(std::floor(block_sigma_));
  analytic_bound_ = std::pow(4.0 * root_len * sigma + 1.0, static_cast<double>(r));
  tuple_count_ = sigma_tuple_count(r, block_len, sigma);
  if (tuple_count_ > cap) {
    throw TableTooLarge("sigma table would enumerate " + std::to_string(tuple_count_) + " tuples, cap is " +
                        std::to_string(cap));
  }

  const std::uint64_t q = modulus_.value();
  const bool use_bitmap = q <= kBitmapLimit;
  std::vector<bool> seen;
  std::vector<std::uint64_t> current{0};
  std::uint64_t w_pow = 1;
  for (std::uint64_t j = 0; j < r; ++j) {
    std::vector<std::uint64_t> next;
    if (use_bitmap) seen.assign(q, false);
    for (std::int64_t x = -coeff_bound_; x <= coeff_bound_; ++x) {
      const std::uint64_t step = modulus_.mul(modulus_.reduce(x), w_pow);
      for (std::uint64_t s : current) {
        const std::uint64_t v = modulus_.add(s, step);
        if (use_bitmap) {
          if (seen[v]) continue;
          seen[v] = true;
        }
        next.push_back(v);
      }
    }
    if (!use_bitmap) {
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
    }
    current = std::move(next);
    w_pow = modulus_.mul(w_pow, w.value());
  }
  std::sort(current.begin(), current.end());
  values_ = std::move(current);
  if (use_bitmap) {
    member_.assign(q, false);
    for (auto v : values_) member_[v] = true;
  }
}

bool SigmaTable::contains(std::uint64_t residue) const noexcept {
  if (!member_.empty()) return residue < member_.size() && member_[residue];
  return std::binary_search(values_.begin(), values_.end(), residue);
}

double SigmaTable::analytic_size() const noexcept { return std::floor(analytic_bound_); }

SigmaTable build_sigma_table_fq(const FieldElement& alpha, std::uint64_t r, std::uint64_t N, double sigma,
                                double cap) {
  if (r == 0 || N / r == 0) throw DomainError("need 1 <= r <= N for an F_q sigma table");
  return SigmaTable(alpha, r, N / r, sigma, cap);
}

SigmaTable build_sigma_table_trace(const FieldElement& a, std::uint64_t r, std::uint64_t n_double_prime,
                                   double sigma, double cap) {
  if (n_double_prime == 0) throw DomainError("trace sigma table needs N'' >= 1");
  return SigmaTable(a, r, n_double_prime, sigma, cap);
}

}  // namespace plwe
