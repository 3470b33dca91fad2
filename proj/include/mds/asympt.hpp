#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "euler.hpp"
#include "series.hpp"

namespace mds {

using int128 = __int128;

inline std::uint64_t isqrt(std::uint64_t n) {
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (root > 0 && root * root > n) --root;
  while ((root + 1) * (root + 1) <= n) ++root;
  return root;
}

// Prefix sums of tau_t up to a fixed limit, for repeated floor queries.
struct PiltzTable {
  int t = 1;
  std::uint64_t limit = 0;
  std::vector<long long> prefix;  // prefix[n] = sum_{m <= n} tau_t(m)

  long long sum(std::uint64_t y) const {
    if (y > limit) throw std::out_of_range("PiltzTable: query beyond limit");
    return prefix[static_cast<std::size_t>(y)];
  }
};

inline PiltzTable make_piltz_table(int t, std::uint64_t limit) {
  if (t < 1) throw std::domain_error("make_piltz_table: t must be >= 1");
  if (limit < 1) throw std::domain_error("make_piltz_table: limit must be >= 1");
  PiltzTable table;
  table.t = t;
  table.limit = limit;
  table.prefix = tau_table(t, limit);
  for (std::size_t n = 1; n < table.prefix.size(); ++n)
    table.prefix[n] += table.prefix[n - 1];
  return table;
}

// Exact sum of tau_t(n) for n <= x. t = 2 runs in O(sqrt x) by the
// hyperbola method; larger t falls back to a sieve pass.
inline long long piltz_partial_sum(int t, std::uint64_t x) {
  if (t < 1) throw std::domain_error("piltz_partial_sum: t must be >= 1");
  if (x < 1) throw std::domain_error("piltz_partial_sum: x must be >= 1");
  if (t == 1) return static_cast<long long>(x);
  if (t == 2) {
    const std::uint64_t root = isqrt(x);
    long long acc = 0;
    for (std::uint64_t k = 1; k <= root; ++k)
      acc += static_cast<long long>(x / k);
    return 2 * acc - static_cast<long long>(root * root);
  }
  return make_piltz_table(t, x).sum(x);
}

struct PartialSumResult {
  std::uint64_t x = 0;
  int128 value = 0;
  // value / (x^r log^d x) with d = sum(t_i) - r; NaN when log x vanishes.
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double predicted_leading = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// Enumerates the support of the correction function for tau weights: at
// each prime of the tuple's shared radical, setwise support needs every
// exponent in [1, t_i], pairwise support needs at least two nonzero
// exponents. Blocks carry integer coefficients, so the whole sum is exact.
class RestrictedTauSumEnumerator {
 public:
  RestrictedTauSumEnumerator(CoprimeKind kind, std::span<const int> t_list,
                             std::uint64_t x, const std::vector<PiltzTable>& tables,
                             const PrimeTable& primes, std::uint64_t work_budget)
      : kind_(kind),
        t_list_(t_list.begin(), t_list.end()),
        x_(x),
        tables_(tables),
        primes_(primes.primes),
        work_budget_(work_budget),
        r_(static_cast<int>(t_list.size())) {}

  int128 run() {
    std::vector<std::uint64_t> e(static_cast<std::size_t>(r_), 1);
    descend(0, e, 1);
    return acc_;
  }

 private:
  void emit(const std::vector<std::uint64_t>& e, long long coeff) {
    if (++work_ > work_budget_)
      throw resource_error("restricted_tau_sum: work budget exceeded");
    int128 term = coeff;
    for (int i = 0; i < r_; ++i)
      term *= tables_[static_cast<std::size_t>(i)].sum(x_ / e[static_cast<std::size_t>(i)]);
    acc_ += term;
  }

  // Largest a <= t with e * p^a <= x.
  int exponent_cap(std::uint64_t e, std::uint64_t p, int t) const {
    int cap = 0;
    std::uint64_t value = e;
    while (cap < t && value <= x_ / p) {
      value *= p;
      ++cap;
    }
    return cap;
  }

  void descend(std::size_t prime_idx, std::vector<std::uint64_t>& e, long long coeff) {
    emit(e, coeff);
    for (std::size_t idx = prime_idx; idx < primes_.size(); ++idx) {
      const std::uint64_t p = primes_[idx];
      if (kind_ == CoprimeKind::setwise) {
        bool feasible = true;
        for (int i = 0; i < r_ && feasible; ++i)
          feasible = e[static_cast<std::size_t>(i)] <= x_ / p;
        if (!feasible) break;  // primes ascend, larger ones fail too
        extend_setwise(idx, e, coeff, p);
      } else {
        int feasible_count = 0;
        for (int i = 0; i < r_; ++i)
          if (e[static_cast<std::size_t>(i)] <= x_ / p) ++feasible_count;
        if (feasible_count < 2) break;
        extend_pairwise(idx, e, coeff, p);
      }
    }
  }

  void extend_setwise(std::size_t idx, std::vector<std::uint64_t>& e, long long coeff,
                      std::uint64_t p) {
    std::vector<int> caps(static_cast<std::size_t>(r_));
    for (int i = 0; i < r_; ++i) {
      caps[static_cast<std::size_t>(i)] = exponent_cap(
          e[static_cast<std::size_t>(i)], p, t_list_[static_cast<std::size_t>(i)]);
      if (caps[static_cast<std::size_t>(i)] == 0) return;
    }
    const long long outer_sign = (r_ % 2 == 0) ? -1 : 1;  // (-1)^{r-1}
    std::vector<int> a(static_cast<std::size_t>(r_), 1);
    while (true) {
      long long block = outer_sign;
      std::vector<std::uint64_t> e2 = e;
      for (int i = 0; i < r_; ++i) {
        const int ai = a[static_cast<std::size_t>(i)];
        block *= (ai % 2 == 0 ? 1 : -1) *
                 static_cast<long long>(binomial(t_list_[static_cast<std::size_t>(i)], ai));
        for (int step = 0; step < ai; ++step) e2[static_cast<std::size_t>(i)] *= p;
      }
      descend(idx + 1, e2, coeff * block);
      int pos = r_ - 1;
      while (pos >= 0 &&
             a[static_cast<std::size_t>(pos)] == caps[static_cast<std::size_t>(pos)]) {
        a[static_cast<std::size_t>(pos)] = 1;
        --pos;
      }
      if (pos < 0) break;
      ++a[static_cast<std::size_t>(pos)];
    }
  }

  void extend_pairwise(std::size_t idx, std::vector<std::uint64_t>& e, long long coeff,
                       std::uint64_t p) {
    std::vector<int> feasible;
    std::vector<int> caps;
    for (int i = 0; i < r_; ++i) {
      const int cap = exponent_cap(e[static_cast<std::size_t>(i)], p,
                                   t_list_[static_cast<std::size_t>(i)]);
      if (cap >= 1) {
        feasible.push_back(i);
        caps.push_back(cap);
      }
    }
    const int f = static_cast<int>(feasible.size());
    if (f < 2) return;
    for (unsigned mask = 1; mask < (1u << f); ++mask) {
      const int size = __builtin_popcount(mask);
      if (size < 2) continue;
      std::vector<int> chosen, chosen_caps;
      for (int m = 0; m < f; ++m)
        if (mask & (1u << m)) {
          chosen.push_back(feasible[static_cast<std::size_t>(m)]);
          chosen_caps.push_back(caps[static_cast<std::size_t>(m)]);
        }
      std::vector<int> a(chosen.size(), 1);
      while (true) {
        long long block = -(size - 1);
        std::vector<std::uint64_t> e2 = e;
        for (std::size_t m = 0; m < chosen.size(); ++m) {
          const int coord = chosen[m];
          const int am = a[m];
          block *= (am % 2 == 0 ? 1 : -1) *
                   static_cast<long long>(
                       binomial(t_list_[static_cast<std::size_t>(coord)], am));
          for (int step = 0; step < am; ++step) e2[static_cast<std::size_t>(coord)] *= p;
        }
        descend(idx + 1, e2, coeff * block);
        std::size_t pos = chosen.size();
        while (pos > 0 && a[pos - 1] == chosen_caps[pos - 1]) {
          a[pos - 1] = 1;
          --pos;
        }
        if (pos == 0) break;
        ++a[pos - 1];
      }
    }
  }

  CoprimeKind kind_;
  std::vector<int> t_list_;
  std::uint64_t x_;
  const std::vector<PiltzTable>& tables_;
  const std::vector<std::uint64_t>& primes_;
  std::uint64_t work_budget_;
  int r_;
  std::uint64_t work_ = 0;
  int128 acc_ = 0;
};

}  // namespace detail

// Exact sum of prod_i tau_{t_i}(n_i) over tuples n_i <= x satisfying the
// chosen coprimality condition, computed through the correction-function
// convolution rather than tuple enumeration.
inline PartialSumResult restricted_tau_sum(
    CoprimeKind kind, std::span<const int> t_list, std::uint64_t x,
    std::uint64_t work_budget = kDefaultWorkBudget,
    double predicted_leading = std::numeric_limits<double>::quiet_NaN()) {
  const int r = static_cast<int>(t_list.size());
  if (r < 2) throw std::domain_error("restricted_tau_sum: need r >= 2");
  if (x < 1) throw std::domain_error("restricted_tau_sum: x must be >= 1");
  for (int t : t_list)
    if (t < 1) throw std::domain_error("restricted_tau_sum: orders must be >= 1");

  std::vector<PiltzTable> tables;
  tables.reserve(static_cast<std::size_t>(r));
  for (int t : t_list) tables.push_back(make_piltz_table(t, x));
  const PrimeTable primes = x >= 2 ? sieve(x) : PrimeTable{};

  detail::RestrictedTauSumEnumerator enumerator(kind, t_list, x, tables, primes,
                                                work_budget);
  PartialSumResult result;
  result.x = x;
  result.value = enumerator.run();
  result.predicted_leading = predicted_leading;

  int degree = -r;
  for (int t : t_list) degree += t;
  const double logx = std::log(static_cast<double>(x));
  if (logx > 0.0 || degree == 0) {
    double denom = std::pow(static_cast<double>(x), r) * std::pow(logx, degree);
    result.ratio = static_cast<double>(result.value) / denom;
  }
  return result;
}

inline std::uint64_t factorial(int n) {
  if (n < 0 || n > 20) throw std::domain_error("factorial: out of range");
  std::uint64_t acc = 1;
  for (int i = 2; i <= n; ++i) acc *= static_cast<std::uint64_t>(i);
  return acc;
}

// Leading coefficient of the main term of the restricted partial sum: the
// product constant at s = (1,...,1) divided by prod_i (t_i - 1)!.
inline CertifiedValue leading_coefficient(CoprimeKind kind, std::span<const int> t_list,
                                          std::uint64_t cutoff,
                                          const PrimeTable* table = nullptr,
                                          int threads = 1) {
  const int r = static_cast<int>(t_list.size());
  if (r < 2) throw std::domain_error("leading_coefficient: need r >= 2");
  for (int t : t_list)
    if (t < 2) throw std::domain_error("leading_coefficient: orders must be >= 2");

  CMFamily family = tau_family(std::vector<int>(t_list.begin(), t_list.end()));
  FactorGenerator gen = kind == CoprimeKind::setwise
                            ? setwise_factor_generator(std::move(family))
                            : pairwise_factor_generator(std::move(family));
  const std::vector<cdouble> s(static_cast<std::size_t>(r), cdouble{1.0, 0.0});
  CertifiedValue product = table ? euler_product(gen, s, cutoff, *table, threads)
                                 : euler_product(gen, s, cutoff, threads);
  double scale = 1.0;
  for (int t : t_list) scale *= static_cast<double>(factorial(t - 1));
  return CertifiedValue{product.value / scale, product.tail_bound / scale, cutoff};
}

// One row per grid point: exact value, normalized ratio, and the predicted
// leading coefficient for trend inspection. No convergence is asserted.
inline std::vector<PartialSumResult> convergence_diagnostic(
    CoprimeKind kind, std::span<const int> t_list, std::span<const std::uint64_t> x_grid,
    std::uint64_t cutoff = 100000, std::uint64_t work_budget = kDefaultWorkBudget,
    int threads = 1) {
  for (std::size_t i = 1; i < x_grid.size(); ++i)
    if (x_grid[i] <= x_grid[i - 1])
      throw std::domain_error("convergence_diagnostic: grid must increase");
  double predicted = std::numeric_limits<double>::quiet_NaN();
  try {
    predicted = leading_coefficient(kind, t_list, cutoff, nullptr, threads).value.real();
  } catch (const std::domain_error&) {
    // orders below 2 have no predicted leading term; rows still carry values
  }
  std::vector<PartialSumResult> rows;
  rows.reserve(x_grid.size());
  for (std::uint64_t x : x_grid)
    rows.push_back(restricted_tau_sum(kind, t_list, x, work_budget, predicted));
  return rows;
}

}  // namespace mds
