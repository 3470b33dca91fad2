#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

namespace mds {

struct PrimePower {
  std::uint64_t prime;
  int exponent;  // >= 1

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// n together with its prime-power factorization. Primes ascend, exponents
// are >= 1, and the factor list is empty exactly when n == 1.
struct FactoredInteger {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;
};

struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> primes;  // all primes <= limit, ascending
};

// One byte per candidate; limits beyond the budget are refused rather than
// silently swapped to disk.
inline constexpr std::uint64_t kDefaultSieveMemoryBudget = std::uint64_t{1} << 28;

inline PrimeTable sieve(std::uint64_t limit,
                        std::uint64_t memory_budget = kDefaultSieveMemoryBudget) {
  if (limit < 2) throw std::domain_error("sieve: limit must be >= 2");
  if (limit + 1 > memory_budget)
    throw resource_error("sieve: limit " + std::to_string(limit) +
                         " exceeds memory budget of " + std::to_string(memory_budget) +
                         " bytes");
  std::vector<std::uint8_t> composite(static_cast<std::size_t>(limit) + 1, 0);
  for (std::uint64_t i = 2; i * i <= limit; ++i) {
    if (composite[i]) continue;
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  PrimeTable table;
  table.limit = limit;
  for (std::uint64_t i = 2; i <= limit; ++i)
    if (!composite[i]) table.primes.push_back(i);
  return table;
}

// Trial division against a prime table covering sqrt(n). After removing all
// primes <= sqrt(n) any cofactor > 1 is itself prime.
inline FactoredInteger factor(std::uint64_t n, const PrimeTable& table) {
  if (n == 0) throw std::domain_error("factor: n must be positive");
  FactoredInteger result;
  result.n = n;
  std::uint64_t m = n;
  bool cofactor_is_prime = false;
  for (std::uint64_t p : table.primes) {
    if (p > m / p) {
      cofactor_is_prime = true;
      break;
    }
    if (m % p != 0) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    result.factors.push_back({p, e});
  }
  if (m > 1) {
    if (!cofactor_is_prime && m / table.limit > table.limit)
      throw std::domain_error("factor: prime table too small for n");
    result.factors.push_back({m, 1});
  }
  return result;
}

// Shared table up to 2^16 covers every n below 2^32, which is far beyond the
// desk scale this library targets.
inline const PrimeTable& shared_factor_table() {
  static const PrimeTable table = sieve(std::uint64_t{1} << 16);
  return table;
}

inline FactoredInteger factor(std::uint64_t n) {
  if (n == 0) throw std::domain_error("factor: n must be positive");
  if (n >> 32 != 0) throw std::domain_error("factor: n out of supported range");
  return factor(n, shared_factor_table());
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  if (acc > ~std::uint64_t{0}) throw std::overflow_error("binomial: result overflows");
  return static_cast<std::uint64_t>(acc);
}

// Piltz divisor function of order t: the number of ordered t-tuples with
// product n. At a prime power p^a the value is C(a+t-1, t-1).
inline std::uint64_t tau_t(int t, const FactoredInteger& n) {
  if (t < 1) throw std::domain_error("tau_t: t must be >= 1");
  std::uint64_t value = 1;
  for (const auto& [p, a] : n.factors) value *= binomial(a + t - 1, t - 1);
  return value;
}

inline std::uint64_t tau_t(int t, std::uint64_t n) { return tau_t(t, factor(n)); }

// 1 when gcd over all entries is 1.
inline int rho(std::span<const std::uint64_t> tuple) {
  if (tuple.empty()) throw std::domain_error("rho: tuple must be nonempty");
  std::uint64_t g = 0;
  for (std::uint64_t v : tuple) g = std::gcd(g, v);
  return g == 1 ? 1 : 0;
}

// 1 when every pair of entries is coprime.
inline int theta(std::span<const std::uint64_t> tuple) {
  if (tuple.empty()) throw std::domain_error("theta: tuple must be nonempty");
  for (std::size_t i = 0; i < tuple.size(); ++i)
    for (std::size_t j = i + 1; j < tuple.size(); ++j)
      if (std::gcd(tuple[i], tuple[j]) != 1) return 0;
  return 1;
}

// 1 when every k-subset of entries has gcd 1. k = 2 is the pairwise
// indicator, k = r the setwise one.
inline int rho_k(int k, std::span<const std::uint64_t> tuple) {
  const int r = static_cast<int>(tuple.size());
  if (r == 0) throw std::domain_error("rho_k: tuple must be nonempty");
  if (k < 2 || k > r) throw std::domain_error("rho_k: k out of range");
  // Enumerate k-subsets with a moving index vector; r stays desk-small.
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::uint64_t g = 0;
    for (int i : idx) g = std::gcd(g, tuple[i]);
    if (g != 1) return 0;
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == r - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return 1;
}

// All divisors of n, ascending.
inline std::vector<std::uint64_t> divisors(const FactoredInteger& n) {
  std::vector<std::uint64_t> divs{1};
  for (const auto& [p, a] : n.factors) {
    const std::size_t count = divs.size();
    std::uint64_t pk = 1;
    for (int e = 1; e <= a; ++e) {
      pk *= p;
      for (std::size_t i = 0; i < count; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

// tau_t(1..limit) by t-1 divisor-transform passes over a table of ones.
inline std::vector<long long> tau_table(int t, std::uint64_t limit) {
  if (t < 1) throw std::domain_error("tau_table: t must be >= 1");
  if (limit < 1) throw std::domain_error("tau_table: limit must be >= 1");
  if (limit > (std::uint64_t{1} << 27))
    throw resource_error("tau_table: limit too large");
  const std::size_t n = static_cast<std::size_t>(limit);
  std::vector<long long> values(n + 1, 1);
  values[0] = 0;
  for (int pass = 1; pass < t; ++pass) {
    std::vector<long long> next(n + 1, 0);
    for (std::size_t d = 1; d <= n; ++d)
      for (std::size_t m = d; m <= n; m += d) next[m] += values[d];
    values = std::move(next);
  }
  return values;
}

inline int rho(std::initializer_list<std::uint64_t> tuple) {
  return rho(std::span<const std::uint64_t>(tuple.begin(), tuple.size()));
}
inline int theta(std::initializer_list<std::uint64_t> tuple) {
  return theta(std::span<const std::uint64_t>(tuple.begin(), tuple.size()));
}
inline int rho_k(int k, std::initializer_list<std::uint64_t> tuple) {
  return rho_k(k, std::span<const std::uint64_t>(tuple.begin(), tuple.size()));
}

}  // namespace mds
