#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "symmpoly.hpp"

namespace mds {

// Multi-index (a_1..a_r) keying the monomial p^{-(a_1 s_1 + ... + a_r s_r)}.
using ExponentVector = std::vector<int>;

// One Euler factor: a finitely supported coefficient map over exponent
// vectors. The zero vector always carries coefficient exactly 1.
struct LocalFactor {
  int r = 0;
  std::map<ExponentVector, cdouble> coeffs;

  cdouble coeff(const ExponentVector& a) const {
    auto it = coeffs.find(a);
    return it == coeffs.end() ? cdouble{0.0, 0.0} : it->second;
  }
};

// An r x t grid of completely multiplicative functions g_ij, each given by
// its values at primes; row i represents f_i = g_i1 * ... * g_it (Dirichlet
// convolution). i and j are 1-based.
struct CMFamily {
  int r = 0;
  int t = 1;
  std::function<cdouble(int i, int j, std::uint64_t p)> prime_values;
  double prime_value_bound = 1.0;  // sup over p and (i,j) of |g_ij(p)|
  bool integer_valued = false;     // every g_ij(p) is an integer
  bool constant_in_p = false;      // g_ij(p) does not depend on p
  // Optional sharp bound on |row weight| at (i, j); when absent the generic
  // C(t, j) * prime_value_bound^j envelope is used.
  std::function<double(int i, int j)> weight_bound;

  double weight_bound_for(int i, int j) const {
    if (weight_bound) return weight_bound(i, j);
    return static_cast<double>(binomial(t, j)) * std::pow(prime_value_bound, j);
  }
};

// The family realizing the Piltz functions tau_{t_i}: row i has t_i grid
// entries fixed at 1 and the rest at 0, so row weights are binomials.
inline CMFamily tau_family(std::vector<int> t_list) {
  if (t_list.size() < 2) throw std::domain_error("tau_family: need r >= 2 rows");
  int t_max = 1;
  for (int t : t_list) {
    if (t < 1) throw std::domain_error("tau_family: orders must be >= 1");
    t_max = std::max(t_max, t);
  }
  CMFamily family;
  family.r = static_cast<int>(t_list.size());
  family.t = t_max;
  family.integer_valued = true;
  family.constant_in_p = true;
  family.prime_value_bound = 1.0;
  auto orders = std::make_shared<std::vector<int>>(std::move(t_list));
  family.prime_values = [orders](int i, int j, std::uint64_t) -> cdouble {
    return j <= (*orders)[static_cast<std::size_t>(i - 1)] ? 1.0 : 0.0;
  };
  family.weight_bound = [orders](int i, int j) -> double {
    return static_cast<double>(
        binomial((*orders)[static_cast<std::size_t>(i - 1)], j));
  };
  return family;
}

// Degree-j elementary symmetric combination of row i's prime values, the
// quantity every local-factor coefficient below is built from.
inline cdouble prime_weight(const CMFamily& family, int i, int j, std::uint64_t p) {
  if (i < 1 || i > family.r || j < 1 || j > family.t)
    throw std::domain_error("prime_weight: index out of range");
  std::vector<cdouble> row(static_cast<std::size_t>(family.t));
  for (int jj = 1; jj <= family.t; ++jj)
    row[static_cast<std::size_t>(jj - 1)] = family.prime_values(i, jj, p);
  return elementary_symmetric_all(row)[static_cast<std::size_t>(j)];
}

namespace detail {

// All row weights at once: weights[i-1][j] for j = 0..t.
inline std::vector<std::vector<cdouble>> all_prime_weights(const CMFamily& family,
                                                           std::uint64_t p) {
  std::vector<std::vector<cdouble>> weights(static_cast<std::size_t>(family.r));
  std::vector<cdouble> row(static_cast<std::size_t>(family.t));
  for (int i = 1; i <= family.r; ++i) {
    for (int j = 1; j <= family.t; ++j)
      row[static_cast<std::size_t>(j - 1)] = family.prime_values(i, j, p);
    weights[static_cast<std::size_t>(i - 1)] = elementary_symmetric_all(row);
  }
  return weights;
}

}  // namespace detail

// Euler factor of the setwise-coprime series divided by the unrestricted
// one. Support is the full box 1 <= a_i <= t; the coefficient at a is
//   (-1)^{r-1} prod_i (-1)^{a_i} W_{i,a_i}(p),
// with W the row weights. Exact zeros are dropped.
inline LocalFactor setwise_local_factor(const CMFamily& family, std::uint64_t p) {
  const int r = family.r;
  const int t = family.t;
  const auto weights = detail::all_prime_weights(family, p);
  LocalFactor factor;
  factor.r = r;
  factor.coeffs[ExponentVector(static_cast<std::size_t>(r), 0)] = 1.0;
  const double outer_sign = (r % 2 == 0) ? -1.0 : 1.0;  // (-1)^{r-1}
  ExponentVector a(static_cast<std::size_t>(r), 1);
  while (true) {
    cdouble c = outer_sign;
    for (int i = 0; i < r; ++i) {
      const int ai = a[static_cast<std::size_t>(i)];
      const cdouble w = weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(ai)];
      c *= (ai % 2 == 0 ? 1.0 : -1.0) * w;
    }
    if (c != cdouble{0.0, 0.0}) factor.coeffs[a] = c;
    int pos = r - 1;
    while (pos >= 0 && a[static_cast<std::size_t>(pos)] == t) {
      a[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++a[static_cast<std::size_t>(pos)];
  }
  return factor;
}

// Euler factor of the pairwise-coprime series divided by the unrestricted
// one. Support runs over exponent vectors whose nonzero positions form a set
// S with |S| >= 2 and entries in [1, t]; the coefficient is
//   -(|S|-1) prod_{l in S} (-1)^{a_l} W_{l,a_l}(p).
inline LocalFactor pairwise_local_factor(const CMFamily& family, std::uint64_t p) {
  const int r = family.r;
  const int t = family.t;
  if (r > 20) throw std::domain_error("pairwise_local_factor: r too large");
  const auto weights = detail::all_prime_weights(family, p);
  LocalFactor factor;
  factor.r = r;
  factor.coeffs[ExponentVector(static_cast<std::size_t>(r), 0)] = 1.0;
  for (unsigned mask = 1; mask < (1u << r); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size < 2) continue;
    std::vector<int> support;
    for (int i = 0; i < r; ++i)
      if (mask & (1u << i)) support.push_back(i);
    const double scale = -static_cast<double>(size - 1);
    std::vector<int> exps(support.size(), 1);
    while (true) {
      ExponentVector a(static_cast<std::size_t>(r), 0);
      cdouble c = scale;
      for (std::size_t m = 0; m < support.size(); ++m) {
        const int coord = support[m];
        const int am = exps[m];
        a[static_cast<std::size_t>(coord)] = am;
        const cdouble w =
            weights[static_cast<std::size_t>(coord)][static_cast<std::size_t>(am)];
        c *= (am % 2 == 0 ? 1.0 : -1.0) * w;
      }
      if (c != cdouble{0.0, 0.0}) factor.coeffs[std::move(a)] = c;
      std::size_t pos = support.size();
      while (pos > 0 && exps[pos - 1] == t) {
        exps[pos - 1] = 1;
        --pos;
      }
      if (pos == 0) break;
      ++exps[pos - 1];
    }
  }
  return factor;
}

// Euler factor of the k-wise-coprime series divided by the unrestricted one,
// for completely multiplicative f_1..f_r given by their prime values.
// Support is 0/1 vectors with support size i in [k, r]; the coefficient is
//   -(-1)^{i-k} C(i-1, k-1) prod_{l in S} f_l(p).
inline LocalFactor kwise_local_factor(
    const std::function<cdouble(int i, std::uint64_t p)>& prime_values, int r, int k,
    std::uint64_t p) {
  if (r < 2 || r > 20) throw std::domain_error("kwise_local_factor: r out of range");
  if (k < 2 || k > r) throw std::domain_error("kwise_local_factor: k out of range");
  std::vector<cdouble> f(static_cast<std::size_t>(r));
  for (int i = 1; i <= r; ++i) f[static_cast<std::size_t>(i - 1)] = prime_values(i, p);
  LocalFactor factor;
  factor.r = r;
  factor.coeffs[ExponentVector(static_cast<std::size_t>(r), 0)] = 1.0;
  for (unsigned mask = 1; mask < (1u << r); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size < k) continue;
    const double sign = ((size - k) % 2 == 0) ? 1.0 : -1.0;
    const double scale = -sign * static_cast<double>(binomial(size - 1, k - 1));
    cdouble c = scale;
    ExponentVector a(static_cast<std::size_t>(r), 0);
    for (int i = 0; i < r; ++i) {
      if (!(mask & (1u << i))) continue;
      a[static_cast<std::size_t>(i)] = 1;
      c *= f[static_cast<std::size_t>(i)];
    }
    if (c != cdouble{0.0, 0.0}) factor.coeffs[std::move(a)] = c;
  }
  return factor;
}

// sum over the support of coeff(a) * p^{-(a . s)}.
inline cdouble eval_local_factor(const LocalFactor& factor, std::span<const cdouble> s,
                                 std::uint64_t p) {
  if (static_cast<int>(s.size()) != factor.r)
    throw std::invalid_argument("eval_local_factor: s has wrong length");
  const double logp = std::log(static_cast<double>(p));
  cdouble acc = 0.0;
  for (const auto& [a, c] : factor.coeffs) {
    cdouble dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      dot += static_cast<double>(a[i]) * s[i];
    acc += c * std::exp(-dot * logp);
  }
  return acc;
}

// A numeric estimate together with a rigorous bound on the neglected tail of
// the infinite product it truncates.
struct CertifiedValue {
  cdouble value{1.0, 0.0};
  double tail_bound = 0.0;
  std::uint64_t prime_cutoff = 0;
};

// Produces the Euler factor at each prime plus p-independent coefficient
// bounds; the bounds drive both the convergence check and the tail
// certificate of euler_product.
struct FactorGenerator {
  int r = 0;
  std::function<LocalFactor(std::uint64_t p)> make;
  std::vector<std::pair<ExponentVector, double>> coeff_bounds;
  bool constant_coeffs = false;  // the same factor at every prime
};

inline FactorGenerator setwise_factor_generator(CMFamily family) {
  FactorGenerator gen;
  gen.r = family.r;
  gen.constant_coeffs = family.constant_in_p;
  const int r = family.r;
  const int t = family.t;
  ExponentVector a(static_cast<std::size_t>(r), 1);
  while (true) {
    double bound = 1.0;
    for (int i = 0; i < r; ++i)
      bound *= family.weight_bound_for(i + 1, a[static_cast<std::size_t>(i)]);
    if (bound > 0.0) gen.coeff_bounds.emplace_back(a, bound);
    int pos = r - 1;
    while (pos >= 0 && a[static_cast<std::size_t>(pos)] == t) {
      a[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++a[static_cast<std::size_t>(pos)];
  }
  auto shared = std::make_shared<CMFamily>(std::move(family));
  gen.make = [shared](std::uint64_t p) { return setwise_local_factor(*shared, p); };
  return gen;
}

inline FactorGenerator pairwise_factor_generator(CMFamily family) {
  FactorGenerator gen;
  gen.r = family.r;
  gen.constant_coeffs = family.constant_in_p;
  const int r = family.r;
  const int t = family.t;
  for (unsigned mask = 1; mask < (1u << r); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size < 2) continue;
    std::vector<int> support;
    for (int i = 0; i < r; ++i)
      if (mask & (1u << i)) support.push_back(i);
    std::vector<int> exps(support.size(), 1);
    while (true) {
      ExponentVector a(static_cast<std::size_t>(r), 0);
      double bound = static_cast<double>(size - 1);
      for (std::size_t m = 0; m < support.size(); ++m) {
        a[static_cast<std::size_t>(support[m])] = exps[m];
        bound *= family.weight_bound_for(support[m] + 1, exps[m]);
      }
      if (bound > 0.0) gen.coeff_bounds.emplace_back(std::move(a), bound);
      std::size_t pos = support.size();
      while (pos > 0 && exps[pos - 1] == t) {
        exps[pos - 1] = 1;
        --pos;
      }
      if (pos == 0) break;
      ++exps[pos - 1];
    }
  }
  auto shared = std::make_shared<CMFamily>(std::move(family));
  gen.make = [shared](std::uint64_t p) { return pairwise_local_factor(*shared, p); };
  return gen;
}

inline FactorGenerator kwise_factor_generator(
    std::function<cdouble(int i, std::uint64_t p)> prime_values, int r, int k,
    double value_bound = 1.0, bool constant_in_p = false) {
  if (r < 2 || r > 20) throw std::domain_error("kwise_factor_generator: r out of range");
  if (k < 2 || k > r) throw std::domain_error("kwise_factor_generator: k out of range");
  FactorGenerator gen;
  gen.r = r;
  gen.constant_coeffs = constant_in_p;
  for (unsigned mask = 1; mask < (1u << r); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size < k) continue;
    ExponentVector a(static_cast<std::size_t>(r), 0);
    for (int i = 0; i < r; ++i)
      if (mask & (1u << i)) a[static_cast<std::size_t>(i)] = 1;
    const double bound = static_cast<double>(binomial(size - 1, k - 1)) *
                         std::pow(value_bound, size);
    if (bound > 0.0) gen.coeff_bounds.emplace_back(std::move(a), bound);
  }
  auto shared = std::make_shared<std::function<cdouble(int, std::uint64_t)>>(
      std::move(prime_values));
  gen.make = [shared, r, k](std::uint64_t p) {
    return kwise_local_factor(*shared, r, k, p);
  };
  return gen;
}

// r = 1 factor (1 - p^{-s}); the reciprocal of the zeta factor.
inline FactorGenerator zeta_inverse_factor_generator() {
  FactorGenerator gen;
  gen.r = 1;
  gen.constant_coeffs = true;
  gen.coeff_bounds.emplace_back(ExponentVector{1}, 1.0);
  gen.make = [](std::uint64_t) {
    LocalFactor f;
    f.r = 1;
    f.coeffs[ExponentVector{0}] = 1.0;
    f.coeffs[ExponentVector{1}] = -1.0;
    return f;
  };
  return gen;
}

namespace detail {

struct FlatFactor {
  std::vector<cdouble> dots;    // (a . s) per support entry
  std::vector<cdouble> coeffs;  // matching coefficients
};

inline FlatFactor flatten_factor(const LocalFactor& factor, std::span<const cdouble> s) {
  FlatFactor flat;
  for (const auto& [a, c] : factor.coeffs) {
    bool zero = true;
    cdouble dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] != 0) zero = false;
      dot += static_cast<double>(a[i]) * s[i];
    }
    if (zero) continue;  // the leading 1 is added back at evaluation time
    flat.dots.push_back(dot);
    flat.coeffs.push_back(c);
  }
  return flat;
}

inline cdouble eval_flat(const FlatFactor& flat, double logp) {
  cdouble acc = 1.0;
  for (std::size_t i = 0; i < flat.dots.size(); ++i)
    acc += flat.coeffs[i] * std::exp(-flat.dots[i] * logp);
  return acc;
}

}  // namespace detail

// Truncated Euler product over primes <= cutoff with a rigorous tail bound.
//
// Writing each factor as 1 + E_p, the generator's coefficient bounds give
// |E_p| <= sum_a bound(a) p^{-sigma_a} with sigma_a = Re(a . s). Summing over
// p > cutoff with the integral estimate
//   sum_{p > P} p^{-sigma} <= P^{1-sigma} / (sigma - 1)   (sigma > 1)
// yields T, and |true/estimate - 1| <= exp(T) - 1. Any sigma_a <= 1 on the
// bound support means the product is not absolutely convergent and raises
// divergence_error.
//
// Primes are consumed in fixed chunks of 4096 and chunk products are reduced
// in ascending order, so the result is bit-identical for any thread count.
inline CertifiedValue euler_product(const FactorGenerator& gen,
                                    std::span<const cdouble> s, std::uint64_t cutoff,
                                    const PrimeTable& table, int threads = 1) {
  if (static_cast<int>(s.size()) != gen.r)
    throw std::invalid_argument("euler_product: s has wrong length");
  if (cutoff < 2) throw std::domain_error("euler_product: cutoff must be >= 2");
  if (table.limit < cutoff)
    throw std::invalid_argument("euler_product: prime table smaller than cutoff");

  const double P = static_cast<double>(cutoff);
  double tail_T = 0.0;
  for (const auto& [a, bound] : gen.coeff_bounds) {
    if (bound <= 0.0) continue;
    double sigma = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      sigma += static_cast<double>(a[i]) * s[i].real();
    if (sigma <= 1.0)
      throw divergence_error(
          "euler_product: exponent with Re(a.s) <= 1 on the coefficient support");
    tail_T += bound * std::pow(P, 1.0 - sigma) / (sigma - 1.0);
  }

  std::size_t n_primes = 0;
  while (n_primes < table.primes.size() && table.primes[n_primes] <= cutoff)
    ++n_primes;

  constexpr std::size_t kChunk = 4096;
  const std::size_t n_chunks = (n_primes + kChunk - 1) / kChunk;
  std::vector<cdouble> chunk_products(n_chunks, cdouble{1.0, 0.0});

  detail::FlatFactor shared_flat;
  if (gen.constant_coeffs && n_primes > 0)
    shared_flat = detail::flatten_factor(gen.make(table.primes[0]), s);

  auto run_chunk = [&](std::size_t chunk) {
    const std::size_t lo = chunk * kChunk;
    const std::size_t hi = std::min(lo + kChunk, n_primes);
    cdouble acc{1.0, 0.0};
    for (std::size_t idx = lo; idx < hi; ++idx) {
      const std::uint64_t p = table.primes[idx];
      const double logp = std::log(static_cast<double>(p));
      if (gen.constant_coeffs) {
        acc *= detail::eval_flat(shared_flat, logp);
      } else {
        acc *= detail::eval_flat(detail::flatten_factor(gen.make(p), s), logp);
      }
    }
    chunk_products[chunk] = acc;
  };

  threads = std::max(threads, 1);
  if (threads == 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      while (true) {
        const std::size_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        run_chunk(c);
      }
    };
    std::vector<std::thread> pool;
    const int n_workers = std::min<std::size_t>(threads, n_chunks);
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  cdouble value{1.0, 0.0};
  for (const cdouble& cp : chunk_products) value *= cp;

  const double tail = std::abs(value) * std::expm1(tail_T);
  if (!std::isfinite(tail))
    throw certification_error("euler_product: tail bound is not finite");
  return CertifiedValue{value, tail, cutoff};
}

inline CertifiedValue euler_product(const FactorGenerator& gen,
                                    std::span<const cdouble> s, std::uint64_t cutoff,
                                    int threads = 1) {
  const PrimeTable table = sieve(std::max<std::uint64_t>(cutoff, 2));
  return euler_product(gen, s, cutoff, table, threads);
}

// zeta(sigma) for real sigma > 1, as the certified reciprocal of the
// truncated product of (1 - p^{-sigma}).
inline CertifiedValue zeta(double sigma, std::uint64_t cutoff,
                           const PrimeTable* table = nullptr, int threads = 1) {
  if (!(sigma > 1.0)) throw divergence_error("zeta: need sigma > 1");
  FactorGenerator gen = zeta_inverse_factor_generator();
  const std::vector<cdouble> s{cdouble{sigma, 0.0}};
  CertifiedValue inv = table ? euler_product(gen, s, cutoff, *table, threads)
                             : euler_product(gen, s, cutoff, threads);
  const double mag = std::abs(inv.value);
  if (!(mag > inv.tail_bound))
    throw certification_error("zeta: tail bound swallows the reciprocal");
  const cdouble value = cdouble{1.0, 0.0} / inv.value;
  const double tail = inv.tail_bound / (mag * (mag - inv.tail_bound));
  return CertifiedValue{value, tail, cutoff};
}

// ---------------------------------------------------------------------------
// The constants attached to the tau-square products: exact local polynomials
// in x = 1/p and their certified infinite products.
// ---------------------------------------------------------------------------

inline std::vector<long long> poly_mul(const std::vector<long long>& a,
                                       const std::vector<long long>& b) {
  std::vector<long long> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// 1 - (2x - x^2)^r expanded over the integers; degrees r..2r carry
// -(-1)^i C(r,i) 2^{r-i} at degree r+i.
inline std::vector<long long> k_local_polynomial(int r) {
  if (r < 2) throw std::domain_error("k_local_polynomial: need r >= 2");
  std::vector<long long> pow_term{1};  // (2x - x^2)^r, built by repeated mul
  const std::vector<long long> base{0, 2, -1};
  for (int i = 0; i < r; ++i) pow_term = poly_mul(pow_term, base);
  std::vector<long long> out(pow_term.size(), 0);
  out[0] = 1;
  for (std::size_t d = 0; d < pow_term.size(); ++d) out[d] -= pow_term[d];
  return out;
}

// (1-x)^{2(r-1)} (1 + (r-1)(2x - x^2)) expanded over the integers.
inline std::vector<long long> k_bar_local_polynomial(int r) {
  if (r < 2) throw std::domain_error("k_bar_local_polynomial: need r >= 2");
  std::vector<long long> acc{1};
  const std::vector<long long> one_minus_x{1, -1};
  for (int i = 0; i < 2 * (r - 1); ++i) acc = poly_mul(acc, one_minus_x);
  const long long c = r - 1;
  return poly_mul(acc, {1, 2 * c, -c});
}

// Certified product over primes of an integer polynomial in 1/p. The
// polynomial must have no degree-0 deviation from 1 and no degree-1 term,
// otherwise the product cannot converge absolutely.
inline FactorGenerator univariate_factor_generator(const std::vector<long long>& poly) {
  if (poly.empty() || poly[0] != 1)
    throw std::invalid_argument("univariate_factor_generator: constant term must be 1");
  FactorGenerator gen;
  gen.r = 1;
  gen.constant_coeffs = true;
  LocalFactor f;
  f.r = 1;
  f.coeffs[ExponentVector{0}] = 1.0;
  for (std::size_t d = 1; d < poly.size(); ++d) {
    if (poly[d] == 0) continue;
    f.coeffs[ExponentVector{static_cast<int>(d)}] = static_cast<double>(poly[d]);
    gen.coeff_bounds.emplace_back(ExponentVector{static_cast<int>(d)},
                                  std::abs(static_cast<double>(poly[d])));
  }
  auto shared = std::make_shared<LocalFactor>(std::move(f));
  gen.make = [shared](std::uint64_t) { return *shared; };
  return gen;
}

inline CertifiedValue certified_poly_product(const std::vector<long long>& poly,
                                             std::uint64_t cutoff,
                                             const PrimeTable* table = nullptr,
                                             int threads = 1) {
  FactorGenerator gen = univariate_factor_generator(poly);
  const std::vector<cdouble> s{cdouble{1.0, 0.0}};
  return table ? euler_product(gen, s, cutoff, *table, threads)
               : euler_product(gen, s, cutoff, threads);
}

inline CertifiedValue k_constant(int r, std::uint64_t cutoff,
                                 const PrimeTable* table = nullptr, int threads = 1) {
  if (r < 2) throw std::domain_error("k_constant: need r >= 2");
  return certified_poly_product(k_local_polynomial(r), cutoff, table, threads);
}

inline CertifiedValue k_bar_constant(int r, std::uint64_t cutoff,
                                     const PrimeTable* table = nullptr,
                                     int threads = 1) {
  if (r < 2) throw std::domain_error("k_bar_constant: need r >= 2");
  return certified_poly_product(k_bar_local_polynomial(r), cutoff, table, threads);
}

}  // namespace mds
