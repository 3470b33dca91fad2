#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "euler.hpp"

namespace mds {

inline constexpr std::uint64_t kDefaultWorkBudget = 10'000'000;

// An arithmetic function of r positive-integer variables.
struct MultiVarFunction {
  int r = 0;
  std::function<cdouble(std::span<const std::uint64_t>)> eval;
  bool multiplicative = false;  // advisory flag, spot-tested rather than enforced
};

// Exact truncated multiple Dirichlet sum over the box 1 <= n_i <= N. The
// full box is enumerated; N^r beyond the work budget is refused.
inline cdouble truncated_series(const MultiVarFunction& F, std::span<const cdouble> s,
                                std::uint64_t N,
                                std::uint64_t work_budget = kDefaultWorkBudget) {
  if (N < 1) throw std::domain_error("truncated_series: N must be >= 1");
  if (static_cast<int>(s.size()) != F.r)
    throw std::invalid_argument("truncated_series: s has wrong length");
  double size_estimate = 1.0;
  for (int i = 0; i < F.r; ++i) size_estimate *= static_cast<double>(N);
  if (size_estimate > static_cast<double>(work_budget))
    throw resource_error("truncated_series: N^r exceeds the work budget of " +
                         std::to_string(work_budget) + " evaluations");

  const int r = F.r;
  if (r == 1) {
    cdouble acc = 0.0;
    std::uint64_t n = 1;
    for (; n <= N; ++n) {
      const std::uint64_t tuple[1] = {n};
      acc += F.eval(tuple) *
             std::exp(-s[0] * std::log(static_cast<double>(n)));
    }
    return acc;
  }

  // n^{-s_i} tables per coordinate; N <= sqrt(budget) keeps these small.
  std::vector<std::vector<cdouble>> powers(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) {
    auto& table = powers[static_cast<std::size_t>(i)];
    table.resize(static_cast<std::size_t>(N) + 1);
    for (std::uint64_t n = 1; n <= N; ++n)
      table[n] = std::exp(-s[static_cast<std::size_t>(i)] *
                          std::log(static_cast<double>(n)));
  }

  std::vector<std::uint64_t> tuple(static_cast<std::size_t>(r), 1);
  cdouble acc = 0.0;
  while (true) {
    cdouble weight = 1.0;
    for (int i = 0; i < r; ++i)
      weight *= powers[static_cast<std::size_t>(i)][tuple[static_cast<std::size_t>(i)]];
    acc += F.eval(tuple) * weight;
    int pos = r - 1;
    while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == N) {
      tuple[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++tuple[static_cast<std::size_t>(pos)];
  }
  return acc;
}

// (F*G)(n) = sum over coordinatewise divisor tuples d of F(d) G(n/d).
inline cdouble dirichlet_convolve(const MultiVarFunction& F, const MultiVarFunction& G,
                                  std::span<const std::uint64_t> n) {
  if (F.r != G.r) throw std::invalid_argument("dirichlet_convolve: mismatched r");
  if (static_cast<int>(n.size()) != F.r)
    throw std::invalid_argument("dirichlet_convolve: tuple has wrong length");
  const int r = F.r;
  std::vector<std::vector<std::uint64_t>> divs(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i)
    divs[static_cast<std::size_t>(i)] = divisors(factor(n[static_cast<std::size_t>(i)]));

  std::vector<std::size_t> idx(static_cast<std::size_t>(r), 0);
  std::vector<std::uint64_t> d(static_cast<std::size_t>(r));
  std::vector<std::uint64_t> q(static_cast<std::size_t>(r));
  cdouble acc = 0.0;
  while (true) {
    for (int i = 0; i < r; ++i) {
      const auto& list = divs[static_cast<std::size_t>(i)];
      d[static_cast<std::size_t>(i)] = list[idx[static_cast<std::size_t>(i)]];
      q[static_cast<std::size_t>(i)] =
          n[static_cast<std::size_t>(i)] / d[static_cast<std::size_t>(i)];
    }
    acc += F.eval(d) * G.eval(q);
    int pos = r - 1;
    while (pos >= 0 &&
           idx[static_cast<std::size_t>(pos)] + 1 ==
               divs[static_cast<std::size_t>(pos)].size()) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
  }
  return acc;
}

enum class CoprimeKind { setwise, pairwise };

// The multiplicative function whose Dirichlet convolution with the
// unrestricted product series restores the coprimality restriction.
struct CorrectionFunction {
  CoprimeKind kind = CoprimeKind::setwise;
  CMFamily family;
};

// Value of one prime block given the exponent vector a at prime p.
// The all-zero block is 1. Setwise blocks vanish unless every exponent lies
// in [1, t]; pairwise blocks vanish unless at least two exponents are
// nonzero (and none exceeds t).
inline cdouble correction_block(const CorrectionFunction& cf, std::span<const int> a,
                                std::uint64_t p) {
  const int r = cf.family.r;
  const int t = cf.family.t;
  if (static_cast<int>(a.size()) != r)
    throw std::invalid_argument("correction_block: exponent vector has wrong length");
  int nonzero = 0;
  for (int ai : a) {
    if (ai < 0) throw std::domain_error("correction_block: negative exponent");
    if (ai > 0) ++nonzero;
    if (ai > t) return 0.0;
  }
  if (nonzero == 0) return 1.0;
  if (cf.kind == CoprimeKind::setwise) {
    if (nonzero < r) return 0.0;
    cdouble value = (r % 2 == 0) ? -1.0 : 1.0;  // (-1)^{r-1}
    for (int i = 0; i < r; ++i) {
      const int ai = a[static_cast<std::size_t>(i)];
      value *= (ai % 2 == 0 ? 1.0 : -1.0) * prime_weight(cf.family, i + 1, ai, p);
    }
    return value;
  }
  if (nonzero < 2) return 0.0;
  cdouble value = -static_cast<double>(nonzero - 1);
  for (int i = 0; i < r; ++i) {
    const int ai = a[static_cast<std::size_t>(i)];
    if (ai == 0) continue;
    value *= (ai % 2 == 0 ? 1.0 : -1.0) * prime_weight(cf.family, i + 1, ai, p);
  }
  return value;
}

// Multiplicative extension of the prime blocks to a full tuple.
inline cdouble correction_value(const CorrectionFunction& cf,
                                std::span<const FactoredInteger> n) {
  if (static_cast<int>(n.size()) != cf.family.r)
    throw std::invalid_argument("correction_value: tuple has wrong length");
  std::map<std::uint64_t, std::vector<int>> exponents;
  for (std::size_t i = 0; i < n.size(); ++i) {
    for (const auto& [p, a] : n[i].factors) {
      auto& vec = exponents[p];
      if (vec.empty()) vec.assign(n.size(), 0);
      vec[i] = a;
    }
  }
  cdouble value = 1.0;
  for (const auto& [p, a] : exponents) {
    value *= correction_block(cf, a, p);
    if (value == cdouble{0.0, 0.0}) return value;
  }
  return value;
}

// ---------------------------------------------------------------------------
// Exhaustive verification of the convolution identities
//   prod_i f_i(n_i) * indicator(n) = sum_{d_i e_i = n_i} prod_i f_i(d_i) * C(e)
// over the box n_i <= N, in exact integer arithmetic whenever the family
// takes integer values at primes.
// ---------------------------------------------------------------------------

struct IdentityViolation {
  std::vector<std::uint64_t> n;
  cdouble lhs{0.0, 0.0};
  cdouble rhs{0.0, 0.0};
};

struct VerifyReport {
  std::uint64_t tuples_checked = 0;
  std::uint64_t violations = 0;
  double max_deviation = 0.0;
  bool exact = false;  // integer-arithmetic path
  bool budget_exhausted = false;
  std::vector<IdentityViolation> samples;  // first few violations
};

namespace detail {

// f_i(p^a) for a convolution of completely multiplicative functions is the
// complete homogeneous symmetric polynomial of degree a in the prime values.
template <typename Scalar>
std::vector<Scalar> homogeneous_values(std::span<const Scalar> g, int max_exp) {
  std::vector<Scalar> h(static_cast<std::size_t>(max_exp) + 1, Scalar{0});
  h[0] = Scalar{1};
  for (const Scalar& gj : g) {
    // h <- h * 1/(1 - gj x) truncated: prefix recurrence h[a] += gj h[a-1].
    for (int a = 1; a <= max_exp; ++a)
      h[static_cast<std::size_t>(a)] += gj * h[static_cast<std::size_t>(a - 1)];
  }
  return h;
}

template <typename Scalar>
std::vector<Scalar> elementary_values(std::span<const Scalar> g) {
  std::vector<Scalar> e(g.size() + 1, Scalar{0});
  e[0] = Scalar{1};
  std::size_t n = 0;
  for (const Scalar& gj : g) {
    ++n;
    for (std::size_t j = n; j >= 1; --j) e[j] += gj * e[j - 1];
  }
  return e;
}

inline long long as_integer(const cdouble& z, const char* who) {
  const double rounded = std::round(z.real());
  if (std::abs(z.imag()) > 1e-9 || std::abs(z.real() - rounded) > 1e-9)
    throw std::invalid_argument(std::string(who) +
                                ": family is not integer-valued at primes");
  return static_cast<long long>(rounded);
}

template <typename Scalar>
struct ConvolutionTables {
  // f[i][n], correction[flat index of e-tuple], factorizations of 1..N
  std::vector<std::vector<Scalar>> f;
  std::vector<Scalar> correction;
  std::vector<FactoredInteger> facts;
  std::uint64_t N = 0;
  int r = 0;

  std::size_t flat(std::span<const std::uint64_t> tuple) const {
    std::size_t idx = 0;
    for (std::uint64_t v : tuple) idx = idx * N + (v - 1);
    return idx;
  }
};

template <typename Scalar>
ConvolutionTables<Scalar> build_convolution_tables(CoprimeKind kind,
                                                   const CMFamily& family,
                                                   std::uint64_t N) {
  const int r = family.r;
  const int t = family.t;
  ConvolutionTables<Scalar> tables;
  tables.N = N;
  tables.r = r;
  tables.facts.resize(static_cast<std::size_t>(N) + 1);
  for (std::uint64_t n = 1; n <= N; ++n) tables.facts[n] = factor(n);

  int max_exp = 0;
  while ((std::uint64_t{1} << (max_exp + 1)) <= N) ++max_exp;

  // Per prime <= N: row prime values, then h (for f) and e (for blocks).
  std::map<std::uint64_t, std::vector<std::vector<Scalar>>> h_by_prime;
  std::map<std::uint64_t, std::vector<std::vector<Scalar>>> e_by_prime;
  for (std::uint64_t p = 2; p <= N; ++p) {
    const auto& pf = tables.facts[p].factors;
    if (pf.size() != 1 || pf[0].exponent != 1) continue;  // composite
    std::vector<std::vector<Scalar>> h_rows, e_rows;
    for (int i = 1; i <= r; ++i) {
      std::vector<Scalar> g(static_cast<std::size_t>(t));
      for (int j = 1; j <= t; ++j) {
        const cdouble raw = family.prime_values(i, j, p);
        if constexpr (std::is_same_v<Scalar, long long>) {
          g[static_cast<std::size_t>(j - 1)] = as_integer(raw, "convolution tables");
        } else {
          g[static_cast<std::size_t>(j - 1)] = raw;
        }
      }
      h_rows.push_back(homogeneous_values<Scalar>(g, max_exp));
      e_rows.push_back(elementary_values<Scalar>(g));
    }
    h_by_prime[p] = std::move(h_rows);
    e_by_prime[p] = std::move(e_rows);
  }

  tables.f.assign(static_cast<std::size_t>(r),
                  std::vector<Scalar>(static_cast<std::size_t>(N) + 1, Scalar{1}));
  for (int i = 0; i < r; ++i) {
    auto& row = tables.f[static_cast<std::size_t>(i)];
    for (std::uint64_t n = 1; n <= N; ++n) {
      Scalar value{1};
      for (const auto& [p, a] : tables.facts[n].factors)
        value *= h_by_prime.at(p)[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
      row[n] = value;
    }
  }

  // Correction values for every tuple e <= N via per-prime blocks.
  std::size_t total = 1;
  for (int i = 0; i < r; ++i) total *= static_cast<std::size_t>(N);
  tables.correction.assign(total, Scalar{0});
  std::vector<std::uint64_t> tuple(static_cast<std::size_t>(r), 1);
  while (true) {
    std::map<std::uint64_t, std::vector<int>> exps;
    for (int i = 0; i < r; ++i)
      for (const auto& [p, a] : tables.facts[tuple[static_cast<std::size_t>(i)]].factors) {
        auto& vec = exps[p];
        if (vec.empty()) vec.assign(static_cast<std::size_t>(r), 0);
        vec[static_cast<std::size_t>(i)] = a;
      }
    Scalar value{1};
    for (const auto& [p, a] : exps) {
      int nonzero = 0;
      bool overflowed = false;
      for (int ai : a) {
        if (ai > 0) ++nonzero;
        if (ai > t) overflowed = true;
      }
      Scalar block{0};
      if (overflowed) {
        block = Scalar{0};
      } else if (kind == CoprimeKind::setwise) {
        if (nonzero == r) {
          block = (r % 2 == 0) ? Scalar{-1} : Scalar{1};
          for (int i = 0; i < r; ++i) {
            const int ai = a[static_cast<std::size_t>(i)];
            const Scalar w =
                e_by_prime.at(p)[static_cast<std::size_t>(i)][static_cast<std::size_t>(ai)];
            block *= (ai % 2 == 0 ? Scalar{1} : Scalar{-1}) * w;
          }
        }
      } else {
        if (nonzero >= 2) {
          block = Scalar(-(nonzero - 1));
          for (int i = 0; i < r; ++i) {
            const int ai = a[static_cast<std::size_t>(i)];
            if (ai == 0) continue;
            const Scalar w =
                e_by_prime.at(p)[static_cast<std::size_t>(i)][static_cast<std::size_t>(ai)];
            block *= (ai % 2 == 0 ? Scalar{1} : Scalar{-1}) * w;
          }
        }
      }
      value *= block;
      if (value == Scalar{0}) break;
    }
    tables.correction[tables.flat(tuple)] = value;
    int pos = r - 1;
    while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == N) {
      tuple[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++tuple[static_cast<std::size_t>(pos)];
  }
  return tables;
}

template <typename Scalar>
VerifyReport run_convolution_check(CoprimeKind kind, const CMFamily& family,
                                   std::uint64_t N, std::uint64_t work_budget) {
  const int r = family.r;
  auto tables = build_convolution_tables<Scalar>(kind, family, N);

  std::vector<std::vector<std::uint64_t>> divisor_lists(static_cast<std::size_t>(N) + 1);
  for (std::uint64_t n = 1; n <= N; ++n) divisor_lists[n] = divisors(tables.facts[n]);

  VerifyReport report;
  report.exact = std::is_same_v<Scalar, long long>;

  std::uint64_t work = 0;
  std::vector<std::uint64_t> n_tuple(static_cast<std::size_t>(r), 1);
  std::vector<std::uint64_t> e_tuple(static_cast<std::size_t>(r));
  std::vector<std::size_t> idx(static_cast<std::size_t>(r));
  while (true) {
    Scalar lhs{1};
    for (int i = 0; i < r; ++i)
      lhs = lhs * tables.f[static_cast<std::size_t>(i)][n_tuple[static_cast<std::size_t>(i)]];
    const int indicator =
        kind == CoprimeKind::setwise ? rho(n_tuple) : theta(n_tuple);
    if (indicator == 0) lhs = Scalar{0};

    Scalar rhs{0};
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      Scalar term{1};
      for (int i = 0; i < r; ++i) {
        const std::uint64_t d =
            divisor_lists[n_tuple[static_cast<std::size_t>(i)]][idx[static_cast<std::size_t>(i)]];
        term = term * tables.f[static_cast<std::size_t>(i)][d];
        e_tuple[static_cast<std::size_t>(i)] = n_tuple[static_cast<std::size_t>(i)] / d;
      }
      rhs += term * tables.correction[tables.flat(e_tuple)];
      ++work;
      int pos = r - 1;
      while (pos >= 0 &&
             idx[static_cast<std::size_t>(pos)] + 1 ==
                 divisor_lists[n_tuple[static_cast<std::size_t>(pos)]].size()) {
        idx[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
    }

    double deviation;
    if constexpr (std::is_same_v<Scalar, long long>) {
      deviation = std::abs(static_cast<double>(lhs - rhs));
    } else {
      deviation = std::abs(lhs - rhs);
    }
    ++report.tuples_checked;
    report.max_deviation = std::max(report.max_deviation, deviation);
    bool violated;
    if constexpr (std::is_same_v<Scalar, long long>) {
      violated = lhs != rhs;
    } else {
      violated = deviation > 1e-10 * std::max(1.0, std::abs(lhs));
    }
    if (violated) {
      ++report.violations;
      if (report.samples.size() < 16) {
        IdentityViolation v;
        v.n = n_tuple;
        if constexpr (std::is_same_v<Scalar, long long>) {
          v.lhs = static_cast<double>(lhs);
          v.rhs = static_cast<double>(rhs);
        } else {
          v.lhs = lhs;
          v.rhs = rhs;
        }
        report.samples.push_back(std::move(v));
      }
    }

    if (work > work_budget) {
      report.budget_exhausted = true;
      return report;
    }
    int pos = r - 1;
    while (pos >= 0 && n_tuple[static_cast<std::size_t>(pos)] == N) {
      n_tuple[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++n_tuple[static_cast<std::size_t>(pos)];
  }
  return report;
}

}  // namespace detail

inline VerifyReport verify_convolution_identity(
    CoprimeKind kind, const CMFamily& family, std::uint64_t N,
    std::uint64_t work_budget = kDefaultWorkBudget) {
  if (N < 1) throw std::domain_error("verify_convolution_identity: N must be >= 1");
  if (family.integer_valued)
    return detail::run_convolution_check<long long>(kind, family, N, work_budget);
  return detail::run_convolution_check<cdouble>(kind, family, N, work_budget);
}

enum class Restriction { none, setwise, pairwise, kwise };

// prod_i tau_{t_i}(n_i) gated by the chosen coprimality condition,
// table-backed up to table_limit so large sweeps stay cheap.
inline MultiVarFunction make_tau_series_function(std::vector<int> t_list,
                                                 Restriction restriction,
                                                 int k, std::uint64_t table_limit) {
  const int r = static_cast<int>(t_list.size());
  if (r < 1) throw std::domain_error("make_tau_series_function: empty order list");
  if (restriction == Restriction::kwise && (k < 2 || k > r))
    throw std::domain_error("make_tau_series_function: k out of range");
  auto tables = std::make_shared<std::vector<std::vector<long long>>>();
  for (int t : t_list) tables->push_back(tau_table(t, table_limit));
  auto orders = std::make_shared<std::vector<int>>(std::move(t_list));
  MultiVarFunction F;
  F.r = r;
  F.multiplicative = true;
  F.eval = [tables, orders, restriction, k,
            table_limit](std::span<const std::uint64_t> n) -> cdouble {
    switch (restriction) {
      case Restriction::none:
        break;
      case Restriction::setwise:
        if (rho(n) == 0) return 0.0;
        break;
      case Restriction::pairwise:
        if (theta(n) == 0) return 0.0;
        break;
      case Restriction::kwise:
        if (rho_k(k, n) == 0) return 0.0;
        break;
    }
    double product = 1.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
      const long long v =
          n[i] <= table_limit
              ? (*tables)[i][n[i]]
              : static_cast<long long>(tau_t((*orders)[i], factor(n[i])));
      product *= static_cast<double>(v);
    }
    return product;
  };
  return F;
}

}  // namespace mds
