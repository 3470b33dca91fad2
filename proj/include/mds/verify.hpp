#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "asympt.hpp"
#include "euler.hpp"
#include "io.hpp"
#include "series.hpp"
#include "symmpoly.hpp"

namespace mds {

struct SuiteResult {
  std::string suite;
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  double max_deviation = 0.0;
  bool budget_exhausted = false;
  std::vector<std::string> notes;
};

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in the square inscribed in the disk of the given radius, so the
// modulus bound holds unconditionally.
inline cdouble random_complex(std::mt19937_64& rng, double radius) {
  const double half_side = radius / std::sqrt(2.0);
  return cdouble{(2.0 * uniform01(rng) - 1.0) * half_side,
                 (2.0 * uniform01(rng) - 1.0) * half_side};
}

inline double rel_deviation(const cdouble& a, const cdouble& b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

inline void record(SuiteResult& result, double deviation, double tolerance,
                   const std::string& what) {
  ++result.checks;
  result.max_deviation = std::max(result.max_deviation, deviation);
  if (!(deviation <= tolerance)) {
    ++result.violations;
    if (result.notes.size() < 32)
      result.notes.push_back(what + ": deviation " + format_float17(deviation) +
                             " exceeds " + format_float17(tolerance));
  }
}

}  // namespace detail

// Random-sample verification of the polynomial identities: product form vs
// coefficient form, the two derivative forms plus a finite-difference probe,
// the one-minus-roots identity, and permutation symmetry of e_j.
inline SuiteResult run_identity_suite(std::uint64_t seed, int cases = 200,
                                      int t_max = 8) {
  SuiteResult result;
  result.suite = "lemma";
  std::mt19937_64 rng(seed);
  for (int c = 0; c < cases; ++c) {
    const int t = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(t_max));
    SymmetricContext ctx;
    ctx.values.reserve(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i) ctx.values.push_back(detail::random_complex(rng, 2.0));
    const cdouble x0 = detail::random_complex(rng, 2.0);

    detail::record(result,
                   detail::rel_deviation(poly_eval(ctx, x0), poly_eval_from_coeffs(ctx, x0)),
                   1e-10, "product vs coefficient form");
    detail::record(result,
                   detail::rel_deviation(poly_derivative(ctx, x0),
                                         poly_derivative_from_coeffs(ctx, x0)),
                   1e-10, "derivative forms");

    const double h = 1e-6;
    const cdouble fd =
        (poly_eval(ctx, x0 + h) - poly_eval(ctx, x0 - h)) / cdouble{2.0 * h, 0.0};
    detail::record(result, detail::rel_deviation(poly_derivative(ctx, x0), fd), 1e-5,
                   "derivative vs finite difference");

    const auto [lhs, rhs] = one_minus_roots_identity(ctx);
    detail::record(result, detail::rel_deviation(lhs, rhs), 1e-10,
                   "one-minus-roots identity");

    // e_j invariance under a random permutation of the value list.
    SymmetricContext shuffled = ctx;
    for (std::size_t i = shuffled.values.size(); i > 1; --i)
      std::swap(shuffled.values[i - 1],
                shuffled.values[rng() % static_cast<std::uint64_t>(i)]);
    const auto e1 = elementary_symmetric_all(ctx.values);
    const auto e2 = elementary_symmetric_all(shuffled.values);
    double worst = 0.0;
    for (std::size_t j = 0; j < e1.size(); ++j)
      worst = std::max(worst, detail::rel_deviation(e1[j], e2[j]));
    detail::record(result, worst, 1e-10, "symmetry under permutation");
  }
  return result;
}

namespace detail {

// Deterministic random families with values pinned at a fixed prime set.
inline CMFamily random_family(std::mt19937_64& rng, int r, int t,
                              const std::vector<std::uint64_t>& prime_set) {
  auto values = std::make_shared<std::map<std::tuple<int, int, std::uint64_t>, cdouble>>();
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j <= t; ++j)
      for (std::uint64_t p : prime_set)
        (*values)[{i, j, p}] = random_complex(rng, 1.0);
  CMFamily family;
  family.r = r;
  family.t = t;
  family.prime_value_bound = 1.0;
  family.prime_values = [values](int i, int j, std::uint64_t p) -> cdouble {
    auto it = values->find({i, j, p});
    if (it == values->end())
      throw std::logic_error("random family queried outside its prime set");
    return it->second;
  };
  return family;
}

inline bool factors_identical(const LocalFactor& lhs, const LocalFactor& rhs) {
  return lhs.r == rhs.r && lhs.coeffs == rhs.coeffs;
}

}  // namespace detail

// Golden-table comparisons for the embedded local factors and the constant
// polynomials. case_name: tau2 | tau3 | tau3-pairwise | t1 | kpoly | r2 | all.
inline SuiteResult run_local_factor_suite(const std::string& case_name,
                                          const std::string& data_dir,
                                          std::uint64_t seed = 42) {
  SuiteResult result;
  result.suite = "local-factors";
  const bool all = case_name == "all";
  auto check_table = [&result](const std::string& what, bool ok) {
    ++result.checks;
    if (!ok) {
      ++result.violations;
      result.max_deviation = std::max(result.max_deviation, 1.0);
      result.notes.push_back(what + ": mismatch");
    }
  };

  if (all || case_name == "tau2") {
    const auto golden = read_coeff_table_file(data_dir + "/golden/tau2_setwise.txt");
    for (std::uint64_t p : {2ull, 3ull, 97ull}) {
      const LocalFactor factor = setwise_local_factor(tau_family({2, 2}), p);
      check_table("tau2 setwise factor at p=" + std::to_string(p),
                  same_table(integer_entries(factor), golden));
    }
  }
  if (all || case_name == "tau3") {
    const auto golden = read_coeff_table_file(data_dir + "/golden/tau3_setwise.txt");
    for (std::uint64_t p : {2ull, 5ull}) {
      const LocalFactor factor = setwise_local_factor(tau_family({2, 2, 2}), p);
      check_table("tau3 setwise factor at p=" + std::to_string(p),
                  same_table(integer_entries(factor), golden));
    }
  }
  if (all || case_name == "tau3-pairwise") {
    const auto golden = read_coeff_table_file(data_dir + "/golden/tau3_pairwise.txt");
    for (std::uint64_t p : {2ull, 5ull}) {
      const LocalFactor factor = pairwise_local_factor(tau_family({2, 2, 2}), p);
      check_table("tau3 pairwise factor at p=" + std::to_string(p),
                  same_table(integer_entries(factor), golden));
    }
  }
  if (all || case_name == "t1") {
    // Pairwise factor at t = 1: three pair terms of -1 and one triple of +2.
    std::vector<CoeffTableEntry> expected{
        {{0, 0, 0}, 1},  {{1, 1, 0}, -1}, {{1, 0, 1}, -1},
        {{0, 1, 1}, -1}, {{1, 1, 1}, 2}};
    const LocalFactor factor = pairwise_local_factor(tau_family({1, 1, 1}), 3);
    check_table("t1 pairwise factor", same_table(integer_entries(factor), expected));
    std::vector<CoeffTableEntry> setwise_expected{{{0, 0, 0}, 1}, {{1, 1, 1}, -1}};
    const LocalFactor sw = setwise_local_factor(tau_family({1, 1, 1}), 3);
    check_table("t1 setwise factor", same_table(integer_entries(sw), setwise_expected));
  }
  if (all || case_name == "kpoly") {
    auto poly_entries = [](const std::vector<long long>& poly) {
      std::vector<CoeffTableEntry> entries;
      for (std::size_t d = 0; d < poly.size(); ++d)
        if (poly[d] != 0) entries.push_back({{static_cast<int>(d)}, poly[d]});
      return entries;
    };
    check_table("K2 polynomial",
                same_table(poly_entries(k_local_polynomial(2)),
                           read_coeff_table_file(data_dir + "/golden/k2_poly.txt")));
    check_table("K3 polynomial",
                same_table(poly_entries(k_local_polynomial(3)),
                           read_coeff_table_file(data_dir + "/golden/k3_poly.txt")));
    check_table("Kbar3 polynomial",
                same_table(poly_entries(k_bar_local_polynomial(3)),
                           read_coeff_table_file(data_dir + "/golden/kbar3_poly.txt")));
    check_table("Kbar2 equals K2",
                k_bar_local_polynomial(2) == k_local_polynomial(2));
    // Expanded polynomial vs closed form (1 - ((2p-1)/p^2)^r).
    for (int r = 2; r <= 6; ++r) {
      const auto poly = k_local_polynomial(r);
      double worst = 0.0;
      for (std::uint64_t p = 2; p <= 100; ++p) {
        const double x = 1.0 / static_cast<double>(p);
        double horner = 0.0;
        for (std::size_t d = poly.size(); d-- > 0;)
          horner = horner * x + static_cast<double>(poly[d]);
        const double base = (2.0 * static_cast<double>(p) - 1.0) /
                            (static_cast<double>(p) * static_cast<double>(p));
        const double closed = 1.0 - std::pow(base, r);
        worst = std::max(worst, std::abs(horner - closed) /
                                    std::max({std::abs(closed), std::abs(horner), 1.0}));
      }
      detail::record(result, worst, 1e-14,
                     "K" + std::to_string(r) + " expanded vs closed form");
    }
  }
  if (all || case_name == "r2") {
    // For r = 2 the setwise and pairwise restrictions coincide.
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 20; ++trial) {
      const int t = 1 + static_cast<int>(rng() % 3);
      const CMFamily family = detail::random_family(rng, 2, t, {2, 3, 5});
      for (std::uint64_t p : {2ull, 3ull, 5ull}) {
        check_table("r2 setwise == pairwise (trial " + std::to_string(trial) + ")",
                    detail::factors_identical(setwise_local_factor(family, p),
                                              pairwise_local_factor(family, p)));
      }
    }
  }
  if (result.checks == 0)
    throw std::domain_error("run_local_factor_suite: unknown case " + case_name);
  return result;
}

// Convolution identity sweep for tau weights.
inline SuiteResult run_convolution_suite(CoprimeKind kind, std::vector<int> t_list,
                                         std::uint64_t N,
                                         std::uint64_t work_budget = kDefaultWorkBudget) {
  SuiteResult result;
  result.suite = "convolution";
  const VerifyReport report =
      verify_convolution_identity(kind, tau_family(std::move(t_list)), N, work_budget);
  result.checks = report.tuples_checked;
  result.violations = report.violations;
  result.max_deviation = report.max_deviation;
  result.budget_exhausted = report.budget_exhausted;
  for (const auto& v : report.samples) {
    std::string note = "violation at (";
    for (std::size_t i = 0; i < v.n.size(); ++i)
      note += (i ? "," : "") + std::to_string(v.n[i]);
    note += ")";
    result.notes.push_back(std::move(note));
  }
  if (report.budget_exhausted) result.notes.push_back("work budget exhausted; partial");
  return result;
}

// k-wise factors must bracket the two named restrictions at t = 1:
// k = r reproduces the setwise factor and k = 2 the pairwise factor,
// coefficient for coefficient.
inline SuiteResult run_kwise_suite(std::uint64_t seed, int r_min = 3, int r_max = 5,
                                   int families_per_r = 5) {
  SuiteResult result;
  result.suite = "kwise";
  std::mt19937_64 rng(seed);
  const std::vector<std::uint64_t> prime_set{2, 3, 5, 7, 11};
  for (int r = r_min; r <= r_max; ++r) {
    for (int trial = 0; trial < families_per_r; ++trial) {
      const CMFamily family = detail::random_family(rng, r, 1, prime_set);
      auto prime_values = [&family](int i, std::uint64_t p) {
        return family.prime_values(i, 1, p);
      };
      for (std::uint64_t p : prime_set) {
        ++result.checks;
        if (!detail::factors_identical(kwise_local_factor(prime_values, r, r, p),
                                       setwise_local_factor(family, p))) {
          ++result.violations;
          result.notes.push_back("k=r vs setwise mismatch at r=" + std::to_string(r) +
                                 " p=" + std::to_string(p));
        }
        ++result.checks;
        if (!detail::factors_identical(kwise_local_factor(prime_values, r, 2, p),
                                       pairwise_local_factor(family, p))) {
          ++result.violations;
          result.notes.push_back("k=2 vs pairwise mismatch at r=" + std::to_string(r) +
                                 " p=" + std::to_string(p));
        }
      }
    }
  }
  return result;
}

// Series-product bridge: the truncated restricted sum against the certified
// product side. The truncation tolerance is a documented heuristic (the sum
// carries no certified tail), so this suite also demands that doubling N
// shrinks the discrepancy.
inline SuiteResult run_series_bridge_suite(std::vector<int> t_list,
                                           std::vector<double> s_real,
                                           std::uint64_t N,
                                           double tolerance = 0.02,
                                           std::uint64_t cutoff = 1000000,
                                           int threads = 1) {
  SuiteResult result;
  result.suite = "series";
  const int r = static_cast<int>(t_list.size());
  if (static_cast<int>(s_real.size()) != r)
    throw std::invalid_argument("run_series_bridge_suite: s has wrong length");
  for (double sigma : s_real)
    if (!(sigma > 1.0))
      throw divergence_error("run_series_bridge_suite: need Re s_i > 1");

  const PrimeTable table = sieve(cutoff);
  std::vector<cdouble> s(s_real.size());
  for (std::size_t i = 0; i < s_real.size(); ++i) s[i] = cdouble{s_real[i], 0.0};

  cdouble reference{1.0, 0.0};
  for (int i = 0; i < r; ++i) {
    const CertifiedValue z = zeta(s_real[static_cast<std::size_t>(i)], cutoff, &table,
                                  threads);
    for (int rep = 0; rep < t_list[static_cast<std::size_t>(i)]; ++rep)
      reference *= z.value;
  }
  const FactorGenerator gen = setwise_factor_generator(tau_family(t_list));
  const CertifiedValue delta = euler_product(gen, s, cutoff, table, threads);
  reference *= delta.value;

  const std::uint64_t budget_for = [&](std::uint64_t n) {
    std::uint64_t b = 1;
    for (int i = 0; i < r; ++i) b *= n;
    return b + 16;
  }(2 * N);
  const MultiVarFunction F =
      make_tau_series_function(t_list, Restriction::setwise, 0, 2 * N);
  const cdouble sum_n = truncated_series(F, s, N, budget_for);
  const cdouble sum_2n = truncated_series(F, s, 2 * N, budget_for);

  const double ref_mag = std::abs(reference);
  const double err_n = std::abs(sum_n - reference);
  const double err_2n = std::abs(sum_2n - reference);
  detail::record(result, err_n / ref_mag, tolerance, "bridge at N");
  detail::record(result, err_2n / ref_mag, tolerance, "bridge at 2N");
  ++result.checks;
  if (!(err_2n < err_n)) {
    ++result.violations;
    result.notes.push_back("discrepancy did not shrink when N doubled");
  }
  result.notes.push_back("relative discrepancy at N: " + format_float17(err_n / ref_mag));
  result.notes.push_back("relative discrepancy at 2N: " +
                         format_float17(err_2n / ref_mag));
  return result;
}

}  // namespace mds
