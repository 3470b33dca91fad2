#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include <mds/series.hpp>
#include <mds/verify.hpp>

#include "oracles.hpp"

using namespace mds;

namespace {

MultiVarFunction point_mass(int r) {
  MultiVarFunction F;
  F.r = r;
  F.multiplicative = true;
  F.eval = [](std::span<const std::uint64_t> n) -> cdouble {
    for (std::uint64_t v : n)
      if (v != 1) return 0.0;
    return 1.0;
  };
  return F;
}

MultiVarFunction constant_one(int r) {
  MultiVarFunction F;
  F.r = r;
  F.multiplicative = true;
  F.eval = [](std::span<const std::uint64_t>) -> cdouble { return 1.0; };
  return F;
}

}  // namespace

TEST_CASE("truncated series basics") {
  const std::vector<cdouble> s{cdouble{2.0, 0.0}, cdouble{2.0, 0.0}};
  CHECK(truncated_series(point_mass(2), s, 5) == cdouble{1.0, 0.0});

  MultiVarFunction rho_ind;
  rho_ind.r = 2;
  rho_ind.eval = [](std::span<const std::uint64_t> n) -> cdouble {
    return static_cast<double>(rho(n));
  };
  CHECK(std::abs(truncated_series(rho_ind, s, 2) - cdouble{1.5, 0.0}) < 1e-15);

  CHECK_THROWS_AS(truncated_series(rho_ind, s, 100'000), resource_error);
  CHECK_THROWS_AS(truncated_series(rho_ind, s, 0), std::domain_error);
}

TEST_CASE("dirichlet convolution against divisor enumeration") {
  const MultiVarFunction one1 = constant_one(1);
  const std::vector<std::uint64_t> twelve{12};
  CHECK(std::abs(dirichlet_convolve(one1, one1, twelve) - cdouble{6.0, 0.0}) < 1e-15);

  const MultiVarFunction one2 = constant_one(2);
  const std::vector<std::uint64_t> pair{4, 9};
  CHECK(std::abs(dirichlet_convolve(one2, one2, pair) - cdouble{9.0, 0.0}) < 1e-15);

  // Point mass at (1,...,1) is the convolution identity.
  std::mt19937_64 rng(31);
  MultiVarFunction noisy;
  noisy.r = 2;
  noisy.eval = [](std::span<const std::uint64_t> n) -> cdouble {
    return cdouble{static_cast<double>(n[0] % 7), static_cast<double>(n[1] % 5)};
  };
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<std::uint64_t> n{1 + rng() % 60, 1 + rng() % 60};
    const cdouble lhs = dirichlet_convolve(noisy, point_mass(2), n);
    CHECK(std::abs(lhs - noisy.eval(n)) < 1e-12);
  }
}

TEST_CASE("correction function values at prime blocks") {
  CorrectionFunction setwise{CoprimeKind::setwise, tau_family({2, 2})};
  const std::vector<FactoredInteger> ones{factor(1), factor(1)};
  CHECK(correction_value(setwise, ones) == cdouble{1.0, 0.0});

  const std::vector<FactoredInteger> pp{factor(7), factor(7)};
  CHECK(std::abs(correction_value(setwise, pp) - cdouble{-4.0, 0.0}) < 1e-14);

  CorrectionFunction pairwise{CoprimeKind::pairwise, tau_family({1, 1, 1})};
  const std::vector<FactoredInteger> ppp{factor(5), factor(5), factor(5)};
  CHECK(std::abs(correction_value(pairwise, ppp) - cdouble{2.0, 0.0}) < 1e-14);

  // Mixed support: one zero exponent kills the setwise block.
  const std::vector<FactoredInteger> mixed{factor(7), factor(1)};
  CHECK(correction_value(setwise, mixed) == cdouble{0.0, 0.0});

  // Exponent above t kills both kinds.
  const std::vector<FactoredInteger> high{factor(8), factor(2)};
  CHECK(correction_value(setwise, high) == cdouble{0.0, 0.0});
}

TEST_CASE("correction function is multiplicative across prime blocks") {
  CorrectionFunction cf{CoprimeKind::setwise, tau_family({2, 2})};
  // (12, 18) = (2^2*3, 2*3^2): value must equal block(2,(2,1)) * block(3,(1,2)).
  const std::vector<FactoredInteger> n{factor(12), factor(18)};
  const std::vector<int> a2{2, 1}, a3{1, 2};
  const cdouble expected = correction_block(cf, a2, 2) * correction_block(cf, a3, 3);
  CHECK(std::abs(correction_value(cf, n) - expected) < 1e-14);
}

TEST_CASE("convolution identity holds exactly for tau families") {
  const VerifyReport r22 =
      verify_convolution_identity(CoprimeKind::setwise, tau_family({2, 2}), 20);
  CHECK(r22.exact);
  CHECK(r22.violations == 0);
  CHECK(r22.tuples_checked == 400);

  const VerifyReport r222 =
      verify_convolution_identity(CoprimeKind::pairwise, tau_family({2, 2, 2}), 12);
  CHECK(r222.exact);
  CHECK(r222.violations == 0);

  const VerifyReport r2t3 =
      verify_convolution_identity(CoprimeKind::setwise, tau_family({3, 3}), 50);
  CHECK(r2t3.exact);
  CHECK(r2t3.violations == 0);

  const VerifyReport r2t3_pair =
      verify_convolution_identity(CoprimeKind::pairwise, tau_family({3, 3}), 50);
  CHECK(r2t3_pair.violations == 0);

  // Mixed orders exercise rows whose grid is padded with zero entries.
  const VerifyReport mixed =
      verify_convolution_identity(CoprimeKind::setwise, tau_family({3, 2}), 25);
  CHECK(mixed.exact);
  CHECK(mixed.violations == 0);
  const VerifyReport mixed_pair =
      verify_convolution_identity(CoprimeKind::pairwise, tau_family({3, 2}), 25);
  CHECK(mixed_pair.violations == 0);

  const VerifyReport trivial =
      verify_convolution_identity(CoprimeKind::setwise, tau_family({2, 2}), 1);
  CHECK(trivial.violations == 0);
  CHECK(trivial.tuples_checked == 1);
}

TEST_CASE("convolution identity holds for random complex families") {
  std::mt19937_64 rng(77);
  const CMFamily family = mds::detail::random_family(rng, 2, 2, {2, 3, 5});
  const VerifyReport report =
      verify_convolution_identity(CoprimeKind::setwise, family, 5);
  CHECK_FALSE(report.exact);
  CHECK(report.violations == 0);

  const VerifyReport pairwise_report =
      verify_convolution_identity(CoprimeKind::pairwise, family, 5);
  CHECK(pairwise_report.violations == 0);
}

TEST_CASE("budget exhaustion yields a partial report") {
  const VerifyReport report =
      verify_convolution_identity(CoprimeKind::setwise, tau_family({2, 2}), 30, 100);
  CHECK(report.budget_exhausted);
  CHECK(report.tuples_checked < 900);
}

TEST_CASE("truncated series of a convolution approaches the product of series") {
  const std::vector<cdouble> s{cdouble{2.0, 0.0}, cdouble{2.0, 0.0}};
  const MultiVarFunction tau2 =
      make_tau_series_function({2, 2}, Restriction::none, 0, 400);
  const MultiVarFunction ones = constant_one(2);
  double gaps[2];
  int idx = 0;
  for (std::uint64_t N : {100ull, 400ull}) {
    const cdouble conv = truncated_series(tau2, s, N, 200'000);
    const cdouble base = truncated_series(ones, s, N, 200'000);
    gaps[idx++] = std::abs(conv - base * base);
  }
  CHECK(gaps[1] < gaps[0]);
}

TEST_CASE("richardson extrapolation tightens the series-product bridge") {
  const PrimeTable table = sieve(200'000);
  const std::vector<cdouble> s{cdouble{2.0, 0.0}, cdouble{2.0, 0.0}};
  const CertifiedValue z = zeta(2.0, 200'000, &table);
  const FactorGenerator gen = setwise_factor_generator(tau_family({2, 2}));
  const CertifiedValue delta = euler_product(gen, s, 200'000, table);
  const cdouble reference =
      z.value * z.value * z.value * z.value * delta.value;

  const MultiVarFunction F =
      make_tau_series_function({2, 2}, Restriction::setwise, 0, 2000);
  const cdouble s_n = truncated_series(F, s, 1000, 8'000'000);
  const cdouble s_2n = truncated_series(F, s, 2000, 8'000'000);
  // The truncation error decays like log(N)/N, so 2*S_2N - S_N cancels the
  // leading term.
  const cdouble extrapolated = 2.0 * s_2n - s_n;
  CHECK(std::abs(extrapolated - reference) < std::abs(s_2n - reference));
}

TEST_CASE("indicators are multiplicative as r-variate functions") {
  // Exhaustive over coordinatewise products with coprime totals, entries <= 12.
  std::uint64_t mismatches = 0;
  std::uint64_t pairs = 0;
  std::vector<std::uint64_t> m(3), n(3), mn(3);
  for (m[0] = 1; m[0] <= 12; ++m[0])
    for (m[1] = 1; m[1] <= 12; ++m[1])
      for (m[2] = 1; m[2] <= 12; ++m[2]) {
        const std::uint64_t m_total = m[0] * m[1] * m[2];
        for (n[0] = 1; n[0] <= 12; ++n[0])
          for (n[1] = 1; n[1] <= 12; ++n[1])
            for (n[2] = 1; n[2] <= 12; ++n[2]) {
              if (std::gcd(m_total, n[0] * n[1] * n[2]) != 1) continue;
              for (int i = 0; i < 3; ++i) mn[i] = m[i] * n[i];
              ++pairs;
              if (rho(mn) != rho(m) * rho(n)) ++mismatches;
              if (theta(mn) != theta(m) * theta(n)) ++mismatches;
            }
      }
  CHECK(pairs > 100'000);
  CHECK(mismatches == 0);
}
