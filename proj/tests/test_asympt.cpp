#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <mds/asympt.hpp>

#include "oracles.hpp"

using namespace mds;

namespace {

// Naive side: enumerate all tuples <= xmax once, bucket by max coordinate,
// and prefix-sum so every threshold x <= xmax gets its exact value.
std::vector<int128> enumeration_values(CoprimeKind kind, const std::vector<int>& t_list,
                                       std::uint64_t xmax) {
  const int r = static_cast<int>(t_list.size());
  std::vector<std::vector<long long>> taus;
  for (int t : t_list) taus.push_back(tau_table(t, xmax));
  std::vector<int128> buckets(xmax + 1, 0);
  std::vector<std::uint64_t> tuple(static_cast<std::size_t>(r), 1);
  while (true) {
    const int ind = kind == CoprimeKind::setwise ? rho(tuple) : theta(tuple);
    if (ind != 0) {
      int128 prod = 1;
      std::uint64_t largest = 1;
      for (int i = 0; i < r; ++i) {
        prod *= taus[static_cast<std::size_t>(i)][tuple[static_cast<std::size_t>(i)]];
        largest = std::max(largest, tuple[static_cast<std::size_t>(i)]);
      }
      buckets[largest] += prod;
    }
    int pos = r - 1;
    while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == xmax) {
      tuple[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++tuple[static_cast<std::size_t>(pos)];
  }
  for (std::uint64_t x = 1; x <= xmax; ++x) buckets[x] += buckets[x - 1];
  return buckets;
}

}  // namespace

TEST_CASE("piltz partial sums at small arguments") {
  CHECK(piltz_partial_sum(2, 6) == 14);
  CHECK(piltz_partial_sum(1, 10) == 10);
  CHECK(piltz_partial_sum(3, 4) == 13);
  CHECK_THROWS_AS(piltz_partial_sum(0, 5), std::domain_error);
  CHECK_THROWS_AS(piltz_partial_sum(2, 0), std::domain_error);
}

TEST_CASE("hyperbola method agrees with the sieve for tau_2") {
  const PiltzTable table = make_piltz_table(2, 100'000);
  std::uint64_t mismatches = 0;
  for (std::uint64_t x = 1; x <= 100'000; ++x)
    if (piltz_partial_sum(2, x) != table.sum(x)) ++mismatches;
  CHECK(mismatches == 0);
}

TEST_CASE("restricted sums at tiny thresholds") {
  const std::vector<int> t22{2, 2};
  CHECK(static_cast<long long>(restricted_tau_sum(CoprimeKind::setwise, t22, 1).value) ==
        1);
  CHECK(static_cast<long long>(restricted_tau_sum(CoprimeKind::setwise, t22, 4).value) ==
        35);
  CHECK_THROWS_AS(restricted_tau_sum(CoprimeKind::setwise, t22, 0), std::domain_error);
  CHECK_THROWS_AS(restricted_tau_sum(CoprimeKind::setwise, std::vector<int>{2}, 5),
                  std::domain_error);
}

TEST_CASE("ratio column is absent at x = 1") {
  const auto row = restricted_tau_sum(CoprimeKind::setwise, std::vector<int>{2, 2}, 1);
  CHECK(std::isnan(row.ratio));
  const auto row10 = restricted_tau_sum(CoprimeKind::setwise, std::vector<int>{2, 2}, 10);
  CHECK_FALSE(std::isnan(row10.ratio));
}

TEST_CASE("convolution route equals enumeration for all small x") {
  struct Config {
    CoprimeKind kind;
    std::vector<int> t_list;
  };
  const std::vector<Config> configs{
      {CoprimeKind::setwise, {2, 2}},
      {CoprimeKind::setwise, {3, 2}},
      {CoprimeKind::pairwise, {2, 2, 2}},
      {CoprimeKind::pairwise, {1, 1, 1}},
  };
  for (const Config& config : configs) {
    const std::uint64_t xmax = config.t_list.size() == 2 ? 80 : 40;
    const auto expected = enumeration_values(config.kind, config.t_list, xmax);
    std::uint64_t mismatches = 0;
    for (std::uint64_t x = 1; x <= xmax; ++x) {
      const auto row = restricted_tau_sum(config.kind, config.t_list, x);
      if (row.value != expected[x]) ++mismatches;
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("work budget is enforced") {
  CHECK_THROWS_AS(
      restricted_tau_sum(CoprimeKind::setwise, std::vector<int>{2, 2}, 10'000, 10),
      resource_error);
}

TEST_CASE("leading coefficients collapse to the K constants") {
  const PrimeTable table = sieve(200'000);
  const std::vector<int> t22{2, 2};
  const CertifiedValue lead_set =
      leading_coefficient(CoprimeKind::setwise, t22, 200'000, &table);
  const CertifiedValue lead_pair =
      leading_coefficient(CoprimeKind::pairwise, t22, 200'000, &table);
  const CertifiedValue k2 = k_constant(2, 200'000, &table);
  CHECK(std::abs(lead_set.value - k2.value) <= lead_set.tail_bound + k2.tail_bound);
  CHECK(std::abs(lead_pair.value - k2.value) <= lead_pair.tail_bound + k2.tail_bound);

  const std::vector<int> t222{2, 2, 2};
  const CertifiedValue lead3 =
      leading_coefficient(CoprimeKind::setwise, t222, 200'000, &table);
  const CertifiedValue k3 = k_constant(3, 200'000, &table);
  CHECK(std::abs(lead3.value - k3.value) <= lead3.tail_bound + k3.tail_bound);

  const CertifiedValue lead3_pair =
      leading_coefficient(CoprimeKind::pairwise, t222, 200'000, &table);
  const CertifiedValue kbar3 = k_bar_constant(3, 200'000, &table);
  CHECK(std::abs(lead3_pair.value - kbar3.value) <=
        lead3_pair.tail_bound + kbar3.tail_bound);

  CHECK_THROWS_AS(leading_coefficient(CoprimeKind::setwise, std::vector<int>{1, 1},
                                      200'000, &table),
                  std::domain_error);
}

TEST_CASE("diagnostic rows carry values, ratios and the predicted constant") {
  const std::vector<int> t22{2, 2};
  const std::vector<std::uint64_t> grid{10, 100, 1000};
  const auto rows =
      convergence_diagnostic(CoprimeKind::setwise, t22, grid, 50'000);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].x == 10);
  CHECK(static_cast<long long>(rows[0].value) ==
        static_cast<long long>(
            restricted_tau_sum(CoprimeKind::setwise, t22, 10).value));
  for (const auto& row : rows) {
    CHECK_FALSE(std::isnan(row.ratio));
    CHECK_FALSE(std::isnan(row.predicted_leading));
    CHECK(row.predicted_leading > 0.0);
  }
  const std::vector<std::uint64_t> bad_grid{100, 100};
  CHECK_THROWS_AS(convergence_diagnostic(CoprimeKind::setwise, t22, bad_grid, 50'000),
                  std::domain_error);
}

TEST_CASE("value over x^2 grows in log x for the square-divisor case") {
  const std::vector<int> t22{2, 2};
  double f[3];
  int idx = 0;
  for (std::uint64_t x : {1000ull, 10'000ull, 100'000ull}) {
    const auto row = restricted_tau_sum(CoprimeKind::setwise, t22, x, 100'000'000);
    f[idx++] = static_cast<double>(row.value) /
               (static_cast<double>(x) * static_cast<double>(x));
  }
  CHECK(f[2] - 2.0 * f[1] + f[0] > 0.0);  // convex against log x (uniform spacing)
  const double slope =
      (std::log(f[2]) - std::log(f[0])) /
      (std::log(std::log(100'000.0)) - std::log(std::log(1000.0)));
  CHECK(slope > 1.5);
  CHECK(slope < 2.5);
}
