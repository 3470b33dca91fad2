#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <json.hpp>

#include <mds/cli.hpp>

using namespace mds;
using nlohmann::json;

namespace {

struct CliRun {
  int exit_code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("constant command emits a certified value") {
  const CliRun result =
      run({"constant", "K", "--r", "2", "--cutoff", "100000", "--format", "json"});
  REQUIRE(result.exit_code == 0);
  const json doc = json::parse(result.out);
  CHECK(doc["name"] == "K");
  CHECK(doc["cutoff"] == 100000);
  CHECK(doc["params"]["r"] == 2);
  const CertifiedValue reference = k_constant(2, 100'000);
  CHECK(doc["value"]["re"].get<std::string>() ==
        format_float17(reference.value.real()));
  CHECK(doc["tail_bound"].get<std::string>() ==
        format_float17(reference.tail_bound));
}

TEST_CASE("visible-points constant matches the zeta reference") {
  const CliRun result = run({"constant", "delta", "--r", "2", "--t", "1", "--s", "2,2",
                             "--cutoff", "200000", "--format", "json"});
  REQUIRE(result.exit_code == 0);
  const json doc = json::parse(result.out);
  const double value = std::stod(doc["value"]["re"].get<std::string>());
  CHECK(std::abs(value - 0.9239384029) < 1e-7);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run({"constant", "K", "--r", "1"}).exit_code == 2);
  CHECK(run({"constant", "K"}).exit_code == 2);
  CHECK(run({"constant", "Q", "--r", "2"}).exit_code == 2);
  CHECK(run({"sum", "--kind", "setwise", "--t", "2,2", "--x", "0"}).exit_code == 2);
  CHECK(run({"sum", "--kind", "setwise", "--t", "2,2"}).exit_code == 2);
  CHECK(run({"nonsense"}).exit_code == 2);
  CHECK(run({}).exit_code == 2);
  CHECK(run({"table", "--name", "unknown"}).exit_code == 2);
  CHECK(run({"constant", "delta", "--r", "2", "--t", "1", "--s", "2,bogus"}).exit_code ==
        2);
}

TEST_CASE("diverging products map to a usage error") {
  const CliRun result =
      run({"constant", "delta", "--r", "2", "--t", "1", "--s", "0.2,0.2"});
  CHECK(result.exit_code == 2);
}

TEST_CASE("resource exhaustion exits with code 3") {
  const CliRun result = run({"series", "--t", "2,2", "--s", "2,2", "--N", "10000",
                             "--budget", "1000"});
  CHECK(result.exit_code == 3);
}

TEST_CASE("verify suites run clean") {
  CHECK(run({"verify", "lemma", "--seed", "42"}).exit_code == 0);
  CHECK(run({"verify", "local-factors", "--case", "tau3"}).exit_code == 0);
  CHECK(run({"verify", "local-factors", "--case", "kpoly"}).exit_code == 0);
  CHECK(run({"verify", "local-factors", "--case", "r2"}).exit_code == 0);
  CHECK(run({"verify", "local-factors", "--case", "t1"}).exit_code == 0);
  CHECK(run({"verify", "local-factors", "--case", "bogus"}).exit_code == 2);
  CHECK(run({"verify", "convolution", "--r", "2", "--t", "2", "--N", "12"}).exit_code ==
        0);
  CHECK(run({"verify", "kwise", "--seed", "7"}).exit_code == 0);
  CHECK(run({"verify", "series", "--t", "2,2", "--s", "2,2", "--N", "400", "--cutoff",
             "200000"}).exit_code == 0);
}

TEST_CASE("pairwise constant coincides with the setwise one at r = 2") {
  const CliRun delta = run({"constant", "delta", "--r", "2", "--t", "2", "--s", "2,2",
                            "--cutoff", "50000", "--format", "json"});
  const CliRun deltabar = run({"constant", "deltabar", "--r", "2", "--t", "2", "--s",
                               "2,2", "--cutoff", "50000", "--format", "json"});
  REQUIRE(delta.exit_code == 0);
  REQUIRE(deltabar.exit_code == 0);
  CHECK(json::parse(delta.out)["value"] == json::parse(deltabar.out)["value"]);
}

TEST_CASE("kwise series restriction is accepted") {
  const CliRun result = run({"series", "--t", "1,1,1", "--s", "2,2,2", "--N", "25",
                             "--kind", "kwise", "--k", "2", "--format", "json"});
  REQUIRE(result.exit_code == 0);
  CHECK(run({"series", "--t", "1,1,1", "--s", "2,2,2", "--N", "25", "--kind", "kwise",
             "--k", "9"}).exit_code == 2);
}

TEST_CASE("environment variable overrides the default work budget") {
  ::setenv("MDS_WORK_BUDGET", "1000", 1);
  const CliRun limited = run({"series", "--t", "2,2", "--s", "2,2", "--N", "100"});
  ::unsetenv("MDS_WORK_BUDGET");
  CHECK(limited.exit_code == 3);
  const CliRun unlimited = run({"series", "--t", "2,2", "--s", "2,2", "--N", "100"});
  CHECK(unlimited.exit_code == 0);
}

TEST_CASE("sum rows omit the predicted constant for first-order weights") {
  const CliRun result = run({"sum", "--kind", "pairwise", "--t", "1,1", "--x", "10",
                             "--format", "json"});
  REQUIRE(result.exit_code == 0);
  const json doc = json::parse(result.out);
  CHECK(doc["rows"][0]["predicted_leading"].is_null());
}

TEST_CASE("verify reports budget exhaustion with exit code 3") {
  const CliRun result = run({"verify", "convolution", "--r", "2", "--t", "2", "--N",
                             "40", "--budget", "50"});
  CHECK(result.exit_code == 3);
}

TEST_CASE("sum command emits rows in every format") {
  const std::vector<int> t22{2, 2};
  const auto expected = restricted_tau_sum(CoprimeKind::setwise, t22, 100);

  const CliRun json_run = run({"sum", "--kind", "setwise", "--t", "2,2", "--x", "100",
                               "--cutoff", "20000", "--format", "json"});
  REQUIRE(json_run.exit_code == 0);
  const json doc = json::parse(json_run.out);
  REQUIRE(doc["rows"].size() == 1);
  CHECK(doc["rows"][0]["x"] == 100);
  CHECK(doc["rows"][0]["value"].get<std::string>() == int128_to_string(expected.value));

  const CliRun csv_run = run({"sum", "--kind", "pairwise", "--t", "2,2,2", "--x-grid",
                              "10,30", "--cutoff", "20000", "--format", "csv"});
  REQUIRE(csv_run.exit_code == 0);
  CHECK(csv_run.out.find("x,value,ratio,predicted_leading\n") == 0);
  CHECK(std::count(csv_run.out.begin(), csv_run.out.end(), '\n') == 3);

  const CliRun text_run = run({"sum", "--kind", "setwise", "--t", "2,2", "--x", "1",
                               "--cutoff", "20000"});
  REQUIRE(text_run.exit_code == 0);
  CHECK(text_run.out.find("value=1") != std::string::npos);
  CHECK(text_run.out.find("ratio=") == std::string::npos);  // absent at x = 1
}

TEST_CASE("series command evaluates a truncated sum") {
  const CliRun result = run({"series", "--t", "2,2", "--s", "2,2", "--N", "40",
                             "--kind", "setwise", "--format", "json"});
  REQUIRE(result.exit_code == 0);
  const json doc = json::parse(result.out);
  const MultiVarFunction F =
      make_tau_series_function({2, 2}, Restriction::setwise, 0, 40);
  const std::vector<cdouble> s{cdouble{2.0, 0.0}, cdouble{2.0, 0.0}};
  const cdouble reference = truncated_series(F, s, 40);
  CHECK(doc["value"]["re"].get<std::string>() == format_float17(reference.real()));
}

TEST_CASE("table command prints the golden tables") {
  const CliRun result = run({"table", "--name", "tau2", "--format", "json"});
  REQUIRE(result.exit_code == 0);
  const json doc = json::parse(result.out);
  CHECK(doc["rows"].size() == 5);

  const CliRun text = run({"table", "--name", "kbar3"});
  REQUIRE(text.exit_code == 0);
  CHECK(text.out.find("2 -12\n") != std::string::npos);

  CHECK(run({"table", "--name", "tau2", "--data-dir", "/nonexistent"}).exit_code == 2);
}

TEST_CASE("identical configurations produce byte-identical output") {
  const std::vector<std::string> args{"constant", "Kbar",     "--r",      "3",
                                      "--cutoff", "50000",    "--format", "json",
                                      "--threads", "2"};
  const CliRun first = run(args);
  const CliRun second = run(args);
  CHECK(first.exit_code == 0);
  CHECK(first.out == second.out);

  const std::vector<std::string> verify_args{"verify", "lemma", "--seed", "9",
                                             "--format", "json"};
  CHECK(run(verify_args).out == run(verify_args).out);
}

TEST_CASE("json output round-trips byte-identically") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"constant", "K", "--r", "2", "--cutoff", "20000", "--format", "json"},
           {"sum", "--kind", "setwise", "--t", "2,2", "--x-grid", "1,10,100",
            "--cutoff", "20000", "--format", "json"},
           {"table", "--name", "tau3-pairwise", "--format", "json"},
           {"verify", "lemma", "--seed", "3", "--cases", "20", "--format", "json"}}) {
    const CliRun result = run(args);
    REQUIRE(result.exit_code == 0);
    const json parsed = json::parse(result.out);
    CHECK(parsed.dump() + "\n" == result.out);
  }
}

TEST_CASE("complex literal parsing") {
  CHECK(parse_complex_literal("2") == cdouble{2.0, 0.0});
  CHECK(parse_complex_literal("-1.5") == cdouble{-1.5, 0.0});
  CHECK(parse_complex_literal("1+2i") == cdouble{1.0, 2.0});
  CHECK(parse_complex_literal("0.5-1i") == cdouble{0.5, -1.0});
  CHECK(parse_complex_literal("2i") == cdouble{0.0, 2.0});
  CHECK(parse_complex_literal("-i") == cdouble{0.0, -1.0});
  CHECK(parse_complex_literal("1e-3+2e-4i") == cdouble{1e-3, 2e-4});
  CHECK_THROWS_AS(parse_complex_literal("bogus"), std::exception);
}

TEST_CASE("csv quoting follows RFC 4180") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}
