#pragma once

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "asympt.hpp"
#include "euler.hpp"
#include "io.hpp"
#include "series.hpp"
#include "verify.hpp"

#ifndef MDS_DATA_DIR
#define MDS_DATA_DIR "data"
#endif

namespace mds {

namespace cli_detail {

using nlohmann::json;

// Exit codes: 0 success, 1 internal/violations, 2 usage, 3 resource or
// certification.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;

inline json complex_json(const cdouble& z) {
  return json{{"im", format_float17(z.imag())}, {"re", format_float17(z.real())}};
}

inline json float_json(double v) {
  if (std::isnan(v)) return nullptr;
  return format_float17(v);
}

inline std::string complex_text(const cdouble& z) {
  std::string s = format_float17(z.real());
  if (z.imag() != 0.0) s += " + " + format_float17(z.imag()) + "i";
  return s;
}

struct Options {
  std::string format = "text";
  std::string data_dir = MDS_DATA_DIR;
  std::uint64_t cutoff = 1000000;
  std::uint64_t budget = kDefaultWorkBudget;
  std::uint64_t seed = 42;
  int threads = 1;
  int cases = 200;

  std::string constant_name;
  std::string suite;
  std::string case_name = "all";
  std::string kind;
  std::string t_arg;
  std::string s_arg;
  std::string x_grid_arg;
  std::string table_name;
  std::optional<int> r;
  int k = 2;
  std::uint64_t N = 30;
  std::uint64_t x = 0;
};

// --t accepts "2" (replicated over r) or an explicit list "2,2,2".
inline std::vector<int> resolve_t_list(const Options& opt, int default_t = 2) {
  std::vector<int> t_list;
  if (!opt.t_arg.empty()) t_list = parse_int_list(opt.t_arg);
  if (t_list.empty()) t_list.assign(static_cast<std::size_t>(opt.r.value_or(2)), default_t);
  if (t_list.size() == 1 && opt.r && *opt.r > 1)
    t_list.assign(static_cast<std::size_t>(*opt.r), t_list[0]);
  if (opt.r && static_cast<int>(t_list.size()) != *opt.r)
    throw std::invalid_argument("--t list length disagrees with --r");
  return t_list;
}

inline CoprimeKind parse_kind(const std::string& kind) {
  if (kind == "setwise") return CoprimeKind::setwise;
  if (kind == "pairwise") return CoprimeKind::pairwise;
  throw std::invalid_argument("unknown kind '" + kind + "'");
}

inline int emit_constant(const Options& opt, const std::string& name, const json& params,
                         const CertifiedValue& cv, std::ostream& out) {
  if (opt.format == "json") {
    json doc{{"cutoff", cv.prime_cutoff},
             {"name", name},
             {"params", params},
             {"tail_bound", format_float17(cv.tail_bound)},
             {"value", complex_json(cv.value)}};
    out << doc.dump() << "\n";
  } else if (opt.format == "csv") {
    out << "name,params,value_re,value_im,tail_bound,cutoff\n";
    out << csv_field(name) << "," << csv_field(params.dump()) << ","
        << format_float17(cv.value.real()) << "," << format_float17(cv.value.imag())
        << "," << format_float17(cv.tail_bound) << "," << cv.prime_cutoff << "\n";
  } else {
    out << "name: " << name << "\n";
    for (const auto& [key, value] : params.items())
      out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
          << "\n";
    out << "value: " << complex_text(cv.value) << "\n";
    out << "tail_bound: " << format_float17(cv.tail_bound) << "\n";
    out << "cutoff: " << cv.prime_cutoff << "\n";
  }
  return kExitSuccess;
}

inline int cmd_constant(const Options& opt, std::ostream& out) {
  const std::string& name = opt.constant_name;
  if (name == "K" || name == "Kbar") {
    if (!opt.r) throw std::invalid_argument("constant " + name + " requires --r");
    const CertifiedValue cv = name == "K"
                                  ? k_constant(*opt.r, opt.cutoff, nullptr, opt.threads)
                                  : k_bar_constant(*opt.r, opt.cutoff, nullptr, opt.threads);
    return emit_constant(opt, name, json{{"r", *opt.r}}, cv, out);
  }
  // delta / deltabar over tau weights at the given s.
  const std::vector<int> t_list = resolve_t_list(opt, 1);
  if (opt.s_arg.empty()) throw std::invalid_argument("constant " + name + " requires --s");
  const std::vector<cdouble> s = parse_complex_list(opt.s_arg);
  if (s.size() != t_list.size())
    throw std::invalid_argument("--s length disagrees with the family arity");
  CMFamily family = tau_family(t_list);
  const FactorGenerator gen = name == "delta"
                                  ? setwise_factor_generator(std::move(family))
                                  : pairwise_factor_generator(std::move(family));
  const CertifiedValue cv = euler_product(gen, s, opt.cutoff, opt.threads);
  json s_params = json::array();
  for (const cdouble& si : s) s_params.push_back(complex_json(si));
  const json params{{"r", static_cast<int>(t_list.size())}, {"s", s_params}, {"t", t_list}};
  return emit_constant(opt, name, params, cv, out);
}

inline int emit_suite(const Options& opt, const std::vector<SuiteResult>& results,
                      std::ostream& out) {
  std::uint64_t violations = 0;
  bool budget_exhausted = false;
  if (opt.format == "json") {
    json doc = json::array();
    for (const SuiteResult& r : results) {
      doc.push_back(json{{"budget_exhausted", r.budget_exhausted},
                         {"checks", r.checks},
                         {"max_deviation", format_float17(r.max_deviation)},
                         {"notes", r.notes},
                         {"suite", r.suite},
                         {"violations", r.violations}});
      violations += r.violations;
      budget_exhausted = budget_exhausted || r.budget_exhausted;
    }
    out << doc.dump() << "\n";
  } else if (opt.format == "csv") {
    out << "suite,checks,violations,max_deviation,budget_exhausted\n";
    for (const SuiteResult& r : results) {
      out << csv_field(r.suite) << "," << r.checks << "," << r.violations << ","
          << format_float17(r.max_deviation) << "," << (r.budget_exhausted ? 1 : 0)
          << "\n";
      violations += r.violations;
      budget_exhausted = budget_exhausted || r.budget_exhausted;
    }
  } else {
    for (const SuiteResult& r : results) {
      out << "suite " << r.suite << ": " << r.checks << " checks, " << r.violations
          << " violations, max deviation " << format_float17(r.max_deviation) << "\n";
      for (const std::string& note : r.notes) out << "  " << note << "\n";
      violations += r.violations;
      budget_exhausted = budget_exhausted || r.budget_exhausted;
    }
    out << (violations == 0 && !budget_exhausted ? "PASS" : "FAIL") << "\n";
  }
  if (budget_exhausted) return kExitResource;
  return violations == 0 ? kExitSuccess : kExitInternal;
}

inline int cmd_verify(const Options& opt, std::ostream& out) {
  std::vector<SuiteResult> results;
  if (opt.suite == "lemma") {
    results.push_back(run_identity_suite(opt.seed, opt.cases));
  } else if (opt.suite == "local-factors") {
    results.push_back(run_local_factor_suite(opt.case_name, opt.data_dir, opt.seed));
  } else if (opt.suite == "convolution") {
    const std::vector<int> t_list = resolve_t_list(opt);
    if (opt.kind == "both" || opt.kind == "setwise")
      results.push_back(
          run_convolution_suite(CoprimeKind::setwise, t_list, opt.N, opt.budget));
    if (opt.kind == "both" || opt.kind == "pairwise")
      results.push_back(
          run_convolution_suite(CoprimeKind::pairwise, t_list, opt.N, opt.budget));
    if (results.empty()) throw std::invalid_argument("unknown kind '" + opt.kind + "'");
  } else if (opt.suite == "kwise") {
    results.push_back(run_kwise_suite(opt.seed));
  } else if (opt.suite == "series") {
    std::vector<int> t_list = resolve_t_list(opt);
    std::vector<double> s_real;
    if (opt.s_arg.empty()) {
      s_real.assign(t_list.size(), 2.0);
    } else {
      for (const cdouble& si : parse_complex_list(opt.s_arg)) {
        if (si.imag() != 0.0)
          throw std::invalid_argument("verify series requires real s");
        s_real.push_back(si.real());
      }
    }
    results.push_back(run_series_bridge_suite(t_list, s_real, opt.N, 0.02, opt.cutoff,
                                              opt.threads));
  } else {
    throw std::invalid_argument("unknown suite '" + opt.suite + "'");
  }
  return emit_suite(opt, results, out);
}

inline int cmd_sum(const Options& opt, std::ostream& out) {
  const CoprimeKind kind = parse_kind(opt.kind);
  const std::vector<int> t_list = resolve_t_list(opt);
  std::vector<std::uint64_t> grid;
  if (!opt.x_grid_arg.empty()) grid = parse_uint_list(opt.x_grid_arg);
  if (opt.x != 0) grid.push_back(opt.x);
  if (grid.empty()) throw std::invalid_argument("sum requires --x or --x-grid");
  if (!std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw std::invalid_argument("sum grid must be strictly increasing");

  const std::vector<PartialSumResult> rows =
      convergence_diagnostic(kind, t_list, grid, opt.cutoff, opt.budget, opt.threads);

  if (opt.format == "json") {
    json rows_json = json::array();
    for (const PartialSumResult& row : rows)
      rows_json.push_back(json{{"predicted_leading", float_json(row.predicted_leading)},
                               {"ratio", float_json(row.ratio)},
                               {"value", int128_to_string(row.value)},
                               {"x", row.x}});
    json doc{{"kind", opt.kind}, {"rows", rows_json}, {"t", t_list}};
    out << doc.dump() << "\n";
  } else if (opt.format == "csv") {
    out << "x,value,ratio,predicted_leading\n";
    for (const PartialSumResult& row : rows) {
      out << row.x << "," << int128_to_string(row.value) << ",";
      if (!std::isnan(row.ratio)) out << format_float17(row.ratio);
      out << ",";
      if (!std::isnan(row.predicted_leading))
        out << format_float17(row.predicted_leading);
      out << "\n";
    }
  } else {
    for (const PartialSumResult& row : rows) {
      out << "x=" << row.x << " value=" << int128_to_string(row.value);
      if (!std::isnan(row.ratio)) out << " ratio=" << format_float17(row.ratio);
      if (!std::isnan(row.predicted_leading))
        out << " predicted_leading=" << format_float17(row.predicted_leading);
      out << "\n";
    }
  }
  return kExitSuccess;
}

inline int cmd_series(const Options& opt, std::ostream& out) {
  const std::vector<int> t_list = resolve_t_list(opt);
  if (opt.s_arg.empty()) throw std::invalid_argument("series requires --s");
  const std::vector<cdouble> s = parse_complex_list(opt.s_arg);
  if (s.size() != t_list.size())
    throw std::invalid_argument("--s length disagrees with the family arity");
  if (opt.N < 1) throw std::invalid_argument("series requires --N >= 1");

  Restriction restriction = Restriction::none;
  if (opt.kind == "setwise") restriction = Restriction::setwise;
  else if (opt.kind == "pairwise") restriction = Restriction::pairwise;
  else if (opt.kind == "kwise") restriction = Restriction::kwise;
  else if (opt.kind != "none") throw std::invalid_argument("unknown kind '" + opt.kind + "'");

  const MultiVarFunction F =
      make_tau_series_function(t_list, restriction, opt.k, opt.N);
  const cdouble value = truncated_series(F, s, opt.N, opt.budget);

  json s_params = json::array();
  for (const cdouble& si : s) s_params.push_back(complex_json(si));
  if (opt.format == "json") {
    json doc{{"N", opt.N},
             {"kind", opt.kind},
             {"name", "series"},
             {"s", s_params},
             {"t", t_list},
             {"value", complex_json(value)}};
    out << doc.dump() << "\n";
  } else if (opt.format == "csv") {
    out << "N,kind,value_re,value_im\n";
    out << opt.N << "," << csv_field(opt.kind) << "," << format_float17(value.real())
        << "," << format_float17(value.imag()) << "\n";
  } else {
    out << "truncated series (N=" << opt.N << ", kind=" << opt.kind
        << "): " << complex_text(value) << "\n";
  }
  return kExitSuccess;
}

inline int cmd_table(const Options& opt, std::ostream& out) {
  static const std::map<std::string, std::string> files{
      {"tau2", "golden/tau2_setwise.txt"},
      {"tau3-setwise", "golden/tau3_setwise.txt"},
      {"tau3-pairwise", "golden/tau3_pairwise.txt"},
      {"k2", "golden/k2_poly.txt"},
      {"k3", "golden/k3_poly.txt"},
      {"kbar3", "golden/kbar3_poly.txt"}};
  const auto it = files.find(opt.table_name);
  if (it == files.end())
    throw std::invalid_argument("unknown table '" + opt.table_name + "'");
  const auto entries = read_coeff_table_file(opt.data_dir + "/" + it->second);

  if (opt.format == "json") {
    json rows = json::array();
    for (const CoeffTableEntry& entry : entries)
      rows.push_back(json{{"a", entry.a}, {"c", entry.c}});
    json doc{{"name", opt.table_name}, {"rows", rows}};
    out << doc.dump() << "\n";
  } else if (opt.format == "csv") {
    out << "exponents,coefficient\n";
    for (const CoeffTableEntry& entry : entries) {
      std::string exps;
      for (std::size_t i = 0; i < entry.a.size(); ++i)
        exps += (i ? " " : "") + std::to_string(entry.a[i]);
      out << csv_field(exps) << "," << entry.c << "\n";
    }
  } else {
    for (const CoeffTableEntry& entry : entries) {
      for (int ai : entry.a) out << ai << " ";
      out << entry.c << "\n";
    }
  }
  return kExitSuccess;
}

}  // namespace cli_detail

// Parses and runs one CLI invocation; argv-style arguments without the
// program name. All output lands on the given streams.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  Options opt;
  if (const char* env_budget = std::getenv("MDS_WORK_BUDGET")) {
    try {
      opt.budget = std::stoull(env_budget);
    } catch (const std::exception&) {
      err << "invalid MDS_WORK_BUDGET value\n";
      return kExitUsage;
    }
  }
  if (const char* env_data = std::getenv("MDS_DATA_DIR")) opt.data_dir = env_data;

  CLI::App app{"multiple Dirichlet series restricted to coprime tuples"};
  app.require_subcommand(1);
  int r_flag = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--threads", opt.threads, "worker threads for products")
        ->check(CLI::PositiveNumber);
    sub->add_option("--budget", opt.budget, "work budget in evaluations");
    sub->add_option("--data-dir", opt.data_dir, "directory with golden tables");
  };

  CLI::App* constant = app.add_subcommand("constant", "certified product constants");
  constant->add_option("name", opt.constant_name, "constant to compute")
      ->required()
      ->check(CLI::IsMember({"K", "Kbar", "delta", "deltabar"}));
  constant->add_option("--r", r_flag, "number of variables");
  constant->add_option("--t", opt.t_arg, "tau orders (scalar or list)");
  constant->add_option("--s", opt.s_arg, "evaluation point s_1,...,s_r");
  constant->add_option("--cutoff", opt.cutoff, "prime cutoff");
  add_common(constant);

  CLI::App* verify = app.add_subcommand("verify", "identity verification suites");
  verify->add_option("suite", opt.suite, "suite to run")
      ->required()
      ->check(CLI::IsMember({"lemma", "local-factors", "convolution", "kwise", "series"}));
  verify->add_option("--seed", opt.seed, "seed for randomized suites");
  verify->add_option("--cases", opt.cases, "number of random cases");
  verify->add_option("--case", opt.case_name, "local-factors case");
  verify->add_option("--kind", opt.kind, "restriction kind");
  verify->add_option("--r", r_flag, "number of variables");
  verify->add_option("--t", opt.t_arg, "tau orders");
  verify->add_option("--s", opt.s_arg, "evaluation point");
  verify->add_option("--N", opt.N, "truncation bound");
  verify->add_option("--cutoff", opt.cutoff, "prime cutoff");
  add_common(verify);

  CLI::App* sum = app.add_subcommand("sum", "restricted tau partial sums");
  sum->add_option("--kind", opt.kind, "setwise or pairwise")->required();
  sum->add_option("--t", opt.t_arg, "tau orders")->required();
  sum->add_option("--x", opt.x, "threshold")->check(CLI::PositiveNumber);
  sum->add_option("--x-grid", opt.x_grid_arg, "increasing list of thresholds");
  sum->add_option("--cutoff", opt.cutoff, "prime cutoff for the leading constant");
  sum->add_option("--r", r_flag, "number of variables");
  add_common(sum);

  CLI::App* series = app.add_subcommand("series", "truncated multiple Dirichlet sums");
  series->add_option("--t", opt.t_arg, "tau orders")->required();
  series->add_option("--s", opt.s_arg, "evaluation point")->required();
  series->add_option("--N", opt.N, "truncation bound")->required();
  series->add_option("--kind", opt.kind, "none, setwise, pairwise or kwise");
  series->add_option("--k", opt.k, "subset size for kwise");
  series->add_option("--r", r_flag, "number of variables");
  add_common(series);

  CLI::App* table = app.add_subcommand("table", "print an embedded golden table");
  table->add_option("--name", opt.table_name, "table name")->required();
  add_common(table);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
    if (r_flag != 0) opt.r = r_flag;
    if (app.got_subcommand(constant)) return cmd_constant(opt, out);
    if (app.got_subcommand(verify)) {
      if (verify->count("--kind") == 0) opt.kind = "both";
      if (opt.suite == "series" && verify->count("--N") == 0) opt.N = 3000;
      return cmd_verify(opt, out);
    }
    if (app.got_subcommand(sum)) {
      if (sum->count("--cutoff") == 0) opt.cutoff = 100000;
      return cmd_sum(opt, out);
    }
    if (app.got_subcommand(series)) {
      if (series->count("--kind") == 0) opt.kind = "none";
      return cmd_series(opt, out);
    }
    if (app.got_subcommand(table)) return cmd_table(opt, out);
    err << "no subcommand selected\n";
    return kExitUsage;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const resource_error& e) {
    err << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const certification_error& e) {
    err << "certification error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace mds
