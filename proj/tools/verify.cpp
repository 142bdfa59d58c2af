#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "higherspin/higherspin.h"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct ConfigDeleter {
  void operator()(hs_config* c) const { hs_config_free(c); }
};
struct ReportDeleter {
  void operator()(hs_report* r) const { hs_report_free(r); }
};
struct SuiteDeleter {
  void operator()(hs_suite* s) const { hs_suite_free(s); }
};
using ConfigPtr = std::unique_ptr<hs_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<hs_report, ReportDeleter>;
using SuitePtr = std::unique_ptr<hs_suite, SuiteDeleter>;

struct LibraryError {
  hs_status status;
  std::string message;
};

void check(hs_status s) {
  if (s != HS_OK) throw LibraryError{s, hs_last_error()};
}

struct Overrides {
  std::optional<int> m, k, j, degree, samples;
  std::optional<double> radius, tol;
  std::optional<long long> seed;
  std::optional<std::string> center, orders, family, lambda_table;

  void apply(hs_config* c) const {
    if (m) check(hs_config_set_int(c, "m", *m));
    if (k) check(hs_config_set_int(c, "k", *k));
    if (j) check(hs_config_set_int(c, "j", *j));
    if (degree) check(hs_config_set_int(c, "degree", *degree));
    if (samples) check(hs_config_set_int(c, "samples", *samples));
    if (seed) check(hs_config_set_int(c, "seed", *seed));
    if (radius) check(hs_config_set_double(c, "radius", *radius));
    if (tol) check(hs_config_set_double(c, "tol", *tol));
    if (center) check(hs_config_set_string(c, "center", center->c_str()));
    if (orders) check(hs_config_set_string(c, "quad_orders", orders->c_str()));
    if (family) check(hs_config_set_string(c, "family", family->c_str()));
    if (lambda_table) check(hs_config_set_string(c, "lambda_table", lambda_table->c_str()));
  }
};

void add_overrides(CLI::App& app, Overrides& o) {
  app.add_option("--m", o.m, "Dimension m of R^m");
  app.add_option("--k", o.k, "Homogeneity k in u");
  app.add_option("--j", o.j, "Order index j of D_{2j-1}");
  app.add_option("--radius", o.radius, "Radius of the ball domain centred at the origin");
  app.add_option("--center", o.center, "Evaluation point y as comma-separated floats");
  app.add_option("--quad-orders", o.orders, "Quadrature ladder as comma-separated ints");
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--tol", o.tol, "Pass tolerance at the top ladder order");
  app.add_option("--family", o.family, "Test family: random, constant, rk_null, low_degree");
  app.add_option("--degree", o.degree, "x-degree of the test functions");
  app.add_option("--samples", o.samples, "Batch size for the algebraic scenarios");
  app.add_option("--lambda-table", o.lambda_table, "Saved lambda table (JSON)");
}

struct RunResult {
  std::string json;
  std::string text;
  bool pass = false;
};

RunResult run_config(hs_config* cfg) {
  hs_report* raw = nullptr;
  check(hs_run(cfg, &raw));
  ReportPtr report(raw);
  return {hs_report_json(report.get()), hs_report_text(report.get()),
          hs_report_passed(report.get()) != 0};
}

void emit(const std::vector<RunResult>& runs, const std::string& format,
          const std::string& report_path, bool as_array) {
  std::string body;
  if (format == "json") {
    if (as_array) {
      auto doc = nlohmann::json::array();
      for (const auto& r : runs) doc.push_back(nlohmann::json::parse(r.json));
      body = doc.dump(2);
    } else {
      body = runs.front().json;
    }
    body += "\n";
  } else {
    for (const auto& r : runs) body += r.text;
  }
  std::cout << body;
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) throw LibraryError{HS_IO, "cannot write " + report_path};
    out << body;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of higher order Clifford-analysis integral identities"};
  app.set_version_flag("--version", std::string(hs_version()));
  app.require_subcommand(0, 1);

  std::string scenario;
  std::string format = "json";
  std::string report_path;
  Overrides single;
  app.add_option("--scenario", scenario, "Scenario to run");
  add_overrides(app, single);
  app.add_option("--report", report_path, "Also write the report to this path");
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));

  auto* all = app.add_subcommand("all", "Run every section of a suite config");
  std::string config_path;
  Overrides suite_overrides;
  all->add_option("--config", config_path, "INI suite, one section per scenario run")
      ->required()
      ->check(CLI::ExistingFile);
  add_overrides(*all, suite_overrides);
  all->add_option("--report", report_path, "Also write the reports to this path");
  all->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  auto* calibrate = app.add_subcommand("calibrate", "Calibrate lambda constants into a table");
  int cal_m = 3, cal_k = 1, cal_j = 1;
  std::string table_path;
  calibrate->add_option("--m", cal_m, "Dimension m")->required();
  calibrate->add_option("--k", cal_k, "Homogeneity k")->required();
  calibrate->add_option("--j", cal_j, "Highest order index j")->required();
  calibrate->add_option("--out", table_path, "Lambda table path (merged if present)")
      ->required();

  auto* list = app.add_subcommand("list", "List scenario names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (int i = 0; i < hs_scenario_count(); ++i) std::cout << hs_scenario_name(i) << "\n";
      return 0;
    }
    if (*calibrate) {
      double lambda = 0.0;
      check(hs_calibrate(cal_m, cal_k, cal_j, table_path.c_str(), &lambda));
      std::printf("lambda_%d = %.17g (m=%d, k=%d) -> %s\n", 2 * cal_j - 1, lambda, cal_m, cal_k,
                  table_path.c_str());
      return 0;
    }
    std::vector<RunResult> runs;
    if (*all) {
      hs_suite* raw = nullptr;
      check(hs_suite_load(config_path.c_str(), &raw));
      SuitePtr suite(raw);
      for (size_t i = 0; i < hs_suite_size(suite.get()); ++i) {
        hs_config* c = nullptr;
        check(hs_suite_config(suite.get(), i, &c));
        ConfigPtr cfg(c);
        suite_overrides.apply(cfg.get());
        runs.push_back(run_config(cfg.get()));
      }
    } else {
      if (scenario.empty()) {
        std::cerr << "error: --scenario is required (or use the 'all' subcommand)\n"
                  << app.help();
        return kExitError;
      }
      hs_config* c = nullptr;
      check(hs_config_new(scenario.c_str(), &c));
      ConfigPtr cfg(c);
      single.apply(cfg.get());
      runs.push_back(run_config(cfg.get()));
    }
    emit(runs, format, report_path, static_cast<bool>(*all));
    bool pass = true;
    for (const auto& r : runs) pass = pass && r.pass;
    return pass ? 0 : kExitFail;
  } catch (const LibraryError& e) {
    std::cerr << "error [" << hs_status_name(e.status) << "]: " << e.message << "\n";
    return kExitError;
  }
}
