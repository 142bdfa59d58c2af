#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "higherspin/kernel.hpp"

namespace higherspin {

/// Test-function families for the integral scenarios.
enum class TestFamily {
  Random,     // random M_k-valued polynomial of the configured x-degree
  Constant,   // x-constant M_k-valued function
  RkNull,     // null solution of R_k, homogeneous of the configured degree
  LowDegree,  // random polynomial of degree <= 2j-2, so D_{2j-1} f = 0 but R_k f != 0
};

const char* family_name(TestFamily f) noexcept;
TestFamily parse_family(const std::string& s);

struct ScenarioConfig {
  std::string scenario = "stokes_rk";
  int m = 3;
  int k = 1;
  int j = 1;
  double radius = 1.0;
  std::vector<double> center;  // evaluation point y; empty means the scenario default
  std::vector<int> orders{16, 32, 64};
  unsigned long long seed = 1;
  TestFamily family = TestFamily::Random;
  int degree = -1;         // x-degree of test functions; -1 picks the scenario default
  double tolerance = -1;   // -1 picks the scenario default
  int samples = -1;        // batch size for the algebraic scenarios; -1 picks the default
  std::string lambda_table;  // optional path of a saved LambdaTable

  /// Fills defaults and checks the invariants; throws on violation.
  void finalize();
};

struct ResidualEntry {
  int order = 0;
  double absolute = 0.0;
  double relative = 0.0;
};

struct LambdaUsed {
  int m = 0, k = 0, j = 0;
  double value = 0.0;
  double residual = 0.0;
};

struct VerificationReport {
  ScenarioConfig config;
  std::vector<ResidualEntry> residuals;  // convergence ladder, ascending order
  std::vector<LambdaUsed> lambda_used;
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<std::string> notes;
  bool ladder_monotone = true;
  bool pass = false;
  double wall_ms = 0.0;

  std::string to_json() const;
  std::string to_text() const;
};

/// Floor below which ladder increases are treated as rounding noise.
inline constexpr double kLadderFloor = 1e-12;

std::vector<std::string> scenario_names();
double default_tolerance(const std::string& scenario);

VerificationReport run_scenario(ScenarioConfig cfg);

VerificationReport run_stokes_rk(const ScenarioConfig& cfg);
VerificationReport run_stokes_tk(const ScenarioConfig& cfg);
VerificationReport run_stokes_qk(const ScenarioConfig& cfg);
VerificationReport run_borel_pompeiu(const ScenarioConfig& cfg);
VerificationReport run_small_ball(const ScenarioConfig& cfg);
VerificationReport run_cauchy(const ScenarioConfig& cfg);
VerificationReport run_ladder(const ScenarioConfig& cfg);
VerificationReport run_commutation(const ScenarioConfig& cfg);
VerificationReport run_reproducing(const ScenarioConfig& cfg);
VerificationReport run_fischer(const ScenarioConfig& cfg);
VerificationReport run_lambda(const ScenarioConfig& cfg);

/// Sets one config field from its textual form, using the suite key names
/// (scenario, m, k, j, radius, seed, degree, tol, samples, center, quad_orders,
/// family, lambda_table).
void set_config_value(ScenarioConfig& c, const std::string& key, const std::string& value);

/// INI-style suite: one section per scenario run. The section name is the
/// scenario unless a `scenario` key overrides it.
std::vector<ScenarioConfig> load_suite(const std::string& path);
std::vector<ScenarioConfig> parse_suite(const std::string& text);

std::vector<double> parse_csv_doubles(const std::string& s);
std::vector<int> parse_csv_ints(const std::string& s);

}  // namespace higherspin
