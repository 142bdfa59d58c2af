#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "higherspin/multivector.hpp"
#include "higherspin/operators.hpp"
#include "higherspin/scenarios.hpp"

using namespace higherspin;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // <= 0 means no stated limit
  std::function<Outcome()> run;
};

nlohmann::json all_reports = nlohmann::json::array();

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

ScenarioConfig config(const std::string& scenario, int m, int k, int j) {
  ScenarioConfig c;
  c.scenario = scenario;
  c.m = m;
  c.k = k;
  c.j = j;
  return c;
}

/// Runs every config; the criterion passes when every report passes, ladder checks included.
Outcome run_all(const std::vector<ScenarioConfig>& configs, const std::string& what) {
  Outcome out;
  double worst = 0.0;
  for (const auto& c : configs) {
    const VerificationReport r = run_scenario(c);
    all_reports.push_back(nlohmann::json::parse(r.to_json()));
    worst = std::max(worst, r.residuals.back().relative);
    if (!r.pass) {
      out.pass = false;
      out.detail += " [failed: m=" + std::to_string(c.m) + " k=" + std::to_string(c.k) +
                    " j=" + std::to_string(c.j) + "]";
    }
  }
  out.detail = std::to_string(configs.size()) + " runs, worst " + what + " " + fmt(worst) +
               out.detail;
  return out;
}

Multivector unit_random(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Multivector a(m);
  for (std::uint32_t i = 0; i < a.size(); ++i) a[i] = unif(rng);
  return a * (1.0 / a.norm());
}

Outcome algebra_laws() {
  std::mt19937_64 rng(1);
  double worst = 0.0;
  const int per_dim = 2500;
  for (int m = 3; m <= 6; ++m) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Multivector ei = Multivector::basis_vector(m, i), ej = Multivector::basis_vector(m, j);
        worst = std::max(worst, (ei * ej + ej * ei - Multivector::scalar(m, i == j ? -2.0 : 0.0))
                                    .max_abs());
      }
    for (int n = 0; n < per_dim; ++n) {
      const Multivector a = unit_random(m, rng), b = unit_random(m, rng), c = unit_random(m, rng);
      worst = std::max(worst, ((a * b) * c - a * (b * c)).max_abs());
      worst = std::max(worst, ((a * b).reversion() - b.reversion() * a.reversion()).max_abs());
      worst = std::max(worst, ((a * b).conjugation() - b.conjugation() * a.conjugation()).max_abs());
    }
  }
  return {worst <= 1e-12, "10^4 random unit triples over m = 3..6 plus generator relations, max error " +
                              fmt(worst) + " (tol 1e-12)"};
}

Outcome fischer() {
  std::vector<ScenarioConfig> cs;
  for (int m : {3, 4})
    for (int k = 1; k <= 3; ++k) cs.push_back(config("fischer", m, k, 1));
  return run_all(cs, "projection residual (tol 1e-10, dims checked)");
}

Outcome reproducing() {
  std::vector<ScenarioConfig> cs;
  for (int m : {3, 4})
    for (int k = 0; k <= 2; ++k) {
      auto c = config("reproducing", m, k, 1);
      c.samples = 50;
      c.tolerance = 1e-8;
      cs.push_back(c);
    }
  return run_all(cs, "relative residual (tol 1e-8)");
}

Outcome stokes() {
  std::vector<ScenarioConfig> cs;
  for (const char* s : {"stokes_rk", "stokes_tk", "stokes_qk"})
    for (auto [m, k] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{4, 1}, std::pair{4, 2}}) {
      auto c = config(s, m, k, 1);
      c.radius = 1.0;
      c.degree = 2;
      c.orders = {16, 32, 64};
      c.tolerance = 1e-4;
      cs.push_back(c);
    }
  return run_all(cs, "top-order relative residual (tol 1e-4)");
}

Outcome commutation() {
  std::vector<ScenarioConfig> cs;
  for (int m : {3, 4})
    for (int k = 1; k <= 3; ++k) {
      int j = 3;
      while (j > 2 && !FermionicOperatorSpec::valid(m, k, j)) --j;
      auto c = config("commutation", m, k, j);
      c.samples = 50;
      c.tolerance = 1e-10;
      cs.push_back(c);
    }
  return run_all(cs, "relative residual (tol 1e-10)");
}

Outcome ladder() {
  std::vector<ScenarioConfig> cs;
  for (auto [k, j] : {std::pair{1, 2}, std::pair{2, 2}, std::pair{2, 3}}) {
    auto c = config("ladder", 3, k, j);
    c.tolerance = 1e-8;
    cs.push_back(c);
  }
  return run_all(cs, "pointwise relative residual at 20 points (tol 1e-8)");
}

Outcome lambda_spread() {
  std::vector<ScenarioConfig> cs;
  for (auto [m, k, j] : {std::tuple{3, 1, 1}, std::tuple{3, 1, 2}, std::tuple{3, 2, 2},
                         std::tuple{3, 2, 3}, std::tuple{4, 1, 1}}) {
    auto c = config("lambda", m, k, j);
    c.samples = 10;
    c.tolerance = 1e-4;
    cs.push_back(c);
  }
  return run_all(cs, "relative spread over 10 configurations (tol 1e-4, lambda != 0)");
}

Outcome cauchy() {
  std::vector<ScenarioConfig> cs;
  for (auto [m, k, j] : {std::tuple{3, 1, 1}, std::tuple{3, 1, 2}, std::tuple{3, 2, 1},
                         std::tuple{3, 2, 2}, std::tuple{3, 2, 3}, std::tuple{4, 1, 1},
                         std::tuple{4, 2, 1}}) {
    auto c = config("cauchy", m, k, j);
    c.family = TestFamily::RkNull;
    c.tolerance = 1e-3;
    cs.push_back(c);
  }
  // Higher boundary terms vanish for rk-null f; low-degree f exercises them.
  for (auto [k, j] : {std::pair{1, 2}, std::pair{2, 3}}) {
    auto c = config("cauchy", 3, k, j);
    c.family = TestFamily::LowDegree;
    c.tolerance = 1e-3;
    cs.push_back(c);
  }
  return run_all(cs, "top-order relative error (tol 1e-3)");
}

Outcome borel_pompeiu() {
  std::vector<ScenarioConfig> cs;
  for (auto [k, j] : {std::pair{1, 2}, std::pair{2, 2}, std::pair{2, 3}}) {
    auto c = config("borel_pompeiu", 3, k, j);
    c.tolerance = 1e-3;
    cs.push_back(c);
  }
  return run_all(cs, "top-order relative residual (tol 1e-3)");
}

Outcome small_ball() {
  Outcome out;
  std::string slopes;
  for (auto [k, j] : {std::pair{1, 2}, std::pair{2, 2}}) {
    auto c = config("small_ball", 3, k, j);
    c.tolerance = 1.0;
    const VerificationReport r = run_scenario(c);
    all_reports.push_back(nlohmann::json::parse(r.to_json()));
    out.pass = out.pass && r.pass;
    for (const auto& [name, value] : r.diagnostics)
      if (name == "loglog_slope") slopes += (slopes.empty() ? "" : ", ") + fmt(value);
  }
  out.detail = "r in {0.1, 0.05, 0.025}, log-log slopes " + slopes + " (min 1)";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "algebra laws", 10.0, algebra_laws},
      {2, "Almansi-Fischer", 60.0, fischer},
      {3, "reproducing kernel", 60.0, reproducing},
      {4, "Stokes theorems", 300.0, stokes},
      {5, "commutation", 0.0, commutation},
      {6, "ladder identity", 0.0, ladder},
      {7, "lambda consistency", 0.0, lambda_spread},
      {8, "higher order Cauchy", 600.0, cauchy},
      {9, "higher order Borel-Pompeiu", 900.0, borel_pompeiu},
      {10, "small-ball vanishing", 0.0, small_ball},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::string timing = ", " + fmt(secs) + " s";
    if (c.time_limit_s > 0.0) {
      timing += " (limit " + std::to_string(static_cast<int>(c.time_limit_s)) + " s)";
      if (secs >= c.time_limit_s) o.pass = false;
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %-28s %s  %s%s\n", c.id, c.name.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  const std::string path = argc > 1 ? argv[1] : "acceptance_reports.json";
  std::ofstream(path) << all_reports.dump(2) << "\n";
  std::printf("%d of %zu criteria passed; reports in %s\n",
              static_cast<int>(criteria.size()) - failures, criteria.size(), path.c_str());
  return failures == 0 ? 0 : 1;
}
