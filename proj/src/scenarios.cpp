#include "higherspin/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <type_traits>

#include <boost/algorithm/string/trim.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "higherspin/calibration.hpp"
#include "higherspin/field_eval.hpp"
#include "higherspin/quadrature.hpp"

namespace higherspin {
namespace {

using Clock = std::chrono::steady_clock;
using Block = std::vector<double>;

// ------------------------------------------------------------------ helpers

double max_abs(const Block& b) {
  double r = 0.0;
  for (double v : b) r = std::max(r, std::abs(v));
  return r;
}

Block difference(const Block& a, const Block& b) {
  Block d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

void axpy(double s, const Block& x, Block& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

double relative(double abs, double scale) { return scale > 1e-300 ? abs / scale : abs; }

/// Real combination of `basis` with x-monomial coefficients of degree min_deg..max_deg.
CliffordPoly random_x_poly(int m, const std::vector<CliffordPoly>& basis, int min_deg,
                           int max_deg, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CliffordPoly out(m);
  for (int d = min_deg; d <= max_deg; ++d)
    for (const auto& e : homogeneous_exponents(m, d)) {
      Monomial mono;
      for (int i = 0; i < m; ++i) mono.set(Group::X, i, e[i]);
      CliffordPoly comb(m);
      for (const auto& phi : basis) comb.add_scaled(phi, normal(rng));
      out += CliffordPoly::monomial(mono, Multivector::scalar(m, 1.0)) * comb;
    }
  return out;
}

CliffordPoly times_u(const CliffordPoly& h) {
  return CliffordPoly::vector_variable(h.dim(), Group::U) * h;
}

/// f(y, v) as a dense v block.
Block value_at(const CliffordPoly& f, std::span<const double> y, int k) {
  Assignment a;
  a.set(Group::X, std::vector<double>(y.begin(), y.end()));
  return v_block(rename_group(evaluate(f, a), Group::U, Group::V), k);
}

std::vector<double> default_point(int m, double radius) {
  static const double base[kMaxDim] = {0.1, -0.2, 0.15, 0.05, -0.1, 0.12, -0.08, 0.06};
  std::vector<double> y(m);
  for (int i = 0; i < m; ++i) y[i] = base[i] * radius;
  return y;
}

bool is_quadrature_scenario(const std::string& s) {
  return s == "stokes_rk" || s == "stokes_tk" || s == "stokes_qk" || s == "borel_pompeiu" ||
         s == "small_ball" || s == "cauchy" || s == "lambda";
}

bool uses_kernels(const std::string& s) {
  return s == "borel_pompeiu" || s == "small_ball" || s == "cauchy" || s == "ladder" ||
         s == "lambda";
}

// ------------------------------------------------------------ lambda table

const LambdaTable& lambda_table_for(const ScenarioConfig& cfg) {
  static std::mutex mutex;
  static LambdaTable calibrated;
  static std::map<std::string, LambdaTable> loaded;
  std::lock_guard<std::mutex> lock(mutex);
  if (!cfg.lambda_table.empty()) {
    auto it = loaded.find(cfg.lambda_table);
    if (it == loaded.end())
      it = loaded.emplace(cfg.lambda_table, LambdaTable::load(cfg.lambda_table)).first;
    for (int t = 1; t <= cfg.j; ++t)
      require(it->second.contains(cfg.m, cfg.k, t), ErrorCode::NotCalibrated,
              "lambda table " + cfg.lambda_table + " has no entry for (m=" +
                  std::to_string(cfg.m) + ", k=" + std::to_string(cfg.k) + ", j=" +
                  std::to_string(t) + "); run `verify calibrate` for these parameters first");
    return it->second;
  }
  calibrate_lambda(cfg.m, cfg.k, cfg.j, calibrated);
  return calibrated;
}

void record_lambdas(VerificationReport& rep, const LambdaTable& table) {
  const auto& c = rep.config;
  for (int t = 1; t <= c.j; ++t) {
    const auto& e = table.at(c.m, c.k, t);
    rep.lambda_used.push_back({c.m, c.k, t, e.value, e.residual});
  }
}

// ------------------------------------------------------- report finishing

void finish(VerificationReport& rep, Clock::time_point start, bool extra_ok = true) {
  const double tol = rep.config.tolerance;
  rep.ladder_monotone = true;
  for (std::size_t i = 1; i < rep.residuals.size(); ++i)
    if (rep.residuals[i].relative > std::max(rep.residuals[i - 1].relative, kLadderFloor))
      rep.ladder_monotone = false;
  const bool top_ok = !rep.residuals.empty() && rep.residuals.back().relative <= tol;
  rep.pass = top_ok && rep.ladder_monotone && extra_ok;
  rep.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// --------------------------------------------------------- stokes family

struct StokesPair {
  CliffordPoly f, g;                // f acted on from the left, g from the right
  CliffordPoly g_op, op_f;          // g * Op_right, Op_left f
};

VerificationReport run_stokes(const ScenarioConfig& cfg, const std::string& which) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.config = cfg;
  const int m = cfg.m, k = cfg.k;
  require(which == "rk" || k >= 1, ErrorCode::InvalidArgument,
          "stokes_" + which + " needs k >= 1 (u M_{k-1} is empty for k = 0)");
  const auto& mk = spin_context(m, k).monogenic.elements;
  std::mt19937_64 rng(cfg.seed);

  std::vector<StokesPair> pairs;
  for (int s = 0; s < cfg.samples; ++s) {
    StokesPair p;
    if (which == "rk") {
      p.f = random_x_poly(m, mk, 0, cfg.degree, rng);
      p.g = conjugation(random_x_poly(m, mk, 0, cfg.degree, rng));
      p.g_op = apply_right_Rk(p.g, k);
      p.op_f = apply_Rk(p.f, k);
    } else {
      const auto& mk1 = spin_context(m, k - 1).monogenic.elements;
      if (which == "tk") {
        p.f = random_x_poly(m, mk, 0, cfg.degree, rng);
        p.g = conjugation(times_u(random_x_poly(m, mk1, 0, cfg.degree, rng)));
        p.g_op = apply_right_Tk(p.g, k);
        p.op_f = apply_Tk_star(p.f, k);
      } else {
        p.f = times_u(random_x_poly(m, mk1, 0, cfg.degree, rng));
        p.g = conjugation(times_u(random_x_poly(m, mk1, 0, cfg.degree, rng)));
        p.g_op = apply_right_Qk(p.g, k);
        p.op_f = apply_Qk(p.f, k);
      }
    }
    pairs.push_back(std::move(p));
  }

  const std::vector<double> origin(m, 0.0);
  const UPairing pairing(m, k);
  double top_lhs = 0.0, top_rhs = 0.0;
  for (int q : cfg.orders) {
    const BallRule ball = build_ball_rule(m, q, origin, cfg.radius);
    const SphereRule sphere = build_sphere_rule(m, q, origin, cfg.radius);
    double abs_err = 0.0, rel_err = 0.0;
    for (const auto& p : pairs) {
      Block vol = volume_pairing(ball, CompiledField(p.g_op, k), CompiledField(p.f, k), pairing);
      axpy(1.0, volume_pairing(ball, CompiledField(p.g, k), CompiledField(p.op_f, k), pairing),
           vol);
      const Block bdy =
          boundary_pairing(sphere, CompiledField(p.g, k), CompiledField(p.f, k), pairing);
      const double a = max_abs(difference(vol, bdy));
      abs_err = std::max(abs_err, a);
      rel_err = std::max(rel_err, relative(a, std::max(max_abs(vol), max_abs(bdy))));
      top_lhs = max_abs(vol);
      top_rhs = max_abs(bdy);
    }
    rep.residuals.push_back({q, abs_err, rel_err});
  }
  rep.diagnostics.emplace_back("volume_side_magnitude", top_lhs);
  rep.diagnostics.emplace_back("boundary_side_magnitude", top_rhs);
  rep.diagnostics.emplace_back("pairs", static_cast<double>(pairs.size()));
  finish(rep, start);
  return rep;
}

// ------------------------------------------------- higher order formulas

struct BoundaryTerm {
  std::string name;
  CompiledField left;
  CompiledField right;
  double sign;
};

/// Boundary terms of the higher order Borel-Pompeiu formula for f, kernels at y.
/// Index convention: the factor joining D_{2t-3} to D_{2t-1} carries a_{t-1}.
std::vector<BoundaryTerm> boundary_terms(const ScenarioConfig& cfg, const CliffordPoly& f,
                                         const std::vector<RationalKernel>& kernels) {
  const int k = cfg.k;
  std::vector<BoundaryTerm> terms;
  terms.push_back({"first_order", CompiledField(kernels[0], k), CompiledField(f, k), 1.0});
  if (cfg.j < 2) return terms;
  const auto spec = FermionicOperatorSpec::make(cfg.m, k, cfg.j);
  CliffordPoly ft = apply_Rk(f, k);  // D_{2t-3} f for t = 2
  for (int t = 2; t <= cfg.j; ++t) {
    const double a = spec.a_value(t - 1);
    const double b = spec.b_value(t - 1);
    const RationalKernel& kt = kernels[t - 1];
    CliffordPoly gt = apply_Tk_star(ft, k) * a;
    gt.add_scaled(apply_Rk(ft, k), b);
    const std::string id = "t" + std::to_string(t);
    terms.push_back({id + "_kernel", CompiledField(kt, k), CompiledField(gt, k), 1.0});
    terms.push_back({id + "_kernel_Tstar", CompiledField(apply_right_Tk_star(kt, k, false), k),
                     CompiledField(ft, k), -a});
    terms.push_back({id + "_kernel_R", CompiledField(apply_right_Rk(kt, k, false), k),
                     CompiledField(ft, k), -b});
    if (t < cfg.j) ft = apply_ladder_factor(spec, t - 1, ft);
  }
  return terms;
}

CliffordPoly draw_test_function(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  const auto& mk = spin_context(cfg.m, cfg.k).monogenic.elements;
  switch (cfg.family) {
    case TestFamily::Random:
    case TestFamily::LowDegree:
      return random_x_poly(cfg.m, mk, 0, cfg.degree, rng);
    case TestFamily::Constant:
      return random_x_poly(cfg.m, mk, 0, 0, rng);
    case TestFamily::RkNull: {
      const auto basis = build_rk_null_basis(spin_context(cfg.m, cfg.k).monogenic, cfg.degree);
      require(!basis.elements.empty(), ErrorCode::Singular,
              "no null solutions of R_k of the requested degree");
      std::normal_distribution<double> normal;
      CliffordPoly f(cfg.m);
      for (const auto& e : basis.elements) f.add_scaled(e, normal(rng));
      return f;
    }
  }
  return CliffordPoly(cfg.m);
}

CliffordPoly make_test_function(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  CliffordPoly f = draw_test_function(cfg, rng);
  require(!f.is_zero(), ErrorCode::Singular, "test function vanished identically");
  return f;
}

struct FormulaRun {
  std::vector<Block> term_blocks;  // signed, at the current order
  Block sum;
};

FormulaRun evaluate_terms(const std::vector<BoundaryTerm>& terms, const SphereRule& rule,
                          const UPairing& pairing) {
  FormulaRun run;
  for (const auto& t : terms) {
    Block b = boundary_pairing(rule, t.left, t.right, pairing);
    for (double& v : b) v *= t.sign;
    if (run.sum.empty()) run.sum.assign(b.size(), 0.0);
    axpy(1.0, b, run.sum);
    run.term_blocks.push_back(std::move(b));
  }
  return run;
}

void check_kernel_params(const ScenarioConfig& cfg) {
  const std::string problem = kernel_family_problem(cfg.m, cfg.k, cfg.j);
  require(problem.empty(), ErrorCode::InvalidArgument, problem);
}

}  // namespace

// ------------------------------------------------------------- public API

const char* family_name(TestFamily f) noexcept {
  switch (f) {
    case TestFamily::Random: return "random";
    case TestFamily::Constant: return "constant";
    case TestFamily::RkNull: return "rk-null";
    case TestFamily::LowDegree: return "low-degree";
  }
  return "?";
}

TestFamily parse_family(const std::string& s) {
  if (s == "random") return TestFamily::Random;
  if (s == "constant") return TestFamily::Constant;
  if (s == "rk-null" || s == "rk_null") return TestFamily::RkNull;
  if (s == "low-degree" || s == "low_degree") return TestFamily::LowDegree;
  throw Error(ErrorCode::InvalidArgument,
              "unknown test family '" + s + "' (random, constant, rk-null, low-degree)");
}

std::vector<std::string> scenario_names() {
  return {"stokes_rk", "stokes_tk", "stokes_qk",   "borel_pompeiu", "small_ball", "cauchy",
          "ladder",    "commutation", "reproducing", "fischer",       "lambda"};
}

double default_tolerance(const std::string& s) {
  if (s == "stokes_rk" || s == "stokes_tk" || s == "stokes_qk" || s == "lambda") return 1e-4;
  if (s == "borel_pompeiu" || s == "cauchy") return 1e-3;
  if (s == "ladder" || s == "reproducing") return 1e-8;
  if (s == "commutation" || s == "fischer") return 1e-10;
  if (s == "small_ball") return 1.0;  // minimum log-log slope
  throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + s + "'");
}

void ScenarioConfig::finalize() {
  const auto names = scenario_names();
  require(std::find(names.begin(), names.end(), scenario) != names.end(),
          ErrorCode::InvalidArgument, "unknown scenario '" + scenario + "'");
  require(m >= 3 && m <= kMaxDim, ErrorCode::InvalidArgument, "m must lie in [3, 8]");
  require(k >= 0, ErrorCode::InvalidArgument, "k must be non-negative");
  require(j >= 1, ErrorCode::InvalidArgument, "j must be >= 1");
  require(radius > 0.0 && std::isfinite(radius), ErrorCode::InvalidArgument,
          "radius must be positive");
  if (is_quadrature_scenario(scenario))
    require(m <= 5, ErrorCode::InvalidArgument, "quadrature scenarios support m in {3, 4, 5}");
  if (center.empty()) center = default_point(m, radius);
  require(static_cast<int>(center.size()) == m, ErrorCode::DimensionMismatch,
          "center must have m = " + std::to_string(m) + " components");
  double n2 = 0.0;
  for (double c : center) n2 += c * c;
  require(std::sqrt(n2) <= 0.8 * radius + 1e-15, ErrorCode::InvalidArgument,
          "evaluation point must satisfy |y| <= 0.8 R");
  require(!orders.empty(), ErrorCode::InvalidArgument, "quadrature order ladder is empty");
  for (std::size_t i = 0; i < orders.size(); ++i) {
    require(orders[i] >= 4, ErrorCode::InvalidArgument, "quadrature orders must be >= 4");
    require(i == 0 || orders[i] > orders[i - 1], ErrorCode::InvalidArgument,
            "quadrature orders must increase");
  }
  if (tolerance < 0) tolerance = default_tolerance(scenario);
  if (scenario == "borel_pompeiu" || scenario == "small_ball" || scenario == "ladder")
    require(j >= 2, ErrorCode::InvalidArgument, scenario + " needs j >= 2");
  if (uses_kernels(scenario)) check_kernel_params(*this);
  if (scenario == "commutation") {
    require(FermionicOperatorSpec::valid(m, k, std::max(j, 2)), ErrorCode::InvalidArgument,
            "a_s undefined for these parameters");
  }
  if (degree < 0) {
    if (scenario.rfind("stokes", 0) == 0) degree = 2;
    else if (scenario == "commutation") degree = 4;
    else if (family == TestFamily::Constant) degree = 0;
    else if (family == TestFamily::RkNull) degree = 1;
    else if (family == TestFamily::LowDegree) degree = std::max(0, 2 * j - 2);
    else degree = 2 * j;
  }
  if (family == TestFamily::LowDegree)
    require(degree <= 2 * j - 2, ErrorCode::InvalidArgument,
            "low-degree family needs degree <= 2j-2");
  if (samples < 0) {
    if (scenario == "commutation" || scenario == "reproducing" || scenario == "fischer")
      samples = 50;
    else if (scenario == "lambda")
      samples = 10;
    else
      samples = 3;
  }
  require(samples >= 1, ErrorCode::InvalidArgument, "samples must be >= 1");
}

VerificationReport run_stokes_rk(const ScenarioConfig& cfg) { return run_stokes(cfg, "rk"); }
VerificationReport run_stokes_tk(const ScenarioConfig& cfg) { return run_stokes(cfg, "tk"); }
VerificationReport run_stokes_qk(const ScenarioConfig& cfg) { return run_stokes(cfg, "qk"); }

VerificationReport run_borel_pompeiu(const ScenarioConfig& cfg) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.config = cfg;
  const int m = cfg.m, k = cfg.k;
  const SpinContext& ctx = spin_context(m, k);
  const LambdaTable& table = lambda_table_for(cfg);
  record_lambdas(rep, table);
  const auto spec = FermionicOperatorSpec::make(m, k, cfg.j);

  std::mt19937_64 rng(cfg.seed);
  const CliffordPoly f = make_test_function(cfg, rng);
  const CliffordPoly df = apply_fermionic(spec, f);
  const auto kernels = pairing_kernels(ctx, cfg.j, cfg.center, table);
  const auto terms = boundary_terms(cfg, f, kernels);
  const CompiledField lhs_left(kernels.back(), k);
  const CompiledField lhs_right(df, k);
  const Block fy = value_at(f, cfg.center, k);
  const UPairing pairing(m, k);
  const std::vector<double> origin(m, 0.0);

  FormulaRun top;
  Block top_lhs;
  for (int q : cfg.orders) {
    const BallRule ball = build_ball_rule(m, q, origin, cfg.radius, cfg.center);
    const SphereRule sphere = build_sphere_rule(m, q, origin, cfg.radius);
    Block lhs = volume_pairing(ball, lhs_left, lhs_right, pairing);
    FormulaRun run = evaluate_terms(terms, sphere, pairing);
    Block rhs = run.sum;
    axpy(-1.0, fy, rhs);
    const double a = max_abs(difference(lhs, rhs));
    rep.residuals.push_back({q, a, relative(a, std::max(max_abs(lhs), max_abs(fy)))});
    top = std::move(run);
    top_lhs = std::move(lhs);
  }
  rep.diagnostics.emplace_back("lhs_volume_magnitude", max_abs(top_lhs));
  rep.diagnostics.emplace_back("f_at_y_magnitude", max_abs(fy));
  for (std::size_t i = 0; i < terms.size(); ++i)
    rep.diagnostics.emplace_back("term_" + terms[i].name, max_abs(top.term_blocks[i]));
  rep.diagnostics.emplace_back("test_function_x_degree", cfg.degree);
  rep.notes.push_back(std::string("test family: ") + family_name(cfg.family));
  rep.notes.push_back("boundary sums use a_{t-1} on the factor joining D_{2t-3} and D_{2t-1}");
  finish(rep, start);
  return rep;
}

VerificationReport run_small_ball(const ScenarioConfig& cfg) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.config = cfg;
  const int m = cfg.m, k = cfg.k;
  const SpinContext& ctx = spin_context(m, k);
  const LambdaTable& table = lambda_table_for(cfg);
  record_lambdas(rep, table);
  const auto spec = FermionicOperatorSpec::make(m, k, cfg.j);
  std::mt19937_64 rng(cfg.seed);
  const CliffordPoly f = make_test_function(cfg, rng);
  const CompiledField left(pairing_kernels(ctx, cfg.j, cfg.center, table).back(), k);
  const CompiledField right(apply_fermionic(spec, f), k);
  const UPairing pairing(m, k);

  const int q = cfg.orders.back();
  const std::vector<double> radii{0.1, 0.05, 0.025};
  std::vector<double> lr, li;
  for (double r : radii) {
    require(r < cfg.radius, ErrorCode::InvalidArgument, "small balls must lie inside the domain");
    const BallRule ball = build_ball_rule(m, q, cfg.center, r * cfg.radius);
    const double mag = max_abs(volume_pairing(ball, left, right, pairing));
    const double first = rep.residuals.empty() ? mag : rep.residuals.front().absolute;
    rep.residuals.push_back({q, mag, relative(mag, first)});
    lr.push_back(std::log(r));
    li.push_back(std::log(std::max(mag, 1e-300)));
  }
  const double n = static_cast<double>(lr.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lr.size(); ++i) {
    sx += lr[i];
    sy += li[i];
    sxx += lr[i] * lr[i];
    sxy += lr[i] * li[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.diagnostics.emplace_back("loglog_slope", slope);
  rep.diagnostics.emplace_back("expected_slope", 2.0 * cfg.j - 1.0);
  for (std::size_t i = 0; i < radii.size(); ++i)
    rep.diagnostics.emplace_back("radius_" + std::to_string(i), radii[i] * cfg.radius);
  rep.notes.push_back("residual ladder runs over the ball radii; pass needs slope >= tolerance");
  rep.ladder_monotone = true;
  for (std::size_t i = 1; i < rep.residuals.size(); ++i)
    if (rep.residuals[i].absolute > rep.residuals[i - 1].absolute) rep.ladder_monotone = false;
  rep.pass = rep.ladder_monotone && slope >= cfg.tolerance;
  rep.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return rep;
}

VerificationReport run_cauchy(const ScenarioConfig& cfg) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.config = cfg;
  const int m = cfg.m, k = cfg.k;
  const SpinContext& ctx = spin_context(m, k);
  const LambdaTable& table = lambda_table_for(cfg);
  record_lambdas(rep, table);

  std::mt19937_64 rng(cfg.seed);
  const CliffordPoly f = make_test_function(cfg, rng);
  double df_size = apply_Rk(f, k).max_abs();
  if (cfg.j >= 2)
    df_size = apply_fermionic(FermionicOperatorSpec::make(m, k, cfg.j), f).max_abs();
  require(df_size <= 1e-9 * std::max(1.0, f.max_abs()), ErrorCode::DomainViolation,
          "Cauchy formula needs D_{2j-1} f = 0; the chosen test family violates it (|D f| = " +
              std::to_string(df_size) + ")");
  const auto terms = boundary_terms(cfg, f, pairing_kernels(ctx, cfg.j, cfg.center, table));
  const Block fy = value_at(f, cfg.center, k);
  const UPairing pairing(m, k);
  const std::vector<double> origin(m, 0.0);

  FormulaRun top;
  for (int q : cfg.orders) {
    FormulaRun run = evaluate_terms(terms, build_sphere_rule(m, q, origin, cfg.radius), pairing);
    const double a = max_abs(difference(run.sum, fy));
    double scale = max_abs(fy);
    for (const auto& b : run.term_blocks) scale = std::max(scale, max_abs(b));
    rep.residuals.push_back({q, a, relative(a, scale)});
    top = std::move(run);
  }
  rep.diagnostics.emplace_back("fermionic_image_magnitude", df_size);
  rep.diagnostics.emplace_back("f_at_y_magnitude", max_abs(fy));
  for (std::size_t i = 0; i < terms.size(); ++i)
    rep.diagnostics.emplace_back("term_" + terms[i].name, max_abs(top.term_blocks[i]));
  rep.diagnostics.emplace_back("test_function_x_degree", cfg.degree);
  rep.notes.push_back(std::string("test family: ") + family_name(cfg.family));
  finish(rep, start);
  return rep;
}

VerificationReport run_ladder(const ScenarioConfig& cfg) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.config = cfg;
  const SpinContext& ctx = spin_context(cfg.m, cfg.k);
  const LambdaTable& table = lambda_table_for(cfg);
  record_lambdas(rep, table);
  const auto spec = FermionicOperatorSpec::make(cfg.m, cfg.k, cfg.j);
  const double lam_hi = table.at(cfg.m, cfg.k, cfg.j).value;
  const double lam_lo = table.at(cfg.m, cfg.k, cfg.j - 1).value;
  const RationalKernel lo = build_Ek(cfg.m, cfg.k, cfg.j - 1, cfg.center, ctx.zonal, lam_lo);
  const LadderResult r = ladder_check(
      spec, build_Ek(cfg.m, cfg.k, cfg.j, cfg.center, ctx.zonal, lam_hi), lo, 20, cfg.seed);
  rep.residuals.push_back({0, r.residual, relative(r.residual, r.scale)});
  const LadderResult doubled = ladder_check(
      spec, build_Ek(cfg.m, cfg.k, cfg.j, cfg.center, ctx.zonal, 2.0 * lam_hi), lo, 20, cfg.seed);
  rep.diagnostics.emplace_back("e_lo_scale", r.scale);
  rep.diagnostics.emplace_back("fitted_ratio", r.ratio);
  rep.diagnostics.emplace_back("doubled_lambda_relative_residual",
                               relative(doubled.residual, doubled.scale));
  rep.notes.push_back("exact symbolic differentiation at 20 points with |x - y| in [0.5, 2]");
  finish(rep, start);
  return rep;
}

VerificationReport run_commutation(const ScenarioConfig& cfg) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.config = cfg;
  const int m = cfg.m, k = cfg.k;
  const int jj = std::max(cfg.j, 2);
  const auto spec = FermionicOperatorSpec::make(m, k, jj);
  const auto& mk = spin_context(m, k).monogenic.elements;
  std::mt19937_64 rng(cfg.seed);
  double abs_err = 0.0, rel_err = 0.0;
  for (int n = 0; n < cfg.samples; ++n) {
    const CliffordPoly f = random_x_poly(m, mk, 0, cfg.degree, rng);
    for (int s = 1; s <= jj - 1; ++s) {
      const CliffordPoly a = apply_Rk(apply_ladder_factor(spec, s, f), k);
      const CliffordPoly b = apply_ladder_factor(spec, s, apply_Rk(f, k));
      const double d = (a - b).max_abs();
      abs_err = std::max(abs_err, d);
      rel_err = std::max(rel_err, relative(d, std::max(a.max_abs(), b.max_abs())));
    }
  }
  rep.residuals.push_back({0, abs_err, rel_err});
  rep.diagnostics.emplace_back("samples", cfg.samples);
  rep.diagnostics.emplace_back("factors_checked", jj - 1);
  finish(rep, start);
  return rep;
}

VerificationReport run_reproducing(const ScenarioConfig& cfg) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.config = cfg;
  const SpinContext& ctx = spin_context(cfg.m, cfg.k);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  double abs_err = 0.0, rel_err = 0.0;
  for (int n = 0; n < cfg.samples; ++n) {
    CliffordPoly f(cfg.m);
    for (const auto& phi : ctx.monogenic.elements) f.add_scaled(phi, normal(rng));
    const double d = reproducing_residual(ctx.zonal, f);
    abs_err = std::max(abs_err, d);
    rel_err = std::max(rel_err, relative(d, f.max_abs()));
  }
  rep.residuals.push_back({0, abs_err, rel_err});
  rep.diagnostics.emplace_back("dim_Mk", static_cast<double>(ctx.monogenic.dimension()));
  rep.diagnostics.emplace_back("kernel_fit_residual", ctx.zonal.residual);
  rep.diagnostics.emplace_back("kernel_condition_estimate", ctx.zonal.condition_estimate);
  finish(rep, start);
  return rep;
}

VerificationReport run_fischer(const ScenarioConfig& cfg) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.config = cfg;
  const int m = cfg.m, k = cfg.k;
  const PolySpaceBasis hk = build_harmonic_basis(m, k);
  const std::size_t dim_mk = spin_context(m, k).monogenic.dimension();
  const std::size_t dim_mk1 = k >= 1 ? spin_context(m, k - 1).monogenic.dimension() : 0;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int n = 0; n < cfg.samples; ++n) {
    CliffordPoly h(m);
    for (const auto& e : hk.elements) h.add_scaled(e, normal(rng));
    const double scale = std::max(h.max_abs(), 1e-300);
    const CliffordPoly p = proj_plus(h, k), q = proj_minus(h, k);
    worst = std::max({worst, (proj_plus(p, k) - p).max_abs() / scale,
                      (proj_minus(q, k) - q).max_abs() / scale,
                      (p + q - h).max_abs() / scale, proj_plus(q, k).max_abs() / scale,
                      proj_minus(p, k).max_abs() / scale,
                      dirac_left(p, Group::U).max_abs() / scale});
  }
  rep.residuals.push_back({0, worst, worst});
  rep.diagnostics.emplace_back("dim_Hk", static_cast<double>(hk.dimension()));
  rep.diagnostics.emplace_back("dim_Mk", static_cast<double>(dim_mk));
  rep.diagnostics.emplace_back("dim_Mk_minus_1", static_cast<double>(dim_mk1));
  const bool dims_ok = hk.dimension() == dim_mk + dim_mk1;
  if (!dims_ok) rep.notes.push_back("dimension identity dim H_k = dim M_k + dim M_{k-1} fails");
  finish(rep, start, dims_ok);
  return rep;
}

VerificationReport run_lambda(const ScenarioConfig& cfg) {
  const auto start = Clock::now();
  VerificationReport rep;
  rep.config = cfg;
  const int m = cfg.m, k = cfg.k;
  const SpinContext& ctx = spin_context(m, k);
  const LambdaTable& table = lambda_table_for(cfg);
  record_lambdas(rep, table);

  // Independent configurations: random interior y, random x-constant f, random v.
  struct Config {
    std::vector<double> y, v;
    CliffordPoly f;
    unsigned long long seed;
  };
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Config> configs;
  for (int n = 0; n < cfg.samples; ++n) {
    Config c;
    c.y.resize(m);
    c.v.resize(m);
    double n2 = 0.0;
    for (auto& t : c.y) {
      t = normal(rng);
      n2 += t * t;
    }
    const double r = 0.5 * cfg.radius * unit(rng) / std::sqrt(n2);
    for (auto& t : c.y) t *= r;
    for (auto& t : c.v) t = normal(rng);
    for (const auto& phi : ctx.monogenic.elements) {
      if (c.f.dim() == 0) c.f = CliffordPoly(m);
      c.f.add_scaled(phi, normal(rng));
    }
    c.seed = rng();
    configs.push_back(std::move(c));
  }

  const std::vector<double> origin(m, 0.0);
  const UPairing pairing(m, k);
  const auto v_values = [&](const Block& b, const std::vector<double>& v) {
    Assignment a;
    a.set(Group::V, v);
    return evaluate(from_v_block(m, k, b), a);
  };
  std::vector<double> top_estimates;
  for (int q : cfg.orders) {
    const SphereRule sphere = build_sphere_rule(m, q, origin, cfg.radius);
    std::vector<double> est;
    for (const auto& c : configs) {
      const CompiledField kernel(pairing_kernel(build_Ek(m, k, 1, c.y, ctx.zonal, 1.0)), k);
      const CliffordPoly image =
          v_values(boundary_pairing(sphere, kernel, CompiledField(c.f, k), pairing), c.v);
      const CliffordPoly target = v_values(value_at(c.f, c.y, k), c.v);
      double num = 0.0, den = 0.0;
      for (const auto& [mono, coef] : image.terms()) {
        auto it = target.terms().find(mono);
        for (std::size_t b = 0; b < coef.size(); ++b) {
          den += coef.coeffs()[b] * coef.coeffs()[b];
          if (it != target.terms().end()) num += coef.coeffs()[b] * it->second.coeffs()[b];
        }
      }
      require(den > 1e-300, ErrorCode::Singular, "degenerate lambda configuration");
      double lam = num / den;
      for (int t = 2; t <= cfg.j; ++t) {
        CalibrationOptions opt;
        opt.seed = c.seed;
        lam = calibrate_ladder_step(ctx, t, lam, c.y, opt).value;
      }
      est.push_back(lam);
    }
    const auto [lo, hi] = std::minmax_element(est.begin(), est.end());
    double mean = 0.0;
    for (double e : est) mean += e;
    mean /= static_cast<double>(est.size());
    const double spread = *hi - *lo;
    rep.residuals.push_back({q, spread, relative(spread, std::abs(mean))});
    top_estimates = est;
  }
  bool nonzero = true;
  for (double e : top_estimates) nonzero = nonzero && e != 0.0 && std::isfinite(e);
  for (const auto& e : table.entries()) nonzero = nonzero && e.second.value != 0.0;
  const double tabulated = table.at(m, k, cfg.j).value;
  double dev = 0.0;
  for (double e : top_estimates) dev = std::max(dev, std::abs(e - tabulated));
  rep.diagnostics.emplace_back("tabulated_lambda", tabulated);
  rep.diagnostics.emplace_back("max_relative_deviation_from_table",
                               relative(dev, std::abs(tabulated)));
  rep.diagnostics.emplace_back("configurations", static_cast<double>(configs.size()));
  if (!nonzero) rep.notes.push_back("a lambda estimate vanished");
  finish(rep, start, nonzero);
  return rep;
}

VerificationReport run_scenario(ScenarioConfig cfg) {
  cfg.finalize();
  static const std::map<std::string, std::function<VerificationReport(const ScenarioConfig&)>>
      table{{"stokes_rk", run_stokes_rk},         {"stokes_tk", run_stokes_tk},
            {"stokes_qk", run_stokes_qk},         {"borel_pompeiu", run_borel_pompeiu},
            {"small_ball", run_small_ball},       {"cauchy", run_cauchy},
            {"ladder", run_ladder},               {"commutation", run_commutation},
            {"reproducing", run_reproducing},     {"fischer", run_fischer},
            {"lambda", run_lambda}};
  return table.at(cfg.scenario)(cfg);
}

// ------------------------------------------------------------ serialisation

std::string VerificationReport::to_json() const {
  using nlohmann::json;
  const auto& c = config;
  json params{{"m", c.m},
              {"k", c.k},
              {"j", c.j},
              {"radius", c.radius},
              {"center", c.center},
              {"quad_orders", c.orders},
              {"seed", c.seed},
              {"family", family_name(c.family)},
              {"degree", c.degree},
              {"tolerance", c.tolerance},
              {"samples", c.samples}};
  json lam = json::array();
  for (const auto& l : lambda_used)
    lam.push_back({{"m", l.m}, {"k", l.k}, {"j", l.j}, {"lambda", l.value},
                   {"calibration_residual", l.residual}});
  json res = json::array();
  for (const auto& r : residuals)
    res.push_back({{"order", r.order}, {"absolute", r.absolute}, {"relative", r.relative}});
  json diag = json::object();
  for (const auto& [name, value] : diagnostics) diag[name] = value;
  json doc{{"scenario", c.scenario},   {"params", params},
           {"lambda_used", lam},       {"residuals", res},
           {"pass", pass},             {"wall_ms", wall_ms},
           {"ladder_monotone", ladder_monotone},
           {"diagnostics", diag},      {"notes", notes}};
  return doc.dump(2);
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  const auto& c = config;
  os << c.scenario << ": " << (pass ? "PASS" : "FAIL") << "\n";
  os << "  m=" << c.m << " k=" << c.k << " j=" << c.j << " R=" << c.radius << " y=(";
  for (std::size_t i = 0; i < c.center.size(); ++i) os << (i ? "," : "") << c.center[i];
  os << ") seed=" << c.seed << " family=" << family_name(c.family) << " degree=" << c.degree
     << " tol=" << c.tolerance << "\n";
  for (const auto& l : lambda_used)
    os << "  lambda_" << 2 * l.j - 1 << " = " << l.value << " (calibration residual "
       << l.residual << ")\n";
  os.precision(3);
  os << std::scientific;
  for (const auto& r : residuals)
    os << "  order " << r.order << ": absolute " << r.absolute << "  relative " << r.relative
       << "\n";
  for (const auto& [name, value] : diagnostics) os << "  " << name << " = " << value << "\n";
  for (const auto& n : notes) os << "  note: " << n << "\n";
  os << "  ladder " << (ladder_monotone ? "monotone" : "NOT monotone") << ", "
     << std::fixed << std::setprecision(1) << wall_ms << " ms\n";
  return os.str();
}

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      require(item.find_first_not_of(" \t", used) == std::string::npos,
              ErrorCode::InvalidArgument, "trailing characters");
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "cannot parse number '" + item + "'");
    }
  }
  return out;
}

std::vector<int> parse_csv_ints(const std::string& s) {
  std::vector<int> out;
  for (double d : parse_csv_doubles(s)) {
    require(d == std::floor(d), ErrorCode::InvalidArgument,
            "expected an integer, got " + std::to_string(d));
    out.push_back(static_cast<int>(d));
  }
  return out;
}

void set_config_value(ScenarioConfig& c, const std::string& key, const std::string& value) {
  const auto number = [&](auto& slot) {
    using T = std::remove_reference_t<decltype(slot)>;
    try {
      slot = boost::lexical_cast<T>(boost::algorithm::trim_copy(value));
    } catch (const boost::bad_lexical_cast&) {
      throw Error(ErrorCode::InvalidArgument, "bad value '" + value + "' for key '" + key + "'");
    }
  };
  if (key == "scenario") c.scenario = boost::algorithm::trim_copy(value);
  else if (key == "m") number(c.m);
  else if (key == "k") number(c.k);
  else if (key == "j") number(c.j);
  else if (key == "radius") number(c.radius);
  else if (key == "seed") number(c.seed);
  else if (key == "degree") number(c.degree);
  else if (key == "tol" || key == "tolerance") number(c.tolerance);
  else if (key == "samples") number(c.samples);
  else if (key == "center") c.center = parse_csv_doubles(value);
  else if (key == "quad_orders") c.orders = parse_csv_ints(value);
  else if (key == "family") c.family = parse_family(boost::algorithm::trim_copy(value));
  else if (key == "lambda_table") c.lambda_table = boost::algorithm::trim_copy(value);
  else throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
}

std::vector<ScenarioConfig> parse_suite(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed suite config: ") + e.what());
  }
  std::vector<ScenarioConfig> out;
  for (const auto& [section, body] : tree) {
    require(!body.empty() || body.data().empty(), ErrorCode::InvalidArgument,
            "top-level keys are not allowed in a suite config");
    ScenarioConfig c;
    c.scenario = section;
    for (const auto& [key, node] : body) {
      try {
        set_config_value(c, key, node.data());
      } catch (const Error& e) {
        throw Error(e.code(), "section [" + section + "]: " + e.what());
      }
    }
    out.push_back(std::move(c));
  }
  require(!out.empty(), ErrorCode::InvalidArgument, "suite config has no sections");
  return out;
}

std::vector<ScenarioConfig> load_suite(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_suite(ss.str());
}

}  // namespace higherspin
