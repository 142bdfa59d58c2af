#include "higherspin/calibration.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>

#include "higherspin/field_eval.hpp"
#include "higherspin/quadrature.hpp"

namespace higherspin {

const SpinContext& spin_context(int m, int k) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<SpinContext>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{m, k}];
  if (!slot) {
    auto ctx = std::make_unique<SpinContext>();
    ctx->m = m;
    ctx->k = k;
    ctx->monogenic = build_monogenic_basis(m, k);
    ctx->zonal = build_zonal_kernel(ctx->monogenic);
    slot = std::move(ctx);
  }
  return *slot;
}

std::string kernel_family_problem(int m, int k, int j) {
  if (m < 3 || m > kMaxDim) return "m must lie in [3, 8]";
  if (k < 0) return "k must be non-negative";
  if (j < 1) return "j must be >= 1";
  for (int s = 1; s <= j - 1; ++s)
    if (m + 2 * k - 2 * s - 2 <= 0)
      return "a_" + std::to_string(s) + " undefined: m+2k-2s-2 = " +
             std::to_string(m + 2 * k - 2 * s - 2) + " is not positive";
  if (m % 2 == 0 && 2 * j >= m)
    return "even m with 2j >= m: the fundamental solution of D_{2j-1} has logarithmic "
           "terms and the power-law kernel family breaks down";
  return {};
}

bool kernel_family_valid(int m, int k, int j) { return kernel_family_problem(m, k, j).empty(); }

LambdaEntry calibrate_first_order(const SpinContext& ctx, std::span<const double> y,
                                  double radius, const CalibrationOptions& opt) {
  const int m = ctx.m, k = ctx.k;
  const SphereRule rule = build_sphere_rule(m, opt.order, y, radius);
  const CompiledField kernel(pairing_kernel(build_Ek(m, k, 1, y, ctx.zonal, 1.0)), k);
  const UPairing pairing(m, k);

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> images, targets;
  for (int n = 0; n < opt.batch; ++n) {
    CliffordPoly f(m);
    for (const auto& phi : ctx.monogenic.elements) f.add_scaled(phi, normal(rng));
    images.push_back(boundary_pairing(rule, kernel, CompiledField(f, k), pairing));
    targets.push_back(v_block(rename_group(f, Group::U, Group::V), k));
  }
  double num = 0.0, den = 0.0, scale = 0.0;
  for (std::size_t n = 0; n < images.size(); ++n)
    for (std::size_t i = 0; i < images[n].size(); ++i) {
      num += images[n][i] * targets[n][i];
      den += images[n][i] * images[n][i];
      scale = std::max(scale, std::abs(targets[n][i]));
    }
  require(den > 1e-300 && scale > 0.0, ErrorCode::Singular,
          "degenerate calibration batch: boundary integrals vanish");
  LambdaEntry e;
  e.value = num / den;
  e.seed = opt.seed;
  for (std::size_t n = 0; n < images.size(); ++n)
    for (std::size_t i = 0; i < images[n].size(); ++i)
      e.residual = std::max(e.residual, std::abs(e.value * images[n][i] - targets[n][i]));
  e.residual /= scale;
  return e;
}

LambdaEntry calibrate_ladder_step(const SpinContext& ctx, int j, double lambda_lo,
                                  std::span<const double> y, const CalibrationOptions& opt) {
  const auto spec = FermionicOperatorSpec::make(ctx.m, ctx.k, j);
  const RationalKernel hi = build_Ek(ctx.m, ctx.k, j, y, ctx.zonal, 1.0);
  const RationalKernel lo = build_Ek(ctx.m, ctx.k, j - 1, y, ctx.zonal, lambda_lo);
  const LadderResult r = ladder_check(spec, hi, lo, opt.ladder_points, opt.seed);
  require(std::isfinite(r.ratio) && std::abs(r.ratio) > 1e-12 && r.ratio_residual < 1e-6,
          ErrorCode::Singular,
          "ladder factor does not map E^" + std::to_string(2 * j - 1) + " onto a multiple of E^" +
              std::to_string(2 * j - 3) + " (ratio " + std::to_string(r.ratio) +
              ", residual " + std::to_string(r.ratio_residual) + ")");
  LambdaEntry e;
  e.value = 1.0 / r.ratio;
  e.residual = r.ratio_residual;
  e.seed = opt.seed;
  return e;
}

double calibrate_lambda(int m, int k, int j, LambdaTable& table, const CalibrationOptions& opt) {
  const std::string problem = kernel_family_problem(m, k, j);
  require(problem.empty(), ErrorCode::InvalidArgument,
          "cannot calibrate lambda for (m=" + std::to_string(m) + ", k=" + std::to_string(k) +
              ", j=" + std::to_string(j) + "): " + problem);
  const SpinContext& ctx = spin_context(m, k);
  const std::vector<double> origin(m, 0.0);
  if (!table.contains(m, k, 1)) table.set(m, k, 1, calibrate_first_order(ctx, origin, 1.0, opt));
  for (int t = 2; t <= j; ++t)
    if (!table.contains(m, k, t))
      table.set(m, k, t,
                calibrate_ladder_step(ctx, t, table.at(m, k, t - 1).value, origin, opt));
  return table.at(m, k, j).value;
}

std::vector<RationalKernel> pairing_kernels(const SpinContext& ctx, int j,
                                            std::span<const double> y, const LambdaTable& table) {
  std::vector<RationalKernel> out;
  for (int t = 1; t <= j; ++t)
    out.push_back(pairing_kernel(
        build_Ek(ctx.m, ctx.k, t, y, ctx.zonal, table.at(ctx.m, ctx.k, t).value)));
  return out;
}

}  // namespace higherspin
