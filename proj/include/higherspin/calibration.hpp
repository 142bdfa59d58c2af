#pragma once

#include <span>
#include <string>
#include <vector>

#include "higherspin/kernel.hpp"
#include "higherspin/spin_spaces.hpp"

namespace higherspin {

/// Monogenic basis and reproducing kernel for one (m, k), built once per process.
struct SpinContext {
  int m = 0;
  int k = 0;
  PolySpaceBasis monogenic;
  ZonalKernel zonal;
};

const SpinContext& spin_context(int m, int k);

/// False when the kernel chain E^{2j-1} -> ... -> E^1 breaks down: either an
/// a_s is undefined, or m is even and 2j >= m (logarithmic fundamental solutions).
bool kernel_family_valid(int m, int k, int j);
/// Empty when valid, otherwise the reason.
std::string kernel_family_problem(int m, int k, int j);

struct CalibrationOptions {
  int order = 24;                  // sphere rule order for the first-order identity
  unsigned long long seed = 2024;  // x-constant test batch and ladder sample points
  int batch = 6;
  int ladder_points = 20;
};

/// lambda_1 from the least-squares fit of int_{|x-y|=R} (conj E^1, n f)_u = f(y, v)
/// over a batch of x-constant f, with the sphere centered at y.
LambdaEntry calibrate_first_order(const SpinContext& ctx, std::span<const double> y,
                                  double radius, const CalibrationOptions& opt);

/// lambda_{2j-1} given lambda_{2j-3}, from the ladder identity.
LambdaEntry calibrate_ladder_step(const SpinContext& ctx, int j, double lambda_lo,
                                  std::span<const double> y, const CalibrationOptions& opt);

/// Fills lambda_1 .. lambda_{2j-1} for (m, k) into the table (existing entries are kept)
/// and returns lambda_{2j-1}.
double calibrate_lambda(int m, int k, int j, LambdaTable& table,
                        const CalibrationOptions& opt = {});

/// Pairing kernels conj(E_k^{2t-1}) for t = 1..j with calibrated constants.
std::vector<RationalKernel> pairing_kernels(const SpinContext& ctx, int j,
                                            std::span<const double> y, const LambdaTable& table);

}  // namespace higherspin
