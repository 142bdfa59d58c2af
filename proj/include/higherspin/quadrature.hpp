#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "higherspin/multivector.hpp"

namespace higherspin {

/// Product rule on the sphere |x - center| = radius, exact for polynomials of
/// total degree <= order.
struct SphereRule {
  int m = 0;
  int order = 0;
  std::vector<double> center;
  double radius = 1.0;
  std::vector<double> nodes;    // size() * m, row per node
  std::vector<double> normals;  // size() * m, unit outward normal per node
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> node(std::size_t i) const { return {nodes.data() + i * m, std::size_t(m)}; }
  std::span<const double> normal_components(std::size_t i) const {
    return {normals.data() + i * m, std::size_t(m)};
  }
  Multivector normal(std::size_t i) const { return Multivector::vector(m, normal_components(i)); }
};

/// Polar rule on the ball |x - center| <= radius. Rays start at `origin`
/// (the center unless an interior pole is given), so integrands with a
/// |x - origin|^{1-m} singularity are handled by the r^{m-1} Jacobian.
struct BallRule {
  int m = 0;
  int order = 0;
  std::vector<double> center;
  std::vector<double> origin;
  double radius = 1.0;
  int radial_points = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> node(std::size_t i) const { return {nodes.data() + i * m, std::size_t(m)}; }
};

/// Gauss nodes and weights for the weight (1 - t^2)^alpha on [-1, 1], alpha > -1.
void gauss_gegenbauer(int n, double alpha, std::vector<double>& nodes, std::vector<double>& weights);
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

double sphere_area(int m, double radius = 1.0);
double ball_volume(int m, double radius = 1.0);

SphereRule build_sphere_rule(int m, int order, std::span<const double> center, double radius);
BallRule build_ball_rule(int m, int order, std::span<const double> center, double radius,
                         std::optional<std::vector<double>> pole = std::nullopt);

using SurfaceIntegrand =
    std::function<Multivector(std::span<const double> x, const Multivector& normal)>;
using VolumeIntegrand = std::function<Multivector(std::span<const double> x)>;

Multivector integrate_surface(const SphereRule& rule, const SurfaceIntegrand& f);
Multivector integrate_volume(const BallRule& rule, const VolumeIntegrand& f);

/// Vector-valued variants: fn adds weight * f(x) into `acc` (length `width`).
/// Nodes are summed in order within fixed leaves and leaves are combined
/// pairwise, so results do not depend on anything but the rule. A non-finite
/// contribution raises ErrorCode::NonFinite naming the node.
using SurfaceBlockIntegrand = std::function<void(std::span<const double> x,
                                                 std::span<const double> normal,
                                                 double weight, std::span<double> acc)>;
using VolumeBlockIntegrand =
    std::function<void(std::span<const double> x, double weight, std::span<double> acc)>;

std::vector<double> integrate_surface_block(const SphereRule& rule, std::size_t width,
                                            const SurfaceBlockIntegrand& f);
std::vector<double> integrate_volume_block(const BallRule& rule, std::size_t width,
                                           const VolumeBlockIntegrand& f);

}  // namespace higherspin
