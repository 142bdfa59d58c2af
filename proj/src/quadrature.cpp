#include "higherspin/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace higherspin {
namespace {

void check_rule_args(int m, int order, std::span<const double> center, double radius) {
  require(m >= 3 && m <= 5, ErrorCode::InvalidArgument,
          "quadrature supports m in {3, 4, 5}, got " + std::to_string(m));
  require(order >= 4, ErrorCode::InvalidArgument, "quadrature order must be >= 4");
  require(static_cast<int>(center.size()) == m, ErrorCode::DimensionMismatch,
          "center has wrong length");
  require(radius > 0.0 && std::isfinite(radius), ErrorCode::InvalidArgument,
          "radius must be positive");
}

// Unit sphere S^{d-1} in R^d, exact to total degree `order`.
void unit_sphere(int d, int order, std::vector<double>& pts, std::vector<double>& w) {
  pts.clear();
  w.clear();
  if (d == 2) {
    const int n = order + 1;
    const double h = 2.0 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
      const double phi = (i + 0.5) * h;
      pts.push_back(std::cos(phi));
      pts.push_back(std::sin(phi));
      w.push_back(h);
    }
    return;
  }
  std::vector<double> sub_pts, sub_w, t, tw;
  unit_sphere(d - 1, order, sub_pts, sub_w);
  gauss_gegenbauer(order / 2 + 1, 0.5 * (d - 3), t, tw);
  const std::size_t ns = sub_w.size();
  pts.reserve(t.size() * ns * d);
  w.reserve(t.size() * ns);
  for (std::size_t a = 0; a < t.size(); ++a) {
    const double s = std::sqrt(std::max(0.0, 1.0 - t[a] * t[a]));
    for (std::size_t b = 0; b < ns; ++b) {
      for (int i = 0; i < d - 1; ++i) pts.push_back(s * sub_pts[b * (d - 1) + i]);
      pts.push_back(t[a]);
      w.push_back(tw[a] * sub_w[b]);
    }
  }
}

// Deterministic reduction: nodes are summed in order within fixed leaves,
// leaves are combined pairwise. `add(i, acc)` adds weight_i * f(x_i) into acc;
// `locate(lo, hi)` is called when a leaf sum is not finite.
template <class Add, class Locate>
void pairwise_sum(std::size_t lo, std::size_t hi, std::size_t width, const Add& add,
                  const Locate& locate, std::vector<double>& acc) {
  constexpr std::size_t kLeaf = 32;
  if (hi - lo <= kLeaf) {
    for (std::size_t i = lo; i < hi; ++i) add(i, acc);
    for (double v : acc)
      if (!std::isfinite(v)) locate(lo, hi);
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  std::vector<double> right(width, 0.0);
  pairwise_sum(lo, mid, width, add, locate, acc);
  pairwise_sum(mid, hi, width, add, locate, right);
  for (std::size_t c = 0; c < width; ++c) acc[c] += right[c];
}

[[noreturn]] void non_finite(std::span<const double> x, std::size_t node) {
  std::ostringstream os;
  os << "non-finite integrand at node " << node << " x = (";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  throw Error(ErrorCode::NonFinite, os.str());
}

}  // namespace

void gauss_gegenbauer(int n, double alpha, std::vector<double>& nodes,
                      std::vector<double>& weights) {
  require(n >= 1, ErrorCode::InvalidArgument, "Gauss rule needs at least one node");
  require(alpha > -1.0, ErrorCode::InvalidArgument, "Gegenbauer exponent must exceed -1");
  // Golub-Welsch on the symmetric Jacobi matrix of the monic recurrence.
  const double lam = alpha + 0.5;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double beta = i == 1 ? 1.0 / (2.0 * (1.0 + lam))
                               : i * (i + 2.0 * lam - 1.0) / (4.0 * (i + lam) * (i + lam - 1.0));
    jac(i, i - 1) = jac(i - 1, i) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(alpha + 1.0) /
                     std::tgamma(alpha + 1.5);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0;
  }
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  gauss_gegenbauer(n, 0.0, nodes, weights);
}

double sphere_area(int m, double radius) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m) *
         std::pow(radius, m - 1);
}

double ball_volume(int m, double radius) { return sphere_area(m, radius) * radius / m; }

SphereRule build_sphere_rule(int m, int order, std::span<const double> center, double radius) {
  check_rule_args(m, order, center, radius);
  SphereRule rule;
  rule.m = m;
  rule.order = order;
  rule.center.assign(center.begin(), center.end());
  rule.radius = radius;
  std::vector<double> pts, w;
  unit_sphere(m, order, pts, w);
  const double scale = std::pow(radius, m - 1);
  rule.normals = pts;
  rule.nodes.resize(pts.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    for (int c = 0; c < m; ++c) rule.nodes[i * m + c] = center[c] + radius * pts[i * m + c];
  rule.weights.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) rule.weights[i] = w[i] * scale;
  return rule;
}

BallRule build_ball_rule(int m, int order, std::span<const double> center, double radius,
                         std::optional<std::vector<double>> pole) {
  check_rule_args(m, order, center, radius);
  BallRule rule;
  rule.m = m;
  rule.order = order;
  rule.center.assign(center.begin(), center.end());
  rule.radius = radius;
  rule.origin = pole ? *pole : rule.center;
  require(static_cast<int>(rule.origin.size()) == m, ErrorCode::DimensionMismatch,
          "pole has wrong length");
  std::vector<double> d(m);
  double d2 = 0.0;
  for (int i = 0; i < m; ++i) {
    d[i] = rule.origin[i] - center[i];
    d2 += d[i] * d[i];
  }
  require(d2 < radius * radius, ErrorCode::DomainViolation, "pole must lie inside the ball");

  std::vector<double> dirs, dw, t, tw;
  unit_sphere(m, order, dirs, dw);
  rule.radial_points = (order + m) / 2 + 1;
  gauss_legendre(rule.radial_points, t, tw);
  rule.nodes.reserve(dw.size() * t.size() * m);
  rule.weights.reserve(dw.size() * t.size());
  for (std::size_t a = 0; a < dw.size(); ++a) {
    const double* om = dirs.data() + a * m;
    double dom = 0.0;
    for (int i = 0; i < m; ++i) dom += d[i] * om[i];
    const double rho = -dom + std::sqrt(dom * dom - d2 + radius * radius);
    for (std::size_t b = 0; b < t.size(); ++b) {
      const double r = 0.5 * rho * (1.0 + t[b]);
      for (int i = 0; i < m; ++i) rule.nodes.push_back(rule.origin[i] + r * om[i]);
      rule.weights.push_back(dw[a] * tw[b] * 0.5 * rho * std::pow(r, m - 1));
    }
  }
  return rule;
}

namespace {

template <class Add>
std::vector<double> reduce_nodes(std::size_t count, std::size_t width,
                                 std::function<std::span<const double>(std::size_t)> node,
                                 const Add& add) {
  std::vector<double> acc(width, 0.0);
  auto locate = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> one(width);
    for (std::size_t i = lo; i < hi; ++i) {
      std::fill(one.begin(), one.end(), 0.0);
      add(i, one);
      for (double v : one)
        if (!std::isfinite(v)) non_finite(node(i), i);
    }
    non_finite(node(lo), lo);
  };
  pairwise_sum(0, count, width, add, locate, acc);
  return acc;
}

}  // namespace

std::vector<double> integrate_surface_block(const SphereRule& rule, std::size_t width,
                                            const SurfaceBlockIntegrand& f) {
  return reduce_nodes(rule.size(), width, [&](std::size_t i) { return rule.node(i); },
                      [&](std::size_t i, std::vector<double>& acc) {
                        f(rule.node(i), rule.normal_components(i), rule.weights[i], acc);
                      });
}

std::vector<double> integrate_volume_block(const BallRule& rule, std::size_t width,
                                           const VolumeBlockIntegrand& f) {
  return reduce_nodes(rule.size(), width, [&](std::size_t i) { return rule.node(i); },
                      [&](std::size_t i, std::vector<double>& acc) {
                        f(rule.node(i), rule.weights[i], acc);
                      });
}

Multivector integrate_surface(const SphereRule& rule, const SurfaceIntegrand& f) {
  const std::size_t width = std::size_t{1} << rule.m;
  auto block = integrate_surface_block(
      rule, width,
      [&](std::span<const double> x, std::span<const double> n, double w, std::span<double> acc) {
        const Multivector v = f(x, Multivector::vector(rule.m, n));
        require(v.dim() == rule.m, ErrorCode::DimensionMismatch,
                "integrand returned a multivector of the wrong dimension");
        for (std::size_t c = 0; c < width; ++c) acc[c] += w * v.coeffs()[c];
      });
  return Multivector(rule.m, block);
}

Multivector integrate_volume(const BallRule& rule, const VolumeIntegrand& f) {
  const std::size_t width = std::size_t{1} << rule.m;
  auto block = integrate_volume_block(
      rule, width, [&](std::span<const double> x, double w, std::span<double> acc) {
        const Multivector v = f(x);
        require(v.dim() == rule.m, ErrorCode::DimensionMismatch,
                "integrand returned a multivector of the wrong dimension");
        for (std::size_t c = 0; c < width; ++c) acc[c] += w * v.coeffs()[c];
      });
  return Multivector(rule.m, block);
}

}  // namespace higherspin
