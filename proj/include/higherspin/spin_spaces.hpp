#pragma once

#include <utility>
#include <vector>

#include "higherspin/poly.hpp"

namespace higherspin {

enum class SpaceKind { Harmonic, Monogenic, RkNull };

/// Real basis of one of the polynomial spaces H_k, M_k, or the polynomial
/// null solutions of R_k with values in M_k.
struct PolySpaceBasis {
  int m = 0;
  int k = 0;
  SpaceKind kind = SpaceKind::Harmonic;
  int x_degree = 0;  // RkNull only
  std::vector<CliffordPoly> elements;
  std::vector<double> operator_singular_values;  // of the defining operator matrix
  double min_gram_singular_value = 0.0;          // real L2(S^{m-1}) Gram of the elements

  std::size_t dimension() const noexcept { return elements.size(); }
};

PolySpaceBasis build_harmonic_basis(int m, int k);
PolySpaceBasis build_monogenic_basis(int m, int k);

/// P_k^+ h = h + u D_u h / (m + 2k - 2). Acts in u only; x and v are passengers.
CliffordPoly proj_plus(const CliffordPoly& h, int k);
/// P_k^- h = -u D_u h / (m + 2k - 2).
CliffordPoly proj_minus(const CliffordPoly& h, int k);
/// Right-handed projections: g + (g D_u) u / (m+2k-2) and -(g D_u) u / (m+2k-2).
CliffordPoly proj_plus_right(const CliffordPoly& g, int k);
CliffordPoly proj_minus_right(const CliffordPoly& g, int k);

/// H_k = M_k (+) u M_{k-1}: returns (P_k^+ h, P_k^- h). Throws when h is not harmonic in u.
std::pair<CliffordPoly, CliffordPoly> almansi_fischer_split(const CliffordPoly& h, int k);

/// Reproducing kernel of M_k: f(v) = int_S conj(Z(u,v)) f(u) dS(u).
struct ZonalKernel {
  int m = 0;
  int k = 0;
  CliffordPoly poly;  // in groups u and v
  double residual = 0.0;             // max coefficient error of the reproducing identity
  int system_rank = 0;
  int system_size = 0;
  double condition_estimate = 0.0;   // largest / smallest retained pivot magnitude
};

inline constexpr double kReproducingTolerance = 1e-8;

ZonalKernel build_zonal_kernel(int m, int k);
ZonalKernel build_zonal_kernel(const PolySpaceBasis& monogenic);

/// Max coefficient error of int_S conj(Z(u,v)) f(u) dS(u) - f(v).
double reproducing_residual(const ZonalKernel& z, const CliffordPoly& f);

/// Null solutions of R_k that are homogeneous of degree d in x with M_k values.
PolySpaceBasis build_rk_null_basis(int m, int k, int d);
PolySpaceBasis build_rk_null_basis(const PolySpaceBasis& monogenic, int d);

}  // namespace higherspin
