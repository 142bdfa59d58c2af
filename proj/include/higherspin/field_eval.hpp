#pragma once

// Dense evaluation of u-homogeneous fields at quadrature nodes.
//
// A field of u-degree k is stored at one point x as a block
//   [v-monomial][u-monomial][blade]
// with the monomials of homogeneous_exponents order. Fields without v have a
// single v slot.

#include <span>
#include <vector>

#include "higherspin/kernel.hpp"
#include "higherspin/poly.hpp"
#include "higherspin/quadrature.hpp"

namespace higherspin {

class CompiledField {
 public:
  /// Polynomial in (x, u[, v]); x is used as given.
  CompiledField(const CliffordPoly& p, int k);
  /// Rational kernel; x is shifted by the kernel center.
  CompiledField(const RationalKernel& kernel, int k);

  int dim() const noexcept { return m_; }
  int u_degree() const noexcept { return k_; }
  int v_degree() const noexcept { return kv_; }
  std::size_t v_slots() const noexcept { return n_v_; }
  std::size_t u_slots() const noexcept { return n_u_; }
  std::size_t blades() const noexcept { return std::size_t{1} << m_; }
  std::size_t width() const noexcept { return n_v_ * n_u_ * blades(); }

  /// Overwrites out[0 .. width()).
  void evaluate(std::span<const double> x, std::span<double> out) const;

 private:
  struct TermGroup {
    std::vector<int> x_exp;
    int pole = 0;
  };
  void compile(const CliffordPoly& p, int pole);

  int m_ = 0;
  int k_ = 0;
  int kv_ = 0;
  std::size_t n_u_ = 0;
  std::size_t n_v_ = 1;
  int max_x_degree_ = 0;
  bool rational_ = false;
  std::vector<double> shift_;
  std::vector<TermGroup> groups_;
  std::vector<double> coeffs_;  // row per group, width() columns
};

/// Exact u-pairing (P, Q)_u of dense blocks via the sphere moment matrix.
class UPairing {
 public:
  UPairing(int m, int k);

  int dim() const noexcept { return m_; }
  std::size_t u_slots() const noexcept { return n_u_; }

  /// out[v][blade] += scale * sum_{a,b} L[v][a] M[a][b] R[b]; R has one v slot.
  void accumulate(std::span<const double> left, std::size_t v_slots,
                  std::span<const double> right, double scale, std::span<double> out) const;

  /// Sign-free form of accumulate for use at many nodes:
  /// outer[v][i][j] += scale * sum_{a,b} L[v][a][i] M[a][b] R[b][j].
  void accumulate_outer(std::span<const double> left, std::size_t v_slots,
                        std::span<const double> right, double scale,
                        std::span<double> outer) const;
  /// out[v][i xor j] += sign(i, j) outer[v][i][j].
  void contract(std::span<const double> outer, std::size_t v_slots, std::span<double> out) const;

 private:
  int m_ = 0;
  std::size_t n_u_ = 0;
  std::vector<double> moments_;  // n_u * n_u
  mutable std::vector<double> scratch_;
};

/// Replaces every u-slot coefficient c of a one-v-slot block by n c.
void left_multiply_vector(std::span<const double> n, int m, std::span<double> block);

/// int_{sphere} (L(x), n(x) R(x))_u dsigma(x), as a [v][blade] block.
std::vector<double> boundary_pairing(const SphereRule& rule, const CompiledField& left,
                                     const CompiledField& right, const UPairing& pairing);
/// int_{ball} (L(x), R(x))_u dx, as a [v][blade] block.
std::vector<double> volume_pairing(const BallRule& rule, const CompiledField& left,
                                   const CompiledField& right, const UPairing& pairing);

/// Dense [v][blade] coefficients of a polynomial in v only, homogeneous of degree kv.
std::vector<double> v_block(const CliffordPoly& p, int kv);
CliffordPoly from_v_block(int m, int kv, std::span<const double> block);

}  // namespace higherspin
