#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "higherspin/operators.hpp"
#include "higherspin/poly.hpp"
#include "higherspin/spin_spaces.hpp"

namespace higherspin {

inline constexpr double kSingularityGuard = 1e-9;

/// Finite sum of N_s(X, u, v) |X|^{-s} with X = x - y. Numerators are
/// polynomials; the x-group of each numerator stands for the shifted X.
class RationalKernel {
 public:
  RationalKernel() = default;
  RationalKernel(int m, std::vector<double> center);

  int dim() const noexcept { return m_; }
  const std::vector<double>& center() const noexcept { return center_; }
  /// Numerators keyed by pole power s >= 0.
  const std::map<int, CliffordPoly>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add_term(int pole, const CliffordPoly& numerator, double scale = 1.0);

  RationalKernel& operator+=(const RationalKernel& o);
  RationalKernel& operator-=(const RationalKernel& o);
  RationalKernel& operator*=(double s);

  /// Applies a u/v-only polynomial map to every numerator. The map must be
  /// linear and must not touch the x-group.
  template <class Fn>
  RationalKernel map_numerators(Fn&& fn) const {
    RationalKernel r(m_, center_);
    for (const auto& [s, n] : terms_) r.add_term(s, fn(n));
    return r;
  }

  /// Degree of homogeneity in X, when every term agrees.
  std::optional<int> homogeneity() const;
  double max_abs() const noexcept;

 private:
  void check_compatible(const RationalKernel& o) const;

  int m_ = 0;
  std::vector<double> center_;
  std::map<int, CliffordPoly> terms_;
};

RationalKernel operator+(RationalKernel a, const RationalKernel& b);
RationalKernel operator-(RationalKernel a, const RationalKernel& b);
RationalKernel operator*(RationalKernel a, double s);

/// Exact d/dx_i: (d_i N)|X|^{-s} - s X_i N |X|^{-s-2}.
RationalKernel differentiate_x(const RationalKernel& k, int i);
RationalKernel dirac_x_left(const RationalKernel& k);
RationalKernel dirac_x_right(const RationalKernel& k);
RationalKernel conjugation(const RationalKernel& k);

RationalKernel proj_plus(const RationalKernel& k, int deg);
RationalKernel proj_minus(const RationalKernel& k, int deg);
RationalKernel proj_plus_right(const RationalKernel& k, int deg);
RationalKernel proj_minus_right(const RationalKernel& k, int deg);

/// Value space check by sampling the kernel at fixed points around its center.
double domain_residual(const RationalKernel& k, int deg, ValueSpace s);

/// Numeric substitution of x; the result is a polynomial in u and v.
CliffordPoly evaluate_kernel(const RationalKernel& k, std::span<const double> x);

/// E_k^{2j-1}(x-y,u,v) = lambda (x-y) Z_k((x-y)u(x-y), v) |x-y|^{-(m-2j+2+2k)}.
RationalKernel build_Ek(int m, int k, int j, std::span<const double> y, const ZonalKernel& z,
                        double lambda);

/// Kernel used in the left slot of the u-pairing in the integral formulas:
/// the Clifford conjugate of E_k^{2j-1}, which is right monogenic in u.
RationalKernel pairing_kernel(const RationalKernel& ek);

struct LadderResult {
  double residual = 0.0;        // max coefficient difference over the sample points
  double scale = 0.0;           // max coefficient size of E_lo over the sample points
  double ratio = 0.0;           // least-squares mu with factor(E_hi) ~ mu * E_lo
  double ratio_residual = 0.0;  // residual after dividing out mu
};

/// Sample points x with |x - y| in [0.5, 2], deterministic in the seed.
std::vector<std::vector<double>> ladder_sample_points(int m, std::span<const double> y,
                                                      int count, unsigned long long seed);

/// Compares (a_{j-1} T_k T_k^* + b_{j-1} R_k^2) E_hi with E_lo pointwise.
LadderResult ladder_check(const FermionicOperatorSpec& spec, const RationalKernel& e_hi,
                          const RationalKernel& e_lo, int points = 20,
                          unsigned long long seed = 7);

/// Calibrated constants lambda_{2j-1}.
struct LambdaEntry {
  double value = 0.0;
  double residual = 0.0;
  unsigned long long seed = 0;
};

class LambdaTable {
 public:
  void set(int m, int k, int j, LambdaEntry e) { entries_[{m, k, j}] = e; }
  bool contains(int m, int k, int j) const { return entries_.count({m, k, j}) != 0; }
  const LambdaEntry& at(int m, int k, int j) const;
  const std::map<std::array<int, 3>, LambdaEntry>& entries() const { return entries_; }

  std::string to_json() const;
  static LambdaTable from_json(const std::string& text);
  void save(const std::string& path) const;
  static LambdaTable load(const std::string& path);

 private:
  std::map<std::array<int, 3>, LambdaEntry> entries_;
};

}  // namespace higherspin
