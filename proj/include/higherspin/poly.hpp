#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "higherspin/multivector.hpp"

namespace higherspin {

/// Variable namespaces. Derivatives act only inside one group.
enum class Group : int { U = 0, X = 1, V = 2 };
inline constexpr std::array<Group, 3> kAllGroups{Group::U, Group::X, Group::V};
const char* group_name(Group g) noexcept;

inline constexpr double kDefaultPrune = 1e-14;

/// Multi-exponent over the three variable groups. Ordered graded-lexicographically.
class Monomial {
 public:
  static constexpr int kSlots = 3 * kMaxDim;

  std::uint8_t exp(Group g, int i) const noexcept { return e_[slot(g, i)]; }
  void set(Group g, int i, int power);
  void bump(Group g, int i, int delta);

  int degree() const noexcept { return deg_; }
  int degree(Group g) const noexcept;
  bool is_one() const noexcept { return deg_ == 0; }

  Monomial operator*(const Monomial& o) const;

  friend bool operator<(const Monomial& a, const Monomial& b) noexcept {
    if (a.deg_ != b.deg_) return a.deg_ < b.deg_;
    return a.e_ < b.e_;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
    return a.deg_ == b.deg_ && a.e_ == b.e_;
  }

 private:
  static constexpr int slot(Group g, int i) noexcept {
    return static_cast<int>(g) * kMaxDim + i;
  }
  std::array<std::uint8_t, kSlots> e_{};
  std::uint16_t deg_ = 0;
};

/// Numeric values for some of the variable groups.
struct Assignment {
  std::optional<std::vector<double>> u, x, v;

  const std::optional<std::vector<double>>& get(Group g) const;
  Assignment& set(Group g, std::vector<double> point);
};

/// Cl_m-valued polynomial in the groups u, x, v (each with m variables).
class CliffordPoly {
 public:
  using TermMap = std::map<Monomial, Multivector>;

  CliffordPoly() = default;
  explicit CliffordPoly(int m);

  static CliffordPoly constant(const Multivector& c);
  static CliffordPoly scalar(int m, double s);
  static CliffordPoly variable(int m, Group g, int i);  // scalar g_i
  /// Sum_i e_i g_i.
  static CliffordPoly vector_variable(int m, Group g);
  static CliffordPoly monomial(const Monomial& mono, const Multivector& c);

  int dim() const noexcept { return m_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add_term(const Monomial& mono, const Multivector& c, double scale = 1.0);
  CliffordPoly& prune(double threshold = kDefaultPrune);

  CliffordPoly& operator+=(const CliffordPoly& o);
  CliffordPoly& operator-=(const CliffordPoly& o);
  CliffordPoly& operator*=(double s);
  CliffordPoly& add_scaled(const CliffordPoly& o, double s);

  int max_degree(Group g) const noexcept;
  int min_degree(Group g) const noexcept;
  bool depends_on(Group g) const noexcept;
  bool is_homogeneous(Group g, int k) const noexcept;
  double max_abs() const noexcept;

  std::string to_string(int precision = 6) const;

 private:
  int m_ = 0;
  TermMap terms_;
};

CliffordPoly operator+(CliffordPoly a, const CliffordPoly& b);
CliffordPoly operator-(CliffordPoly a, const CliffordPoly& b);
CliffordPoly operator-(CliffordPoly a);
CliffordPoly operator*(CliffordPoly a, double s);
CliffordPoly operator*(double s, CliffordPoly a);
/// Polynomial product with Clifford-multiplied coefficients (order matters).
CliffordPoly operator*(const CliffordPoly& a, const CliffordPoly& b);
CliffordPoly operator*(const Multivector& c, const CliffordPoly& p);
CliffordPoly operator*(const CliffordPoly& p, const Multivector& c);

CliffordPoly conjugation(const CliffordPoly& p);
CliffordPoly reversion(const CliffordPoly& p);

CliffordPoly derivative(const CliffordPoly& p, Group g, int i);
CliffordPoly times_variable(const CliffordPoly& p, Group g, int i);
/// Sum_i e_i dp/dg_i.
CliffordPoly dirac_left(const CliffordPoly& p, Group g);
/// Sum_i (dp/dg_i) e_i.
CliffordPoly dirac_right(const CliffordPoly& p, Group g);
CliffordPoly laplacian(const CliffordPoly& p, Group g);
/// Sum_i g_i dp/dg_i; equals k p exactly when p is k-homogeneous in g.
CliffordPoly euler_degree(const CliffordPoly& p, Group g);

/// Substitutes numbers for the assigned groups.
CliffordPoly evaluate(const CliffordPoly& p, const Assignment& a);
/// Replaces g_i by replacement[i]; replacements must be scalar valued.
CliffordPoly substitute(const CliffordPoly& p, Group g,
                        std::span<const CliffordPoly> replacement);
/// p(g + offset).
CliffordPoly translate(const CliffordPoly& p, Group g, std::span<const double> offset);
/// Renames variables of group `from` into group `to` (which must be absent).
CliffordPoly rename_group(const CliffordPoly& p, Group from, Group to);

/// Exact integral over S^{m-1} of the monomial u^alpha.
double sphere_moment(int m, std::span<const int> alpha);
/// Integrates the u-variables over the unit sphere; other groups stay symbolic.
CliffordPoly integrate_sphere_u(const CliffordPoly& p);
/// Exact integral over S^{m-1}; p may depend on u only.
Multivector sphere_moment_integral(const CliffordPoly& p);
/// (P, Q)_u = int_S P(u) Q(u) dS(u), no conjugation; u-only arguments.
Multivector pairing_u(const CliffordPoly& p, const CliffordPoly& q);
/// Same pairing with x and v passengers left symbolic.
CliffordPoly pair_u(const CliffordPoly& p, const CliffordPoly& q);
/// int_S conj(P(u)) Q(u) dS(u).
CliffordPoly pair_u_conjugated(const CliffordPoly& p, const CliffordPoly& q);

/// All exponent vectors of total degree d in m variables, graded-lex order.
std::vector<std::vector<int>> homogeneous_exponents(int m, int d);

}  // namespace higherspin
