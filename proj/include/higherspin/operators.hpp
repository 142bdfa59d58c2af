#pragma once

// Rarita-Schwinger type operators R_k, T_k, T_k^*, Q_k and the odd order
// fermionic operators built from them.
//
// The operators are written once as templates over a "field" type: anything
// with overloads of dirac_x_left / dirac_x_right (Dirac operator in x acting
// from the left / right), the four u-projections, and domain_residual. Both
// CliffordPoly and RationalKernel qualify.

#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "higherspin/poly.hpp"
#include "higherspin/spin_spaces.hpp"

namespace higherspin {

using Rational = boost::rational<long long>;

/// Which value space a function is expected to take in the u variable.
enum class ValueSpace {
  Mk,         // left monogenic, degree k
  UMk1,       // u M_{k-1}
  RightMk,    // right monogenic, degree k
  RightUMk1,  // M_{k-1} u with right monogenic factor
};

const char* value_space_name(ValueSpace s) noexcept;

inline constexpr double kDomainTolerance = 1e-8;

inline CliffordPoly dirac_x_left(const CliffordPoly& p) { return dirac_left(p, Group::X); }
inline CliffordPoly dirac_x_right(const CliffordPoly& p) { return dirac_right(p, Group::X); }

/// Relative distance of f from the value space (0 when f is exactly inside).
double domain_residual(const CliffordPoly& f, int k, ValueSpace s);

/// Throws ErrorCode::DomainViolation when domain_residual exceeds kDomainTolerance.
template <class Field>
void check_domain(const Field& f, int k, ValueSpace s, const char* op) {
  const double r = domain_residual(f, k, s);
  require(r <= kDomainTolerance, ErrorCode::DomainViolation,
          std::string(op) + ": argument is not " + value_space_name(s) +
              "-valued (residual " + std::to_string(r) + ")");
}

/// a_s = -4 s^2 / ((m+2k-2s-2)(m+2k+2s-2)); both factors must be positive.
Rational coeff_a(int m, int k, int s);

/// (m, k, j) together with the coefficient sequences of D_{2j-1}.
struct FermionicOperatorSpec {
  int m = 0;
  int k = 0;
  int j = 1;
  std::vector<Rational> a;  // a[s-1] for s = 1..j-1
  std::vector<Rational> b;  // all ones

  static FermionicOperatorSpec make(int m, int k, int j);
  double a_value(int s) const { return boost::rational_cast<double>(a.at(s - 1)); }
  double b_value(int s) const { return boost::rational_cast<double>(b.at(s - 1)); }
  /// True when every factor of every a_s is positive.
  static bool valid(int m, int k, int j);
};

// ------------------------------------------------------------ left action

template <class Field>
Field apply_Rk(const Field& f, int k, bool check = true) {
  if (check) check_domain(f, k, ValueSpace::Mk, "R_k");
  return proj_plus(dirac_x_left(f), k);
}

template <class Field>
Field apply_Tk(const Field& f, int k, bool check = true) {
  if (check) check_domain(f, k, ValueSpace::UMk1, "T_k");
  return proj_plus(dirac_x_left(f), k);
}

template <class Field>
Field apply_Tk_star(const Field& f, int k, bool check = true) {
  if (check) check_domain(f, k, ValueSpace::Mk, "T_k^*");
  return proj_minus(dirac_x_left(f), k);
}

template <class Field>
Field apply_Qk(const Field& f, int k, bool check = true) {
  if (check) check_domain(f, k, ValueSpace::UMk1, "Q_k");
  return proj_minus(dirac_x_left(f), k);
}

/// (a_s T_k T_k^* + b_s R_k^2) f.
template <class Field>
Field apply_ladder_factor(const FermionicOperatorSpec& spec, int s, const Field& f,
                          bool check = true) {
  const int k = spec.k;
  Field tt = apply_Tk(apply_Tk_star(f, k, check), k, false);
  Field rr = apply_Rk(apply_Rk(f, k, false), k, false);
  tt *= spec.a_value(s);
  rr *= spec.b_value(s);
  tt += rr;
  return tt;
}

/// D_{2j-1} f = R_k prod_{s=1}^{j-1} (a_s T_k T_k^* + b_s R_k^2) f, rightmost factor first.
template <class Field>
Field apply_fermionic(const FermionicOperatorSpec& spec, const Field& f, bool check = true) {
  if (check) check_domain(f, spec.k, ValueSpace::Mk, "D_{2j-1}");
  Field cur = f;
  for (int s = spec.j - 1; s >= 1; --s) cur = apply_ladder_factor(spec, s, cur, false);
  return apply_Rk(cur, spec.k, false);
}

// ----------------------------------------------------------- right action

template <class Field>
Field apply_right_Rk(const Field& g, int k, bool check = true) {
  if (check) check_domain(g, k, ValueSpace::RightMk, "right R_k");
  return proj_plus_right(dirac_x_right(g), k);
}

template <class Field>
Field apply_right_Tk(const Field& g, int k, bool check = true) {
  if (check) check_domain(g, k, ValueSpace::RightUMk1, "right T_k");
  return proj_plus_right(dirac_x_right(g), k);
}

template <class Field>
Field apply_right_Tk_star(const Field& g, int k, bool check = true) {
  if (check) check_domain(g, k, ValueSpace::RightMk, "right T_k^*");
  return proj_minus_right(dirac_x_right(g), k);
}

template <class Field>
Field apply_right_Qk(const Field& g, int k, bool check = true) {
  if (check) check_domain(g, k, ValueSpace::RightUMk1, "right Q_k");
  return proj_minus_right(dirac_x_right(g), k);
}

/// g (T_k^* T_k a_s + R_k^2 b_s) with every operator acting from the right.
template <class Field>
Field apply_right_ladder_factor(const FermionicOperatorSpec& spec, int s, const Field& g,
                                bool check = true) {
  const int k = spec.k;
  Field tt = apply_right_Tk(apply_right_Tk_star(g, k, check), k, false);
  Field rr = apply_right_Rk(apply_right_Rk(g, k, false), k, false);
  tt *= spec.a_value(s);
  rr *= spec.b_value(s);
  tt += rr;
  return tt;
}

}  // namespace higherspin
