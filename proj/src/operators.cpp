#include "higherspin/operators.hpp"

#include <limits>

namespace higherspin {

const char* value_space_name(ValueSpace s) noexcept {
  switch (s) {
    case ValueSpace::Mk: return "M_k";
    case ValueSpace::UMk1: return "uM_{k-1}";
    case ValueSpace::RightMk: return "right M_k";
    case ValueSpace::RightUMk1: return "right M_{k-1}u";
  }
  return "?";
}

double domain_residual(const CliffordPoly& f, int k, ValueSpace s) {
  if (f.is_zero()) return 0.0;
  if (!f.is_homogeneous(Group::U, k)) return std::numeric_limits<double>::infinity();
  const double scale = f.max_abs();
  switch (s) {
    case ValueSpace::Mk:
      return dirac_left(f, Group::U).max_abs() / scale;
    case ValueSpace::RightMk:
      return dirac_right(f, Group::U).max_abs() / scale;
    case ValueSpace::UMk1:
      return (laplacian(f, Group::U).max_abs() + proj_plus(f, k).max_abs()) / scale;
    case ValueSpace::RightUMk1:
      return (laplacian(f, Group::U).max_abs() + proj_plus_right(f, k).max_abs()) / scale;
  }
  return 0.0;
}

Rational coeff_a(int m, int k, int s) {
  require(s >= 1, ErrorCode::InvalidArgument, "coefficient index s must be >= 1");
  const long long lo = m + 2 * k - 2 * s - 2;
  const long long hi = m + 2 * k + 2 * s - 2;
  require(lo > 0, ErrorCode::InvalidArgument,
          "a_s undefined: factor m+2k-2s-2 = " + std::to_string(lo) + " is not positive (m=" +
              std::to_string(m) + ", k=" + std::to_string(k) + ", s=" + std::to_string(s) + ")");
  require(hi > 0, ErrorCode::InvalidArgument,
          "a_s undefined: factor m+2k+2s-2 = " + std::to_string(hi) + " is not positive");
  return Rational(-4LL * s * s, lo * hi);
}

bool FermionicOperatorSpec::valid(int m, int k, int j) {
  if (m < 3 || m > kMaxDim || k < 0 || j < 1) return false;
  for (int s = 1; s <= j - 1; ++s)
    if (m + 2 * k - 2 * s - 2 <= 0) return false;
  return true;
}

FermionicOperatorSpec FermionicOperatorSpec::make(int m, int k, int j) {
  require(m >= 3 && m <= kMaxDim, ErrorCode::InvalidArgument, "m must lie in [3, 8]");
  require(k >= 0, ErrorCode::InvalidArgument, "k must be non-negative");
  require(j >= 1, ErrorCode::InvalidArgument, "j must be >= 1");
  FermionicOperatorSpec spec;
  spec.m = m;
  spec.k = k;
  spec.j = j;
  for (int s = 1; s <= j - 1; ++s) {
    spec.a.push_back(coeff_a(m, k, s));
    spec.b.push_back(Rational(1));
  }
  return spec;
}

}  // namespace higherspin
