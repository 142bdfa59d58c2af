#pragma once

#include <cstdint>
#include <span>
#include <string>

#include <boost/container/small_vector.hpp>

#include "higherspin/error.hpp"

namespace higherspin {

inline constexpr int kMaxDim = 8;

/// Sign of the product e_A e_B = sign * e_{A xor B} in Cl_m with e_i^2 = -1.
/// Blades are bitmasks: bit i set means e_{i+1} is a factor.
int blade_sign(std::uint32_t a, std::uint32_t b) noexcept;

/// Accumulates out += a * b for raw coefficient arrays of length 2^m.
void geometric_product_accumulate(const double* a, const double* b, double* out,
                                  int m) noexcept;

/// Element of the real Clifford algebra Cl_m, stored densely as 2^m blade
/// coefficients indexed by bitmask.
class Multivector {
 public:
  using Storage = boost::container::small_vector<double, 32>;

  Multivector() = default;
  explicit Multivector(int m);
  Multivector(int m, std::span<const double> coeffs);

  static Multivector scalar(int m, double s);
  static Multivector basis_vector(int m, int i);  // e_{i+1}, 0-based i
  static Multivector blade(int m, std::uint32_t mask, double c = 1.0);
  static Multivector vector(int m, std::span<const double> components);

  int dim() const noexcept { return m_; }
  std::size_t size() const noexcept { return c_.size(); }
  double operator[](std::uint32_t mask) const noexcept { return c_[mask]; }
  double& operator[](std::uint32_t mask) noexcept { return c_[mask]; }
  const double* data() const noexcept { return c_.data(); }
  double* data() noexcept { return c_.data(); }
  std::span<const double> coeffs() const noexcept { return {c_.data(), c_.size()}; }

  Multivector& operator+=(const Multivector& o);
  Multivector& operator-=(const Multivector& o);
  Multivector& operator*=(double s) noexcept;
  Multivector& add_scaled(const Multivector& o, double s);

  Multivector reversion() const;
  Multivector conjugation() const;
  Multivector grade_project(int r) const;

  double scalar_part() const noexcept { return c_.empty() ? 0.0 : c_[0]; }
  double max_abs() const noexcept;
  double norm() const noexcept;  // Euclidean norm of the coefficient vector
  bool is_zero(double tol = 0.0) const noexcept { return max_abs() <= tol; }
  bool is_vector(double tol = 0.0) const noexcept;

  std::string to_string(int precision = 6) const;

  friend bool operator==(const Multivector& a, const Multivector& b) {
    return a.m_ == b.m_ && a.c_ == b.c_;
  }

 private:
  int m_ = 0;
  Storage c_;
};

Multivector geometric_product(const Multivector& a, const Multivector& b);
inline Multivector reversion(const Multivector& a) { return a.reversion(); }
inline Multivector clifford_conjugation(const Multivector& a) { return a.conjugation(); }
inline Multivector grade_project(const Multivector& a, int r) { return a.grade_project(r); }

/// v x v for a unit vector v and a vector x: flips the component of x along v.
Multivector reflect(const Multivector& v, const Multivector& x);

Multivector operator+(Multivector a, const Multivector& b);
Multivector operator-(Multivector a, const Multivector& b);
Multivector operator-(Multivector a);
Multivector operator*(const Multivector& a, const Multivector& b);
Multivector operator*(Multivector a, double s);
Multivector operator*(double s, Multivector a);

}  // namespace higherspin
