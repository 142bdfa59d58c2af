#include "higherspin/multivector.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <sstream>

namespace higherspin {
namespace {

constexpr std::uint32_t kMaxBlades = 1u << kMaxDim;

constexpr int compute_sign(std::uint32_t a, std::uint32_t b) {
  // Transpositions needed to move each factor of b past the larger factors of a.
  int swaps = 0;
  for (std::uint32_t rest = b; rest != 0; rest &= rest - 1) {
    const int i = std::countr_zero(rest);
    swaps += std::popcount(a >> (i + 1));
  }
  // Each shared generator contributes e_i^2 = -1.
  swaps += std::popcount(a & b);
  return (swaps & 1) ? -1 : 1;
}

struct SignTable {
  std::array<std::int8_t, kMaxBlades * kMaxBlades> s{};
  SignTable() {
    for (std::uint32_t a = 0; a < kMaxBlades; ++a)
      for (std::uint32_t b = 0; b < kMaxBlades; ++b)
        s[a * kMaxBlades + b] = static_cast<std::int8_t>(compute_sign(a, b));
  }
};

const SignTable& sign_table() {
  static const SignTable table;
  return table;
}

template <int M>
constexpr auto fixed_signs() {
  constexpr std::uint32_t n = 1u << M;
  std::array<double, n * n> s{};
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) s[a * n + b] = compute_sign(a, b);
  return s;
}

template <int M>
void product_fixed(const double* a, const double* b, double* out) noexcept {
  constexpr std::uint32_t n = 1u << M;
  static constexpr auto signs = fixed_signs<M>();
  for (std::uint32_t i = 0; i < n; ++i) {
    const double ai = a[i];
    const double* row = signs.data() + i * n;
    for (std::uint32_t j = 0; j < n; ++j) out[i ^ j] += row[j] * ai * b[j];
  }
}

void check_dim(int m) {
  require(m >= 1 && m <= kMaxDim, ErrorCode::InvalidArgument,
          "Clifford dimension must lie in [1, " + std::to_string(kMaxDim) + "], got " +
              std::to_string(m));
}

}  // namespace

int blade_sign(std::uint32_t a, std::uint32_t b) noexcept {
  return sign_table().s[a * kMaxBlades + b];
}

void geometric_product_accumulate(const double* a, const double* b, double* out,
                                  int m) noexcept {
  switch (m) {
    case 1: return product_fixed<1>(a, b, out);
    case 2: return product_fixed<2>(a, b, out);
    case 3: return product_fixed<3>(a, b, out);
    case 4: return product_fixed<4>(a, b, out);
    case 5: return product_fixed<5>(a, b, out);
    case 6: return product_fixed<6>(a, b, out);
    default: break;
  }
  const std::uint32_t n = 1u << m;
  const auto& s = sign_table().s;
  for (std::uint32_t i = 0; i < n; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const std::int8_t* row = &s[i * kMaxBlades];
    for (std::uint32_t j = 0; j < n; ++j) {
      const double bj = b[j];
      if (bj == 0.0) continue;
      out[i ^ j] += row[j] * ai * bj;
    }
  }
}

Multivector::Multivector(int m) : m_(m) {
  check_dim(m);
  c_.assign(std::size_t{1} << m, 0.0);
}

Multivector::Multivector(int m, std::span<const double> coeffs) : Multivector(m) {
  require(coeffs.size() == c_.size(), ErrorCode::DimensionMismatch,
          "expected " + std::to_string(c_.size()) + " coefficients, got " +
              std::to_string(coeffs.size()));
  std::copy(coeffs.begin(), coeffs.end(), c_.begin());
}

Multivector Multivector::scalar(int m, double s) {
  Multivector r(m);
  r.c_[0] = s;
  return r;
}

Multivector Multivector::basis_vector(int m, int i) {
  require(i >= 0 && i < m, ErrorCode::InvalidArgument, "basis index out of range");
  return blade(m, 1u << i);
}

Multivector Multivector::blade(int m, std::uint32_t mask, double c) {
  Multivector r(m);
  require(mask < r.c_.size(), ErrorCode::InvalidArgument, "blade mask out of range");
  r.c_[mask] = c;
  return r;
}

Multivector Multivector::vector(int m, std::span<const double> components) {
  require(static_cast<int>(components.size()) == m, ErrorCode::DimensionMismatch,
          "vector needs exactly m components");
  Multivector r(m);
  for (int i = 0; i < m; ++i) r.c_[1u << i] = components[i];
  return r;
}

Multivector& Multivector::operator+=(const Multivector& o) {
  require(o.m_ == m_, ErrorCode::DimensionMismatch, "multivector dimension mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& o) {
  require(o.m_ == m_, ErrorCode::DimensionMismatch, "multivector dimension mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Multivector& Multivector::operator*=(double s) noexcept {
  for (double& v : c_) v *= s;
  return *this;
}

Multivector& Multivector::add_scaled(const Multivector& o, double s) {
  require(o.m_ == m_, ErrorCode::DimensionMismatch, "multivector dimension mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += s * o.c_[i];
  return *this;
}

Multivector Multivector::reversion() const {
  Multivector r(*this);
  for (std::uint32_t a = 0; a < c_.size(); ++a) {
    const int g = std::popcount(a);
    if ((g * (g - 1) / 2) & 1) r.c_[a] = -r.c_[a];
  }
  return r;
}

Multivector Multivector::conjugation() const {
  Multivector r(*this);
  for (std::uint32_t a = 0; a < c_.size(); ++a) {
    const int g = std::popcount(a);
    if ((g * (g + 1) / 2) & 1) r.c_[a] = -r.c_[a];
  }
  return r;
}

Multivector Multivector::grade_project(int r) const {
  require(r >= 0 && r <= m_, ErrorCode::InvalidArgument,
          "grade " + std::to_string(r) + " outside [0, " + std::to_string(m_) + "]");
  Multivector out(m_);
  for (std::uint32_t a = 0; a < c_.size(); ++a)
    if (std::popcount(a) == r) out.c_[a] = c_[a];
  return out;
}

double Multivector::max_abs() const noexcept {
  double best = 0.0;
  for (double v : c_) best = std::max(best, std::abs(v));
  return best;
}

double Multivector::norm() const noexcept {
  double s = 0.0;
  for (double v : c_) s += v * v;
  return std::sqrt(s);
}

bool Multivector::is_vector(double tol) const noexcept {
  for (std::uint32_t a = 0; a < c_.size(); ++a)
    if (std::popcount(a) != 1 && std::abs(c_[a]) > tol) return false;
  return true;
}

std::string Multivector::to_string(int precision) const {
  std::ostringstream os;
  os.precision(precision);
  bool first = true;
  for (std::uint32_t a = 0; a < c_.size(); ++a) {
    if (c_[a] == 0.0) continue;
    if (!first) os << (c_[a] < 0 ? " - " : " + ");
    else if (c_[a] < 0) os << "-";
    first = false;
    const double mag = std::abs(c_[a]);
    if (a == 0 || mag != 1.0) os << mag << (a ? " " : "");
    for (int i = 0; i < m_; ++i)
      if (a & (1u << i)) os << "e" << (i + 1);
  }
  if (first) os << "0";
  return os.str();
}

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  require(a.dim() == b.dim(), ErrorCode::DimensionMismatch,
          "geometric product of Cl_" + std::to_string(a.dim()) + " and Cl_" +
              std::to_string(b.dim()) + " elements");
  Multivector r(a.dim());
  geometric_product_accumulate(a.data(), b.data(), r.data(), a.dim());
  return r;
}

Multivector reflect(const Multivector& v, const Multivector& x) {
  require(v.dim() == x.dim(), ErrorCode::DimensionMismatch, "reflect: dimension mismatch");
  require(v.is_vector(1e-12) && x.is_vector(1e-12), ErrorCode::InvalidArgument,
          "reflect: both arguments must be grade-1");
  require(std::abs(v.norm() - 1.0) <= 1e-10, ErrorCode::InvalidArgument,
          "reflect: direction must be a unit vector");
  return (v * x * v).grade_project(1);
}

Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
Multivector operator-(Multivector a) { return a *= -1.0; }
Multivector operator*(const Multivector& a, const Multivector& b) {
  return geometric_product(a, b);
}
Multivector operator*(Multivector a, double s) { return a *= s; }
Multivector operator*(double s, Multivector a) { return a *= s; }

}  // namespace higherspin
