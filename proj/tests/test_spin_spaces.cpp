#include <doctest.h>

#include <cmath>
#include <random>

#include "higherspin/operators.hpp"
#include "higherspin/spin_spaces.hpp"
#include "support.hpp"

using namespace higherspin;

namespace {

double binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Real dimensions: M_k is 2^m copies of the spherical monogenics of degree k,
// H_k is 2^m copies of the scalar spherical harmonics.
std::size_t dim_monogenic(int m, int k) {
  return static_cast<std::size_t>(std::lround(std::ldexp(binom(m + k - 2, k), m)));
}
std::size_t dim_harmonic(int m, int k) {
  return static_cast<std::size_t>(
      std::lround(std::ldexp(binom(m + k - 1, k) - binom(m + k - 3, k - 2), m)));
}

std::vector<CliffordPoly> orthonormalize(std::vector<CliffordPoly> basis) {
  std::vector<CliffordPoly> out;
  for (auto& b : basis) {
    for (const auto& q : out) b.add_scaled(q, -testing::real_inner(q, b));
    const double n = std::sqrt(testing::real_inner(b, b));
    if (n > 1e-10) out.push_back(b * (1.0 / n));
  }
  return out;
}

}  // namespace

TEST_CASE("space dimensions") {
  CHECK(build_monogenic_basis(3, 1).dimension() == 16);
  CHECK(build_harmonic_basis(3, 2).dimension() == 40);
  for (int m = 3; m <= 4; ++m)
    for (int k = 0; k <= 3; ++k) {
      CAPTURE(m);
      CAPTURE(k);
      CHECK(build_monogenic_basis(m, k).dimension() == dim_monogenic(m, k));
      CHECK(build_harmonic_basis(m, k).dimension() == dim_harmonic(m, k));
    }
}

TEST_CASE("basis elements lie in their spaces") {
  const auto mk = build_monogenic_basis(3, 2);
  for (const auto& f : mk.elements) {
    CHECK(f.is_homogeneous(Group::U, 2));
    CHECK(dirac_left(f, Group::U).max_abs() < 1e-12);
  }
  const auto hk = build_harmonic_basis(4, 2);
  for (const auto& h : hk.elements) CHECK(laplacian(h, Group::U).max_abs() < 1e-12);
  CHECK(mk.min_gram_singular_value > 1e-6);
}

TEST_CASE("Almansi-Fischer projections") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal;
  for (int m = 3; m <= 4; ++m)
    for (int k = 1; k <= 3; ++k) {
      const auto hk = build_harmonic_basis(m, k);
      CliffordPoly h(m);
      for (const auto& e : hk.elements) h.add_scaled(e, normal(rng));
      const auto [plus, minus] = almansi_fischer_split(h, k);
      const double s = h.max_abs();
      CHECK((plus + minus - h).max_abs() < 1e-10 * s);
      CHECK((proj_plus(plus, k) - plus).max_abs() < 1e-10 * s);
      CHECK(proj_minus(plus, k).max_abs() < 1e-10 * s);
      CHECK(dirac_left(plus, Group::U).max_abs() < 1e-10 * s);
      CHECK(domain_residual(minus, k, ValueSpace::UMk1) < 1e-10);
    }
  CHECK_THROWS_AS(almansi_fischer_split(CliffordPoly::variable(3, Group::U, 0) *
                                            CliffordPoly::variable(3, Group::U, 0),
                                        2),
                  Error);
}

TEST_CASE("zonal kernel matches the orthonormal-basis closed form") {
  for (auto [m, k] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{4, 1}}) {
    CAPTURE(m);
    CAPTURE(k);
    const auto mk = build_monogenic_basis(m, k);
    const ZonalKernel z = build_zonal_kernel(mk);
    CHECK(z.residual < kReproducingTolerance);
    CliffordPoly oracle(m);
    for (const auto& phi : orthonormalize(mk.elements))
      oracle += phi * conjugation(rename_group(phi, Group::U, Group::V));
    oracle *= std::ldexp(1.0, -m);
    CHECK((z.poly - oracle).max_abs() < 1e-9);
  }
}

TEST_CASE("reproducing identity on random M_k elements") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  const auto mk = build_monogenic_basis(3, 2);
  const ZonalKernel z = build_zonal_kernel(mk);
  for (int n = 0; n < 10; ++n) {
    CliffordPoly f(3);
    for (const auto& e : mk.elements) f.add_scaled(e, normal(rng));
    CHECK(reproducing_residual(z, f) < 1e-10 * f.max_abs());
  }
}

TEST_CASE("rk-null basis elements are annihilated by R_k") {
  const auto null = build_rk_null_basis(3, 1, 1);
  REQUIRE(null.dimension() > 0);
  for (const auto& f : null.elements) {
    CHECK(f.is_homogeneous(Group::X, 1));
    CHECK(apply_Rk(f, 1).max_abs() < 1e-10);
  }
  CHECK(build_rk_null_basis(3, 2, 1).dimension() > 0);
}
