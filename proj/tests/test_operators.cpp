#include <doctest.h>

#include <random>

#include "higherspin/operators.hpp"
#include "support.hpp"

using namespace higherspin;

namespace {

CliffordPoly random_field(const PolySpaceBasis& basis, int x_degree, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const int m = basis.m;
  CliffordPoly f(m);
  for (int d = 0; d <= x_degree; ++d)
    for (const auto& e : homogeneous_exponents(m, d)) {
      CliffordPoly xm = CliffordPoly::scalar(m, 1.0);
      for (int i = 0; i < m; ++i)
        for (int p = 0; p < e[i]; ++p) xm = xm * CliffordPoly::variable(m, Group::X, i);
      for (const auto& phi : basis.elements) f += xm * phi * normal(rng);
    }
  return f;
}

CliffordPoly times_u(const CliffordPoly& h) {
  return CliffordPoly::vector_variable(h.dim(), Group::U) * h;
}

}  // namespace

TEST_CASE("coefficients a_s") {
  CHECK(coeff_a(3, 1, 1) == Rational(-4, 1 * 5));
  CHECK(coeff_a(3, 2, 2) == Rational(-16, 1 * 9));
  CHECK_THROWS_AS(coeff_a(3, 1, 2), Error);
  CHECK(FermionicOperatorSpec::valid(3, 2, 3));
  CHECK_FALSE(FermionicOperatorSpec::valid(3, 1, 3));
  const auto spec = FermionicOperatorSpec::make(4, 2, 2);
  CHECK(spec.a.size() == 1);
  CHECK(spec.b_value(1) == 1.0);
}

TEST_CASE("operators map into their target spaces") {
  std::mt19937_64 rng(41);
  const int m = 3, k = 2;
  const auto mk = build_monogenic_basis(m, k);
  const auto mk1 = build_monogenic_basis(m, k - 1);
  const CliffordPoly f = random_field(mk, 2, rng);
  const CliffordPoly g = times_u(random_field(mk1, 2, rng));
  CHECK(domain_residual(apply_Rk(f, k), k, ValueSpace::Mk) < 1e-12);
  CHECK(domain_residual(apply_Tk_star(f, k), k, ValueSpace::UMk1) < 1e-12);
  CHECK(domain_residual(apply_Tk(g, k), k, ValueSpace::Mk) < 1e-12);
  CHECK(domain_residual(apply_Qk(g, k), k, ValueSpace::UMk1) < 1e-12);
  CHECK((apply_Rk(f, k) + apply_Tk_star(f, k) - dirac_x_left(f)).max_abs() < 1e-12);
}

TEST_CASE("domain violations are reported") {
  const int m = 3, k = 1;
  const CliffordPoly not_monogenic =
      CliffordPoly::variable(m, Group::U, 0) * CliffordPoly::variable(m, Group::X, 1);
  try {
    (void)apply_Rk(not_monogenic, k);
    FAIL("expected a domain violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainViolation);
  }
}

TEST_CASE("right operators are conjugates of the left ones") {
  std::mt19937_64 rng(43);
  const int m = 3, k = 1;
  const auto mk = build_monogenic_basis(m, k);
  const CliffordPoly f = random_field(mk, 2, rng);
  const CliffordPoly g = conjugation(f);
  CHECK((apply_right_Rk(g, k) + conjugation(apply_Rk(f, k))).max_abs() < 1e-12);
  CHECK((apply_right_Tk_star(g, k) + conjugation(apply_Tk_star(f, k))).max_abs() < 1e-12);
}

TEST_CASE("fermionic operator lowers x-degree by 2j-1") {
  std::mt19937_64 rng(44);
  const int m = 3, k = 2, j = 3;
  const auto spec = FermionicOperatorSpec::make(m, k, j);
  const auto mk = build_monogenic_basis(m, k);
  CliffordPoly f(m);
  for (const auto& e : homogeneous_exponents(m, 6)) {
    CliffordPoly xm = CliffordPoly::scalar(m, 1.0);
    for (int i = 0; i < m; ++i)
      for (int p = 0; p < e[i]; ++p) xm = xm * CliffordPoly::variable(m, Group::X, i);
    f += xm * mk.elements[e[0] % mk.elements.size()];
  }
  const CliffordPoly d = apply_fermionic(spec, f);
  CHECK_FALSE(d.is_zero());
  CHECK(d.is_homogeneous(Group::X, 1));
  const CliffordPoly low = random_field(mk, 2 * j - 2, rng);
  CHECK(apply_fermionic(spec, low).max_abs() < 1e-10);
}

TEST_CASE("R_k commutes with the ladder factor") {
  std::mt19937_64 rng(45);
  for (auto [m, k] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{4, 2}}) {
    const auto spec = FermionicOperatorSpec::make(m, k, 2);
    const auto mk = build_monogenic_basis(m, k);
    for (int n = 0; n < 5; ++n) {
      const CliffordPoly f = random_field(mk, 4, rng);
      const CliffordPoly a = apply_Rk(apply_ladder_factor(spec, 1, f), k);
      const CliffordPoly b = apply_ladder_factor(spec, 1, apply_Rk(f, k));
      CHECK((a - b).max_abs() < 1e-10 * std::max(1.0, a.max_abs()));
    }
  }
}
