#include <doctest.h>

#include <random>

#include "higherspin/calibration.hpp"
#include "higherspin/field_eval.hpp"
#include "support.hpp"

using namespace higherspin;

namespace {

CliffordPoly at_x(const CliffordPoly& p, std::span<const double> x) {
  Assignment a;
  a.set(Group::X, std::vector<double>(x.begin(), x.end()));
  return evaluate(p, a);
}

CliffordPoly field(const PolySpaceBasis& mk, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const int m = mk.m;
  CliffordPoly f(m);
  for (const auto& phi : mk.elements) {
    CliffordPoly c = CliffordPoly::scalar(m, normal(rng));
    for (int i = 0; i < m; ++i) c += CliffordPoly::variable(m, Group::X, i) * normal(rng);
    f += c * phi;
  }
  return f;
}

}  // namespace

TEST_CASE("dense pairing matches the symbolic u-pairing on the sphere") {
  std::mt19937_64 rng(61);
  const int m = 3, k = 1;
  const auto& mk = spin_context(m, k).monogenic;
  const CliffordPoly left = conjugation(field(mk, rng));
  const CliffordPoly right = field(mk, rng);
  const std::vector<double> c{0.1, 0.0, -0.2};
  const SphereRule rule = build_sphere_rule(m, 8, c, 0.9);

  const auto dense = boundary_pairing(rule, CompiledField(left, k), CompiledField(right, k),
                                      UPairing(m, k));
  const Multivector symbolic =
      integrate_surface(rule, [&](std::span<const double> x, const Multivector& n) {
        return pairing_u(at_x(left, x), n * at_x(right, x));
      });
  CHECK(testing::max_diff(Multivector(m, dense), symbolic) < 1e-12);
}

TEST_CASE("compiled kernels keep the v variable and agree with symbolic evaluation") {
  const int m = 3, k = 1;
  const auto& ctx = spin_context(m, k);
  const std::vector<double> y{0.1, -0.2, 0.15}, x{0.5, 0.4, -0.6};
  const RationalKernel e = pairing_kernel(build_Ek(m, k, 1, y, ctx.zonal, 1.0));
  const CompiledField compiled(e, k);
  CHECK(compiled.v_slots() == 3);
  CHECK(compiled.u_slots() == 3);
  std::vector<double> buf(compiled.width());
  compiled.evaluate(x, buf);

  const CliffordPoly sym = evaluate_kernel(e, x);
  const auto exps = homogeneous_exponents(m, k);
  for (const auto& [mono, coef] : sym.terms()) {
    std::size_t vi = 0, ui = 0;
    for (std::size_t a = 0; a < exps.size(); ++a) {
      bool vmatch = true, umatch = true;
      for (int i = 0; i < m; ++i) {
        vmatch = vmatch && mono.exp(Group::V, i) == exps[a][i];
        umatch = umatch && mono.exp(Group::U, i) == exps[a][i];
      }
      if (vmatch) vi = a;
      if (umatch) ui = a;
    }
    for (std::uint32_t b = 0; b < 8; ++b)
      CHECK(buf[(vi * exps.size() + ui) * 8 + b] == doctest::Approx(coef[b]).epsilon(1e-13));
  }
}

TEST_CASE("v blocks round trip") {
  std::mt19937_64 rng(62);
  CliffordPoly p(3);
  for (const auto& e : homogeneous_exponents(3, 2)) {
    Monomial mono;
    for (int i = 0; i < 3; ++i) mono.set(Group::V, i, e[i]);
    p.add_term(mono, testing::random_mv(3, rng));
  }
  CHECK((from_v_block(3, 2, v_block(p, 2)) - p).max_abs() == 0.0);
  CHECK_THROWS_AS(v_block(CliffordPoly::variable(3, Group::X, 0), 0), Error);
}

TEST_CASE("pairings reject v-dependent right factors") {
  const int m = 3, k = 1;
  const auto& ctx = spin_context(m, k);
  const std::vector<double> y{0.0, 0.0, 0.0};
  const CompiledField kernel(build_Ek(m, k, 1, y, ctx.zonal, 1.0), k);
  const SphereRule rule = build_sphere_rule(m, 4, y, 1.0);
  CHECK_THROWS_AS(boundary_pairing(rule, kernel, kernel, UPairing(m, k)), Error);
}
