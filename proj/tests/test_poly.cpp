#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "higherspin/poly.hpp"
#include "higherspin/quadrature.hpp"
#include "support.hpp"

using namespace higherspin;

namespace {

Multivector value_at(const CliffordPoly& p, Group g, const std::vector<double>& x) {
  Assignment a;
  a.set(g, x);
  const CliffordPoly r = evaluate(p, a);
  Multivector out(p.dim());
  for (const auto& [mono, c] : r.terms()) out += c;
  return out;
}

}  // namespace

TEST_CASE("graded-lex order and pruning") {
  Monomial a, b;
  a.set(Group::X, 0, 2);
  b.set(Group::X, 1, 1);
  CHECK(b < a);
  CliffordPoly p(3);
  p.add_term(a, Multivector::scalar(3, 1.0));
  p.add_term(a, Multivector::scalar(3, -1.0 + 1e-16));
  p.prune();
  CHECK(p.is_zero());
}

TEST_CASE("product rule for the partial derivative") {
  std::mt19937_64 rng(21);
  const int m = 3;
  const CliffordPoly p = testing::random_poly(m, Group::X, 2, rng);
  const CliffordPoly q = testing::random_poly(m, Group::X, 3, rng);
  for (int i = 0; i < m; ++i) {
    const CliffordPoly lhs = derivative(p * q, Group::X, i);
    const CliffordPoly rhs = derivative(p, Group::X, i) * q + p * derivative(q, Group::X, i);
    CHECK((lhs - rhs).max_abs() < 1e-12);
  }
}

TEST_CASE("Dirac operator squares to minus the Laplacian") {
  std::mt19937_64 rng(4);
  for (int m = 3; m <= 5; ++m) {
    const CliffordPoly p = testing::random_poly(m, Group::U, 3, rng);
    CHECK((dirac_left(dirac_left(p, Group::U), Group::U) + laplacian(p, Group::U)).max_abs() <
          1e-12);
    CHECK((dirac_right(dirac_right(p, Group::U), Group::U) + laplacian(p, Group::U)).max_abs() <
          1e-12);
  }
}

TEST_CASE("Euler operator detects homogeneity") {
  std::mt19937_64 rng(9);
  CliffordPoly p(3);
  for (const auto& e : homogeneous_exponents(3, 3)) {
    Monomial mono;
    for (int i = 0; i < 3; ++i) mono.set(Group::U, i, e[i]);
    p.add_term(mono, testing::random_mv(3, rng));
  }
  CHECK(p.is_homogeneous(Group::U, 3));
  CHECK((euler_degree(p, Group::U) - p * 3.0).max_abs() < 1e-12);
  CHECK(homogeneous_exponents(3, 3).size() == 10);
  CHECK(homogeneous_exponents(4, 2).size() == 10);
}

TEST_CASE("evaluation agrees with substitution and translation") {
  std::mt19937_64 rng(12);
  const int m = 3;
  const CliffordPoly p = testing::random_poly(m, Group::X, 3, rng);
  const std::vector<double> x{0.3, -0.7, 1.1}, shift{0.5, 0.25, -0.4};
  std::vector<double> xs(m);
  for (int i = 0; i < m; ++i) xs[i] = x[i] + shift[i];
  CHECK(testing::max_diff(value_at(translate(p, Group::X, shift), Group::X, x),
                          value_at(p, Group::X, xs)) < 1e-12);

  std::vector<CliffordPoly> repl;
  for (int i = 0; i < m; ++i)
    repl.push_back(CliffordPoly::variable(m, Group::V, i) + CliffordPoly::scalar(m, shift[i]));
  const CliffordPoly sub = substitute(p, Group::X, repl);
  CHECK(testing::max_diff(value_at(sub, Group::V, x), value_at(p, Group::X, xs)) < 1e-12);
}

TEST_CASE("sphere moments match the Gamma-function closed form") {
  // int_S u^alpha = 2 prod Gamma((a_i+1)/2) / Gamma((|a|+m)/2) for even alpha.
  for (int m = 3; m <= 6; ++m)
    for (int d = 0; d <= 6; ++d)
      for (const auto& a : homogeneous_exponents(m, d)) {
        bool even = true;
        double num = 2.0;
        for (int e : a) {
          even = even && e % 2 == 0;
          num *= std::tgamma((e + 1) / 2.0);
        }
        const double expect = even ? num / std::tgamma((d + m) / 2.0) : 0.0;
        CHECK(sphere_moment(m, a) == doctest::Approx(expect).epsilon(1e-13));
      }
  CHECK(sphere_moment(3, std::vector<int>{0, 0, 0}) == doctest::Approx(4.0 * std::numbers::pi));
}

TEST_CASE("sphere moments agree with Monte Carlo sampling") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  const int m = 4, n = 200000;
  const std::vector<std::vector<int>> alphas{{2, 0, 0, 0}, {2, 2, 0, 0}, {4, 0, 2, 0}, {1, 1, 0, 0}};
  std::vector<double> sums(alphas.size(), 0.0);
  for (int s = 0; s < n; ++s) {
    std::vector<double> u(m);
    double r2 = 0.0;
    for (auto& t : u) {
      t = normal(rng);
      r2 += t * t;
    }
    for (auto& t : u) t /= std::sqrt(r2);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      double v = 1.0;
      for (int i = 0; i < m; ++i) v *= std::pow(u[i], alphas[a][i]);
      sums[a] += v;
    }
  }
  const double area = sphere_area(m);
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const double mc = area * sums[a] / n;
    CHECK(std::abs(mc - sphere_moment(m, alphas[a])) < 0.02 * area / std::sqrt(10.0));
  }
}

TEST_CASE("u-pairing is not conjugated and integrates exactly") {
  const int m = 3;
  const CliffordPoly u1 = CliffordPoly::variable(m, Group::U, 0);
  const CliffordPoly e1 = CliffordPoly::constant(Multivector::basis_vector(m, 0));
  const Multivector r = pairing_u(e1 * u1, e1 * u1);
  CHECK(r.scalar_part() == doctest::Approx(-4.0 * std::numbers::pi / 3.0));
  CHECK_THROWS_AS(pairing_u(CliffordPoly::variable(m, Group::X, 0), u1), Error);
}
