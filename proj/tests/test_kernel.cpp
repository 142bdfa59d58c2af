#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "higherspin/calibration.hpp"
#include "higherspin/kernel.hpp"
#include "higherspin/quadrature.hpp"
#include "support.hpp"

using namespace higherspin;

namespace {

const std::vector<double> kCenter{0.1, -0.2, 0.15};

double max_diff(const CliffordPoly& a, const CliffordPoly& b) { return (a - b).max_abs(); }

RationalKernel unit_kernel(int m, int k, int j) {
  std::vector<double> y(kCenter.begin(), kCenter.end());
  y.resize(m, 0.05);
  return build_Ek(m, k, j, y, spin_context(m, k).zonal, 1.0);
}

}  // namespace

TEST_CASE("exact x-derivative agrees with central differences") {
  const RationalKernel e = unit_kernel(3, 1, 1);
  const std::vector<double> x{0.7, 0.4, -0.3};
  const double h = 1e-5;
  for (int i = 0; i < 3; ++i) {
    std::vector<double> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const CliffordPoly fd =
        (evaluate_kernel(e, xp) - evaluate_kernel(e, xm)) * (1.0 / (2.0 * h));
    const CliffordPoly exact = evaluate_kernel(differentiate_x(e, i), x);
    CHECK(max_diff(fd, exact) < 1e-7 * std::max(1.0, exact.max_abs()));
  }
}

TEST_CASE("kernel homogeneity and degree bookkeeping") {
  for (auto [m, k, j] : {std::tuple{3, 1, 1}, std::tuple{3, 1, 2}, std::tuple{3, 2, 3},
                         std::tuple{4, 1, 1}, std::tuple{5, 1, 2}}) {
    const RationalKernel e = unit_kernel(m, k, j);
    REQUIRE(e.homogeneity().has_value());
    CHECK(*e.homogeneity() == 2 * j - 1 - m);
    const RationalKernel d = dirac_x_left(e);
    REQUIRE(d.homogeneity().has_value());
    CHECK(*d.homogeneity() == 2 * j - 2 - m);
  }
}

TEST_CASE("kernel is M_k valued and its pairing form is right monogenic in u") {
  const RationalKernel e = unit_kernel(3, 2, 2);
  CHECK(domain_residual(e, 2, ValueSpace::Mk) < 1e-10);
  CHECK(domain_residual(pairing_kernel(e), 2, ValueSpace::RightMk) < 1e-10);
}

TEST_CASE("first-order kernel is a null solution of R_k away from its pole") {
  for (auto [m, k] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{4, 1}}) {
    const RationalKernel e = unit_kernel(m, k, 1);
    const RationalKernel r = apply_Rk(e, k, false);
    std::mt19937_64 rng(3);
    for (int n = 0; n < 5; ++n) {
      auto x = testing::random_point(m, rng);
      const double scale = evaluate_kernel(e, x).max_abs();
      CHECK(evaluate_kernel(r, x).max_abs() < 1e-10 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("k = 0 reduces to the classical Cauchy kernel") {
  // With the u-sphere area omega_m absorbed by the pairing, the kernel is -x / (omega_m |x|^m).
  for (int m : {3, 4}) {
    LambdaTable table;
    const double lambda = calibrate_lambda(m, 0, 1, table);
    const std::vector<double> y(m, 0.0);
    const RationalKernel e = pairing_kernel(build_Ek(m, 0, 1, y, spin_context(m, 0).zonal, lambda));
    const double omega = sphere_area(m);
    std::mt19937_64 rng(m);
    for (int n = 0; n < 3; ++n) {
      const auto x = testing::random_point(m, rng);
      double r2 = 0.0;
      for (double t : x) r2 += t * t;
      const Multivector expect = Multivector::vector(m, x) * (-1.0 / (omega * std::pow(r2, m / 2.0)));
      const CliffordPoly got = evaluate_kernel(e, x) * omega;
      REQUIRE(got.size() == 1);
      CHECK(testing::max_diff(got.terms().begin()->second, expect) < 1e-12);
    }
  }
}

TEST_CASE("first-order constant matches the zonal normalisation closed form") {
  // lambda_1 = (m + 2k - 2) / ((m - 2) omega_m).
  for (int m : {3, 4})
    for (int k = 0; k <= 2; ++k) {
      LambdaTable table;
      const double expect = (m + 2.0 * k - 2.0) / ((m - 2.0) * sphere_area(m));
      CHECK(calibrate_lambda(m, k, 1, table) == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("ladder ratio with unit constants") {
  const auto spec = FermionicOperatorSpec::make(3, 1, 2);
  const LadderResult r = ladder_check(spec, unit_kernel(3, 1, 2), unit_kernel(3, 1, 1));
  CHECK(r.ratio == doctest::Approx(-6.0).epsilon(1e-10));
  CHECK(r.ratio_residual < 1e-12);
  const auto spec3 = FermionicOperatorSpec::make(3, 2, 3);
  const LadderResult r3 = ladder_check(spec3, unit_kernel(3, 2, 3), unit_kernel(3, 2, 2));
  CHECK(r3.ratio == doctest::Approx(-36.0).epsilon(1e-10));
}

TEST_CASE("kernel family validity") {
  CHECK(kernel_family_valid(3, 1, 2));
  CHECK(kernel_family_valid(3, 2, 3));
  CHECK(kernel_family_valid(4, 1, 1));
  CHECK_FALSE(kernel_family_valid(3, 1, 3));
  CHECK_FALSE(kernel_family_valid(4, 1, 2));
  CHECK(kernel_family_problem(4, 2, 3).find("logarithmic") != std::string::npos);
  LambdaTable t;
  CHECK_THROWS_AS(calibrate_lambda(4, 1, 2, t), Error);
}

TEST_CASE("kernel guards") {
  const auto& z = spin_context(3, 1).zonal;
  try {
    (void)build_Ek(3, 1, 1, kCenter, z, 0.0);
    FAIL("expected NotCalibrated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCalibrated);
  }
  const RationalKernel e = unit_kernel(3, 1, 1);
  try {
    (void)evaluate_kernel(e, kCenter);
    FAIL("expected a domain violation");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::DomainViolation);
  }
}

TEST_CASE("lambda table round trip") {
  LambdaTable t;
  t.set(3, 1, 1, {0.25, 1e-15, 7});
  t.set(3, 1, 2, {-0.5, 2e-15, 7});
  const LambdaTable back = LambdaTable::from_json(t.to_json());
  CHECK(back.at(3, 1, 2).value == -0.5);
  CHECK(back.at(3, 1, 1).seed == 7);
  CHECK_FALSE(back.contains(3, 2, 1));
  try {
    (void)back.at(4, 1, 1);
    FAIL("expected NotCalibrated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCalibrated);
  }
  const auto path = std::filesystem::temp_directory_path() / "lambda_roundtrip.json";
  t.save(path.string());
  CHECK(LambdaTable::load(path.string()).at(3, 1, 1).value == 0.25);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(LambdaTable::from_json("{\"lambda_table\": 3}"), Error);
}
