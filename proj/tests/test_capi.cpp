#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "higherspin/higherspin.h"

TEST_CASE("multivector handles") {
  double e1[8] = {0, 1, 0, 0, 0, 0, 0, 0};
  hs_multivector* a = nullptr;
  REQUIRE(hs_mv_new(3, e1, 8, &a) == HS_OK);
  CHECK(hs_mv_dim(a) == 3);
  hs_multivector* sq = nullptr;
  REQUIRE(hs_mv_product(a, a, &sq) == HS_OK);
  double out[8];
  REQUIRE(hs_mv_coeffs(sq, out, 8) == HS_OK);
  CHECK(out[0] == -1.0);
  for (int i = 1; i < 8; ++i) CHECK(out[i] == 0.0);

  char buf[64];
  size_t needed = 0;
  REQUIRE(hs_mv_to_string(a, buf, sizeof buf, &needed) == HS_OK);
  CHECK(std::string(buf) == "e1");

  hs_multivector* c = nullptr;
  REQUIRE(hs_mv_conjugation(a, &c) == HS_OK);
  REQUIRE(hs_mv_coeffs(c, out, 8) == HS_OK);
  CHECK(out[1] == -1.0);
  hs_mv_free(c);
  hs_mv_free(sq);
  hs_mv_free(a);
}

TEST_CASE("errors map onto status codes") {
  hs_multivector* a = nullptr;
  double three[3] = {1, 2, 3};
  CHECK(hs_mv_new(3, three, 3, &a) == HS_DIMENSION_MISMATCH);
  CHECK(std::string(hs_last_error()).find("coefficients") != std::string::npos);
  CHECK(hs_mv_new(9, nullptr, 0, &a) == HS_INVALID_ARGUMENT);
  CHECK(hs_mv_product(nullptr, nullptr, &a) == HS_INVALID_ARGUMENT);
  CHECK(std::string(hs_status_name(HS_NOT_CALIBRATED)) == "not_calibrated");

  hs_config* cfg = nullptr;
  REQUIRE(hs_config_new("cauchy", &cfg) == HS_OK);
  CHECK(hs_config_set_int(cfg, "no_such_key", 1) == HS_INVALID_ARGUMENT);
  CHECK(hs_config_set_string(cfg, "family", "weird") == HS_INVALID_ARGUMENT);
  REQUIRE(hs_config_set_int(cfg, "m", 4) == HS_OK);
  REQUIRE(hs_config_set_int(cfg, "j", 2) == HS_OK);
  hs_report* rep = nullptr;
  CHECK(hs_run(cfg, &rep) == HS_INVALID_ARGUMENT);
  CHECK(std::string(hs_last_error()).find("logarithmic") != std::string::npos);
  CHECK(rep == nullptr);
  hs_config_free(cfg);

  REQUIRE(hs_config_new("cauchy", &cfg) == HS_OK);
  REQUIRE(hs_config_set_string(cfg, "lambda_table", "/nonexistent/table.json") == HS_OK);
  CHECK(hs_run(cfg, &rep) == HS_IO);
  hs_config_free(cfg);
}

TEST_CASE("scenario run through the C interface") {
  CHECK(hs_scenario_count() == 11);
  CHECK(std::string(hs_scenario_name(0)) == "stokes_rk");
  CHECK(hs_scenario_name(99) == nullptr);

  hs_config* cfg = nullptr;
  REQUIRE(hs_config_new("ladder", &cfg) == HS_OK);
  REQUIRE(hs_config_set_int(cfg, "k", 2) == HS_OK);
  REQUIRE(hs_config_set_int(cfg, "j", 3) == HS_OK);
  REQUIRE(hs_config_set_double(cfg, "tol", 1e-8) == HS_OK);
  hs_report* rep = nullptr;
  REQUIRE(hs_run(cfg, &rep) == HS_OK);
  CHECK(hs_report_passed(rep) == 1);
  const std::string json = hs_report_json(rep);
  CHECK(json.find("\"lambda_used\"") != std::string::npos);
  CHECK(json.find("\"residuals\"") != std::string::npos);
  CHECK(std::string(hs_report_text(rep)).find("PASS") != std::string::npos);
  hs_report_free(rep);
  hs_config_free(cfg);
}

TEST_CASE("suites and calibration tables") {
  hs_suite* suite = nullptr;
  REQUIRE(hs_suite_parse("[commutation]\nm = 3\nk = 1\nsamples = 5\n[fischer]\nk = 2\n", &suite) ==
          HS_OK);
  CHECK(hs_suite_size(suite) == 2);
  hs_config* cfg = nullptr;
  REQUIRE(hs_suite_config(suite, 1, &cfg) == HS_OK);
  hs_report* rep = nullptr;
  REQUIRE(hs_run(cfg, &rep) == HS_OK);
  CHECK(hs_report_passed(rep) == 1);
  hs_report_free(rep);
  hs_config_free(cfg);
  CHECK(hs_suite_config(suite, 5, &cfg) == HS_INVALID_ARGUMENT);
  hs_suite_free(suite);

  const auto path = (std::filesystem::temp_directory_path() / "capi_lambda.json").string();
  std::filesystem::remove(path);
  double lambda = 0.0;
  REQUIRE(hs_calibrate(3, 1, 2, path.c_str(), &lambda) == HS_OK);
  CHECK(lambda == doctest::Approx(-0.0397887).epsilon(1e-5));
  CHECK(std::filesystem::exists(path));

  REQUIRE(hs_config_new("cauchy", &cfg) == HS_OK);
  REQUIRE(hs_config_set_int(cfg, "j", 2) == HS_OK);
  REQUIRE(hs_config_set_string(cfg, "family", "low-degree") == HS_OK);
  REQUIRE(hs_config_set_string(cfg, "quad_orders", "16,24") == HS_OK);
  REQUIRE(hs_config_set_string(cfg, "lambda_table", path.c_str()) == HS_OK);
  REQUIRE(hs_run(cfg, &rep) == HS_OK);
  CHECK(hs_report_passed(rep) == 1);
  hs_report_free(rep);

  REQUIRE(hs_config_set_int(cfg, "k", 2) == HS_OK);
  CHECK(hs_run(cfg, &rep) == HS_NOT_CALIBRATED);
  CHECK(std::string(hs_last_error()).find("calibrate") != std::string::npos);
  hs_config_free(cfg);
  std::filesystem::remove(path);
}
