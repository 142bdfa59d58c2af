#include "higherspin/higherspin.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "higherspin/calibration.hpp"
#include "higherspin/multivector.hpp"
#include "higherspin/scenarios.hpp"

struct hs_multivector {
  higherspin::Multivector value;
};

struct hs_config {
  higherspin::ScenarioConfig value;
};

struct hs_report {
  higherspin::VerificationReport value;
  std::string json;
  std::string text;
};

struct hs_suite {
  std::vector<higherspin::ScenarioConfig> entries;
};

namespace {

thread_local std::string last_error;

template <class Fn>
hs_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return HS_OK;
  } catch (const higherspin::Error& e) {
    last_error = e.what();
    return static_cast<hs_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return HS_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return HS_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return HS_INTERNAL;
  }
}

void non_null(const void* p, const char* what) {
  higherspin::require(p != nullptr, higherspin::ErrorCode::InvalidArgument,
                      std::string(what) + " must not be null");
}

hs_status wrap_mv(higherspin::Multivector v, hs_multivector** out) {
  return guarded([&] {
    non_null(out, "out");
    *out = new hs_multivector{std::move(v)};
  });
}

}  // namespace

extern "C" {

const char* hs_version(void) { return "1.0.0"; }

const char* hs_last_error(void) { return last_error.c_str(); }

const char* hs_status_name(hs_status status) {
  switch (status) {
    case HS_OK: return "ok";
    case HS_INVALID_ARGUMENT: return "invalid_argument";
    case HS_DIMENSION_MISMATCH: return "dimension_mismatch";
    case HS_SINGULAR: return "singular";
    case HS_DOMAIN_VIOLATION: return "domain_violation";
    case HS_NON_FINITE: return "non_finite";
    case HS_IO: return "io";
    case HS_NOT_CALIBRATED: return "not_calibrated";
    case HS_INTERNAL: return "internal";
  }
  return "unknown";
}

hs_status hs_mv_new(int m, const double* coeffs, size_t count, hs_multivector** out) {
  return guarded([&] {
    non_null(out, "out");
    higherspin::require(m >= 1 && m <= higherspin::kMaxDim,
                        higherspin::ErrorCode::InvalidArgument, "m must lie in [1, 8]");
    higherspin::Multivector v(m);
    if (coeffs) {
      higherspin::require(count == v.size(), higherspin::ErrorCode::DimensionMismatch,
                          "expected " + std::to_string(v.size()) + " coefficients");
      v = higherspin::Multivector(m, {coeffs, count});
    }
    *out = new hs_multivector{std::move(v)};
  });
}

void hs_mv_free(hs_multivector* mv) { delete mv; }

int hs_mv_dim(const hs_multivector* mv) { return mv ? mv->value.dim() : -1; }

hs_status hs_mv_coeffs(const hs_multivector* mv, double* out, size_t count) {
  return guarded([&] {
    non_null(mv, "multivector");
    non_null(out, "out");
    higherspin::require(count >= mv->value.size(), higherspin::ErrorCode::DimensionMismatch,
                        "output buffer holds fewer than 2^m coefficients");
    std::memcpy(out, mv->value.data(), mv->value.size() * sizeof(double));
  });
}

hs_status hs_mv_product(const hs_multivector* a, const hs_multivector* b, hs_multivector** out) {
  if (!a || !b) return guarded([] { non_null(nullptr, "operand"); });
  higherspin::Multivector r;
  const hs_status s = guarded([&] { r = higherspin::geometric_product(a->value, b->value); });
  return s == HS_OK ? wrap_mv(std::move(r), out) : s;
}

hs_status hs_mv_reversion(const hs_multivector* a, hs_multivector** out) {
  if (!a) return guarded([] { non_null(nullptr, "operand"); });
  return wrap_mv(a->value.reversion(), out);
}

hs_status hs_mv_conjugation(const hs_multivector* a, hs_multivector** out) {
  if (!a) return guarded([] { non_null(nullptr, "operand"); });
  return wrap_mv(a->value.conjugation(), out);
}

hs_status hs_mv_to_string(const hs_multivector* mv, char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    non_null(mv, "multivector");
    const std::string s = mv->value.to_string(17);
    if (needed) *needed = s.size();
    if (buf && cap > 0) {
      const size_t n = std::min(cap - 1, s.size());
      std::memcpy(buf, s.data(), n);
      buf[n] = '\0';
    }
  });
}

int hs_scenario_count(void) { return static_cast<int>(higherspin::scenario_names().size()); }

const char* hs_scenario_name(int index) {
  static const std::vector<std::string> names = higherspin::scenario_names();
  if (index < 0 || index >= static_cast<int>(names.size())) return nullptr;
  return names[index].c_str();
}

hs_status hs_config_new(const char* scenario, hs_config** out) {
  return guarded([&] {
    non_null(out, "out");
    auto cfg = std::make_unique<hs_config>();
    if (scenario) cfg->value.scenario = scenario;
    *out = cfg.release();
  });
}

void hs_config_free(hs_config* cfg) { delete cfg; }

hs_status hs_config_set_int(hs_config* cfg, const char* key, long long value) {
  return guarded([&] {
    non_null(cfg, "config");
    non_null(key, "key");
    higherspin::set_config_value(cfg->value, key, std::to_string(value));
  });
}

hs_status hs_config_set_double(hs_config* cfg, const char* key, double value) {
  return guarded([&] {
    non_null(cfg, "config");
    non_null(key, "key");
    char text[64];
    std::snprintf(text, sizeof text, "%.17g", value);
    higherspin::set_config_value(cfg->value, key, text);
  });
}

hs_status hs_config_set_string(hs_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    non_null(cfg, "config");
    non_null(key, "key");
    non_null(value, "value");
    higherspin::set_config_value(cfg->value, key, value);
  });
}

hs_status hs_suite_load(const char* path, hs_suite** out) {
  return guarded([&] {
    non_null(path, "path");
    non_null(out, "out");
    *out = new hs_suite{higherspin::load_suite(path)};
  });
}

hs_status hs_suite_parse(const char* text, hs_suite** out) {
  return guarded([&] {
    non_null(text, "text");
    non_null(out, "out");
    *out = new hs_suite{higherspin::parse_suite(text)};
  });
}

void hs_suite_free(hs_suite* suite) { delete suite; }

size_t hs_suite_size(const hs_suite* suite) { return suite ? suite->entries.size() : 0; }

hs_status hs_suite_config(const hs_suite* suite, size_t index, hs_config** out) {
  return guarded([&] {
    non_null(suite, "suite");
    non_null(out, "out");
    higherspin::require(index < suite->entries.size(), higherspin::ErrorCode::InvalidArgument,
                        "suite index out of range");
    *out = new hs_config{suite->entries[index]};
  });
}

hs_status hs_run(const hs_config* cfg, hs_report** out) {
  return guarded([&] {
    non_null(cfg, "config");
    non_null(out, "out");
    auto report = std::make_unique<hs_report>();
    report->value = higherspin::run_scenario(cfg->value);
    report->json = report->value.to_json();
    report->text = report->value.to_text();
    *out = report.release();
  });
}

void hs_report_free(hs_report* report) { delete report; }

int hs_report_passed(const hs_report* report) { return report && report->value.pass ? 1 : 0; }

const char* hs_report_json(const hs_report* report) {
  return report ? report->json.c_str() : nullptr;
}

const char* hs_report_text(const hs_report* report) {
  return report ? report->text.c_str() : nullptr;
}

hs_status hs_calibrate(int m, int k, int j, const char* table_path, double* lambda_out) {
  return guarded([&] {
    non_null(table_path, "table_path");
    higherspin::LambdaTable table;
    if (std::filesystem::exists(table_path)) table = higherspin::LambdaTable::load(table_path);
    const double lambda = higherspin::calibrate_lambda(m, k, j, table);
    table.save(table_path);
    if (lambda_out) *lambda_out = lambda;
  });
}

}  // extern "C"
