#include "fedlab.h"

#include <cstring>
#include <string>

#include "fedlab/config.hpp"
#include "fedlab/harness.hpp"
#include "fedlab/oracle.hpp"
#include "fedlab/problem.hpp"

namespace {

thread_local std::string g_last_error;

int map_code(fedlab::ErrorCode code) {
  using fedlab::ErrorCode;
  switch (code) {
    case ErrorCode::config_error:
      return FL_ERR_CONFIG;
    case ErrorCode::io_error:
      return FL_ERR_IO;
    case ErrorCode::invalid_argument:
    case ErrorCode::inconsistent_params:
    case ErrorCode::unsupported:
    case ErrorCode::too_large:
    case ErrorCode::invalid_condition:
    case ErrorCode::domain_error:
    case ErrorCode::phi_too_small:
      return FL_ERR_INVALID;
    case ErrorCode::singular_matrix:
    case ErrorCode::divergence:
    case ErrorCode::complex_roots:
    case ErrorCode::zero_matrix:
    case ErrorCode::empty_selection:
    case ErrorCode::not_applicable:
    case ErrorCode::assumption_violation:
      return FL_ERR_NUMERIC;
    default:
      return FL_ERR_INTERNAL;
  }
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const fedlab::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FL_ERR_INTERNAL;
  }
}

}  // namespace

struct fl_dataset {
  fedlab::Dataset data;
};

extern "C" {

const char* fl_last_error(void) { return g_last_error.c_str(); }

int fl_dataset_generate(int d, int m, int s, int r, uint64_t seed,
                        fl_dataset** out) {
  if (!out) {
    g_last_error = "null output pointer";
    return FL_ERR_INVALID;
  }
  return guarded([&] {
    auto* handle = new fl_dataset{fedlab::generate_dataset(d, m, s, r, seed)};
    *out = handle;
    return FL_OK;
  });
}

int fl_dataset_load(const char* csv_path, const char* json_path,
                    fl_dataset** out) {
  if (!csv_path || !json_path || !out) {
    g_last_error = "null argument";
    return FL_ERR_INVALID;
  }
  return guarded([&] {
    auto* handle = new fl_dataset{fedlab::load_dataset(csv_path, json_path)};
    *out = handle;
    return FL_OK;
  });
}

int fl_dataset_save(const fl_dataset* ds, uint64_t seed, const char* csv_path,
                    const char* json_path) {
  if (!ds || !csv_path || !json_path) {
    g_last_error = "null argument";
    return FL_ERR_INVALID;
  }
  return guarded([&] {
    fedlab::save_dataset_csv(ds->data, csv_path);
    fedlab::save_dataset_header(ds->data, seed, json_path);
    return FL_OK;
  });
}

int fl_dataset_info(const fl_dataset* ds, int* d, int* m, int* s, int* r) {
  if (!ds) {
    g_last_error = "null dataset";
    return FL_ERR_INVALID;
  }
  if (d) *d = ds->data.d;
  if (m) *m = static_cast<int>(ds->data.m());
  if (s) *s = static_cast<int>(ds->data.s());
  if (r) *r = static_cast<int>(ds->data.r());
  return FL_OK;
}

void fl_dataset_destroy(fl_dataset* ds) { delete ds; }

int fl_generate(const char* config_path, const char* out_dir, uint64_t seed) {
  if (!config_path || !out_dir) {
    g_last_error = "null argument";
    return FL_ERR_INVALID;
  }
  return guarded([&] {
    fedlab::Config cfg = fedlab::Config::parse_file(config_path);
    fedlab::cmd_generate(cfg, out_dir, seed);
    return FL_OK;
  });
}

int fl_run(const char* config_path, const char* out_dir, uint64_t seed,
           const char* phi_list) {
  if (!config_path || !out_dir) {
    g_last_error = "null argument";
    return FL_ERR_INVALID;
  }
  return guarded([&] {
    fedlab::Config cfg = fedlab::Config::parse_file(config_path);
    std::vector<double> phis =
        phi_list ? fedlab::parse_phi_list(phi_list) : std::vector<double>{};
    fedlab::cmd_run(cfg, out_dir, seed, phis);
    return FL_OK;
  });
}

int fl_verify(const char* suite, const char* out_dir) {
  if (!suite || !out_dir) {
    g_last_error = "null argument";
    return FL_ERR_INVALID;
  }
  return guarded([&] {
    bool pass = fedlab::cmd_verify(suite, out_dir);
    if (!pass) {
      g_last_error = std::string("suite failed: ") + suite;
      return static_cast<int>(FL_ERR_SUITE_FAILED);
    }
    return static_cast<int>(FL_OK);
  });
}

int fl_sweep(const char* config_path, const char* out_dir) {
  if (!config_path || !out_dir) {
    g_last_error = "null argument";
    return FL_ERR_INVALID;
  }
  return guarded([&] {
    fedlab::Config cfg = fedlab::Config::parse_file(config_path);
    fedlab::cmd_sweep(cfg, out_dir);
    return FL_OK;
  });
}

int fl_erlang_cdf(double y, int b, double* out) {
  if (!out) {
    g_last_error = "null output pointer";
    return FL_ERR_INVALID;
  }
  return guarded([&] {
    *out = fedlab::erlang_cdf(y, b);
    return FL_OK;
  });
}

int fl_erlang_quantile(double p, int b, double* out) {
  if (!out) {
    g_last_error = "null output pointer";
    return FL_ERR_INVALID;
  }
  return guarded([&] {
    *out = fedlab::erlang_quantile(p, b);
    return FL_OK;
  });
}

int fl_fedave_optimal_b(double m, double eps_ratio, double phi, double tau,
                        double* b_star, double* T_star, double* gamma_est) {
  return guarded([&] {
    fedlab::FedAveOptimum opt =
        fedlab::fedave_optimal_b(m, eps_ratio, phi, tau);
    if (b_star) *b_star = opt.b_star;
    if (T_star) *T_star = opt.T_star;
    if (gamma_est) *gamma_est = opt.gamma_estimate;
    return FL_OK;
  });
}

}  // extern "C"
