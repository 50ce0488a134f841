#include "fedlab/harness.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "fedlab/fedave.hpp"
#include "fedlab/fedlrgd.hpp"
#include "fedlab/oracle.hpp"
#include "fedlab/problem.hpp"

namespace fedlab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void ensure_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) raise(ErrorCode::io_error, "cannot create directory " + out_dir);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::io_error, "cannot write " + path);
  out << text;
}

void write_echo(const Config& cfg, const std::string& out_dir) {
  write_text(out_dir + "/config_echo.txt", cfg.echo());
}

std::unique_ptr<LossModel> build_model(const Config& cfg, int d,
                                       uint64_t seed) {
  std::string kind = cfg.get_string("model", "logistic");
  if (kind == "logistic")
    return std::make_unique<SoftLabelLogistic>(d, cfg.get_real("mu", 0.5));
  if (kind == "separable")
    return std::make_unique<SeparableModel>(
        static_cast<int>(cfg.get_int("model_rank", 2)), d,
        static_cast<int>(cfg.get_int("model_p", d)), seed);
  if (kind == "quadratic")
    return std::make_unique<QuadraticModel>(
        static_cast<int>(cfg.get_int("model_p", d)), d);
  raise(ErrorCode::config_error, "unknown model kind: " + kind);
}

Dataset dataset_from_config(const Config& cfg, uint64_t seed) {
  if (cfg.has("dataset_csv") || cfg.has("dataset_json"))
    return load_dataset(cfg.get_string("dataset_csv"),
                        cfg.get_string("dataset_json"));
  int d = static_cast<int>(cfg.get_int("d"));
  int m = static_cast<int>(cfg.get_int("m"));
  int s = static_cast<int>(cfg.get_int("s", m > 0 ? 1 : 0));
  int r = static_cast<int>(cfg.get_int("r"));
  uint64_t data_seed = static_cast<uint64_t>(cfg.get_int("data_seed", seed));
  return generate_dataset(d, m, s, r, data_seed);
}

json ledger_to_json(const EpochLedger& ledger) {
  json rows = json::array();
  for (const EpochRecord& rec : ledger.records) {
    const char* type = rec.type == EpochType::A   ? "A"
                       : rec.type == EpochType::B ? "B"
                                                  : "C";
    rows.push_back({{"type", type},
                    {"b", rec.b},
                    {"communicated", rec.communicated}});
  }
  return rows;
}

}  // namespace

std::vector<double> parse_phi_list(const std::string& text) {
  std::vector<double> phis;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    try {
      std::size_t pos = 0;
      double v = std::stod(cell, &pos);
      if (pos != cell.size() || !(v > 0)) throw std::invalid_argument(cell);
      phis.push_back(v);
    } catch (const std::exception&) {
      raise(ErrorCode::config_error, "bad phi list entry: " + cell);
    }
  }
  return phis;
}

void cmd_generate(const Config& cfg, const std::string& out_dir,
                  uint64_t seed) {
  cfg.restrict_keys({"d", "m", "s", "r", "data_seed"});
  ensure_dir(out_dir);
  int d = static_cast<int>(cfg.get_int("d"));
  int m = static_cast<int>(cfg.get_int("m"));
  int s = static_cast<int>(cfg.get_int("s", m > 0 ? 1 : 0));
  int r = static_cast<int>(cfg.get_int("r"));
  if (r < 1) raise(ErrorCode::config_error, "generate: r must be >= 1");
  uint64_t data_seed = static_cast<uint64_t>(cfg.get_int("data_seed", seed));
  Dataset ds;
  try {
    ds = generate_dataset(d, m, s, r, data_seed);
  } catch (const Error& e) {
    raise(ErrorCode::config_error, e.what());
  }
  save_dataset_csv(ds, out_dir + "/dataset.csv");
  save_dataset_header(ds, data_seed, out_dir + "/dataset.json");
  write_echo(cfg, out_dir);
}

void cmd_run(const Config& cfg, const std::string& out_dir, uint64_t seed,
             const std::vector<double>& phi_list) {
  cfg.restrict_keys({"algorithm", "model", "mu", "model_rank", "model_p",
                     "dataset_csv", "dataset_json", "d", "m", "s", "r",
                     "data_seed", "S", "b", "T", "tau", "schedule", "step_c",
                     "singular_tol", "theta_seed"});
  ensure_dir(out_dir);
  std::string algorithm = cfg.get_string("algorithm");
  Dataset data = dataset_from_config(cfg, seed);
  std::unique_ptr<LossModel> model = build_model(cfg, data.d, seed);

  json record;
  record["schema_version"] = 1;
  record["algorithm"] = algorithm;
  record["seed"] = seed;
  json config_json = json::object();
  for (const auto& [k, v] : cfg.entries()) config_json[k] = v;
  record["config"] = config_json;

  EpochLedger ledger;
  if (algorithm == "fedlrgd") {
    FedLRGDConfig rc;
    rc.r = static_cast<int>(data.r());
    rc.S = static_cast<int>(cfg.get_int("S"));
    rc.L1 = model->constants().has_L1() ? model->constants().L1 : 1.0;
    rc.seed = static_cast<uint64_t>(cfg.get_int("theta_seed", seed));
    rc.singular_tol = cfg.get_real("singular_tol", 1e-12);
    FedLRGDRun run = run_fedlrgd(*model, data, rc);
    ledger = run.ledger;
    record["risk_trace"] = run.risk_trace;
    record["theta_star"] = run.theta_star;
    Vec g = full_gradient(*model, data, run.theta_star);
    double norm = 0.0;
    for (double v : g) norm += v * v;
    record["final_gradient_norm"] = std::sqrt(norm);
    record["precompute_redraws"] = run.precomp.redraws;
    record["max_condition_estimate"] = run.precomp.max_condition;
  } else if (algorithm == "fedave") {
    FedAveConfig ac;
    ac.b = cfg.get_int("b");
    ac.T = cfg.get_int("T");
    ac.tau = cfg.get_real("tau", 1.0);
    std::string schedule = cfg.get_string("schedule", "inverse_time");
    if (schedule == "inverse_time")
      ac.schedule = StepSchedule::inverse_time;
    else if (schedule == "constant")
      ac.schedule = StepSchedule::constant;
    else
      raise(ErrorCode::config_error, "unknown schedule: " + schedule);
    double mu = model->constants().mu;
    ac.step_c = cfg.get_real("step_c", mu > 0 ? 1.0 / mu : 1.0);
    ac.seed = seed;
    FedAveRun run = run_fedave(*model, data, ac);
    ledger = run.ledger;
    record["risk_trace"] = run.risk_trace;
    record["theta_star"] = run.theta_final;
    record["step_c"] = ac.step_c;
    record["schedule"] = schedule;
  } else {
    raise(ErrorCode::config_error, "unknown algorithm: " + algorithm);
  }

  record["ledger"] = ledger_to_json(ledger);
  json gammas = json::object();
  for (double phi : phi_list) {
    CostModel cost{phi, ledger.tau, ledger.m};
    gammas[std::to_string(phi)] = gamma(ledger, cost);
  }
  record["gamma"] = gammas;
  write_text(out_dir + "/run.json", record.dump(2) + "\n");
  write_echo(cfg, out_dir);
}

bool cmd_verify(const std::string& suite, const std::string& out_dir) {
  ensure_dir(out_dir);
  VerifyReport report = run_suite(suite);
  json j;
  j["schema_version"] = 1;
  j["suite"] = report.suite;
  j["pass"] = report.pass();
  json rows = json::array();
  for (const VerifyInstance& inst : report.instances)
    rows.push_back({{"pass", inst.pass}, {"instance", inst.description}});
  j["instances"] = rows;
  write_text(out_dir + "/verify_" + suite + ".json", j.dump(2) + "\n");
  return report.pass();
}

void cmd_sweep(const Config& cfg, const std::string& out_dir) {
  cfg.restrict_keys({"points", "phi"});
  ensure_dir(out_dir);
  int points = static_cast<int>(cfg.get_int("points", 6));
  std::vector<SweepPoint> grid;
  try {
    grid = default_sweep_grid(points);
    if (cfg.has("phi")) {
      double phi = cfg.get_real("phi");
      for (SweepPoint& pt : grid) pt.phi = phi;
    }
    std::vector<SweepRow> rows = proposition1_sweep(grid);
    std::ostringstream csv;
    csv.precision(12);
    csv << "m,s,p,epsilon,phi,r,S,gamma_fedlrgd,gamma_fedave_plus,ratio\n";
    for (const SweepRow& row : rows)
      csv << row.point.m << ',' << row.point.s << ',' << row.point.p << ','
          << row.point.eps << ',' << row.point.phi << ',' << row.point.r
          << ',' << row.point.S << ',' << row.gamma_fedlrgd << ','
          << row.gamma_fedave_plus << ',' << row.ratio << '\n';
    write_text(out_dir + "/sweep.csv", csv.str());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_argument)
      raise(ErrorCode::config_error, e.what());
    throw;
  }
  write_echo(cfg, out_dir);
}

}  // namespace fedlab
