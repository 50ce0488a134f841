#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <fedlab.h>

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::path("/tmp") / ("fedlab_capi_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("dataset handle lifecycle") {
  fl_dataset* ds = nullptr;
  REQUIRE(fl_dataset_generate(2, 3, 4, 5, 42, &ds) == FL_OK);
  REQUIRE(ds != nullptr);
  int d = 0, m = 0, s = 0, r = 0;
  REQUIRE(fl_dataset_info(ds, &d, &m, &s, &r) == FL_OK);
  CHECK(d == 2);
  CHECK(m == 3);
  CHECK(s == 4);
  CHECK(r == 5);

  fs::path dir = fresh_dir("ds");
  std::string csv = (dir / "a.csv").string(), json = (dir / "a.json").string();
  REQUIRE(fl_dataset_save(ds, 42, csv.c_str(), json.c_str()) == FL_OK);
  fl_dataset* back = nullptr;
  REQUIRE(fl_dataset_load(csv.c_str(), json.c_str(), &back) == FL_OK);
  REQUIRE(fl_dataset_info(back, &d, &m, &s, &r) == FL_OK);
  CHECK(d == 2);
  CHECK(r == 5);
  fl_dataset_destroy(ds);
  fl_dataset_destroy(back);
}

TEST_CASE("invalid arguments are reported, not crashed on") {
  fl_dataset* ds = nullptr;
  CHECK(fl_dataset_generate(0, 3, 4, 5, 1, &ds) == FL_ERR_INVALID);
  CHECK(ds == nullptr);
  CHECK(std::strlen(fl_last_error()) > 0);
  CHECK(fl_dataset_generate(2, 3, 4, 5, 1, nullptr) == FL_ERR_INVALID);
  CHECK(fl_dataset_load("/nonexistent.csv", "/nonexistent.json", &ds) ==
        FL_ERR_IO);
  int d;
  CHECK(fl_dataset_info(nullptr, &d, &d, &d, &d) == FL_ERR_INVALID);
  fl_dataset_destroy(nullptr);  // must be a harmless no-op
}

TEST_CASE("command wrappers mirror the CLI") {
  fs::path dir = fresh_dir("cmd");
  fs::path cfg = dir / "gen.cfg";
  write_file(cfg, "d = 2\nm = 3\ns = 2\nr = 2\n");
  CHECK(fl_generate(cfg.string().c_str(), dir.string().c_str(), 5) == FL_OK);
  CHECK(fs::exists(dir / "dataset.csv"));

  fs::path run_cfg = dir / "run.cfg";
  write_file(run_cfg,
             "algorithm = fedlrgd\nmodel = separable\nmodel_rank = 2\n"
             "model_p = 3\nS = 3\n"
             "dataset_csv = " + (dir / "dataset.csv").string() + "\n" +
             "dataset_json = " + (dir / "dataset.json").string() + "\n");
  CHECK(fl_run(run_cfg.string().c_str(), dir.string().c_str(), 5, "10,40") ==
        FL_OK);
  CHECK(fs::exists(dir / "run.json"));

  CHECK(fl_verify("lemma3", dir.string().c_str()) == FL_OK);
  CHECK(fs::exists(dir / "verify_lemma3.json"));
  CHECK(fl_verify("nonsense", dir.string().c_str()) == FL_ERR_CONFIG);

  fs::path sweep_cfg = dir / "sweep.cfg";
  write_file(sweep_cfg, "points = 2\n");
  CHECK(fl_sweep(sweep_cfg.string().c_str(), dir.string().c_str()) == FL_OK);
  CHECK(fs::exists(dir / "sweep.csv"));

  write_file(sweep_cfg, "points = 2\nphi = 5\n");
  CHECK(fl_sweep(sweep_cfg.string().c_str(), dir.string().c_str()) ==
        FL_ERR_CONFIG);

  CHECK(fl_generate("/nonexistent.cfg", dir.string().c_str(), 1) ==
        FL_ERR_IO);
}

TEST_CASE("direct calculators") {
  double v = 0.0;
  REQUIRE(fl_erlang_cdf(2.0, 2, &v) == FL_OK);
  CHECK(v == doctest::Approx(1.0 - 3.0 * std::exp(-2.0)).epsilon(1e-12));
  REQUIRE(fl_erlang_quantile(0.5, 1, &v) == FL_OK);
  CHECK(v == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(fl_erlang_cdf(1.0, 2, nullptr) == FL_ERR_INVALID);
  CHECK(fl_erlang_quantile(1.5, 1, &v) != FL_OK);

  double b_star = 0, t_star = 0, g = 0;
  REQUIRE(fl_fedave_optimal_b(100.0, 1.0, 50.0, 1.0, &b_star, &t_star, &g) ==
          FL_OK);
  CHECK(b_star >= 50.0);
  CHECK(b_star <= 200.0);
  CHECK(t_star > 0.0);
  CHECK(g > 0.0);
  CHECK(fl_fedave_optimal_b(100.0, 1.0, 10.0, 1.0, &b_star, &t_star, &g) ==
        FL_ERR_INVALID);  // phi below the applicability gate
  CHECK(std::strlen(fl_last_error()) > 0);
}
