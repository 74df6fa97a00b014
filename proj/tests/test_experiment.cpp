#include <doctest.h>

#include <sstream>

#include "sepembed/config.hpp"
#include "sepembed/error.hpp"
#include "sepembed/experiment.hpp"
#include "test_util.hpp"

using namespace sepembed;
using config::ExperimentConfig;

namespace {

ExperimentConfig spheres_config(const std::filesystem::path& outdir) {
  ExperimentConfig c;
  c.surface = "spheres";
  c.per_class = 50;
  c.d = 1;
  c.mu = 0.1;
  c.sigma = 0.7;
  c.classifier = "nn";
  c.k_within = 5;
  c.outdir = outdir.string();
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

} // namespace

TEST_CASE("run_cell: separable spheres embedding classifies its training set") {
  const auto cfg = spheres_config(testutil::scratch("exp1"));
  const auto rec = experiment::run_cell(cfg, experiment::base_cell(cfg));
  REQUIRE(rec.ok);
  CHECK(rec.separable);
  CHECK(rec.gamma > 0.0);
  CHECK(rec.train_error == 0.0);
  CHECK(rec.test_error < 0.2);
  CHECK(rec.d_used == 1);
  CHECK(rec.n_train == 50);
  CHECK(rec.n_test == 50);
  CHECK(rec.kappa == doctest::Approx(rec.C / (0.7 * rec.gamma)));
  for (std::string cls : {"linear"}) {
    auto c2 = cfg;
    c2.classifier = cls;
    CHECK(experiment::run_cell(c2, experiment::base_cell(c2)).train_error == 0.0);
  }
}

TEST_CASE("run_cell: deterministic for a fixed seed") {
  const auto cfg = spheres_config(testutil::scratch("exp2"));
  const auto a = experiment::run_cell(cfg, experiment::base_cell(cfg));
  const auto b = experiment::run_cell(cfg, experiment::base_cell(cfg));
  CHECK(a.gamma == b.gamma);
  CHECK(a.test_error == b.test_error);
  CHECK(a.C == b.C);
}

TEST_CASE("run_cell: fisher at d = M records a numerical failure") {
  auto cfg = spheres_config(testutil::scratch("exp3"));
  cfg.method = "fisher";
  cfg.d = 2;
  cfg.per_class = 15;
  const auto rec = experiment::run_cell(cfg, experiment::base_cell(cfg));
  CHECK_FALSE(rec.ok);
  CHECK(rec.numerical_failure);
  CHECK(rec.status.find("degenerate Fisher embedding") != std::string::npos);
}

TEST_CASE("cmd_run writes one row per seed") {
  const auto dir = testutil::scratch("exp4");
  auto cfg = spheres_config(dir);
  cfg.per_class = 20;
  cfg.seeds = {1, 2};
  CHECK(experiment::cmd_run(cfg) == 0);
  const auto rows = lines(testutil::read_text(dir / "runs.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].rfind("row_type,cell,dataset,", 0) == 0);
  CHECK(rows[1].rfind("run,", 0) == 0);
}

TEST_CASE("cmd_sweep, cmd_bounds, cmd_compare produce tables") {
  const auto dir = testutil::scratch("exp5");
  auto cfg = spheres_config(dir);
  cfg.per_class = 15;
  cfg.seeds = {1, 2};
  cfg.sweep_sigma = {0.5, 1.0};
  CHECK(experiment::cmd_sweep(cfg) == 0);
  const auto sweep = lines(testutil::read_text(dir / "sweep.csv"));
  // Two cells, each with two runs plus mean and std rows.
  CHECK(sweep.size() == 1 + 2 * 4);

  CHECK(experiment::cmd_bounds(cfg) == 0);
  const auto bounds_text = testutil::read_text(dir / "bounds.csv");
  CHECK(bounds_text.rfind("theorem,parameters,value,applicable\n", 0) == 0);
  CHECK(bounds_text.find("\nthm3,") != std::string::npos);
  CHECK(bounds_text.find("\nthm6_z_bound,") != std::string::npos);

  cfg.d = 0;
  cfg.seeds = {1};
  CHECK(experiment::cmd_compare(cfg) >= 0);
  const auto compare = testutil::read_text(dir / "compare.csv");
  CHECK(compare.find("label_encoding") != std::string::npos);
  CHECK(compare.find("knn") != std::string::npos);
}

TEST_CASE("commands reject invalid configuration") {
  auto cfg = spheres_config(testutil::scratch("exp6"));
  cfg.mu = -1.0;
  CHECK_THROWS_WITH_AS(experiment::cmd_run(cfg), doctest::Contains("'mu'"), InputError);
}
