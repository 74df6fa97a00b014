#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sepembed/classify.hpp"
#include "sepembed/config.hpp"
#include "sepembed/dataset.hpp"
#include "sepembed/embedding.hpp"
#include "sepembed/graph.hpp"
#include "sepembed/interpolate.hpp"

namespace sepembed::experiment {

/// Parameters of one pipeline run; a sweep cell fixes everything but the seed.
struct CellParams {
  int per_class = 50;
  int d = 0;
  double mu = 0.01;
  double sigma = 0.7;
  std::uint64_t seed = 1;
  std::string method = "sup_laplacian";
  config::RidgeMode ridge_mode = config::RidgeMode::fixed;
  double ridge = 0.0;
  std::string classifier = "nn";
};

/// Base cell of a configuration (first seed, no sweep axes applied).
CellParams base_cell(const config::ExperimentConfig& cfg);

/// Everything one run produces, kept for the bound reports.
struct Pipeline {
  data::Dataset train;
  data::Dataset test;
  graph::SupervisedGraph graph;
  graph::BuildInfo build_info;
  embed::Embedding embedding;
  classify::ClassifierModel model;
  rbf::RbfInterpolator interpolator;
  rbf::RegularityStats regularity;
  double ridge_used = 0.0;
};

/// Builds graph, embedding, classifier and interpolator for one cell. The
/// synthetic dataset is generated from the seed unless `csv_data` is given.
Pipeline build_pipeline(const config::ExperimentConfig& cfg, const CellParams& cell,
                        const data::Dataset* csv_data = nullptr);

struct RunRecord {
  CellParams cell;
  bool ok = false;
  bool numerical_failure = false;
  std::string status;
  int num_classes = 0;
  int n_train = 0;
  int n_test = 0;
  int d_used = 0;
  double heat_t_used = 0.0;
  double ridge_used = 0.0;
  double gamma = 0.0;
  bool separable = false;
  double C = 0.0;
  double L_phi = 0.0;
  double kappa = 0.0;
  double test_error = 0.0;
  double train_error = 0.0;
  double unclassifiable = 0.0;
  double wall_seconds = 0.0;
};

/// Runs one cell and classifies train and test samples. Input and numerical
/// errors raised by the pipeline are recorded in the status, not thrown.
RunRecord run_cell(const config::ExperimentConfig& cfg, const CellParams& cell, const data::Dataset* csv_data = nullptr);

/// Subcommands. Each returns the process exit code; configuration errors are
/// thrown as InputError.
int cmd_synth(const config::ExperimentConfig& cfg);
int cmd_run(const config::ExperimentConfig& cfg);
int cmd_sweep(const config::ExperimentConfig& cfg);
int cmd_bounds(const config::ExperimentConfig& cfg);
int cmd_compare(const config::ExperimentConfig& cfg);

} // namespace sepembed::experiment
