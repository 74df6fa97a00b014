#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sepembed::config {

enum class RidgeMode { fixed, regularized };

struct ExperimentConfig {
  // [dataset]
  std::string surface = "quadratic";
  int per_class = 50;
  double noise = 0.0;
  std::string csv;  ///< when set, replaces the synthetic generator
  std::string label_column = "label";
  // [split]
  double train_fraction = 0.5;
  std::vector<std::uint64_t> seeds{1};
  // [graph]
  int k_within = 10;
  int k_between = 2;
  std::optional<double> heat_t;
  // [embedding]
  std::string method = "sup_laplacian";
  int d = 0;  ///< 0 selects the number of classes
  double mu = 0.01;
  // [interpolator]
  double sigma = 0.7;
  RidgeMode ridge_mode = RidgeMode::fixed;
  double ridge = 0.0;
  // [classifier]
  std::string classifier = "nn";
  // [sweep]
  std::vector<int> sweep_per_class;
  std::vector<int> sweep_d;
  std::vector<double> sweep_mu;
  std::vector<double> sweep_sigma;
  // [bounds]
  double delta = 0.1;
  double epsilon = 0.05;
  std::optional<double> Q;  ///< unset: Q = N_m eta / 2
  std::vector<int> categories;
  double alpha_const = 0.0;
  double beta_const = 0.0;
  // [output]
  std::string outdir = "out";
  bool timing = false;

  /// Cross-field checks; throws InputError naming the offending key.
  void validate() const;
};

struct KeyInfo {
  std::string_view section;
  std::string_view key;
  std::string_view help;
};

/// Every recognized key, in file order. Keys are unique across sections.
const std::vector<KeyInfo>& known_keys();

/// Sets one key from its text form; throws InputError naming the key.
void apply(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Current value of a key in the text form accepted by apply().
std::string value_of(const ExperimentConfig& cfg, std::string_view key);

/// Reads `key = value` lines grouped under `[section]` headers. Blank lines
/// and lines starting with `#` or `;` are ignored. Keys must sit under their
/// own section.
void load_file(ExperimentConfig& cfg, const std::filesystem::path& path);

/// Writes the configuration back in the file format.
std::string to_text(const ExperimentConfig& cfg);

} // namespace sepembed::config
