#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sepembed/numerics.hpp"

namespace sepembed::data {

using numerics::Matrix;

/// Labeled point cloud. Rows of `points` are samples; labels are class
/// indices 1..num_classes.
struct Dataset {
  Matrix points;
  std::vector<int> labels;
  int num_classes = 0;
  std::string name;

  std::size_t size() const { return labels.size(); }
  Eigen::Index dim() const { return points.cols(); }

  /// Throws InputError unless every invariant holds.
  void validate() const;
  /// Number of samples per class, indexed by class - 1.
  std::vector<std::size_t> class_counts() const;
  /// Rows listed in `indices`, in that order.
  Dataset subset(const std::vector<std::size_t>& indices) const;
};

/// Reads a comma-separated file with one header row. Every column except
/// `label_column` is a numeric feature. Labels that all parse as integers are
/// mapped to 1..M by ascending value; otherwise by order of first appearance.
Dataset load_csv(const std::filesystem::path& path, std::string_view label_column);

/// Writes features as x1..xn followed by `label_column`, 17 significant digits.
void write_csv(const Dataset& ds, const std::filesystem::path& path, std::string_view label_column = "label");

enum class Surface { quadratic, swissroll, spheres };

Surface parse_surface(std::string_view tag);
std::string_view surface_name(Surface s);

/// Two nonintersecting classes in R^3, `per_class` points each, rows ordered
/// class 1 then class 2.
Dataset gen_two_class(Surface surface, std::size_t per_class, double noise, std::uint64_t seed);

struct Split {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::uint64_t seed = 0;
};

/// Stratified split: class m contributes round(train_fraction * N_m) training
/// samples. Both index lists are sorted.
Split split(const Dataset& ds, double train_fraction, std::uint64_t seed);

} // namespace sepembed::data
