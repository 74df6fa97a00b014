#include "sepembed/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "sepembed/error.hpp"
#include "sepembed/rng.hpp"

namespace sepembed::data {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_long(std::string_view s, long long& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

} // namespace

void Dataset::validate() const {
  if (labels.size() < 2) throw InputError("dataset: need at least 2 samples");
  if (static_cast<std::size_t>(points.rows()) != labels.size()) {
    throw InputError("dataset: " + std::to_string(points.rows()) + " point rows but " +
                     std::to_string(labels.size()) + " labels");
  }
  if (!points.allFinite()) throw InputError("dataset: non-finite coordinate");
  if (num_classes < 1) throw InputError("dataset: no classes");
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 1 || labels[i] > num_classes) {
      throw InputError("dataset: label " + std::to_string(labels[i]) + " at row " + std::to_string(i) +
                       " outside 1.." + std::to_string(num_classes));
    }
    ++counts[static_cast<std::size_t>(labels[i] - 1)];
  }
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) throw InputError("dataset: class " + std::to_string(k + 1) + " has no samples");
  }
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
  for (int c : labels) ++counts[static_cast<std::size_t>(c - 1)];
  return counts;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.points.resize(static_cast<Eigen::Index>(indices.size()), points.cols());
  out.labels.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    out.points.row(static_cast<Eigen::Index>(r)) = points.row(static_cast<Eigen::Index>(indices[r]));
    out.labels.push_back(labels[indices[r]]);
  }
  out.num_classes = num_classes;
  out.name = name;
  return out;
}

Dataset load_csv(const std::filesystem::path& path, std::string_view label_column) {
  std::ifstream in(path);
  if (!in) throw InputError("load_csv: cannot open " + path.string());

  std::string header_line;
  if (!std::getline(in, header_line)) throw InputError("load_csv: " + path.string() + ": empty dataset");
  const auto header = split_fields(header_line);
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw InputError("load_csv: " + path.string() + ": no column named '" + std::string(label_column) + "'");
  }
  const std::size_t label_col = static_cast<std::size_t>(label_it - header.begin());
  const std::size_t n_cols = header.size();

  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::size_t line_no = 1;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != n_cols) {
      throw InputError("load_csv: " + path.string() + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(n_cols) + " fields, found " + std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(n_cols - 1);
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (c == label_col) continue;
      double v = 0.0;
      if (!parse_double(fields[c], v)) {
        throw InputError("load_csv: " + path.string() + ":" + std::to_string(line_no) + ": column '" +
                         std::string(header[c]) + "' is not a finite number: '" + std::string(fields[c]) + "'");
      }
      row.push_back(v);
    }
    if (fields[label_col].empty()) {
      throw InputError("load_csv: " + path.string() + ":" + std::to_string(line_no) + ": empty label");
    }
    rows.push_back(std::move(row));
    raw_labels.emplace_back(fields[label_col]);
  }
  if (rows.empty()) throw InputError("load_csv: " + path.string() + ": empty dataset");

  Dataset ds;
  ds.name = path.stem().string();
  ds.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n_cols - 1));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      ds.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }

  std::vector<long long> as_int(raw_labels.size());
  bool integer_labels = true;
  for (std::size_t i = 0; i < raw_labels.size() && integer_labels; ++i) {
    integer_labels = parse_long(raw_labels[i], as_int[i]);
  }
  ds.labels.reserve(raw_labels.size());
  if (integer_labels) {
    std::map<long long, int> ids;
    for (long long v : as_int) ids.emplace(v, 0);
    int next = 0;
    for (auto& [value, id] : ids) id = ++next;
    for (long long v : as_int) ds.labels.push_back(ids.at(v));
    ds.num_classes = next;
  } else {
    std::unordered_map<std::string, int> ids;
    for (const auto& s : raw_labels) {
      const auto [it, inserted] = ids.emplace(s, static_cast<int>(ids.size()) + 1);
      ds.labels.push_back(it->second);
    }
    ds.num_classes = static_cast<int>(ids.size());
  }
  ds.validate();
  return ds;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path, std::string_view label_column) {
  std::ofstream out(path);
  if (!out) throw InputError("write_csv: cannot open " + path.string() + " for writing");
  for (Eigen::Index c = 0; c < ds.points.cols(); ++c) out << 'x' << (c + 1) << ',';
  out << label_column << '\n';
  char buf[40];
  for (Eigen::Index r = 0; r < ds.points.rows(); ++r) {
    for (Eigen::Index c = 0; c < ds.points.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.points(r, c));
      out << buf << ',';
    }
    out << ds.labels[static_cast<std::size_t>(r)] << '\n';
  }
}

Surface parse_surface(std::string_view tag) {
  if (tag == "quadratic") return Surface::quadratic;
  if (tag == "swissroll") return Surface::swissroll;
  if (tag == "spheres") return Surface::spheres;
  throw InputError("unknown surface '" + std::string(tag) + "' (expected quadratic, swissroll or spheres)");
}

std::string_view surface_name(Surface s) {
  switch (s) {
    case Surface::quadratic: return "quadratic";
    case Surface::swissroll: return "swissroll";
    case Surface::spheres: return "spheres";
  }
  return "unknown";
}

Dataset gen_two_class(Surface surface, std::size_t per_class, double noise, std::uint64_t seed) {
  if (per_class < 2) throw InputError("gen_two_class: per_class must be at least 2");
  if (!(noise >= 0.0)) throw InputError("gen_two_class: noise must be nonnegative");

  constexpr double pi = std::numbers::pi;
  Dataset ds;
  ds.name = std::string(surface_name(surface));
  ds.num_classes = 2;
  ds.points.resize(static_cast<Eigen::Index>(2 * per_class), 3);
  ds.labels.resize(2 * per_class);

  CounterRng rng(seed, /*stream=*/1);
  for (int cls = 1; cls <= 2; ++cls) {
    for (std::size_t i = 0; i < per_class; ++i) {
      const auto row = static_cast<Eigen::Index>((static_cast<std::size_t>(cls) - 1) * per_class + i);
      double x = 0.0, y = 0.0, z = 0.0;
      switch (surface) {
        case Surface::quadratic: {
          x = rng.uniform(-1.0, 1.0);
          y = rng.uniform(-1.0, 1.0);
          z = x * x + y * y + (cls == 2 ? 0.5 : 0.0);
          break;
        }
        case Surface::swissroll: {
          const double t = rng.uniform(1.5 * pi, 4.5 * pi) + (cls == 2 ? pi : 0.0);
          const double h = rng.uniform(0.0, 4.0);
          x = t * std::cos(t);
          y = h;
          z = t * std::sin(t);
          break;
        }
        case Surface::spheres: {
          const double radius = cls == 1 ? 1.0 : 1.6;
          double gx = 0.0, gy = 0.0, gz = 0.0, norm = 0.0;
          while (norm < 1e-12) {
            gx = rng.normal();
            gy = rng.normal();
            gz = rng.normal();
            norm = std::sqrt(gx * gx + gy * gy + gz * gz);
          }
          x = radius * gx / norm;
          y = radius * gy / norm;
          z = radius * gz / norm;
          break;
        }
      }
      if (noise > 0.0) {
        x += noise * rng.normal();
        y += noise * rng.normal();
        z += noise * rng.normal();
      }
      ds.points(row, 0) = x;
      ds.points(row, 1) = y;
      ds.points(row, 2) = z;
      ds.labels[static_cast<std::size_t>(row)] = cls;
    }
  }
  return ds;
}

Split split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InputError("split: train_fraction must lie strictly between 0 and 1");
  }
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(ds.num_classes));
  for (std::size_t i = 0; i < ds.size(); ++i) by_class[static_cast<std::size_t>(ds.labels[i] - 1)].push_back(i);

  Split out;
  out.seed = seed;
  CounterRng rng(seed, /*stream=*/2);
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    auto& members = by_class[k];
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(members.size())));
    if (n_train == 0) {
      throw InputError("split: train_fraction " + std::to_string(train_fraction) + " leaves class " +
                       std::to_string(k + 1) + " (" + std::to_string(members.size()) +
                       " samples) without a training sample");
    }
    for (std::size_t i = members.size(); i > 1; --i) {
      std::swap(members[i - 1], members[rng.below(i)]);
    }
    out.train_indices.insert(out.train_indices.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test_indices.insert(out.test_indices.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
  }
  std::sort(out.train_indices.begin(), out.train_indices.end());
  std::sort(out.test_indices.begin(), out.test_indices.end());
  return out;
}

} // namespace sepembed::data
