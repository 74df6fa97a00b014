#include "sepembed/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sepembed/error.hpp"
#include "sepembed/format.hpp"

namespace sepembed::config {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view expected) {
  throw InputError("config: invalid value '" + std::string(value) + "' for key '" + std::string(key) + "' (expected " +
                   std::string(expected) + ")");
}

double to_double(std::string_view key, std::string_view v) {
  v = trim(v);
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) bad(key, v, "a number");
  return out;
}

long long to_integer(std::string_view key, std::string_view v) {
  v = trim(v);
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) bad(key, v, "an integer");
  return out;
}

int to_int(std::string_view key, std::string_view v) {
  const long long x = to_integer(key, v);
  if (x < -1000000000LL || x > 1000000000LL) bad(key, v, "an integer of moderate size");
  return static_cast<int>(x);
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  v = trim(v);
  if (v.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = v.find(',', start);
    out.push_back(trim(v.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T, class F>
std::vector<T> to_list(std::string_view key, std::string_view v, F convert) {
  std::vector<T> out;
  for (auto item : split_list(v)) out.push_back(convert(key, item));
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F to_text) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += to_text(xs[i]);
  }
  return out;
}

std::string fmt_int(long long v) { return std::to_string(v); }

bool to_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(key, v, "true or false");
}

const std::vector<KeyInfo> kKeys = {
    {"dataset", "surface", "synthetic surface: quadratic, swissroll or spheres"},
    {"dataset", "per_class", "synthetic samples per class"},
    {"dataset", "noise", "standard deviation of Gaussian noise added to synthetic points"},
    {"dataset", "csv", "path of a CSV dataset (replaces the synthetic generator)"},
    {"dataset", "label_column", "name of the label column in the CSV"},
    {"split", "train_fraction", "fraction of each class used for training, in (0, 1)"},
    {"split", "seeds", "comma-separated list of seeds"},
    {"graph", "k_within", "within-class neighbors per sample"},
    {"graph", "k_between", "between-class neighbors per sample"},
    {"graph", "heat_t", "heat kernel width, or auto for the median within-class k-NN distance"},
    {"embedding", "method", "sup_laplacian, fisher or label_encoding"},
    {"embedding", "d", "embedding dimension (0 = number of classes)"},
    {"embedding", "mu", "between-class weight of the supervised Laplacian"},
    {"interpolator", "sigma", "Gaussian RBF scale"},
    {"interpolator", "ridge", "ridge added to the kernel matrix, or regularized for 1e-6 tr(Phi)/N"},
    {"classifier", "classifier", "nn or linear"},
    {"sweep", "sweep_per_class", "samples-per-class axis (empty: use per_class)"},
    {"sweep", "sweep_d", "dimension axis (empty: use d)"},
    {"sweep", "sweep_mu", "mu axis (empty: use mu)"},
    {"sweep", "sweep_sigma", "sigma axis (empty: use sigma)"},
    {"bounds", "delta", "neighborhood radius delta"},
    {"bounds", "epsilon", "deviation epsilon"},
    {"bounds", "Q", "neighbor count Q, or preset for N_m eta / 2"},
    {"bounds", "categories", "category of each class, comma-separated (empty: no category report)"},
    {"bounds", "alpha_const", "kernel-inverse constant alpha (0: skip the scale optimum)"},
    {"bounds", "beta_const", "kernel-inverse constant beta"},
    {"output", "outdir", "output directory"},
    {"output", "timing", "append wall time columns (makes output nondeterministic)"},
};

} // namespace

const std::vector<KeyInfo>& known_keys() { return kKeys; }

void apply(ExperimentConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view v = trim(raw);
  if (key == "surface") c.surface = std::string(v);
  else if (key == "per_class") c.per_class = to_int(key, v);
  else if (key == "noise") c.noise = to_double(key, v);
  else if (key == "csv") c.csv = std::string(v);
  else if (key == "label_column") c.label_column = std::string(v);
  else if (key == "train_fraction") c.train_fraction = to_double(key, v);
  else if (key == "seeds") {
    c.seeds = to_list<std::uint64_t>(key, v, [](std::string_view k, std::string_view s) {
      const long long x = to_integer(k, s);
      if (x < 0) bad(k, s, "a nonnegative integer");
      return static_cast<std::uint64_t>(x);
    });
  }
  else if (key == "k_within") c.k_within = to_int(key, v);
  else if (key == "k_between") c.k_between = to_int(key, v);
  else if (key == "heat_t") {
    if (v == "auto" || v.empty()) c.heat_t.reset();
    else c.heat_t = to_double(key, v);
  }
  else if (key == "method") c.method = std::string(v);
  else if (key == "d") c.d = to_int(key, v);
  else if (key == "mu") c.mu = to_double(key, v);
  else if (key == "sigma") c.sigma = to_double(key, v);
  else if (key == "ridge") {
    if (v == "regularized") {
      c.ridge_mode = RidgeMode::regularized;
      c.ridge = 0.0;
    } else {
      c.ridge_mode = RidgeMode::fixed;
      c.ridge = to_double(key, v);
    }
  }
  else if (key == "classifier") c.classifier = std::string(v);
  else if (key == "sweep_per_class") c.sweep_per_class = to_list<int>(key, v, to_int);
  else if (key == "sweep_d") c.sweep_d = to_list<int>(key, v, to_int);
  else if (key == "sweep_mu") c.sweep_mu = to_list<double>(key, v, to_double);
  else if (key == "sweep_sigma") c.sweep_sigma = to_list<double>(key, v, to_double);
  else if (key == "delta") c.delta = to_double(key, v);
  else if (key == "epsilon") c.epsilon = to_double(key, v);
  else if (key == "Q") {
    if (v == "preset" || v.empty()) c.Q.reset();
    else c.Q = to_double(key, v);
  }
  else if (key == "categories") c.categories = to_list<int>(key, v, to_int);
  else if (key == "alpha_const") c.alpha_const = to_double(key, v);
  else if (key == "beta_const") c.beta_const = to_double(key, v);
  else if (key == "outdir") c.outdir = std::string(v);
  else if (key == "timing") c.timing = to_bool(key, v);
  else throw InputError("config: unknown key '" + std::string(key) + "'");
}

std::string value_of(const ExperimentConfig& c, std::string_view key) {
  if (key == "surface") return c.surface;
  if (key == "per_class") return fmt_int(c.per_class);
  if (key == "noise") return format_double(c.noise);
  if (key == "csv") return c.csv;
  if (key == "label_column") return c.label_column;
  if (key == "train_fraction") return format_double(c.train_fraction);
  if (key == "seeds") return join(c.seeds, [](std::uint64_t s) { return std::to_string(s); });
  if (key == "k_within") return fmt_int(c.k_within);
  if (key == "k_between") return fmt_int(c.k_between);
  if (key == "heat_t") return c.heat_t ? format_double(*c.heat_t) : "auto";
  if (key == "method") return c.method;
  if (key == "d") return fmt_int(c.d);
  if (key == "mu") return format_double(c.mu);
  if (key == "sigma") return format_double(c.sigma);
  if (key == "ridge") return c.ridge_mode == RidgeMode::regularized ? "regularized" : format_double(c.ridge);
  if (key == "classifier") return c.classifier;
  if (key == "sweep_per_class") return join(c.sweep_per_class, fmt_int);
  if (key == "sweep_d") return join(c.sweep_d, fmt_int);
  if (key == "sweep_mu") return join(c.sweep_mu, format_double);
  if (key == "sweep_sigma") return join(c.sweep_sigma, format_double);
  if (key == "delta") return format_double(c.delta);
  if (key == "epsilon") return format_double(c.epsilon);
  if (key == "Q") return c.Q ? format_double(*c.Q) : "preset";
  if (key == "categories") return join(c.categories, fmt_int);
  if (key == "alpha_const") return format_double(c.alpha_const);
  if (key == "beta_const") return format_double(c.beta_const);
  if (key == "outdir") return c.outdir;
  if (key == "timing") return c.timing ? "true" : "false";
  throw InputError("config: unknown key '" + std::string(key) + "'");
}

void ExperimentConfig::validate() const {
  const auto fail = [](std::string_view key, const std::string& why) {
    throw InputError("config: key '" + std::string(key) + "' " + why);
  };
  if (csv.empty() && surface != "quadratic" && surface != "swissroll" && surface != "spheres") {
    fail("surface", "must be quadratic, swissroll or spheres");
  }
  if (per_class < 2) fail("per_class", "must be at least 2");
  if (!(noise >= 0.0)) fail("noise", "must be nonnegative");
  if (label_column.empty()) fail("label_column", "must not be empty");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) fail("train_fraction", "must lie strictly between 0 and 1");
  if (seeds.empty()) fail("seeds", "needs at least one seed");
  if (k_within < 1) fail("k_within", "must be at least 1");
  if (k_between < 1) fail("k_between", "must be at least 1");
  if (heat_t && !(*heat_t > 0.0)) fail("heat_t", "must be positive or auto");
  if (method != "sup_laplacian" && method != "fisher" && method != "label_encoding") {
    fail("method", "must be sup_laplacian, fisher or label_encoding");
  }
  if (d < 0) fail("d", "must be nonnegative");
  if (!(mu > 0.0)) fail("mu", "must be positive");
  if (!(sigma > 0.0)) fail("sigma", "must be positive");
  if (!(ridge >= 0.0)) fail("ridge", "must be nonnegative or regularized");
  if (classifier != "nn" && classifier != "linear") fail("classifier", "must be nn or linear");
  if (!csv.empty() && !sweep_per_class.empty()) fail("sweep_per_class", "cannot be used with a CSV dataset");
  for (int v : sweep_per_class) if (v < 2) fail("sweep_per_class", "entries must be at least 2");
  for (int v : sweep_d) if (v < 0) fail("sweep_d", "entries must be nonnegative");
  for (double v : sweep_mu) if (!(v > 0.0)) fail("sweep_mu", "entries must be positive");
  for (double v : sweep_sigma) if (!(v > 0.0)) fail("sweep_sigma", "entries must be positive");
  if (!(delta > 0.0)) fail("delta", "must be positive");
  if (!(epsilon > 0.0)) fail("epsilon", "must be positive");
  if (Q && !(*Q >= 0.0)) fail("Q", "must be nonnegative or preset");
  for (int v : categories) if (v < 1) fail("categories", "entries must be positive category numbers");
  if (!(alpha_const >= 0.0)) fail("alpha_const", "must be nonnegative");
  if (!(beta_const >= 0.0)) fail("beta_const", "must be nonnegative");
  if (outdir.empty()) fail("outdir", "must not be empty");
}

void load_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open " + path.string());
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#' || s.front() == ';') continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (s.front() == '[') {
      if (s.back() != ']') throw InputError("config: " + where + ": malformed section header");
      section = std::string(trim(s.substr(1, s.size() - 2)));
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string_view::npos) throw InputError("config: " + where + ": expected key = value");
    const std::string_view key = trim(s.substr(0, eq));
    const auto it = std::find_if(kKeys.begin(), kKeys.end(), [&](const KeyInfo& k) { return k.key == key; });
    if (it == kKeys.end()) throw InputError("config: " + where + ": unknown key '" + std::string(key) + "'");
    if (it->section != section) {
      throw InputError("config: " + where + ": key '" + std::string(key) + "' belongs in section [" +
                       std::string(it->section) + "]");
    }
    apply(cfg, key, s.substr(eq + 1));
  }
}

std::string to_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  std::string_view section;
  for (const auto& k : kKeys) {
    if (k.section != section) {
      if (!section.empty()) out << '\n';
      section = k.section;
      out << '[' << section << "]\n";
    }
    out << k.key << " = " << value_of(cfg, k.key) << '\n';
  }
  return out.str();
}

} // namespace sepembed::config
