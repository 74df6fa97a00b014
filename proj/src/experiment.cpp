#include "sepembed/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "sepembed/bounds.hpp"
#include "sepembed/error.hpp"
#include "sepembed/format.hpp"

namespace sepembed::experiment {

namespace fs = std::filesystem;
using config::ExperimentConfig;
using numerics::Matrix;
using numerics::Vector;

namespace {

constexpr double kHighSigmaFactor = 4.0;

std::string csv_safe(std::string s) {
  for (char& ch : s) {
    if (ch == ',') ch = ';';
    else if (ch == '\n' || ch == '\r' || ch == '"') ch = ' ';
  }
  return s;
}

std::ofstream open_output(const ExperimentConfig& cfg, const std::string& name) {
  const fs::path dir(cfg.outdir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("config: key 'outdir' cannot be created: " + ec.message());
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw InputError("config: key 'outdir': cannot write " + (dir / name).string());
  return out;
}

std::optional<data::Dataset> load_csv_data(const ExperimentConfig& cfg) {
  if (cfg.csv.empty()) return std::nullopt;
  return data::load_csv(cfg.csv, cfg.label_column);
}

embed::Method parse_method(const std::string& m) {
  if (m == "sup_laplacian") return embed::Method::sup_laplacian;
  if (m == "fisher") return embed::Method::fisher;
  if (m == "label_encoding") return embed::Method::label_encoding;
  throw InputError("config: key 'method' must be sup_laplacian, fisher or label_encoding");
}

data::Dataset cell_dataset(const ExperimentConfig& cfg, const CellParams& cell, const data::Dataset* csv_data) {
  if (csv_data) return *csv_data;
  return data::gen_two_class(data::parse_surface(cfg.surface), static_cast<std::size_t>(cell.per_class), cfg.noise,
                             cell.seed);
}

} // namespace

CellParams base_cell(const ExperimentConfig& cfg) {
  CellParams c;
  c.per_class = cfg.per_class;
  c.d = cfg.d;
  c.mu = cfg.mu;
  c.sigma = cfg.sigma;
  c.seed = cfg.seeds.front();
  c.method = cfg.method;
  c.ridge_mode = cfg.ridge_mode;
  c.ridge = cfg.ridge;
  c.classifier = cfg.classifier;
  return c;
}

Pipeline build_pipeline(const ExperimentConfig& cfg, const CellParams& cell, const data::Dataset* csv_data) {
  const data::Dataset ds = cell_dataset(cfg, cell, csv_data);
  const data::Split sp = data::split(ds, cfg.train_fraction, cell.seed);
  data::Dataset train = ds.subset(sp.train_indices);
  data::Dataset test = ds.subset(sp.test_indices);

  graph::BuildOptions opts;
  opts.k_within = cfg.k_within;
  opts.k_between = cfg.k_between;
  opts.heat_t = cfg.heat_t;
  graph::BuildInfo info;
  graph::SupervisedGraph g = graph::build(train, opts, &info);

  const embed::Method method = parse_method(cell.method);
  const int d = cell.d == 0 ? train.num_classes : cell.d;
  embed::Embedding emb;
  switch (method) {
    case embed::Method::sup_laplacian: emb = embed::sup_laplacian(g, d, cell.mu); break;
    case embed::Method::fisher: emb = embed::fisher_trace_ratio(g, d); break;
    case embed::Method::label_encoding: emb = embed::label_encoding(train.labels, train.num_classes); break;
  }

  classify::ClassifierModel model = classify::fit_linear(emb.coords, train.labels, train.num_classes);
  const double ridge = cell.ridge_mode == config::RidgeMode::regularized
                           ? rbf::regularized_ridge(train.points, cell.sigma)
                           : cell.ridge;
  rbf::RbfInterpolator f = rbf::fit(train.points, emb.coords, cell.sigma, ridge);
  const rbf::RegularityStats reg = rbf::regularity(f, train.points, train.labels, emb.coords, cfg.delta);
  return Pipeline{std::move(train), std::move(test), std::move(g), std::move(info), std::move(emb),
                  std::move(model), std::move(f), reg, ridge};
}

namespace {

struct Classified {
  double error = 0.0;
  double unclassifiable = 0.0;
};

Classified classify_rows(const classify::ClassifierModel& model, const Matrix& mapped, const std::vector<int>& truth,
                         bool linear) {
  if (truth.empty()) return {std::nan(""), std::nan("")};
  std::size_t wrong = 0;
  std::size_t fallback = 0;
  for (Eigen::Index i = 0; i < mapped.rows(); ++i) {
    const Vector y = mapped.row(i).transpose();
    int label = 0;
    if (linear) {
      const auto p = classify::predict_linear(model, y);
      label = p.label;
      if (!p.won_outright) ++fallback;
    } else {
      label = classify::predict_nn(model, y);
    }
    if (label != truth[static_cast<std::size_t>(i)]) ++wrong;
  }
  const double n = static_cast<double>(truth.size());
  return {static_cast<double>(wrong) / n, static_cast<double>(fallback) / n};
}

} // namespace

RunRecord run_cell(const ExperimentConfig& cfg, const CellParams& cell, const data::Dataset* csv_data) {
  RunRecord r;
  r.cell = cell;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Pipeline p = build_pipeline(cfg, cell, csv_data);
    const bool linear = cell.classifier == "linear";
    const Classified train = classify_rows(p.model, p.interpolator.eval_rows(p.train.points), p.train.labels, linear);
    const Classified test = classify_rows(p.model, p.interpolator.eval_rows(p.test.points), p.test.labels, linear);
    r.num_classes = p.train.num_classes;
    r.n_train = static_cast<int>(p.train.size());
    r.n_test = static_cast<int>(p.test.size());
    r.d_used = static_cast<int>(p.embedding.dim());
    r.heat_t_used = p.build_info.heat_t;
    r.ridge_used = p.ridge_used;
    r.gamma = p.model.min_margin();
    r.separable = p.model.separable();
    r.C = p.regularity.coeff_bound;
    r.L_phi = p.regularity.lipschitz_phi;
    r.kappa = bounds::condition_kappa(r.d_used, r.C, cell.sigma, r.gamma).value;
    r.train_error = train.error;
    r.test_error = test.error;
    r.unclassifiable = test.unclassifiable;
    r.ok = true;
    r.status = "ok";
  } catch (const NumericalError& e) {
    r.numerical_failure = true;
    r.status = csv_safe(std::string("numerical error: ") + e.what());
  } catch (const InputError& e) {
    r.status = csv_safe(std::string("input error: ") + e.what());
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace {

// ---- run/sweep tables -------------------------------------------------------

std::vector<std::string> metric_names(bool timing) {
  std::vector<std::string> names = {"num_classes", "n_train", "n_test", "d_used", "heat_t_used", "ridge_used",
                                    "gamma", "separable", "C", "L_phi", "kappa", "test_error", "train_error",
                                    "unclassifiable"};
  if (timing) names.push_back("wall_seconds");
  return names;
}

std::vector<double> metrics(const RunRecord& r, bool timing) {
  std::vector<double> v = {static_cast<double>(r.num_classes), static_cast<double>(r.n_train),
                           static_cast<double>(r.n_test), static_cast<double>(r.d_used), r.heat_t_used,
                           r.ridge_used, r.gamma, r.separable ? 1.0 : 0.0, r.C, r.L_phi, r.kappa, r.test_error,
                           r.train_error, r.unclassifiable};
  if (timing) v.push_back(r.wall_seconds);
  return v;
}

std::string dataset_name(const ExperimentConfig& cfg) { return cfg.csv.empty() ? cfg.surface : csv_safe(cfg.csv); }

void write_table_header(std::ostream& out, bool timing) {
  out << "row_type,cell,dataset,per_class,noise,train_fraction,seed,k_within,k_between,heat_t,method,d,mu,sigma,"
         "ridge,classifier,status,n_ok";
  for (const auto& n : metric_names(timing)) out << ',' << n;
  out << '\n';
}

void write_config_fields(std::ostream& out, const ExperimentConfig& cfg, const CellParams& c, const std::string& seed) {
  out << dataset_name(cfg) << ',' << (cfg.csv.empty() ? std::to_string(c.per_class) : std::string()) << ','
      << format_double(cfg.noise) << ',' << format_double(cfg.train_fraction) << ',' << seed << ',' << cfg.k_within
      << ',' << cfg.k_between << ',' << (cfg.heat_t ? format_double(*cfg.heat_t) : "auto") << ',' << c.method << ','
      << c.d << ',' << format_double(c.mu) << ',' << format_double(c.sigma) << ','
      << (c.ridge_mode == config::RidgeMode::regularized ? "regularized" : format_double(c.ridge)) << ','
      << c.classifier;
}

void write_run_row(std::ostream& out, const ExperimentConfig& cfg, std::size_t cell_index, const RunRecord& r) {
  out << "run," << cell_index << ',';
  write_config_fields(out, cfg, r.cell, std::to_string(r.cell.seed));
  out << ',' << r.status << ',' << (r.ok ? 1 : 0);
  const auto v = metrics(r, cfg.timing);
  for (double x : v) {
    out << ',';
    if (r.ok) out << format_double(x);
  }
  out << '\n';
}

void write_aggregate_rows(std::ostream& out, const ExperimentConfig& cfg, std::size_t cell_index,
                          const std::vector<RunRecord>& runs) {
  std::vector<std::vector<double>> ok;
  for (const auto& r : runs) {
    if (r.ok) ok.push_back(metrics(r, cfg.timing));
  }
  const std::size_t width = metric_names(cfg.timing).size();
  std::vector<double> mean(width, 0.0), sd(width, 0.0);
  for (std::size_t j = 0; j < width; ++j) {
    if (ok.empty()) break;
    double sum = 0.0;
    for (const auto& v : ok) sum += v[j];
    mean[j] = sum / static_cast<double>(ok.size());
    double ss = 0.0;
    for (const auto& v : ok) ss += (v[j] - mean[j]) * (v[j] - mean[j]);
    sd[j] = ok.size() > 1 ? std::sqrt(ss / static_cast<double>(ok.size() - 1)) : 0.0;
  }
  const std::pair<const char*, const std::vector<double>*> kinds[] = {{"mean", &mean}, {"std", &sd}};
  for (const auto& [kind, values] : kinds) {
    out << kind << ',' << cell_index << ',';
    write_config_fields(out, cfg, runs.front().cell, "");
    out << ',' << "aggregate" << ',' << ok.size();
    for (double x : *values) {
      out << ',';
      if (!ok.empty()) out << format_double(x);
    }
    out << '\n';
  }
}

template <class T>
std::vector<T> axis_or(const std::vector<T>& axis, T base) {
  return axis.empty() ? std::vector<T>{base} : axis;
}

} // namespace

int cmd_synth(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.csv.empty()) throw InputError("config: key 'csv' is set; synth only generates synthetic data");
  const auto sizes = axis_or(cfg.sweep_per_class, cfg.per_class);
  for (int n : sizes) {
    for (std::uint64_t seed : cfg.seeds) {
      const auto ds = data::gen_two_class(data::parse_surface(cfg.surface), static_cast<std::size_t>(n), cfg.noise, seed);
      std::error_code ec;
      fs::create_directories(cfg.outdir, ec);
      if (ec) throw InputError("config: key 'outdir' cannot be created: " + ec.message());
      const std::string name = cfg.surface + "_n" + std::to_string(n) + "_seed" + std::to_string(seed) + ".csv";
      data::write_csv(ds, fs::path(cfg.outdir) / name);
    }
  }
  return 0;
}

int cmd_run(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto csv_data = load_csv_data(cfg);
  auto out = open_output(cfg, "runs.csv");
  write_table_header(out, cfg.timing);
  int code = 0;
  for (std::uint64_t seed : cfg.seeds) {
    CellParams cell = base_cell(cfg);
    cell.seed = seed;
    const RunRecord r = run_cell(cfg, cell, csv_data ? &*csv_data : nullptr);
    write_run_row(out, cfg, 0, r);
    if (!r.ok) code = std::max(code, r.numerical_failure ? 3 : 2);
  }
  return code;
}

int cmd_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto csv_data = load_csv_data(cfg);
  auto out = open_output(cfg, "sweep.csv");
  write_table_header(out, cfg.timing);
  std::size_t cell_index = 0;
  for (int n : axis_or(cfg.sweep_per_class, cfg.per_class)) {
    for (int d : axis_or(cfg.sweep_d, cfg.d)) {
      for (double mu : axis_or(cfg.sweep_mu, cfg.mu)) {
        for (double sigma : axis_or(cfg.sweep_sigma, cfg.sigma)) {
          std::vector<RunRecord> runs;
          for (std::uint64_t seed : cfg.seeds) {
            CellParams cell = base_cell(cfg);
            cell.per_class = n;
            cell.d = d;
            cell.mu = mu;
            cell.sigma = sigma;
            cell.seed = seed;
            runs.push_back(run_cell(cfg, cell, csv_data ? &*csv_data : nullptr));
          }
          for (const auto& r : runs) write_run_row(out, cfg, cell_index, r);
          write_aggregate_rows(out, cfg, cell_index, runs);
          ++cell_index;
        }
      }
    }
  }
  return 0;
}

// ---- bounds -------------------------------------------------------------------

int cmd_bounds(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto csv_data = load_csv_data(cfg);
  const CellParams cell = base_cell(cfg);
  const Pipeline p = build_pipeline(cfg, cell, csv_data ? &*csv_data : nullptr);
  const auto& train = p.train;
  const int m = train.num_classes;
  const double d = static_cast<double>(p.embedding.dim());
  const double gamma = p.model.min_margin();
  const graph::GraphStats st = graph::stats(p.graph);

  std::vector<bounds::BoundRow> rows;
  const auto add = [&](std::string name, std::vector<std::pair<std::string, double>> params, double value,
                       bool applicable) { rows.push_back({std::move(name), std::move(params), value, applicable}); };

  add("empirical_gamma", {{"d", d}, {"mu", cell.mu}}, gamma, p.model.separable());

  const auto t6 = bounds::thm6_report(st, cell.mu);
  const std::vector<std::pair<std::string, double>> t6_params = {
      {"mu", cell.mu}, {"mu_max", t6.mu_max}, {"V_max", st.volume_max}, {"Vb_max", st.between_volume_max},
      {"w_bar_min", st.w_bar_min}, {"beta_min", st.beta_min}, {"beta_max", st.beta_max},
      {"d_w_min", st.degree_within_min}};
  add("thm6_z_bound", t6_params, t6.z_bound, t6.applicable);
  add("thm6_y_bound", t6_params, t6.y_bound, t6.applicable);
  if (m == 2 && p.embedding.normalized) {
    const double z_sep = bounds::two_class_separation(p.embedding.normalized->col(0), train.labels);
    const double y_sep = bounds::two_class_separation(p.embedding.coords.col(0), train.labels);
    add("empirical_z_separation", {{"mu", cell.mu}}, z_sep, true);
    add("empirical_y_separation", {{"mu", cell.mu}}, y_sep, true);
    add("cor8_origin_bound", {{"separation", std::max(z_sep, 0.0)}, {"beta_min", st.beta_min}, {"beta_max", st.beta_max}},
        bounds::cor8_bound(st, std::max(z_sep, 0.0)), t6.applicable && z_sep >= 0.0);
  }

  const auto kappa = bounds::condition_kappa(d, p.regularity.coeff_bound, cell.sigma, gamma);
  add("kappa", {{"d", d}, {"C", p.regularity.coeff_bound}, {"sigma", cell.sigma}, {"gamma", gamma}}, kappa.value,
      kappa.finite);

  const rbf::RegularityStats reg2 =
      rbf::regularity(p.interpolator, train.points, train.labels, p.embedding.coords, 2.0 * cfg.delta);
  const double lip = std::sqrt(d) * p.regularity.coeff_bound * p.regularity.lipschitz_phi;
  const auto counts = train.class_counts();
  for (int k = 1; k <= m; ++k) {
    const double n_m = static_cast<double>(counts[static_cast<std::size_t>(k - 1)]);
    const Matrix pts = classify::rows_of_class(train.points, train.labels, k);
    const double eta = bounds::estimate_eta(train.points, train.labels, k, cfg.delta);
    add("eta_estimate", {{"class", k}, {"delta", cfg.delta}}, eta, true);
    const int cover = bounds::covering_number_greedy(pts, cfg.epsilon / 2.0);
    add("covering_greedy", {{"class", k}, {"radius", cfg.epsilon / 2.0}}, cover, true);
    const auto t1 = bounds::thm1_bound(n_m, cover);
    add("thm1", {{"class", k}, {"N_m", n_m}, {"cover", cover}}, t1.value, t1.applicable);

    bounds::BoundInputs in;
    in.N = static_cast<double>(train.size());
    in.N_m = n_m;
    in.Q = cfg.Q ? *cfg.Q : n_m * eta / 2.0;
    in.delta = cfg.delta;
    in.epsilon = cfg.epsilon;
    in.d = d;
    in.L = lip;
    in.L_phi = p.regularity.lipschitz_phi;
    in.C = p.regularity.coeff_bound;
    in.gamma = gamma;
    in.gamma_Q = gamma;
    in.eta = eta;
    in.D_2delta = reg2.co_diameter;
    const std::pair<const char*, bounds::ProbabilityBound (*)(const bounds::BoundInputs&)> thms[] = {
        {"thm3", bounds::thm3_bound}, {"thm4", bounds::thm4_bound}, {"thm11", bounds::thm11_bound},
        {"thm12", bounds::thm12_bound}};
    for (const auto& [name, fn] : thms) {
      const auto b = fn(in);
      add(name,
          {{"class", k}, {"N", in.N}, {"N_m", in.N_m}, {"Q", in.Q}, {"delta", in.delta}, {"epsilon", in.epsilon},
           {"d", in.d}, {"L", in.L}, {"L_phi", in.L_phi}, {"C", in.C}, {"gamma", in.gamma}, {"gamma_Q", in.gamma_Q},
           {"eta", in.eta}, {"D_2delta", in.D_2delta}, {"sample_condition", b.applicable ? 1.0 : 0.0},
           {"margin_condition", b.condition_ok ? 1.0 : 0.0}},
          b.value, b.applicable && b.condition_ok);
    }
  }

  if (!cfg.categories.empty()) {
    if (static_cast<int>(cfg.categories.size()) != m) {
      throw InputError("config: key 'categories' needs one entry per class (" + std::to_string(m) + ")");
    }
    const int num_cat = *std::max_element(cfg.categories.begin(), cfg.categories.end());
    std::vector<int> dims(static_cast<std::size_t>(num_cat), 0);
    for (int c : cfg.categories) ++dims[static_cast<std::size_t>(c - 1)];
    const auto t9 = bounds::thm9_report(p.graph, cell.mu, cfg.categories, dims);
    add("thm9_predicted_gamma",
        {{"mu", cell.mu}, {"Lnc_norm", t9.lnc_norm}, {"eta_gap", t9.eta_gap}, {"xi", t9.xi}, {"zeta", t9.zeta},
         {"gamma_c", t9.gamma_c}, {"empirical_gamma", t9.empirical_gamma}},
        t9.predicted_gamma, t9.applicable);
  }

  if (cfg.alpha_const > 0.0 && cfg.beta_const > 0.0) {
    const double n_total = static_cast<double>(train.size());
    const auto [a1, a2] = bounds::compose_a(cfg.beta_const, n_total, d, cfg.delta, cfg.epsilon);
    const int n_amb = static_cast<int>(train.dim());
    const double s = bounds::optimal_sigma(cfg.alpha_const, a1, a2, n_amb);
    add("optimal_sigma",
        {{"alpha", cfg.alpha_const}, {"beta", cfg.beta_const}, {"N", n_total}, {"d", d}, {"n", n_amb}, {"a1", a1},
         {"a2", a2}},
        s, true);
    const double a = cfg.beta_const * std::sqrt(n_total);
    add("analytic_coeff_bound", {{"a", a}, {"sigma", s}, {"n", n_amb}, {"alpha", cfg.alpha_const}},
        bounds::analytic_coeff_bound(a, s, n_amb, cfg.alpha_const), true);
  }

  // Order-of-magnitude expression; Theta is the largest class diameter.
  double theta = 0.0;
  for (Eigen::Index i = 0; i < train.points.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < train.points.rows(); ++j) {
      if (train.labels[static_cast<std::size_t>(i)] == train.labels[static_cast<std::size_t>(j)]) {
        theta = std::max(theta, (train.points.row(i) - train.points.row(j)).norm());
      }
    }
  }
  const double n_min = static_cast<double>(*std::min_element(counts.begin(), counts.end()));
  if (theta > 0.0) {
    for (int D = 2; D <= 6; ++D) {
      add("dimension_scaling_order",
          {{"D", D}, {"delta", cfg.delta}, {"Theta", theta}, {"N_m", n_min}, {"N", static_cast<double>(train.size())},
           {"epsilon", cfg.epsilon}, {"L_phi", p.regularity.lipschitz_phi}},
          bounds::dimension_scaling(D, cfg.delta, theta, n_min, static_cast<double>(train.size()), cfg.epsilon,
                                    p.regularity.lipschitz_phi),
          false);
    }
  }

  auto out = open_output(cfg, "bounds.csv");
  bounds::write_bounds_csv(rows, out);
  return 0;
}

// ---- compare ------------------------------------------------------------------

namespace {

struct CompareRow {
  int per_class = 0;
  std::string seed;
  std::string method;
  std::string param;
  std::string status;
  bool ok = false;
  double d = 0.0, C = 0.0, sigma = 0.0, gamma = 0.0, kappa = 0.0, test_error = 0.0, train_error = 0.0;
  bool has_kappa = false;
};

void write_compare_header(std::ostream& out) {
  out << "row_type,dataset,per_class,noise,train_fraction,seed,k_within,k_between,heat_t,mu,classifier,method,param,"
         "status,d,C,sigma,gamma,kappa,test_error,train_error\n";
}

void write_compare_row(std::ostream& out, const ExperimentConfig& cfg, const std::string& row_type,
                       const CompareRow& r) {
  out << row_type << ',' << dataset_name(cfg) << ',' << (cfg.csv.empty() ? std::to_string(r.per_class) : "") << ','
      << format_double(cfg.noise) << ',' << format_double(cfg.train_fraction) << ',' << r.seed << ',' << cfg.k_within
      << ',' << cfg.k_between << ',' << (cfg.heat_t ? format_double(*cfg.heat_t) : "auto") << ','
      << format_double(cfg.mu) << ',' << cfg.classifier << ',' << r.method << ',' << r.param << ',' << r.status;
  const auto opt = [&](bool have, double v) { return have ? format_double(v) : std::string(); };
  out << ',' << opt(r.ok && r.has_kappa, r.d) << ',' << opt(r.ok && r.has_kappa, r.C) << ','
      << opt(r.ok && r.has_kappa, r.sigma) << ',' << opt(r.ok && r.has_kappa, r.gamma) << ','
      << opt(r.ok && r.has_kappa, r.kappa) << ',' << opt(r.ok, r.test_error) << ',' << opt(r.ok, r.train_error)
      << '\n';
}

CompareRow mean_row(const std::vector<CompareRow>& rows) {
  CompareRow m = rows.front();
  m.seed = "";
  std::size_t n = 0;
  double d = 0, C = 0, s = 0, g = 0, k = 0, te = 0, tr = 0;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    ++n;
    d += r.d;
    C += r.C;
    s += r.sigma;
    g += r.gamma;
    k += r.kappa;
    te += r.test_error;
    tr += r.train_error;
  }
  m.ok = n > 0;
  m.status = "aggregate n_ok=" + std::to_string(n);
  if (n > 0) {
    const double nn = static_cast<double>(n);
    m.d = d / nn;
    m.C = C / nn;
    m.sigma = s / nn;
    m.gamma = g / nn;
    m.kappa = k / nn;
    m.test_error = te / nn;
    m.train_error = tr / nn;
  }
  return m;
}

struct Variant {
  const char* name;
  const char* method;
  double sigma_factor;
  bool regularized;
};

} // namespace

int cmd_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto csv_data = load_csv_data(cfg);
  const data::Dataset* csv_ptr = csv_data ? &*csv_data : nullptr;
  auto out = open_output(cfg, "compare.csv");
  write_compare_header(out);

  const Variant variants[] = {
      {"sup_laplacian", "sup_laplacian", 1.0, false},
      {"sup_laplacian_regularized", "sup_laplacian", 1.0, true},
      {"fisher", "fisher", 1.0, false},
      {"label_encoding", "label_encoding", 1.0, false},
      {"sup_laplacian_high_sigma", "sup_laplacian", kHighSigmaFactor, false},
      {"label_encoding_high_sigma", "label_encoding", kHighSigmaFactor, false},
  };
  const std::vector<int> knn_grid = {1, 3, 5};
  const std::vector<double> kr_factors = {0.25, 0.5, 1.0, 2.0, 4.0};

  for (int n : axis_or(cfg.sweep_per_class, cfg.per_class)) {
    for (const auto& v : variants) {
      std::vector<CompareRow> rows;
      for (std::uint64_t seed : cfg.seeds) {
        CellParams cell = base_cell(cfg);
        cell.per_class = n;
        cell.seed = seed;
        cell.method = v.method;
        cell.sigma = cfg.sigma * v.sigma_factor;
        if (v.regularized) cell.ridge_mode = config::RidgeMode::regularized;
        const RunRecord r = run_cell(cfg, cell, csv_ptr);
        CompareRow row;
        row.per_class = n;
        row.seed = std::to_string(seed);
        row.method = v.name;
        row.param = "sigma=" + format_double(cell.sigma);
        row.status = r.status;
        row.ok = r.ok;
        row.has_kappa = true;
        row.d = r.d_used;
        row.C = r.C;
        row.sigma = cell.sigma;
        row.gamma = r.gamma;
        row.kappa = r.kappa;
        row.test_error = r.test_error;
        row.train_error = r.train_error;
        rows.push_back(row);
      }
      for (const auto& r : rows) write_compare_row(out, cfg, "run", r);
      write_compare_row(out, cfg, "mean", mean_row(rows));
    }

    // Ambient-space baselines: each grid value evaluated on every seed, the
    // value with the lowest mean test error reported.
    struct Split {
      data::Dataset train, test;
    };
    std::vector<Split> splits;
    std::vector<std::string> split_status;
    for (std::uint64_t seed : cfg.seeds) {
      CellParams cell = base_cell(cfg);
      cell.per_class = n;
      cell.seed = seed;
      try {
        const data::Dataset ds = cell_dataset(cfg, cell, csv_ptr);
        const data::Split sp = data::split(ds, cfg.train_fraction, seed);
        splits.push_back({ds.subset(sp.train_indices), ds.subset(sp.test_indices)});
        split_status.push_back("ok");
      } catch (const InputError& e) {
        splits.push_back({});
        split_status.push_back(csv_safe(std::string("input error: ") + e.what()));
      }
    }
    using Predictor = std::function<int(const data::Dataset&, const Vector&)>;
    const auto evaluate = [&](const std::string& method, const std::vector<std::pair<std::string, Predictor>>& grid) {
      std::vector<std::vector<CompareRow>> per_param;
      for (const auto& [param, predict] : grid) {
        std::vector<CompareRow> rows;
        for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
          CompareRow row;
          row.per_class = n;
          row.seed = std::to_string(cfg.seeds[s]);
          row.method = method;
          row.param = param;
          row.status = split_status[s];
          row.ok = split_status[s] == "ok";
          if (row.ok) {
            try {
              const auto err = [&](const data::Dataset& part) {
                if (part.size() == 0) return std::nan("");
                std::size_t wrong = 0;
                for (Eigen::Index i = 0; i < part.points.rows(); ++i) {
                  if (predict(splits[s].train, part.points.row(i).transpose()) != part.labels[static_cast<std::size_t>(i)]) ++wrong;
                }
                return static_cast<double>(wrong) / static_cast<double>(part.size());
              };
              row.test_error = err(splits[s].test);
              row.train_error = err(splits[s].train);
            } catch (const InputError& e) {
              row.ok = false;
              row.status = csv_safe(std::string("input error: ") + e.what());
            }
          }
          rows.push_back(row);
        }
        per_param.push_back(std::move(rows));
      }
      std::size_t best = 0;
      double best_err = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < per_param.size(); ++j) {
        const CompareRow m = mean_row(per_param[j]);
        if (m.ok && m.test_error < best_err) {
          best_err = m.test_error;
          best = j;
        }
      }
      for (const auto& r : per_param[best]) write_compare_row(out, cfg, "run", r);
      write_compare_row(out, cfg, "mean", mean_row(per_param[best]));
    };

    std::vector<std::pair<std::string, Predictor>> knn;
    for (int k : knn_grid) {
      knn.emplace_back("k=" + std::to_string(k), [k](const data::Dataset& tr, const Vector& x) {
        return classify::baseline_knn(tr.points, tr.labels, tr.num_classes, std::min<int>(k, static_cast<int>(tr.size())), x);
      });
    }
    evaluate("baseline_knn", knn);

    std::vector<std::pair<std::string, Predictor>> kr;
    for (double f : kr_factors) {
      const double s = cfg.sigma * f;
      kr.emplace_back("sigma=" + format_double(s), [s](const data::Dataset& tr, const Vector& x) {
        return classify::baseline_kernel_regression(tr.points, tr.labels, tr.num_classes, s, x).label;
      });
    }
    evaluate("baseline_kernel_regression", kr);
  }
  return 0;
}

} // namespace sepembed::experiment
