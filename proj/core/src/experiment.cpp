#include "lotwassmap/experiment.hpp"

#include "lotwassmap/eval.hpp"
#include "lotwassmap/io.hpp"
#include "lotwassmap/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <sstream>
#include <thread>

namespace lotwassmap {

using nlohmann::json;

namespace {

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::CircleTranslation, "circle-translation"},
    {ExperimentKind::Rotation, "rotation"},
    {ExperimentKind::GridTranslation, "grid-translation"},
    {ExperimentKind::Dilation, "dilation"},
    {ExperimentKind::Timing, "timing"},
};

bool uses_circle(ExperimentKind k) {
  return k == ExperimentKind::CircleTranslation || k == ExperimentKind::Rotation;
}

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

// --- typed accessors that report the key path on failure ---

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) throw ConfigError(join_path(path, key), "unknown key");
  }
}

double get_real(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

long long get_int(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::isfinite(x) && std::floor(x) == x && std::abs(x) < 9e15) return static_cast<long long>(x);
  }
  throw ConfigError(path, "expected an integer");
}

Index get_count(const json& v, const std::string& path) {
  const long long x = get_int(v, path);
  if (x < 1) throw ConfigError(path, "must be >= 1");
  return static_cast<Index>(x);
}

Matrix get_matrix2(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected a 2x2 array");
  Matrix m(2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    if (!v[i].is_array() || v[i].size() != 2) throw ConfigError(path, "expected a 2x2 array");
    for (std::size_t j = 0; j < 2; ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) =
          get_real(v[i][j], path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }
  return m;
}

void parse_generator(const json& g, ExperimentConfig& cfg) {
  const std::string path = "generator";
  if (!g.is_object()) throw ConfigError(path, "expected an object");
  GeneratorConfig& gen = cfg.generator;
  switch (cfg.experiment) {
    case ExperimentKind::CircleTranslation:
    case ExperimentKind::Rotation:
      reject_unknown(g, path, {"N", "radius", "base_cov", "noise", "k"});
      if (g.contains("N")) gen.count = get_count(g["N"], path + ".N");
      if (g.contains("radius")) gen.radius = get_real(g["radius"], path + ".radius");
      if (g.contains("base_cov")) gen.covariance = get_matrix2(g["base_cov"], path + ".base_cov");
      break;
    case ExperimentKind::GridTranslation:
    case ExperimentKind::Timing:
      reject_unknown(g, path, {"grid_side", "domain", "cov", "noise", "k"});
      if (g.contains("cov")) gen.covariance = get_matrix2(g["cov"], path + ".cov");
      break;
    case ExperimentKind::Dilation:
      reject_unknown(g, path, {"grid_side", "domain", "noise", "k"});
      break;
  }
  if (!uses_circle(cfg.experiment)) {
    if (g.contains("grid_side")) gen.grid_side = get_count(g["grid_side"], path + ".grid_side");
    if (g.contains("domain")) {
      const json& d = g["domain"];
      if (!d.is_array() || d.size() != 2) throw ConfigError(path + ".domain", "expected [lo, hi]");
      gen.lo = get_real(d[0], path + ".domain[0]");
      gen.hi = get_real(d[1], path + ".domain[1]");
    }
  }
  if (g.contains("noise")) gen.noise = get_real(g["noise"], path + ".noise");
  if (g.contains("k")) {
    if (g["k"].is_null()) {
      gen.k.reset();
    } else {
      gen.k = get_count(g["k"], path + ".k");
    }
  }
}

void parse_solver(const json& s, SolverConfig& solver) {
  const std::string path = "solver";
  if (!s.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown(s, path, {"kind", "beta", "tol", "max_iter"});
  if (!s.contains("kind")) throw ConfigError(path + ".kind", "missing required key");
  if (!s["kind"].is_string()) throw ConfigError(path + ".kind", "expected a string");
  const std::string kind = s["kind"].get<std::string>();
  if (kind == "exact") {
    for (const char* key : {"beta", "tol", "max_iter"}) {
      if (s.contains(key)) throw ConfigError(join_path(path, key), "only valid for the sinkhorn solver");
    }
    solver = SolverConfig::exact();
    return;
  }
  if (kind != "sinkhorn") throw ConfigError(path + ".kind", "expected \"exact\" or \"sinkhorn\"");
  SinkhornOptions opts = solver.kind == SolverConfig::Kind::Sinkhorn ? solver.sinkhorn : SinkhornOptions{};
  if (s.contains("beta")) opts.beta = get_real(s["beta"], path + ".beta");
  if (s.contains("tol")) opts.tol = get_real(s["tol"], path + ".tol");
  if (s.contains("max_iter")) {
    const long long it = get_int(s["max_iter"], path + ".max_iter");
    if (it < 1 || it > 100000000) throw ConfigError(path + ".max_iter", "must be in [1, 1e8]");
    opts.max_iter = static_cast<int>(it);
  }
  solver.kind = SolverConfig::Kind::Sinkhorn;
  solver.sinkhorn = opts;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (const auto& kn : kKindNames) {
    if (s == kn.name) return kn.kind;
  }
  throw ConfigError("experiment", "unknown experiment '" + s +
                                      "' (expected circle-translation, rotation, grid-translation, "
                                      "dilation or timing)");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  cfg.dim = 2;
  cfg.trials = 10;
  cfg.seed = 0;
  cfg.m_sweep = {125, 250, 500, 1000, 2000};
  GeneratorConfig& g = cfg.generator;
  g.noise = 0.5;
  switch (kind) {
    case ExperimentKind::CircleTranslation:
      g.count = 10;
      g.radius = 8.0;
      g.covariance = mat2(1.0, -0.5, -0.5, 1.0);
      cfg.solver = SolverConfig::exact();
      break;
    case ExperimentKind::Rotation:
      g.count = 10;
      g.radius = 8.0;
      g.covariance = mat2(2.0, 0.0, 0.0, 0.5);
      cfg.solver = SolverConfig::exact();
      break;
    case ExperimentKind::GridTranslation:
      g.grid_side = 5;
      g.lo = -10.0;
      g.hi = 10.0;
      g.covariance = mat2(1.0, -0.5, -0.5, 1.0);
      cfg.solver = SolverConfig::entropic(10.0);
      break;
    case ExperimentKind::Dilation:
      g.grid_side = 3;
      g.lo = 1.0;
      g.hi = 4.0;
      g.k = 2500;
      cfg.m_sweep = {1000};
      cfg.solver = SolverConfig::entropic(100.0);
      break;
    case ExperimentKind::Timing:
      g.grid_side = 5;
      g.lo = -10.0;
      g.hi = 10.0;
      g.covariance = mat2(1.0, -0.5, -0.5, 1.0);
      cfg.solver = SolverConfig::exact();
      cfg.m_sweep = {100, 200, 300, 400, 500};
      cfg.trials = 3;
      cfg.compare_wassmap = true;
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials", "must be >= 1");
  if (m_sweep.empty()) throw ConfigError("m_sweep", "must be non-empty");
  for (std::size_t i = 0; i < m_sweep.size(); ++i) {
    if (m_sweep[i] < 1) throw ConfigError("m_sweep", "sample sizes must be >= 1");
    if (i > 0 && m_sweep[i] <= m_sweep[i - 1]) throw ConfigError("m_sweep", "must be strictly ascending");
  }
  if (solver.kind == SolverConfig::Kind::Sinkhorn) {
    if (!(solver.sinkhorn.beta > 0.0)) throw ConfigError("solver.beta", "must be > 0");
    if (!(solver.sinkhorn.tol > 0.0)) throw ConfigError("solver.tol", "must be > 0");
    if (solver.sinkhorn.max_iter < 1) throw ConfigError("solver.max_iter", "must be >= 1");
  }
  const GeneratorConfig& g = generator;
  if (!(g.noise >= 0.0)) throw ConfigError("generator.noise", "must be >= 0");
  if (g.k && *g.k < 1) throw ConfigError("generator.k", "must be >= 1");
  Index count = 0;
  if (uses_circle(experiment)) {
    if (g.count < 1) throw ConfigError("generator.N", "must be >= 1");
    count = g.count;
  } else {
    if (g.grid_side < 1) throw ConfigError("generator.grid_side", "must be >= 1");
    if (!(g.lo <= g.hi)) throw ConfigError("generator.domain", "lo must not exceed hi");
    if (experiment == ExperimentKind::Dilation && !(g.lo > 0.0)) {
      throw ConfigError("generator.domain", "dilation factors must be positive");
    }
    count = g.grid_side * g.grid_side;
  }
  if (experiment != ExperimentKind::Dilation) {
    const std::string key = uses_circle(experiment) ? "generator.base_cov" : "generator.cov";
    try {
      GaussianSpec{Vector::Zero(2), g.covariance}.validate();
    } catch (const Error& e) {
      throw ConfigError(key, e.what());
    }
  }
  if (dim < 1 || dim >= count) {
    throw ConfigError("d", "embedding dimension must satisfy 1 <= d < N (N = " +
                               std::to_string(count) + ")");
  }
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  reject_unknown(doc, "", {"experiment", "generator", "solver", "d", "m_sweep", "trials", "seed",
                           "output_dir", "compare_wassmap"});
  if (!doc.contains("experiment")) throw ConfigError("experiment", "missing required key");
  if (!doc["experiment"].is_string()) throw ConfigError("experiment", "expected a string");
  ExperimentConfig cfg = default_config(experiment_kind_from_string(doc["experiment"].get<std::string>()));

  if (doc.contains("generator")) parse_generator(doc["generator"], cfg);
  if (doc.contains("solver")) parse_solver(doc["solver"], cfg.solver);
  if (doc.contains("d")) cfg.dim = get_count(doc["d"], "d");
  if (doc.contains("m_sweep")) {
    const json& ms = doc["m_sweep"];
    if (!ms.is_array()) throw ConfigError("m_sweep", "expected an array of sample sizes");
    cfg.m_sweep.clear();
    for (std::size_t i = 0; i < ms.size(); ++i) {
      cfg.m_sweep.push_back(get_count(ms[i], "m_sweep[" + std::to_string(i) + "]"));
    }
  }
  if (doc.contains("trials")) {
    const long long t = get_int(doc["trials"], "trials");
    if (t < 1 || t > 1000000) throw ConfigError("trials", "must be in [1, 1e6]");
    cfg.trials = static_cast<int>(t);
  }
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (s.is_number_unsigned()) {
      cfg.seed = s.get<std::uint64_t>();
    } else {
      const long long v = get_int(s, "seed");
      if (v < 0) throw ConfigError("seed", "must be a non-negative integer");
      cfg.seed = static_cast<std::uint64_t>(v);
    }
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) throw ConfigError("output_dir", "expected a string");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  if (doc.contains("compare_wassmap")) {
    if (!doc["compare_wassmap"].is_boolean()) throw ConfigError("compare_wassmap", "expected a boolean");
    cfg.compare_wassmap = doc["compare_wassmap"].get<bool>();
  }
  if (cfg.experiment == ExperimentKind::Timing) cfg.compare_wassmap = true;
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  const GeneratorConfig& g = cfg.generator;
  json gen = json::object();
  if (uses_circle(cfg.experiment)) {
    gen["N"] = g.count;
    gen["radius"] = g.radius;
    gen["base_cov"] = matrix_to_json(g.covariance);
  } else {
    gen["grid_side"] = g.grid_side;
    gen["domain"] = {g.lo, g.hi};
    if (cfg.experiment != ExperimentKind::Dilation) gen["cov"] = matrix_to_json(g.covariance);
  }
  gen["noise"] = g.noise;
  gen["k"] = g.k ? json(*g.k) : json(nullptr);

  json solver = {{"kind", cfg.solver.kind == SolverConfig::Kind::Exact ? "exact" : "sinkhorn"}};
  if (cfg.solver.kind == SolverConfig::Kind::Sinkhorn) {
    solver["beta"] = cfg.solver.sinkhorn.beta;
    solver["tol"] = cfg.solver.sinkhorn.tol;
    solver["max_iter"] = cfg.solver.sinkhorn.max_iter;
  }
  json sweep = json::array();
  for (Index m : cfg.m_sweep) sweep.push_back(m);
  return {{"experiment", to_string(cfg.experiment)},
          {"generator", gen},
          {"solver", solver},
          {"d", cfg.dim},
          {"m_sweep", sweep},
          {"trials", cfg.trials},
          {"seed", cfg.seed},
          {"output_dir", cfg.output_dir},
          {"compare_wassmap", cfg.compare_wassmap}};
}

ManifoldDataset make_dataset(const ExperimentConfig& cfg, Index m, std::uint64_t seed) {
  const GeneratorConfig& g = cfg.generator;
  const Index k = g.k.value_or(m);
  switch (cfg.experiment) {
    case ExperimentKind::CircleTranslation:
      return generate_circle_translation(CircleParams{g.count, g.radius, g.covariance, g.noise, k, m}, seed);
    case ExperimentKind::Rotation:
      return generate_rotation(CircleParams{g.count, g.radius, g.covariance, g.noise, k, m}, seed);
    case ExperimentKind::GridTranslation:
    case ExperimentKind::Timing:
      return generate_grid_translation(GridParams{g.grid_side, g.lo, g.hi, g.covariance, g.noise, k, m},
                                       seed);
    case ExperimentKind::Dilation:
      return generate_dilation(DilationParams{g.grid_side, g.lo, g.hi, g.noise, k, m}, seed);
  }
  throw Error("make_dataset: unknown experiment");
}

std::uint64_t trial_seed(std::uint64_t master, Index m, int trial) {
  return derive_seed(master, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(trial)});
}

namespace {

TrialRecord run_trial(const ExperimentConfig& cfg, Index m, int trial) {
  TrialRecord rec;
  rec.m = m;
  rec.trial = trial;
  rec.seed = trial_seed(cfg.seed, m, trial);
  try {
    const ManifoldDataset data = make_dataset(cfg, m, rec.seed);
    const Matrix truth = centered(data.truth);
    const EmbeddingResult lot = instrument([&] { return lot_wassmap(data, cfg.solver, cfg.dim); });
    const AlignmentReport align = procrustes_align(lot.coordinates, truth);
    rec.relative_error = align.relative_error;
    rec.absolute_error = align.absolute_error;
    rec.lot = lot.metrics;
    rec.embedding = lot.coordinates;
    if (cfg.compare_wassmap) {
      const EmbeddingResult base = instrument([&] { return wassmap(data, cfg.solver, cfg.dim); });
      rec.wassmap_relative_error = procrustes_align(base.coordinates, truth).relative_error;
      rec.wassmap = base.metrics;
    }
    rec.ok = true;
  } catch (const Error& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json metrics_json(const PipelineMetrics& m) {
  return {{"ot_solve_count", m.ot_solve_count},
          {"sinkhorn_iterations", m.sinkhorn_iterations},
          {"unconverged_solves", m.unconverged_solves},
          {"solve_seconds", m.solve_seconds},
          {"assemble_seconds", m.assemble_seconds},
          {"spectral_seconds", m.spectral_seconds},
          {"total_seconds", m.total_seconds}};
}

json trial_json(const TrialRecord& t) {
  json j = {{"m", t.m}, {"trial", t.trial}, {"seed", t.seed}, {"ok", t.ok}};
  if (!t.ok) {
    j["error"] = t.error;
    return j;
  }
  j["relative_error"] = t.relative_error;
  j["absolute_error"] = t.absolute_error;
  j["lot_wassmap"] = metrics_json(t.lot);
  if (t.wassmap) {
    j["wassmap"] = metrics_json(*t.wassmap);
    j["wassmap"]["relative_error"] = *t.wassmap_relative_error;
  }
  return j;
}

}  // namespace

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {std::nan(""), std::nan("")};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

std::vector<AggregateRow> aggregate_trials(const ExperimentConfig& cfg,
                                           const std::vector<TrialRecord>& trials) {
  std::vector<AggregateRow> rows;
  for (Index m : cfg.m_sweep) {
    AggregateRow row;
    row.m = m;
    std::vector<double> errs;
    std::vector<double> base_errs;
    double solves = 0.0;
    for (const TrialRecord& t : trials) {
      if (t.m != m) continue;
      ++row.trials;
      if (!t.ok) {
        ++row.failed;
        continue;
      }
      errs.push_back(t.relative_error);
      solves += static_cast<double>(t.lot.ot_solve_count);
      if (t.wassmap_relative_error) base_errs.push_back(*t.wassmap_relative_error);
    }
    std::tie(row.mean_relative_error, row.std_relative_error) = mean_std(errs);
    row.mean_ot_solves = errs.empty() ? std::nan("") : solves / static_cast<double>(errs.size());
    if (cfg.compare_wassmap) {
      const auto [bm, bs] = mean_std(base_errs);
      row.mean_wassmap_relative_error = bm;
      row.std_wassmap_relative_error = bs;
    }
    rows.push_back(row);
  }
  return rows;
}

ExperimentReport run_experiment(const ExperimentConfig& config, int jobs) {
  config.validate();
  struct Task {
    Index m;
    int trial;
  };
  std::vector<Task> tasks;
  for (Index m : config.m_sweep) {
    for (int t = 0; t < config.trials; ++t) tasks.push_back({m, t});
  }
  std::vector<TrialRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      records[i] = run_trial(config, tasks[i].m, tasks[i].trial);
    }
  };
  const int workers = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  ExperimentReport report{config, std::move(records), {}};
  report.aggregate = aggregate_trials(config, report.trials);
  return report;
}

std::string aggregate_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "m,trials,failed,mean_relative_error,std_relative_error,mean_ot_solves";
  if (report.config.compare_wassmap) out << ",mean_wassmap_relative_error,std_wassmap_relative_error";
  out << '\n';
  for (const AggregateRow& r : report.aggregate) {
    out << r.m << ',' << r.trials << ',' << r.failed << ',' << io::format_double(r.mean_relative_error)
        << ',' << io::format_double(r.std_relative_error) << ',' << io::format_double(r.mean_ot_solves);
    if (report.config.compare_wassmap) {
      out << ',' << io::format_double(r.mean_wassmap_relative_error.value_or(std::nan(""))) << ','
          << io::format_double(r.std_wassmap_relative_error.value_or(std::nan("")));
    }
    out << '\n';
  }
  return out.str();
}

std::string trials_csv(const ExperimentReport& report) {
  const bool base = report.config.compare_wassmap;
  std::ostringstream out;
  out << "m,trial,seed,ok,relative_error,absolute_error,ot_solves,sinkhorn_iterations,"
         "unconverged_solves,wall_clock_seconds";
  if (base) out << ",wassmap_relative_error,wassmap_ot_solves,wassmap_wall_clock_seconds";
  out << ",error\n";
  for (const TrialRecord& t : report.trials) {
    out << t.m << ',' << t.trial << ',' << t.seed << ',' << (t.ok ? 1 : 0) << ','
        << io::format_double(t.ok ? t.relative_error : std::nan("")) << ','
        << io::format_double(t.ok ? t.absolute_error : std::nan("")) << ',' << t.lot.ot_solve_count
        << ',' << t.lot.sinkhorn_iterations << ',' << t.lot.unconverged_solves << ','
        << io::format_double(t.lot.total_seconds);
    if (base) {
      const PipelineMetrics wm = t.wassmap.value_or(PipelineMetrics{});
      out << ',' << io::format_double(t.wassmap_relative_error.value_or(std::nan(""))) << ','
          << wm.ot_solve_count << ',' << io::format_double(wm.total_seconds);
    }
    out << ',' << csv_quote(t.error) << '\n';
  }
  return out.str();
}

json report_json(const ExperimentReport& report) {
  json trials = json::array();
  for (const TrialRecord& t : report.trials) trials.push_back(trial_json(t));
  json agg = json::array();
  for (const AggregateRow& r : report.aggregate) {
    json row = {{"m", r.m},
                {"trials", r.trials},
                {"failed", r.failed},
                {"mean_relative_error", r.mean_relative_error},
                {"std_relative_error", r.std_relative_error},
                {"mean_ot_solves", r.mean_ot_solves}};
    if (r.mean_wassmap_relative_error) {
      row["mean_wassmap_relative_error"] = *r.mean_wassmap_relative_error;
      row["std_wassmap_relative_error"] = *r.std_wassmap_relative_error;
    }
    agg.push_back(std::move(row));
  }
  return {{"config", to_json(report.config)}, {"trials", trials}, {"aggregate", agg}};
}

std::filesystem::path experiment_root(const ExperimentConfig& config) {
  return std::filesystem::path(config.output_dir) / to_string(config.experiment);
}

void write_report(const ExperimentReport& report) {
  const auto root = experiment_root(report.config);
  const auto solver_dir = root / report.config.solver.label();
  for (const TrialRecord& t : report.trials) {
    const auto dir = solver_dir / ("m" + std::to_string(t.m) + "_t" + std::to_string(t.trial));
    if (t.ok) {
      std::ostringstream emb;
      io::write_matrix_csv(emb, t.embedding);
      io::write_text(dir / "embedding.csv", emb.str());
    }
    io::write_text(dir / "metrics.json", trial_json(t).dump(2) + "\n");
  }
  io::write_text(root / "aggregate.csv", aggregate_csv(report));
  io::write_text(root / "trials.csv", trials_csv(report));
  io::write_text(root / "report.json", report_json(report).dump(2) + "\n");
}

}  // namespace lotwassmap
