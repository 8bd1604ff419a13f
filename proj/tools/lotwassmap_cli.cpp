#include "lotwassmap/embedding.hpp"
#include "lotwassmap/eval.hpp"
#include "lotwassmap/experiment.hpp"
#include "lotwassmap/io.hpp"
#include "lotwassmap/lot.hpp"
#include "lotwassmap/ot.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace lotwassmap;
using nlohmann::json;

namespace {

struct SolverFlags {
  std::string kind = "exact";
  std::optional<double> beta;
  std::optional<double> tol;
  std::optional<int> max_iter;

  void attach(CLI::App* cmd) {
    cmd->add_option("--solver", kind, "exact or sinkhorn")->check(CLI::IsMember({"exact", "sinkhorn"}));
    cmd->add_option("--beta", beta, "entropic regularization (sinkhorn only)");
    cmd->add_option("--tol", tol, "Sinkhorn marginal tolerance");
    cmd->add_option("--max-iter", max_iter, "Sinkhorn iteration cap");
  }

  SolverConfig resolve() const {
    if (kind == "exact") {
      if (beta || tol || max_iter) throw ConfigError("solver", "--beta/--tol/--max-iter need --solver sinkhorn");
      return SolverConfig::exact();
    }
    SolverConfig s = SolverConfig::entropic(beta.value_or(1.0));
    if (tol) s.sinkhorn.tol = *tol;
    if (max_iter) s.sinkhorn.max_iter = *max_iter;
    if (!(s.sinkhorn.beta > 0.0)) throw ConfigError("solver.beta", "must be > 0");
    return s;
  }
};

io::WeightColumn weight_column(bool weighted) {
  return weighted ? io::WeightColumn::Present : io::WeightColumn::Absent;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
}

struct RunFlags {
  std::string config_path;
  std::optional<std::string> experiment;
  std::optional<std::string> solver;
  std::optional<double> beta;
  std::vector<Index> m;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<Index> dim;
  std::optional<std::string> out;
  bool compare_wassmap = false;
  int jobs = 1;

  void attach(CLI::App* cmd, bool with_jobs) {
    cmd->add_option("--config", config_path, "experiment config (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("--experiment", experiment,
                    "circle-translation | rotation | grid-translation | dilation | timing");
    cmd->add_option("--solver", solver, "exact or sinkhorn")->check(CLI::IsMember({"exact", "sinkhorn"}));
    cmd->add_option("--beta", beta, "Sinkhorn regularization");
    cmd->add_option("--m", m, "reference sample sizes (replaces m_sweep)");
    cmd->add_option("--trials", trials, "trials per sample size");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--dim", dim, "embedding dimension");
    cmd->add_option("--out", out, "output directory");
    cmd->add_flag("--compare-wassmap", compare_wassmap, "also run the pairwise Wassmap baseline");
    if (with_jobs) cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  }

  // Flags override the file; the merged document goes through the same validation as a file.
  ExperimentConfig resolve() const {
    json doc = json::object();
    if (!config_path.empty()) doc = read_json_file(config_path);
    if (experiment) {
      if (doc.contains("experiment") && doc["experiment"] != *experiment) {
        // Switching experiment invalidates generator keys from the file.
        doc.erase("generator");
      }
      doc["experiment"] = *experiment;
    }
    if (!doc.is_object() || !doc.contains("experiment")) {
      throw ConfigError("experiment", "pass --experiment or a --config that names one");
    }
    doc = to_json(parse_config(doc));
    if (solver && doc["solver"]["kind"] != *solver) {
      doc["solver"] = *solver == "exact" ? json{{"kind", "exact"}} : to_json(SolverConfig::entropic(1.0));
    }
    if (beta) doc["solver"]["beta"] = *beta;
    if (!m.empty()) doc["m_sweep"] = m;
    if (trials) doc["trials"] = *trials;
    if (seed) doc["seed"] = *seed;
    if (dim) doc["d"] = *dim;
    if (out) doc["output_dir"] = *out;
    if (compare_wassmap) doc["compare_wassmap"] = true;
    return parse_config(doc);
  }

  static json to_json(const SolverConfig& s) {
    return {{"kind", "sinkhorn"}, {"beta", s.sinkhorn.beta}, {"tol", s.sinkhorn.tol}, {"max_iter", s.sinkhorn.max_iter}};
  }
  static json to_json(const ExperimentConfig& c) { return lotwassmap::to_json(c); }
};

int fail(const std::string& kind, const std::string& message, const std::string& path = "") {
  json err = {{"error", kind}, {"message", message}};
  if (!path.empty()) err["path"] = path;
  std::cerr << err.dump() << '\n';
  return kind == "config" ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LOT Wassmap: manifold learning on Wasserstein space via linearized optimal transport"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run an experiment sweep and write its report");
  run_flags.attach(run, true);

  RunFlags show_flags;
  auto* show = app.add_subcommand("show-config", "print the fully resolved config");
  show_flags.attach(show, false);

  std::string src_path, tgt_path;
  bool weighted = false;
  auto* w2 = app.add_subcommand("w2", "exact W2 distance between two point clouds");
  w2->add_option("source", src_path, "CSV, one point per row")->required()->check(CLI::ExistingFile);
  w2->add_option("target", tgt_path, "CSV, one point per row")->required()->check(CLI::ExistingFile);
  w2->add_flag("--weighted", weighted, "last column holds the point weights");

  SolverFlags plan_solver;
  std::string plan_out, map_out;
  auto* plan = app.add_subcommand("plan", "transport plan and barycentric map from reference to target");
  plan->add_option("reference", src_path)->required()->check(CLI::ExistingFile);
  plan->add_option("target", tgt_path)->required()->check(CLI::ExistingFile);
  plan->add_flag("--weighted", weighted, "last column holds the point weights");
  plan_solver.attach(plan);
  plan->add_option("--plan-out", plan_out, "write (i,j,mass) triplets here");
  plan->add_option("--map-out", map_out, "write the map evaluated at the reference points here");

  SolverFlags embed_solver;
  std::string ref_path, embed_out;
  std::vector<std::string> measure_paths;
  Index embed_dim = 2;
  bool baseline = false;
  auto* embed = app.add_subcommand("embed", "embed a collection of point clouds");
  embed->add_option("--reference", ref_path, "reference point cloud")->check(CLI::ExistingFile);
  embed->add_option("measures", measure_paths, "one CSV per measure")->required()->check(CLI::ExistingFile);
  embed->add_option("--dim", embed_dim, "embedding dimension");
  embed->add_flag("--weighted", weighted, "last column holds the point weights");
  embed->add_flag("--wassmap", baseline, "use pairwise Wassmap instead of LOT Wassmap");
  embed_solver.attach(embed);
  embed->add_option("--out", embed_out, "write coordinates here (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const ExperimentConfig cfg = run_flags.resolve();
      const ExperimentReport report = run_experiment(cfg, run_flags.jobs);
      write_report(report);
      std::cout << aggregate_csv(report);
      std::cerr << "report written to " << experiment_root(cfg).string() << '\n';
    } else if (*show) {
      std::cout << to_json(show_flags.resolve()).dump(2) << '\n';
    } else if (*w2) {
      const EmpiricalMeasure mu = io::read_measure_csv(src_path, weight_column(weighted));
      const EmpiricalMeasure nu = io::read_measure_csv(tgt_path, weight_column(weighted));
      std::cout << io::format_double(wasserstein2_empirical(mu, nu)) << '\n';
    } else if (*plan) {
      const SolverConfig solver = plan_solver.resolve();
      const EmpiricalMeasure ref = io::read_measure_csv(src_path, weight_column(weighted));
      const EmpiricalMeasure tgt = io::read_measure_csv(tgt_path, weight_column(weighted));
      if (ref.dim() != tgt.dim()) throw DimensionMismatch("reference and target dimensions differ");
      std::optional<TransportPlan> p;
      json summary;
      if (solver.kind == SolverConfig::Kind::Exact) {
        const CostMatrix c = cost_matrix(ref.points(), tgt.points(), CostConvention::Squared);
        const ExactSolution s = solve_exact_with_duals(c, ref.weights(), tgt.weights());
        p = s.plan;
        summary = {{"solver", "exact"}, {"objective", s.objective}, {"pivots", s.pivots}};
      } else {
        const CostMatrix c = cost_matrix(ref.points(), tgt.points(), CostConvention::HalfSquared);
        const SinkhornResult s = solve_sinkhorn(c, ref.weights(), tgt.weights(), solver.sinkhorn);
        p = s.plan;
        summary = {{"solver", solver.label()},
                   {"objective", s.plan.cost(c)},
                   {"iterations", s.iterations},
                   {"marginal_error", s.final_marginal_error},
                   {"converged", s.converged}};
      }
      const TransportMap map = barycentric_projection(*p, tgt.points(), reference_id(ref.points()));
      if (!plan_out.empty()) {
        std::ostringstream s;
        io::write_plan_csv(s, *p);
        io::write_text(plan_out, s.str());
      }
      if (!map_out.empty()) {
        std::ostringstream s;
        io::write_map_csv(s, map);
        io::write_text(map_out, s.str());
      }
      std::cout << summary.dump() << '\n';
    } else if (*embed) {
      const SolverConfig solver = embed_solver.resolve();
      std::vector<EmpiricalMeasure> measures;
      for (const auto& path : measure_paths) measures.push_back(io::read_measure_csv(path, weight_column(weighted)));
      if (!baseline && ref_path.empty()) throw ConfigError("reference", "LOT Wassmap needs --reference");
      // Pairwise Wassmap never looks at the reference.
      EmpiricalMeasure reference = ref_path.empty() ? measures.front()
                                                    : io::read_measure_csv(ref_path, weight_column(weighted));
      const ManifoldDataset d{std::move(measures), Matrix(), std::move(reference), {}};
      const EmbeddingResult r = instrument([&] {
        return baseline ? wassmap(d, solver, embed_dim) : lot_wassmap(d, solver, embed_dim);
      });
      std::ostringstream s;
      io::write_embedding_csv(s, r);
      if (embed_out.empty()) {
        std::cout << s.str();
      } else {
        io::write_text(embed_out, s.str());
        std::cout << io::embedding_sidecar(r).dump(2) << '\n';
      }
    }
  } catch (const ConfigError& e) {
    return fail("config", e.what(), e.path());
  } catch (const std::exception& e) {
    return fail("runtime", e.what());
  }
  return 0;
}
