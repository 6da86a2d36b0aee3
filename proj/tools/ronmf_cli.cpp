// Command-line driver: run experiments from a config file, generate
// synthetic datasets, corrupt matrices, evaluate label files and sweep
// class counts against noise ratios.
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical abort.

#include "ronmf/baselines.hpp"
#include "ronmf/experiment.hpp"
#include "ronmf/metrics.hpp"
#include "ronmf/noise.hpp"
#include "ronmf/version.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

std::vector<int> read_label_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ronmf::DataError("cannot open label file: " + path.string());
  std::vector<int> labels;
  int value = 0;
  while (in >> value) labels.push_back(value);
  if (labels.empty()) throw ronmf::DataError("no labels in " + path.string());
  return labels;
}

struct HyperFlags {
  // Optional overrides; only flags the user passed are applied.
  std::optional<double> lambda, mu, beta, p, outer_tol, eps1, eps2, ortho_penalty;
  std::optional<double> tau, gamma, sigma;
  std::optional<int> rank, knn, max_outer_iters, repetitions, seed;
  std::optional<std::string> penalty, init, output, output_format, normalize;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--lambda", lambda, "graph regularization weight");
    cmd->add_option("--mu", mu, "label propagation weight");
    cmd->add_option("--beta", beta, "ADMM penalty parameter");
    cmd->add_option("--rank", rank, "factor rank r (0 = class count)");
    cmd->add_option("--p,--labeled-fraction", p, "labeled fraction in (0,1]");
    cmd->add_option("--knn", knn, "neighbor count for the affinity graph");
    cmd->add_option("--max-outer-iters", max_outer_iters, "outer iteration cap");
    cmd->add_option("--outer-tol", outer_tol, "relative feasibility tolerance");
    cmd->add_option("--eps1", eps1, "U-subsolver stationarity tolerance");
    cmd->add_option("--eps2", eps2, "U-subsolver orthogonality tolerance");
    cmd->add_option("--ortho-penalty", ortho_penalty, "sigma_U (0 = scale-matched)");
    cmd->add_option("--penalty", penalty, "mcp|scad|etp");
    cmd->add_option("--tau", tau, "MCP/SCAD shape parameter");
    cmd->add_option("--gamma", gamma, "ETP decay parameter");
    cmd->add_option("--sigma", sigma, "penalty scale");
    cmd->add_option("--init", init, "random|kmeans");
    cmd->add_option("--seed", seed, "base RNG seed");
    cmd->add_option("--repetitions", repetitions, "repetition count");
    cmd->add_option("--output", output, "results path");
    cmd->add_option("--output-format", output_format, "json|csv");
    cmd->add_option("--normalize", normalize, "none|maxabs");
  }

  void apply(ronmf::ExperimentConfig& cfg) const {
    if (lambda) cfg.hyper.lambda = *lambda;
    if (mu) cfg.hyper.mu = *mu;
    if (beta) cfg.hyper.beta = *beta;
    if (rank) cfg.hyper.rank = *rank;
    if (p) cfg.hyper.labeled_fraction = *p;
    if (knn) cfg.hyper.knn = *knn;
    if (max_outer_iters) cfg.hyper.max_outer_iters = *max_outer_iters;
    if (outer_tol) cfg.hyper.outer_tol = *outer_tol;
    if (eps1) cfg.hyper.eps1 = *eps1;
    if (eps2) cfg.hyper.eps2 = *eps2;
    if (ortho_penalty) cfg.hyper.ortho_penalty = *ortho_penalty;
    if (penalty) cfg.penalty = ronmf::penalty_kind_from_string(*penalty);
    if (tau) {
      cfg.tau = *tau;
      cfg.scad_tau = *tau;
    }
    if (gamma) cfg.gamma = *gamma;
    if (sigma) cfg.sigma = *sigma;
    if (init) cfg.init = ronmf::init_strategy_from_string(*init);
    if (seed) cfg.hyper.seed = static_cast<std::uint64_t>(*seed);
    if (repetitions) cfg.repetitions = *repetitions;
    if (output) cfg.output = *output;
    if (output_format) cfg.output_format = *output_format;
    if (normalize) {
      if (*normalize == "maxabs") cfg.normalize_maxabs = true;
      else if (*normalize == "none") cfg.normalize_maxabs = false;
      else throw ronmf::ConfigError("--normalize must be none or maxabs");
    }
  }
};

void print_summary(const ronmf::ResultsRecord& record) {
  for (const auto& [method, by_metric] : record.aggregate()) {
    std::cout << method;
    for (const char* key : {"acc", "f1", "nmi", "pur"}) {
      const auto it = by_metric.find(key);
      if (it != by_metric.end()) {
        std::cout << "  " << key << "=" << it->second.first << "±" << it->second.second;
      }
    }
    std::cout << '\n';
  }
}

int cmd_run(const std::string& config_path, const HyperFlags& flags) {
  ronmf::ExperimentConfig cfg = ronmf::parse_config_file(config_path);
  flags.apply(cfg);
  const ronmf::ResultsRecord record = ronmf::run_experiment(cfg);
  if (!cfg.output.empty()) {
    ronmf::emit_results(record, cfg.output, cfg.output_format);
  }
  print_summary(record);
  return kExitOk;
}

int cmd_synth(int classes, int per_class, int dim, double separation, int seed,
              const std::string& out) {
  const ronmf::DataMatrix data =
      ronmf::generate_synthetic(classes, per_class, dim, separation,
                                static_cast<std::uint64_t>(seed));
  ronmf::save_matrix(data, out, ronmf::matrix_format_from_path(out));
  std::cout << "wrote " << data.dim() << "x" << data.num_samples() << " matrix to " << out
            << '\n';
  return kExitOk;
}

int cmd_noise(const std::string& in, const std::string& out, const std::string& kind,
              double ratio, double sigma_scale, double density, double scale, int seed) {
  ronmf::DataMatrix data = ronmf::load_matrix(in, ronmf::matrix_format_from_path(in));
  const auto seed_u = static_cast<std::uint64_t>(seed);
  switch (ronmf::noise_kind_from_string(kind)) {
    case ronmf::NoiseSpec::Kind::Gaussian:
      data = ronmf::gaussian_corrupt(data, ratio, sigma_scale, seed_u);
      break;
    case ronmf::NoiseSpec::Kind::SaltPepper:
      data = ronmf::salt_pepper_corrupt(data, density, seed_u);
      break;
    case ronmf::NoiseSpec::Kind::Poisson:
      data = ronmf::poisson_corrupt(data, scale, seed_u);
      break;
    case ronmf::NoiseSpec::Kind::None: break;
  }
  ronmf::save_matrix(data, out, ronmf::matrix_format_from_path(out));
  std::cout << "wrote corrupted matrix to " << out << '\n';
  return kExitOk;
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path, bool as_json) {
  const std::vector<int> pred = read_label_file(pred_path);
  const std::vector<int> truth = read_label_file(truth_path);
  const ronmf::MetricReport m = ronmf::evaluate(pred, truth);
  if (as_json) {
    std::cout << "{\"acc\": " << m.acc << ", \"f1\": " << m.f1 << ", \"nmi\": " << m.nmi
              << ", \"pur\": " << m.pur << "}\n";
  } else {
    std::cout << "acc=" << m.acc << " f1=" << m.f1 << " nmi=" << m.nmi << " pur=" << m.pur
              << '\n';
  }
  return kExitOk;
}

// Sweeps the class count and the Gaussian noise ratio grid {0.1,0.3,0.5,0.7}
// on synthetic data, one CSV row per (k, ratio, method).
int cmd_bench(int k_min, int k_max, int per_class, int dim, double separation, int reps,
              const std::string& out, const HyperFlags& flags) {
  if (k_min < 2 || k_max < k_min) throw ronmf::ConfigError("bench: need 2 <= k-min <= k-max");
  std::ofstream file(out);
  if (!file) throw ronmf::DataError("cannot write " + out);
  file << "k,noise_ratio,method,acc,f1,nmi,pur\n";

  const double ratios[] = {0.1, 0.3, 0.5, 0.7};
  for (int k = k_min; k <= k_max; ++k) {
    for (double ratio : ratios) {
      ronmf::ExperimentConfig cfg;
      cfg.synth = {k, per_class, dim, separation};
      cfg.noise.kind = ronmf::NoiseSpec::Kind::Gaussian;
      cfg.noise.ratio = ratio;
      cfg.noise.sigma_scale = 0.1;
      cfg.repetitions = reps;
      cfg.run_nmf_baseline = true;
      cfg.run_kmeans_baseline = true;
      flags.apply(cfg);
      const ronmf::ResultsRecord record = ronmf::run_experiment(cfg);
      for (const auto& [method, by_metric] : record.aggregate()) {
        file << k << ',' << ratio << ',' << method;
        for (const char* key : {"acc", "f1", "nmi", "pur"}) {
          file << ',' << by_metric.at(key).first;
        }
        file << '\n';
      }
      std::cout << "k=" << k << " ratio=" << ratio << " done\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust orthogonal NMF clustering"};
  app.set_version_flag("--version", ronmf::kVersion);
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  std::string config_path;
  run->add_option("config", config_path, "config file (key = value lines)")->required();
  HyperFlags run_flags;
  run_flags.add_to(run);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic blob dataset");
  int s_classes = 3, s_per_class = 100, s_dim = 50, s_seed = 0;
  double s_separation = 5.0;
  std::string s_out;
  synth->add_option("--classes", s_classes, "number of classes");
  synth->add_option("--per-class", s_per_class, "samples per class");
  synth->add_option("--dim", s_dim, "feature dimension");
  synth->add_option("--separation", s_separation, "blob mean separation");
  synth->add_option("--seed", s_seed, "RNG seed");
  synth->add_option("--out", s_out, "output path (.csv or rawf64)")->required();

  // noise
  auto* noise = app.add_subcommand("noise", "corrupt a dataset");
  std::string n_in, n_out, n_kind = "gaussian";
  double n_ratio = 0.3, n_sigma_scale = 0.1, n_density = 0.3, n_scale = 1.0;
  int n_seed = 0;
  noise->add_option("--in", n_in, "input matrix")->required();
  noise->add_option("--out", n_out, "output matrix")->required();
  noise->add_option("--kind", n_kind, "gaussian|salt_pepper|poisson");
  noise->add_option("--ratio", n_ratio, "gaussian: fraction of entries");
  noise->add_option("--sigma-scale", n_sigma_scale, "gaussian: std as fraction of range");
  noise->add_option("--density", n_density, "salt_pepper: fraction of entries");
  noise->add_option("--scale", n_scale, "poisson: intensity scale");
  noise->add_option("--seed", n_seed, "RNG seed");

  // eval
  auto* eval = app.add_subcommand("eval", "score predicted labels against ground truth");
  std::string e_pred, e_truth;
  bool e_json = false;
  eval->add_option("--pred", e_pred, "predicted labels, one per line")->required();
  eval->add_option("--truth", e_truth, "true labels, one per line")->required();
  eval->add_flag("--json", e_json, "emit JSON");

  // bench
  auto* bench = app.add_subcommand("bench", "sweep class counts and noise ratios");
  int b_kmin = 2, b_kmax = 5, b_per_class = 60, b_dim = 40, b_reps = 3;
  double b_separation = 5.0;
  std::string b_out;
  bench->add_option("--k-min", b_kmin, "smallest class count");
  bench->add_option("--k-max", b_kmax, "largest class count");
  bench->add_option("--per-class", b_per_class, "samples per class");
  bench->add_option("--dim", b_dim, "feature dimension");
  bench->add_option("--separation", b_separation, "blob separation");
  bench->add_option("--reps", b_reps, "repetitions per cell");
  bench->add_option("--out", b_out, "plot-ready CSV path")->required();
  HyperFlags bench_flags;  // base seed comes from --seed here
  bench_flags.add_to(bench);

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(config_path, run_flags);
    if (synth->parsed()) return cmd_synth(s_classes, s_per_class, s_dim, s_separation, s_seed, s_out);
    if (noise->parsed()) {
      return cmd_noise(n_in, n_out, n_kind, n_ratio, n_sigma_scale, n_density, n_scale, n_seed);
    }
    if (eval->parsed()) return cmd_eval(e_pred, e_truth, e_json);
    if (bench->parsed()) {
      return cmd_bench(b_kmin, b_kmax, b_per_class, b_dim, b_separation, b_reps, b_out,
                       bench_flags);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "E_CONFIG: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ronmf::ConfigError& e) {
    std::cerr << "E_CONFIG: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ronmf::ContractViolation& e) {
    std::cerr << "E_CONFIG: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ronmf::DataError& e) {
    std::cerr << "E_DATA: " << e.what() << '\n';
    return kExitData;
  } catch (const ronmf::NumericalAbort& e) {
    std::cerr << "E_NUMERICAL: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
