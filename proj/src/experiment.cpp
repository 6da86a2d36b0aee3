#include "ronmf/experiment.hpp"

#include "ronmf/baselines.hpp"
#include "ronmf/metrics.hpp"
#include "ronmf/noise.hpp"
#include "ronmf/version.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ronmf {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
  }
}

int parse_int(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("config: key '" + key + "' expects a boolean, got '" + value + "'");
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

NoiseSpec::Kind noise_kind_from_string(const std::string& name) {
  if (name == "none") return NoiseSpec::Kind::None;
  if (name == "gaussian") return NoiseSpec::Kind::Gaussian;
  if (name == "salt_pepper") return NoiseSpec::Kind::SaltPepper;
  if (name == "poisson") return NoiseSpec::Kind::Poisson;
  throw ConfigError("unknown noise kind: " + name);
}

std::string to_string(NoiseSpec::Kind kind) {
  switch (kind) {
    case NoiseSpec::Kind::None: return "none";
    case NoiseSpec::Kind::Gaussian: return "gaussian";
    case NoiseSpec::Kind::SaltPepper: return "salt_pepper";
    case NoiseSpec::Kind::Poisson: return "poisson";
  }
  return "none";
}

PenaltySpec ExperimentConfig::penalty_spec() const {
  switch (penalty) {
    case PenaltyKind::MCP: return PenaltySpec::mcp(sigma, tau);
    case PenaltyKind::SCAD: return PenaltySpec::scad(sigma, scad_tau);
    case PenaltyKind::ETP: return PenaltySpec::etp(sigma, gamma);
  }
  throw ConfigError("unknown penalty kind");
}

void ExperimentConfig::check() const {
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (!dataset.empty() && !std::filesystem::exists(dataset)) {
    throw ConfigError("dataset does not exist: " + dataset);
  }
  if (output_format != "json" && output_format != "csv") {
    throw ConfigError("output_format must be json or csv");
  }
  if (baseline_iters < 0) throw ConfigError("baseline_iters must be >= 0");
  try {
    penalty_spec();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "dataset") cfg.dataset = value;
    else if (key == "format") cfg.format = matrix_format_from_string(value);
    else if (key == "synth_classes") cfg.synth.classes = parse_int(value, key);
    else if (key == "synth_per_class") cfg.synth.per_class = parse_int(value, key);
    else if (key == "synth_dim") cfg.synth.dim = parse_int(value, key);
    else if (key == "synth_separation") cfg.synth.separation = parse_double(value, key);
    else if (key == "normalize") {
      if (value == "maxabs") cfg.normalize_maxabs = true;
      else if (value == "none") cfg.normalize_maxabs = false;
      else throw ConfigError("config: normalize must be none or maxabs");
    }
    else if (key == "penalty") cfg.penalty = penalty_kind_from_string(value);
    else if (key == "tau") { cfg.tau = parse_double(value, key); cfg.scad_tau = cfg.tau; }
    else if (key == "gamma") cfg.gamma = parse_double(value, key);
    else if (key == "sigma") cfg.sigma = parse_double(value, key);
    else if (key == "lambda") cfg.hyper.lambda = parse_double(value, key);
    else if (key == "mu") cfg.hyper.mu = parse_double(value, key);
    else if (key == "beta") cfg.hyper.beta = parse_double(value, key);
    else if (key == "rank") cfg.hyper.rank = parse_int(value, key);
    else if (key == "p" || key == "labeled_fraction") {
      cfg.hyper.labeled_fraction = parse_double(value, key);
    }
    else if (key == "knn") cfg.hyper.knn = parse_int(value, key);
    else if (key == "graph") {
      if (value == "binary") cfg.scheme = GraphScheme::binary();
      else if (value == "heat") cfg.scheme = GraphScheme::heat(cfg.scheme.bandwidth > 0.0
                                                                   ? cfg.scheme.bandwidth
                                                                   : 1.0);
      else throw ConfigError("config: graph must be binary or heat");
    }
    else if (key == "bandwidth") cfg.scheme = GraphScheme::heat(parse_double(value, key));
    else if (key == "max_outer_iters") cfg.hyper.max_outer_iters = parse_int(value, key);
    else if (key == "outer_tol") cfg.hyper.outer_tol = parse_double(value, key);
    else if (key == "eps1") cfg.hyper.eps1 = parse_double(value, key);
    else if (key == "eps2") cfg.hyper.eps2 = parse_double(value, key);
    else if (key == "ortho_penalty") cfg.hyper.ortho_penalty = parse_double(value, key);
    else if (key == "seed") cfg.hyper.seed = static_cast<std::uint64_t>(parse_int(value, key));
    else if (key == "init") cfg.init = init_strategy_from_string(value);
    else if (key == "noise") cfg.noise.kind = noise_kind_from_string(value);
    else if (key == "noise_ratio") cfg.noise.ratio = parse_double(value, key);
    else if (key == "noise_sigma_scale") cfg.noise.sigma_scale = parse_double(value, key);
    else if (key == "noise_density") cfg.noise.density = parse_double(value, key);
    else if (key == "noise_scale") cfg.noise.scale = parse_double(value, key);
    else if (key == "metrics") cfg.metrics = parse_bool(value, key);
    else if (key == "baselines") {
      cfg.run_nmf_baseline = value.find("nmf") != std::string::npos;
      cfg.run_kmeans_baseline = value.find("kmeans") != std::string::npos;
      if (value != "none" && !cfg.run_nmf_baseline && !cfg.run_kmeans_baseline) {
        throw ConfigError("config: baselines must be none or a comma list of nmf,kmeans");
      }
    }
    else if (key == "baseline_iters") cfg.baseline_iters = parse_int(value, key);
    else if (key == "output") cfg.output = value;
    else if (key == "output_format") cfg.output_format = value;
    else if (key == "repetitions") cfg.repetitions = parse_int(value, key);
    else throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.string());
}

namespace {

ordered_json config_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["dataset"] = cfg.dataset;
  if (cfg.dataset.empty()) {
    j["synthetic"] = {{"classes", cfg.synth.classes},
                      {"per_class", cfg.synth.per_class},
                      {"dim", cfg.synth.dim},
                      {"separation", cfg.synth.separation}};
  }
  j["normalize"] = cfg.normalize_maxabs ? "maxabs" : "none";
  j["penalty"] = to_string(cfg.penalty);
  j["tau"] = cfg.penalty == PenaltyKind::SCAD ? cfg.scad_tau : cfg.tau;
  j["gamma"] = cfg.gamma;
  j["sigma"] = cfg.sigma;
  j["lambda"] = cfg.hyper.lambda;
  j["mu"] = cfg.hyper.mu;
  j["beta"] = cfg.hyper.beta;
  j["rank"] = cfg.hyper.rank;
  j["labeled_fraction"] = cfg.hyper.labeled_fraction;
  j["knn"] = cfg.hyper.knn;
  j["graph"] = cfg.scheme.kind == GraphScheme::Kind::Binary ? "binary" : "heat";
  if (cfg.scheme.kind == GraphScheme::Kind::Heat) j["bandwidth"] = cfg.scheme.bandwidth;
  j["max_outer_iters"] = cfg.hyper.max_outer_iters;
  j["outer_tol"] = cfg.hyper.outer_tol;
  j["eps1"] = cfg.hyper.eps1;
  j["eps2"] = cfg.hyper.eps2;
  j["ortho_penalty"] = cfg.hyper.ortho_penalty;
  j["init"] = to_string(cfg.init);
  j["noise"] = to_string(cfg.noise.kind);
  switch (cfg.noise.kind) {
    case NoiseSpec::Kind::Gaussian:
      j["noise_ratio"] = cfg.noise.ratio;
      j["noise_sigma_scale"] = cfg.noise.sigma_scale;
      break;
    case NoiseSpec::Kind::SaltPepper: j["noise_density"] = cfg.noise.density; break;
    case NoiseSpec::Kind::Poisson: j["noise_scale"] = cfg.noise.scale; break;
    case NoiseSpec::Kind::None: break;
  }
  j["metrics"] = cfg.metrics;
  ordered_json baselines = ordered_json::array();
  if (cfg.run_nmf_baseline) baselines.push_back("nmf");
  if (cfg.run_kmeans_baseline) baselines.push_back("kmeans");
  j["baselines"] = baselines;
  j["baseline_iters"] = cfg.baseline_iters;
  j["repetitions"] = cfg.repetitions;
  j["seed"] = cfg.hyper.seed;
  return j;
}

ordered_json metrics_json(const MetricReport& m) {
  return {{"acc", m.acc}, {"f1", m.f1}, {"nmi", m.nmi}, {"pur", m.pur}};
}

}  // namespace

std::map<std::string, std::map<std::string, std::pair<double, double>>>
ResultsRecord::aggregate() const {
  std::map<std::string, std::map<std::string, std::vector<double>>> samples;
  for (const auto& rep : repetitions) {
    for (const auto& [method, outcome] : rep.methods) {
      if (outcome.metrics) {
        samples[method]["acc"].push_back(outcome.metrics->acc);
        samples[method]["f1"].push_back(outcome.metrics->f1);
        samples[method]["nmi"].push_back(outcome.metrics->nmi);
        samples[method]["pur"].push_back(outcome.metrics->pur);
      }
      samples[method]["iterations"].push_back(outcome.iterations);
      samples[method]["final_feasibility"].push_back(outcome.final_feasibility);
    }
  }

  std::map<std::string, std::map<std::string, std::pair<double, double>>> out;
  for (const auto& [method, by_metric] : samples) {
    for (const auto& [metric, values] : by_metric) {
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double var = 0.0;
      if (values.size() > 1) {
        for (double v : values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(values.size() - 1);
      }
      out[method][metric] = {mean, std::sqrt(var)};
    }
  }
  return out;
}

std::string ResultsRecord::to_json(bool include_timing) const {
  ordered_json j;
  j["version"] = version;
  j["config"] = config_json(config);

  ordered_json reps = ordered_json::array();
  for (const auto& rep : repetitions) {
    ordered_json r;
    r["seed"] = rep.seed;
    ordered_json methods;
    for (const auto& [name, outcome] : rep.methods) {
      ordered_json m;
      if (outcome.metrics) m["metrics"] = metrics_json(*outcome.metrics);
      m["iterations"] = outcome.iterations;
      m["final_feasibility"] = outcome.final_feasibility;
      methods[name] = m;
    }
    r["methods"] = methods;
    reps.push_back(r);
  }
  j["repetitions"] = reps;

  ordered_json agg;
  for (const auto& [method, by_metric] : aggregate()) {
    ordered_json m;
    for (const auto& [metric, stat] : by_metric) {
      m[metric] = {{"mean", stat.first}, {"std", stat.second}};
    }
    agg[method] = m;
  }
  j["aggregate"] = agg;

  if (include_timing) {
    ordered_json timing;
    ordered_json per_rep = ordered_json::array();
    double total = 0.0;
    for (const auto& rep : repetitions) {
      ordered_json m;
      for (const auto& [name, outcome] : rep.methods) {
        m[name] = outcome.seconds;
        total += outcome.seconds;
      }
      per_rep.push_back(m);
    }
    timing["seconds_per_repetition"] = per_rep;
    timing["total_seconds"] = total;
    j["timing"] = timing;
  }
  return j.dump(2) + "\n";
}

std::string ResultsRecord::to_csv() const {
  std::ostringstream out;
  out << "acc,f1,nmi,pur,iters,feasibility,seconds\n";
  double sum[7] = {0, 0, 0, 0, 0, 0, 0};
  for (const auto& rep : repetitions) {
    const auto it = rep.methods.find("ronmf");
    if (it == rep.methods.end()) continue;
    const MethodOutcome& o = it->second;
    const double acc = o.metrics ? o.metrics->acc : 0.0;
    const double f1 = o.metrics ? o.metrics->f1 : 0.0;
    const double nmi_v = o.metrics ? o.metrics->nmi : 0.0;
    const double pur = o.metrics ? o.metrics->pur : 0.0;
    const double row[7] = {acc,
                           f1,
                           nmi_v,
                           pur,
                           static_cast<double>(o.iterations),
                           o.final_feasibility,
                           o.seconds};
    for (int i = 0; i < 7; ++i) {
      if (i > 0) out << ',';
      out << format_double(row[i]);
      sum[i] += row[i];
    }
    out << '\n';
  }
  const auto count = static_cast<double>(repetitions.size());
  for (int i = 0; i < 7; ++i) {
    if (i > 0) out << ',';
    out << format_double(count > 0 ? sum[i] / count : 0.0);
  }
  out << '\n';
  return out.str();
}

ResultsRecord run_experiment(const ExperimentConfig& cfg) {
  cfg.check();

  ResultsRecord record;
  record.version = kVersion;
  record.config = cfg;

  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    const std::uint64_t seed = cfg.hyper.seed + static_cast<std::uint64_t>(rep);
    RepetitionOutcome outcome;
    outcome.seed = seed;

    DataMatrix data;
    if (!cfg.dataset.empty()) {
      const MatrixFormat fmt = cfg.format ? *cfg.format : matrix_format_from_path(cfg.dataset);
      data = load_matrix(cfg.dataset, fmt);
    } else {
      data = generate_synthetic(cfg.synth.classes, cfg.synth.per_class, cfg.synth.dim,
                                cfg.synth.separation, seed);
    }
    if (cfg.normalize_maxabs) {
      const double scale = data.values.cwiseAbs().maxCoeff();
      if (scale > 0.0) data.values /= scale;
    }

    if (!data.has_labels()) {
      throw DataError("experiment requires ground-truth labels (repetition " +
                      std::to_string(rep) + ")");
    }

    Hyperparams hp = cfg.hyper;
    hp.seed = seed;

    try {
      // Protocol order: the affinity graph and label structures are side
      // information built before corruption; only the observation matrix
      // handed to the solvers is corrupted.
      const GraphContext ctx =
          build_graph_context(data, hp.knn, cfg.scheme, hp.labeled_fraction, seed);

      switch (cfg.noise.kind) {
        case NoiseSpec::Kind::Gaussian:
          data = gaussian_corrupt(data, cfg.noise.ratio, cfg.noise.sigma_scale, seed);
          break;
        case NoiseSpec::Kind::SaltPepper:
          data = salt_pepper_corrupt(data, cfg.noise.density, seed);
          break;
        case NoiseSpec::Kind::Poisson:
          data = poisson_corrupt(data, cfg.noise.scale, seed);
          break;
        case NoiseSpec::Kind::None: break;
      }

      const auto t0 = std::chrono::steady_clock::now();
      ClusteringResult ronmf = fit(data, ctx, hp, cfg.penalty_spec(), cfg.init);
      const auto t1 = std::chrono::steady_clock::now();

      MethodOutcome main;
      if (cfg.metrics) main.metrics = ronmf.metrics;
      main.iterations = ronmf.iterations;
      main.final_feasibility = ronmf.final_feasibility;
      main.seconds = std::chrono::duration<double>(t1 - t0).count();
      outcome.methods["ronmf"] = std::move(main);

      const int c = data.num_classes;
      if (cfg.run_nmf_baseline) {
        const auto b0 = std::chrono::steady_clock::now();
        const BaselineResult nmf =
            nmf_multiplicative(data.values, hp.effective_rank(c), cfg.baseline_iters, seed);
        const auto b1 = std::chrono::steady_clock::now();
        MethodOutcome m;
        if (cfg.metrics) m.metrics = evaluate(nmf.labels, data.labels);
        m.iterations = cfg.baseline_iters;
        m.final_feasibility =
            nmf.objective_trace.back() / std::max(data.values.norm(), 1e-300);
        m.seconds = std::chrono::duration<double>(b1 - b0).count();
        outcome.methods["nmf"] = std::move(m);
      }
      if (cfg.run_kmeans_baseline) {
        const auto b0 = std::chrono::steady_clock::now();
        const BaselineResult km = kmeans(data.values, c, cfg.baseline_iters, seed);
        const auto b1 = std::chrono::steady_clock::now();
        MethodOutcome m;
        if (cfg.metrics) m.metrics = evaluate(km.labels, data.labels);
        m.iterations = cfg.baseline_iters;
        m.final_feasibility = 0.0;
        m.seconds = std::chrono::duration<double>(b1 - b0).count();
        outcome.methods["kmeans"] = std::move(m);
      }
    } catch (const NumericalAbort& e) {
      throw NumericalAbort(std::string(e.block()) + " (repetition " + std::to_string(rep) + ")",
                           e.iteration());
    }

    record.repetitions.push_back(std::move(outcome));
  }
  return record;
}

void emit_results(const ResultsRecord& record, const std::filesystem::path& path,
                  const std::string& format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write results to " + path.string());
  if (format == "json") {
    out << record.to_json(true);
  } else if (format == "csv") {
    out << record.to_csv();
  } else {
    throw ConfigError("emit_results: format must be json or csv");
  }
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace ronmf
