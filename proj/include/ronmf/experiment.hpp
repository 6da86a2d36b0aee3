#pragma once

#include "ronmf/graph.hpp"
#include "ronmf/io.hpp"
#include "ronmf/solver.hpp"
#include "ronmf/types.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace ronmf {

/// Thrown for invalid or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SyntheticSpec {
  int classes = 3;
  int per_class = 100;
  int dim = 50;
  double separation = 5.0;
};

struct NoiseSpec {
  enum class Kind { None, Gaussian, SaltPepper, Poisson } kind = Kind::None;
  double ratio = 0.3;        // gaussian: fraction of entries
  double sigma_scale = 0.1;  // gaussian: std as a fraction of the data range
  double density = 0.3;      // salt & pepper
  double scale = 1.0;        // poisson
};

NoiseSpec::Kind noise_kind_from_string(const std::string& name);
std::string to_string(NoiseSpec::Kind kind);

struct ExperimentConfig {
  std::string dataset;  // empty → synthetic source
  std::optional<MatrixFormat> format;
  SyntheticSpec synth;
  bool normalize_maxabs = false;

  Hyperparams hyper;
  PenaltyKind penalty = PenaltyKind::ETP;
  double tau = 3.0;
  double scad_tau = 3.7;
  double gamma = 2.0;
  double sigma = 1.0;
  GraphScheme scheme = GraphScheme::binary();
  InitStrategy init = InitStrategy::Random;

  NoiseSpec noise;
  bool metrics = true;
  bool run_nmf_baseline = false;
  bool run_kmeans_baseline = false;
  int baseline_iters = 200;

  std::string output;  // empty → stdout summary only
  std::string output_format = "json";
  int repetitions = 1;

  PenaltySpec penalty_spec() const;
  void check() const;
};

/// Parses the flat `key = value` config format (# starts a comment).
/// Unknown keys are an error.
ExperimentConfig parse_config_file(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

struct MethodOutcome {
  std::optional<MetricReport> metrics;
  int iterations = 0;
  double final_feasibility = 0.0;
  double seconds = 0.0;  // wall time; excluded from determinism comparisons
};

struct RepetitionOutcome {
  std::uint64_t seed = 0;
  std::map<std::string, MethodOutcome> methods;  // "ronmf", "nmf", "kmeans"
};

struct ResultsRecord {
  std::string version;
  ExperimentConfig config;
  std::vector<RepetitionOutcome> repetitions;

  /// {mean, std} per (method, metric); sample std, 0 for a single repetition.
  std::map<std::string, std::map<std::string, std::pair<double, double>>> aggregate() const;

  /// Stable-key-order JSON; wall-time fields live in a separate "timing"
  /// object so the rest is byte-deterministic.
  std::string to_json(bool include_timing = true) const;
  std::string to_csv() const;
};

/// Runs the configured repetitions: seed = base + rep, corrupt, build the
/// graph on the (possibly corrupted) matrix, fit RONMF and any requested
/// baselines, and collect metrics.
ResultsRecord run_experiment(const ExperimentConfig& cfg);

/// Writes the record in the requested format ("json" or "csv").
void emit_results(const ResultsRecord& record, const std::filesystem::path& path,
                  const std::string& format);

}  // namespace ronmf
