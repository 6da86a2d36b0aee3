#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ronmf/baselines.hpp"
#include "ronmf/experiment.hpp"
#include "ronmf/io.hpp"
#include "ronmf/metrics.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>

using namespace ronmf;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "ronmf_io_tests";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("csv loader parses a 2x2 matrix") {
  const fs::path path = temp_dir() / "small.csv";
  write_file(path, "1,2\n3,4\n");
  const DataMatrix data = load_matrix(path, MatrixFormat::Csv);
  CHECK(data.dim() == 2);
  CHECK(data.num_samples() == 2);
  CHECK(data.values(0, 0) == 1.0);
  CHECK(data.values(0, 1) == 2.0);
  CHECK(data.values(1, 0) == 3.0);
  CHECK(data.values(1, 1) == 4.0);
  CHECK_FALSE(data.has_labels());
}

TEST_CASE("csv loader reads a trailing labels row") {
  const fs::path path = temp_dir() / "labeled.csv";
  write_file(path, "1,2,3\n4,5,6\nlabels,0,1,-1\n");
  const DataMatrix data = load_matrix(path, MatrixFormat::Csv);
  CHECK(data.labels == std::vector<int>{0, 1, -1});
  CHECK(data.num_classes == 2);
}

TEST_CASE("csv loader names the offending cell") {
  const fs::path path = temp_dir() / "bad.csv";
  write_file(path, "1,2\n3,-5\n");
  CHECK_THROWS_WITH_AS(load_matrix(path, MatrixFormat::Csv),
                       doctest::Contains("line 2, cell 2"), DataError);

  write_file(path, "1,abc\n3,4\n");
  CHECK_THROWS_WITH_AS(load_matrix(path, MatrixFormat::Csv),
                       doctest::Contains("not a number"), DataError);

  write_file(path, "1,nan\n3,4\n");
  CHECK_THROWS_AS(load_matrix(path, MatrixFormat::Csv), DataError);
}

TEST_CASE("rawf64 round trip is bit-exact") {
  const fs::path path = temp_dir() / "roundtrip.raw";
  const DataMatrix data = generate_synthetic(3, 5, 7, 2.5, 42);
  save_matrix(data, path, MatrixFormat::RawF64);
  const DataMatrix back = load_matrix(path, MatrixFormat::RawF64);
  CHECK(back.values == data.values);
  CHECK(back.labels == data.labels);
  CHECK(back.num_classes == data.num_classes);

  // Unlabeled variant exercises the flag byte.
  DataMatrix plain = data;
  plain.labels.clear();
  plain.num_classes = 0;
  save_matrix(plain, path, MatrixFormat::RawF64);
  const DataMatrix back2 = load_matrix(path, MatrixFormat::RawF64);
  CHECK_FALSE(back2.has_labels());
  CHECK(back2.values == data.values);
}

TEST_CASE("rawf64 header layout is pinned") {
  const fs::path path = temp_dir() / "header.raw";
  DataMatrix d;
  d.values = Matrix::Zero(2, 3);
  save_matrix(d, path, MatrixFormat::RawF64);

  std::ifstream in(path, std::ios::binary);
  unsigned char header[16];
  in.read(reinterpret_cast<char*>(header), 16);
  CHECK(header[0] == 'R');
  CHECK(header[1] == 'O');
  CHECK(header[2] == 'N');
  CHECK(header[3] == 'M');
  CHECK(header[4] == 2);   // d, little endian
  CHECK(header[8] == 3);   // n
  CHECK(header[12] == 0);  // labels flag
  CHECK(fs::file_size(path) == 16 + 6 * sizeof(double));
}

TEST_CASE("rawf64 loader rejects a bad magic") {
  const fs::path path = temp_dir() / "badmagic.raw";
  write_file(path, "XXXX0123456789ab 0000");
  CHECK_THROWS_WITH_AS(load_matrix(path, MatrixFormat::RawF64), doctest::Contains("magic"),
                       DataError);
}

TEST_CASE("rawf64 loader rejects a truncated payload") {
  const fs::path path = temp_dir() / "truncated.raw";
  DataMatrix d;
  d.values = Matrix::Ones(4, 4);
  save_matrix(d, path, MatrixFormat::RawF64);
  fs::resize_file(path, 16 + 3 * sizeof(double));
  CHECK_THROWS_WITH_AS(load_matrix(path, MatrixFormat::RawF64), doctest::Contains("truncated"),
                       DataError);
}

TEST_CASE("csv loader rejects ragged rows") {
  const fs::path path = temp_dir() / "ragged.csv";
  write_file(path, "1,2,3\n4,5\n");
  CHECK_THROWS_WITH_AS(load_matrix(path, MatrixFormat::Csv), doctest::Contains("expected 3"),
                       DataError);
}

TEST_CASE("synthetic generator shapes and degenerate separation") {
  const DataMatrix data = generate_synthetic(4, 6, 10, 0.0, 1);
  CHECK(data.num_samples() == 24);
  CHECK(data.num_classes == 4);
  CHECK(data.values.minCoeff() >= 0.0);

  // Well-separated blobs are easy for the k-means baseline.
  const DataMatrix easy = generate_synthetic(3, 30, 24, 10.0, 2);
  const BaselineResult km = kmeans(easy.values, 3, 50, 2);
  CHECK(accuracy(km.labels, easy.labels) >= 0.99);
}

TEST_CASE("config parsing: overrides, unknown keys, bad values") {
  const ExperimentConfig cfg = parse_config_text(
      "# comment\n"
      "synth_classes = 2\n"
      "penalty = mcp\n"
      "lambda = 10\n"
      "repetitions = 3\n"
      "noise = salt_pepper\n"
      "noise_density = 0.25\n",
      "inline");
  CHECK(cfg.synth.classes == 2);
  CHECK(cfg.penalty == PenaltyKind::MCP);
  CHECK(cfg.hyper.lambda == 10.0);
  CHECK(cfg.repetitions == 3);
  CHECK(cfg.noise.kind == NoiseSpec::Kind::SaltPepper);
  CHECK(cfg.noise.density == 0.25);

  CHECK_THROWS_AS(parse_config_text("bogus_key = 1\n", "inline"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("lambda = abc\n", "inline"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("lambda 5\n", "inline"), ConfigError);
}

namespace {

ExperimentConfig small_experiment() {
  ExperimentConfig cfg;
  cfg.synth = {2, 12, 10, 6.0};
  cfg.hyper.max_outer_iters = 10;
  cfg.hyper.seed = 7;
  cfg.repetitions = 2;
  cfg.run_kmeans_baseline = true;
  return cfg;
}

}  // namespace

TEST_CASE("a single repetition yields exactly one metric report") {
  ExperimentConfig cfg = small_experiment();
  cfg.repetitions = 1;
  cfg.run_kmeans_baseline = false;
  const ResultsRecord record = run_experiment(cfg);
  REQUIRE(record.repetitions.size() == 1);
  CHECK(record.repetitions[0].methods.size() == 1);
  CHECK(record.repetitions[0].methods.at("ronmf").metrics.has_value());
  // Sample std of a single value is reported as zero.
  CHECK(record.aggregate().at("ronmf").at("acc").second == 0.0);
}

TEST_CASE("run_experiment is deterministic and aggregates correctly") {
  const ExperimentConfig cfg = small_experiment();
  const ResultsRecord a = run_experiment(cfg);
  const ResultsRecord b = run_experiment(cfg);
  CHECK(a.to_json(false) == b.to_json(false));
  CHECK(a.repetitions.size() == 2);

  // Independent recomputation of the aggregate.
  const auto agg = a.aggregate();
  std::vector<double> accs;
  for (const auto& rep : a.repetitions) {
    accs.push_back(rep.methods.at("ronmf").metrics->acc);
  }
  const double mean = (accs[0] + accs[1]) / 2.0;
  const double var = (accs[0] - mean) * (accs[0] - mean) + (accs[1] - mean) * (accs[1] - mean);
  const double stdev = std::sqrt(var / 1.0);
  CHECK(agg.at("ronmf").at("acc").first == doctest::Approx(mean).epsilon(1e-12));
  CHECK(agg.at("ronmf").at("acc").second == doctest::Approx(stdev).epsilon(1e-12));

  // Seeds advance by repetition index.
  CHECK(a.repetitions[0].seed == 7);
  CHECK(a.repetitions[1].seed == 8);
}

TEST_CASE("json output round-trips and isolates timing") {
  const ResultsRecord record = run_experiment(small_experiment());
  const std::string text = record.to_json(true);
  const auto parsed = nlohmann::ordered_json::parse(text);
  CHECK(parsed.contains("timing"));
  CHECK(parsed["version"] == std::string("0.1.0"));
  CHECK(parsed["repetitions"].size() == 2);

  auto without_timing = parsed;
  without_timing.erase("timing");
  CHECK(without_timing.dump(2) + "\n" == record.to_json(false));
}

TEST_CASE("csv output has repetitions + summary + header rows") {
  const ResultsRecord record = run_experiment(small_experiment());
  const std::string text = record.to_csv();
  const auto rows = std::count(text.begin(), text.end(), '\n');
  CHECK(rows == 2 + 1 + 1);  // repetitions + summary + header

  // Summary row (means) matches the JSON aggregate.
  const auto agg = record.aggregate();
  std::istringstream lines(text);
  std::string line, last;
  std::getline(lines, line);  // header
  CHECK(line == "acc,f1,nmi,pur,iters,feasibility,seconds");
  while (std::getline(lines, line)) {
    if (!line.empty()) last = line;
  }
  std::istringstream cells(last);
  std::string cell;
  std::getline(cells, cell, ',');
  CHECK(std::stod(cell) == doctest::Approx(agg.at("ronmf").at("acc").first));
}

TEST_CASE("emit_results writes both formats") {
  const fs::path dir = temp_dir();
  const ResultsRecord record = run_experiment(small_experiment());
  emit_results(record, dir / "out.json", "json");
  emit_results(record, dir / "out.csv", "csv");
  CHECK(fs::file_size(dir / "out.json") > 0);
  CHECK(fs::file_size(dir / "out.csv") > 0);
  CHECK_THROWS_AS(emit_results(record, dir / "out.xml", "xml"), ConfigError);
}
