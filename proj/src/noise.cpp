#include "ronmf/noise.hpp"

#include <numeric>
#include <random>

namespace ronmf {

namespace {

// First `count` positions of a partial Fisher–Yates shuffle over all entries.
std::vector<Eigen::Index> sample_positions(Eigen::Index total, Eigen::Index count,
                                           std::mt19937_64& rng) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(total));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  for (Eigen::Index k = 0; k < count; ++k) {
    std::uniform_int_distribution<Eigen::Index> pick(k, total - 1);
    std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  idx.resize(static_cast<std::size_t>(count));
  return idx;
}

}  // namespace

DataMatrix gaussian_corrupt(const DataMatrix& data, double ratio, double sigma_scale,
                            std::uint64_t seed) {
  if (ratio < 0.0 || ratio > 1.0) throw ContractViolation("gaussian_corrupt: ratio in [0, 1]");
  if (sigma_scale <= 0.0) throw ContractViolation("gaussian_corrupt: sigma_scale > 0");

  DataMatrix out = data;
  const Eigen::Index total = data.values.size();
  const auto count = static_cast<Eigen::Index>(ratio * static_cast<double>(total));
  if (count == 0) return out;

  std::mt19937_64 rng(seed);
  const double range = data.values.maxCoeff() - data.values.minCoeff();
  std::normal_distribution<double> noise(0.0, sigma_scale * range);
  for (Eigen::Index pos : sample_positions(total, count, rng)) {
    double* cell = out.values.data() + pos;
    *cell = std::max(*cell + noise(rng), 0.0);
  }
  return out;
}

DataMatrix salt_pepper_corrupt(const DataMatrix& data, double density, std::uint64_t seed) {
  if (density < 0.0 || density > 1.0) {
    throw ContractViolation("salt_pepper_corrupt: density in [0, 1]");
  }

  DataMatrix out = data;
  const Eigen::Index total = data.values.size();
  const auto count = static_cast<Eigen::Index>(density * static_cast<double>(total));
  if (count == 0) return out;

  std::mt19937_64 rng(seed);
  const double lo = data.values.minCoeff();
  const double hi = data.values.maxCoeff();
  std::bernoulli_distribution coin(0.5);
  for (Eigen::Index pos : sample_positions(total, count, rng)) {
    out.values.data()[pos] = coin(rng) ? hi : lo;
  }
  return out;
}

DataMatrix poisson_corrupt(const DataMatrix& data, double scale, std::uint64_t seed) {
  if (scale <= 0.0) throw ContractViolation("poisson_corrupt: scale > 0");

  DataMatrix out = data;
  std::mt19937_64 rng(seed);
  for (Eigen::Index pos = 0; pos < out.values.size(); ++pos) {
    const double x = out.values.data()[pos];
    if (x == 0.0) continue;  // Poisson(0) is degenerate at 0
    std::poisson_distribution<long> draw(scale * x);
    out.values.data()[pos] = static_cast<double>(draw(rng)) / scale;
  }
  return out;
}

}  // namespace ronmf
