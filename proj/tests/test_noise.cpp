#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ronmf/noise.hpp"
#include "test_support.hpp"

#include <random>

using namespace ronmf;
using test_support::uniform_matrix;

namespace {

DataMatrix sample_data(std::uint64_t seed, int d = 10, int n = 10) {
  std::mt19937_64 rng(seed);
  DataMatrix data;
  data.values = uniform_matrix(d, n, rng, 0.0, 4.0);
  return data;
}

Eigen::Index count_changed(const DataMatrix& a, const DataMatrix& b) {
  return ((a.values - b.values).array() != 0.0).count();
}

}  // namespace

TEST_CASE("zero ratio or density leaves the matrix untouched") {
  const DataMatrix data = sample_data(1);
  CHECK(count_changed(data, gaussian_corrupt(data, 0.0, 0.1, 5)) == 0);
  CHECK(count_changed(data, salt_pepper_corrupt(data, 0.0, 5)) == 0);
}

TEST_CASE("vanishing gaussian amplitude reproduces the input within clamping") {
  const DataMatrix data = sample_data(2);
  const DataMatrix out = gaussian_corrupt(data, 1.0, 1e-15, 7);
  CHECK((out.values - data.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gaussian corruption touches exactly the requested entry count") {
  const DataMatrix data = sample_data(3);
  const DataMatrix out = gaussian_corrupt(data, 0.5, 0.5, 11);
  // 50 positions are redrawn; a coincidental zero-delta draw is measure-zero.
  CHECK(count_changed(data, out) == 50);
  CHECK(out.values.minCoeff() >= 0.0);
}

TEST_CASE("salt and pepper extremes") {
  const DataMatrix data = sample_data(4);
  const double lo = data.values.minCoeff();
  const double hi = data.values.maxCoeff();
  const DataMatrix all = salt_pepper_corrupt(data, 1.0, 13);
  for (Eigen::Index i = 0; i < all.values.size(); ++i) {
    const double x = all.values.data()[i];
    CHECK((x == lo || x == hi));
  }
  const DataMatrix half = salt_pepper_corrupt(data, 0.37, 13);
  CHECK(count_changed(data, half) <=
        static_cast<Eigen::Index>(0.37 * static_cast<double>(data.values.size())));
}

TEST_CASE("poisson corruption keeps zeros, non-negativity and the mean") {
  DataMatrix zeros;
  zeros.values = Matrix::Zero(5, 5);
  CHECK(poisson_corrupt(zeros, 2.0, 1).values.isZero(0.0));

  DataMatrix data;
  data.values = Matrix::Constant(1, 1, 3.0);
  const double scale = 50.0;
  // Monte Carlo mean check: E[Poisson(scale·x)/scale] = x, sd = sqrt(x/scale).
  const int draws = 10000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const DataMatrix out = poisson_corrupt(data, scale, static_cast<std::uint64_t>(i));
    CHECK(out.values(0, 0) >= 0.0);
    sum += out.values(0, 0);
  }
  const double mean = sum / draws;
  const double stderr_mean = std::sqrt(3.0 / scale / draws);
  CHECK(std::abs(mean - 3.0) <= 3.0 * stderr_mean);
}

TEST_CASE("corruptions are deterministic under a fixed seed and keep shape") {
  const DataMatrix data = sample_data(5, 7, 9);
  for (int kind = 0; kind < 3; ++kind) {
    auto apply = [&](std::uint64_t seed) {
      switch (kind) {
        case 0: return gaussian_corrupt(data, 0.4, 0.2, seed);
        case 1: return salt_pepper_corrupt(data, 0.4, seed);
        default: return poisson_corrupt(data, 2.0, seed);
      }
    };
    const DataMatrix a = apply(99);
    const DataMatrix b = apply(99);
    CHECK(a.values == b.values);
    CHECK(a.values.rows() == 7);
    CHECK(a.values.cols() == 9);
    CHECK(a.values.minCoeff() >= 0.0);
    CHECK(apply(100).values != a.values);
  }
}

TEST_CASE("labels survive corruption untouched") {
  DataMatrix data = sample_data(6);
  data.labels.assign(10, 1);
  data.num_classes = 2;
  CHECK(gaussian_corrupt(data, 0.5, 0.3, 3).labels == data.labels);
  CHECK(salt_pepper_corrupt(data, 0.5, 3).labels == data.labels);
  CHECK(poisson_corrupt(data, 1.0, 3).labels == data.labels);
}
