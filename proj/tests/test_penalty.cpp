#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ronmf/penalty.hpp"
#include "test_support.hpp"

#include <random>

using namespace ronmf;
using test_support::prox_oracle;

TEST_CASE("phi values on the tabulated branches") {
  const auto mcp = PenaltySpec::mcp(1.0, 2.0);
  CHECK(phi_value(mcp, 0.0) == 0.0);
  CHECK(phi_value(mcp, 3.0) == doctest::Approx(1.0));  // saturation σ²τ/2
  CHECK(phi_value(mcp, 1.0) == doctest::Approx(1.0 - 0.25));

  const auto scad = PenaltySpec::scad(1.0, 3.0);
  CHECK(phi_value(scad, 5.0) == doctest::Approx(2.0));  // σ²(τ+1)/2
  CHECK(phi_value(scad, 0.5) == doctest::Approx(0.5));

  const auto etp = PenaltySpec::etp(1.0, 2.0);
  CHECK(phi_value(etp, 0.0) == 0.0);
  CHECK(phi_value(etp, 1.0) ==
        doctest::Approx((1.0 - std::exp(-2.0)) / (1.0 - std::exp(-2.0))));
}

TEST_CASE("phi is even and non-negative") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (const auto& spec :
       {PenaltySpec::mcp(0.7, 2.5), PenaltySpec::scad(1.3, 3.7), PenaltySpec::etp(0.9, 1.5)}) {
    for (int i = 0; i < 200; ++i) {
      const double x = u(rng);
      CHECK(phi_value(spec, x) == phi_value(spec, -x));
      CHECK(phi_value(spec, x) >= 0.0);
    }
  }
}

TEST_CASE("prox examples from the closed forms") {
  const auto mcp = PenaltySpec::mcp(1.0, 2.0);
  CHECK(prox_scalar(mcp, 0.5).value == 0.0);
  CHECK(prox_scalar(mcp, 1.5).value == doctest::Approx(1.0));
  CHECK(prox_scalar(mcp, 3.0).value == doctest::Approx(3.0));

  const auto scad = PenaltySpec::scad(1.0, 3.0);
  CHECK(prox_scalar(scad, 2.5).value == doctest::Approx(2.0));
  CHECK(prox_scalar(scad, 1.5).value == doctest::Approx(0.5));  // soft branch
  CHECK(prox_scalar(scad, 4.0).value == doctest::Approx(4.0));

  const auto etp = PenaltySpec::etp(1.0, 2.0);
  CHECK(prox_scalar(etp, 0.8).value == 0.0);
  CHECK(prox_scalar(etp, 1.2).value == doctest::Approx(0.7));
  CHECK(prox_scalar(etp, 2.0).value == doctest::Approx(2.0));
}

TEST_CASE("prox oracle equivalence for MCP and SCAD") {
  // 10,000 random draws checked against the grid-search + Newton oracle.
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> sigma_d(0.1, 5.0);
  std::uniform_real_distribution<double> v_d(-10.0, 10.0);
  std::uniform_real_distribution<double> tau_mcp(1.2, 6.0);
  std::uniform_real_distribution<double> tau_scad(2.2, 6.0);

  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const bool use_mcp = (i % 2) == 0;
    const double sigma = sigma_d(rng);
    const double v = v_d(rng);
    const PenaltySpec spec = use_mcp ? PenaltySpec::mcp(sigma, tau_mcp(rng))
                                     : PenaltySpec::scad(sigma, tau_scad(rng));
    const ProxResult got = prox_scalar(spec, v);
    const auto oracle = prox_oracle(spec, v);
    const bool value_close = std::abs(got.value - oracle.x) <= 1e-5;
    const bool objective_tied = got.objective <= oracle.objective + 1e-10;
    if (!(value_close || objective_tied)) {
      CAPTURE(sigma);
      CAPTURE(v);
      CAPTURE(got.value);
      CAPTURE(oracle.x);
      REQUIRE((value_close || objective_tied));
    }
    ++checked;
  }
  CHECK(checked == 10000);
}

TEST_CASE("prox is sign-equivariant, shrinking and dead-zoned") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (const auto& spec :
       {PenaltySpec::mcp(0.8, 3.0), PenaltySpec::scad(1.1, 3.7), PenaltySpec::etp(0.6, 2.0)}) {
    for (int i = 0; i < 500; ++i) {
      const double v = u(rng);
      const double x = prox_scalar(spec, v).value;
      CHECK(prox_scalar(spec, -v).value == -x);
      CHECK(std::abs(x) <= std::abs(v) + 1e-15);
      if (std::abs(v) <= spec.sigma) CHECK(x == 0.0);
    }
  }
}

TEST_CASE("MCP and SCAD prox objectives never exceed the zero candidate") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (const auto& spec : {PenaltySpec::mcp(0.8, 3.0), PenaltySpec::scad(1.1, 3.7)}) {
    for (int i = 0; i < 500; ++i) {
      const double v = u(rng);
      CHECK(prox_scalar(spec, v).objective <= 0.5 * v * v + 1e-12);
    }
  }
}

// The ETP closed form is a firm-threshold surrogate; this records its worst
// objective gap against the exact minimizer without asserting on it.
TEST_CASE("ETP deviation from the exact minimizer is bounded and reported") {
  const auto etp = PenaltySpec::etp(1.0, 2.0);
  double worst = 0.0;
  for (double v = 0.0; v <= 3.0; v += 0.01) {
    const ProxResult got = prox_scalar(etp, v);
    const auto oracle = prox_oracle(etp, v);
    worst = std::max(worst, got.objective - oracle.objective);
  }
  MESSAGE("ETP worst objective gap vs exact prox on [0,3]: ", worst);
  CHECK(worst < 1.0);  // sanity ceiling only; the gap is documented, not pinned
}

TEST_CASE("prox_row maps zero to zero and preserves direction") {
  const auto mcp = PenaltySpec::mcp(1.0, 2.0);
  CHECK(prox_row(mcp, Vector::Zero(4)).isZero(0.0));

  Vector v(2);
  v << 0.3, 0.4;  // norm 0.5 inside the dead zone
  CHECK(prox_row(mcp, v).isZero(0.0));

  v << 0.9, 1.2;  // norm 1.5 shrinks to 1.0
  const Vector out = prox_row(mcp, v);
  CHECK(out(0) == doctest::Approx(0.6));
  CHECK(out(1) == doctest::Approx(0.8));
  CHECK(out.norm() == doctest::Approx(1.0));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    Vector w(5);
    for (int k = 0; k < 5; ++k) w(k) = g(rng);
    const Vector r = prox_row(mcp, w);
    // Non-negative multiple of the input.
    const double scale = w.norm() > 0 ? r.norm() / w.norm() : 0.0;
    CHECK((r - scale * w).cwiseAbs().maxCoeff() < 1e-12);
  }
}
