#pragma once

// Shared oracles and generators for the test suites. Everything here is
// independent of the implementation paths it checks, except run_block_trace,
// which re-drives the solver's iteration through its public block operations.

#include "ronmf/penalty.hpp"
#include "ronmf/solver.hpp"
#include "ronmf/types.hpp"

#include <cmath>
#include <random>

namespace test_support {

using ronmf::Matrix;
using ronmf::Vector;

inline Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                             double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = u(rng);
  }
  return M;
}

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = g(rng);
  }
  return M;
}

// Naive triple-loop product, the oracle for reconstruct().
inline Matrix naive_product(const Matrix& A, const Matrix& B) {
  Matrix C = Matrix::Zero(A.rows(), B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < B.cols(); ++j) {
      for (Eigen::Index k = 0; k < A.cols(); ++k) C(i, j) += A(i, k) * B(k, j);
    }
  }
  return C;
}

// Global minimizer of g(x) = ½(x−v)² + φ(x) by grid search (step 1e-4 over
// [−|v|−1, |v|+1]) followed by a few Newton steps on the smooth branch.
struct ProxOracle {
  double x;
  double objective;
};

inline ProxOracle prox_oracle(const ronmf::PenaltySpec& spec, double v, double step = 1e-4) {
  auto g = [&](double x) {
    return 0.5 * (x - v) * (x - v) + ronmf::phi_value(spec, x);
  };
  const double lo = -std::abs(v) - 1.0;
  const double hi = std::abs(v) + 1.0;
  double best_x = 0.0;
  double best_g = g(0.0);  // zero is always a candidate
  const auto steps = static_cast<long>((hi - lo) / step);
  for (long k = 0; k <= steps; ++k) {
    const double x = lo + step * static_cast<double>(k);
    const double val = g(x);
    if (val < best_g) {
      best_g = val;
      best_x = x;
    }
  }
  // Newton refinement with finite-difference derivatives; φ'' is piecewise
  // constant for MCP/SCAD, so a few damped steps suffice away from kinks.
  double x = best_x;
  for (int it = 0; it < 20; ++it) {
    const double h = 1e-6;
    const double g1 = (g(x + h) - g(x - h)) / (2.0 * h);
    const double g2 = (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
    if (!std::isfinite(g2) || std::abs(g2) < 1e-12) break;
    const double next = x - g1 / g2;
    if (!std::isfinite(next) || g(next) > g(x)) break;
    x = next;
  }
  if (g(x) < best_g) {
    best_g = g(x);
    best_x = x;
  }
  return {best_x, best_g};
}

// One augmented-Lagrangian sample per block of one outer iteration.
struct BlockTrace {
  double before = 0.0;
  double after_u = 0.0;
  double after_a = 0.0;
  double after_z = 0.0;
  double after_e = 0.0;
  double after_lambda = 0.0;
  double u_penalty_gap = 0.0;
  double ortho_residual = 0.0;
  double a_residual_rel = 0.0;
  double z_residual_rel = 0.0;
  bool u_capped = false;
};

// Drives exactly `iters` outer iterations through the public block
// operations in the solver's order (with its initialization polish),
// regardless of feasibility convergence.
inline std::vector<BlockTrace> run_block_trace(const ronmf::DataMatrix& data,
                                               const ronmf::GraphContext& ctx,
                                               const ronmf::Hyperparams& hp,
                                               const ronmf::PenaltySpec& spec, int iters,
                                               ronmf::SolverState* final_state = nullptr) {
  using namespace ronmf;
  const Matrix& X = data.values;
  const PenaltySpec eff = spec.with_sigma(1.0 / hp.beta);
  SolverState state = init_state(data, ctx, hp, InitStrategy::Random);
  const Eigen::Index r = state.U.cols();

  USubsolverConfig ucfg;
  ucfg.eps1 = hp.eps1;
  ucfg.eps2 = hp.eps2;
  ucfg.ortho_penalty = hp.ortho_penalty > 0.0
                           ? hp.ortho_penalty
                           : 10.0 * X.norm() / static_cast<double>(X.size());
  {
    const Matrix W0 = X - state.E - state.Lambda / hp.beta;
    auto polish = update_u(state.U, W0, state.Z, state.A, ucfg);
    state.U = std::move(polish.U);
    ucfg.ortho_penalty = polish.sigma_u;
    state.E = X - reconstruct(state);
  }

  auto lagrangian = [&](const SolverState& s) {
    return augmented_lagrangian(X, s, ctx, hp, eff);
  };

  std::vector<BlockTrace> trace;
  for (int k = 1; k <= iters; ++k) {
    BlockTrace rec;
    rec.before = lagrangian(state);
    const Matrix W = X - state.E - state.Lambda / hp.beta;

    auto u_res = update_u(state.U, W, state.Z, state.A, ucfg);
    state.U = std::move(u_res.U);
    ucfg.ortho_penalty = u_res.sigma_u;
    rec.after_u = lagrangian(state);

    auto a_res = update_a(W, state.U, state.Z, ctx, hp);
    state.A = std::move(a_res.A);
    rec.after_a = lagrangian(state);

    auto z_res = update_z(W, state.U, state.A);
    state.Z = std::move(z_res.Z);
    rec.after_z = lagrangian(state);

    const Matrix V = X - reconstruct(state) - state.Lambda / hp.beta;
    state.E = update_e(V, eff);
    rec.after_e = lagrangian(state);

    const Matrix residual = X - reconstruct(state) - state.E;
    state.Lambda = update_lambda(state.Lambda, residual, hp.beta);
    rec.after_lambda = lagrangian(state);

    rec.u_penalty_gap = u_res.penalty_gap;
    rec.u_capped = u_res.iteration_capped;
    rec.ortho_residual = (state.U.transpose() * state.U - Matrix::Identity(r, r)).norm();
    rec.a_residual_rel = a_res.residual_rel;
    rec.z_residual_rel = z_res.grad_residual_rel;
    trace.push_back(rec);
  }
  if (final_state) *final_state = std::move(state);
  return trace;
}

// Dense Kronecker-vectorized solve of P·A + A·Q = R, the Sylvester oracle.
inline Matrix kronecker_sylvester(const Matrix& P, const Matrix& Q, const Matrix& R) {
  const Eigen::Index n = P.rows();
  const Eigen::Index c = Q.rows();
  Matrix K = Matrix::Zero(n * c, n * c);
  // vec(PA) = (I_c ⊗ P) vec(A); vec(AQ) = (Qᵀ ⊗ I_n) vec(A).
  for (Eigen::Index j = 0; j < c; ++j) {
    K.block(j * n, j * n, n, n) += P;
  }
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index l = 0; l < c; ++l) {
      K.block(j * n, l * n, n, n) += Q(l, j) * Matrix::Identity(n, n);
    }
  }
  Vector vecR(n * c);
  for (Eigen::Index j = 0; j < c; ++j) vecR.segment(j * n, n) = R.col(j);
  const Vector vecA = K.colPivHouseholderQr().solve(vecR);
  Matrix A(n, c);
  for (Eigen::Index j = 0; j < c; ++j) A.col(j) = vecA.segment(j * n, n);
  return A;
}

}  // namespace test_support
