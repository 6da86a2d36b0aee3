#include "ronmf/solver.hpp"

#include "ronmf/baselines.hpp"
#include "ronmf/metrics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

namespace ronmf {

InitStrategy init_strategy_from_string(const std::string& name) {
  if (name == "random") return InitStrategy::Random;
  if (name == "kmeans") return InitStrategy::KMeans;
  throw ContractViolation("unknown init strategy: " + name);
}

std::string to_string(InitStrategy s) {
  return s == InitStrategy::Random ? "random" : "kmeans";
}

double augmented_lagrangian(const Matrix& X, const SolverState& state, const GraphContext& ctx,
                            const Hyperparams& hp, const PenaltySpec& spec) {
  const Matrix residual = X - reconstruct(state) - state.E;
  const Matrix AmY = state.A - ctx.Y;

  double value = l2phi_norm(spec, state.E);
  value += hp.lambda * (state.A.cwiseProduct(ctx.L * state.A)).sum();
  double label_term = 0.0;
  for (Eigen::Index i = 0; i < AmY.rows(); ++i) {
    if (ctx.S(i) != 0.0) label_term += ctx.S(i) * AmY.row(i).squaredNorm();
  }
  value += hp.mu * label_term;
  value -= (state.Lambda.cwiseProduct(residual)).sum();
  value += 0.5 * hp.beta * residual.squaredNorm();
  return value;
}

double f_sigma(const Matrix& U, const Matrix& W, const Matrix& Z, const Matrix& A, double sigma_u,
               const Vector& v) {
  const Matrix N = A * Z;  // n×r
  const double data_term = 0.5 * (W - U * N.transpose()).squaredNorm();
  return data_term + sigma_u * ((U * v).squaredNorm() - 1.0);
}

Matrix grad_f_sigma_euclidean(const Matrix& U, const Matrix& W, const Matrix& Z, const Matrix& A,
                              double sigma_u, const Vector& v) {
  const Matrix N = A * Z;
  return -(W - U * N.transpose()) * N + 2.0 * sigma_u * (U * v) * v.transpose();
}

Matrix grad_f_sigma(const Matrix& U, const Matrix& W, const Matrix& Z, const Matrix& A,
                    double sigma_u, const Vector& v) {
  const Matrix g = grad_f_sigma_euclidean(U, W, Z, A, sigma_u, v);
  return g - U * (U.transpose() * g).diagonal().asDiagonal();
}

double u_stationarity(const Matrix& U, const Matrix& grad) {
  return U.cwiseMin(grad).norm();
}

namespace {

// Clip to the orthant, then renormalize columns; a column that clips to zero
// keeps its previous direction.
Matrix retract(const Matrix& step, const Matrix& previous) {
  Matrix out = step.cwiseMax(0.0);
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (norm > 1e-300) {
      out.col(j) /= norm;
    } else {
      out.col(j) = previous.col(j);
    }
  }
  return out;
}

struct SymEig {
  Matrix V;
  Vector d;
};

SymEig sym_eig(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(M);
  if (es.info() != Eigen::Success) {
    throw ContractViolation("eigendecomposition failed on a symmetric operand");
  }
  return {es.eigenvectors(), es.eigenvalues()};
}

Matrix sylvester_from_eigs(const SymEig& P, const SymEig& Q, const Matrix& R, double q_shift) {
  for (Eigen::Index i = 0; i < P.d.size(); ++i) {
    for (Eigen::Index j = 0; j < Q.d.size(); ++j) {
      if (P.d(i) + Q.d(j) + q_shift < 1e-12) {
        throw ContractViolation("sylvester: singular spectrum pairing p_i + q_j < 1e-12");
      }
    }
  }
  Matrix core = P.V.transpose() * R * Q.V;
  for (Eigen::Index i = 0; i < core.rows(); ++i) {
    for (Eigen::Index j = 0; j < core.cols(); ++j) {
      core(i, j) /= (P.d(i) + Q.d(j) + q_shift);
    }
  }
  return P.V * core * Q.V.transpose();
}

// P = 2λL + 2μS is constant over a fit; cache it with its eigendecomposition.
struct APrecomp {
  Matrix P;
  SymEig eig;

  APrecomp(const GraphContext& ctx, const Hyperparams& hp) {
    P = 2.0 * hp.lambda * ctx.L;
    P.diagonal() += 2.0 * hp.mu * ctx.S;
    eig = sym_eig(P);
  }
};

AUpdateResult solve_a_precomp(const APrecomp& pre, const Matrix& W, const Matrix& U,
                              const Matrix& Z, const GraphContext& ctx, const Hyperparams& hp) {
  const Matrix Q = hp.beta * (Z * Z.transpose());
  const Matrix R = hp.beta * (W.transpose() * U) * Z.transpose() +
                   2.0 * hp.mu * (ctx.S.asDiagonal() * ctx.Y);
  const SymEig eig_q = sym_eig(Q);

  AUpdateResult out;
  double q_shift = 0.0;
  try {
    out.A_bar = sylvester_from_eigs(pre.eig, eig_q, R, 0.0);
  } catch (const ContractViolation&) {
    q_shift = 1e-10;
    out.A_bar = sylvester_from_eigs(pre.eig, eig_q, R, q_shift);
    out.regularized = true;
  }
  Matrix lhs = pre.P * out.A_bar + out.A_bar * Q;
  if (q_shift > 0.0) lhs += q_shift * out.A_bar;
  out.residual_rel = (lhs - R).norm() / std::max(R.norm(), 1e-300);
  out.A = out.A_bar.cwiseMax(0.0);
  return out;
}

}  // namespace

UUpdateResult update_u(const Matrix& U0, const Matrix& W, const Matrix& Z, const Matrix& A,
                       const USubsolverConfig& cfg) {
  const Eigen::Index r = U0.cols();
  const Vector v = USubsolverConfig::direction_vector(r);
  const Matrix N = A * Z;  // n×r, recon = U Nᵀ

  auto data_term = [&](const Matrix& U) { return 0.5 * (W - U * N.transpose()).squaredNorm(); };
  auto penalty_gap = [&](const Matrix& U) { return (U * v).squaredNorm() - 1.0; };

  double sigma = cfg.ortho_penalty;
  auto objective = [&](const Matrix& U) { return data_term(U) + sigma * penalty_gap(U); };

  constexpr int kMaxSigmaRounds = 30;
  constexpr int kMaxBacktracks = 60;

  UUpdateResult out;
  Matrix U = U0;
  double f_curr = objective(U);
  double measure = 0.0;
  int total_steps = 0;

  for (int round = 0; round < kMaxSigmaRounds; ++round) {
    bool stationary = false;
    bool stalled = false;
    for (int t = 0; t < cfg.max_inner_iters; ++t) {
      const Matrix grad_e = grad_f_sigma_euclidean(U, W, Z, A, sigma, v);
      const Matrix grad = grad_e - U * (U.transpose() * grad_e).diagonal().asDiagonal();
      measure = u_stationarity(U, grad);
      if (measure <= cfg.eps1) {
        stationary = true;
        break;
      }
      double alpha = 1.0;
      bool accepted = false;
      for (int bt = 0; bt < kMaxBacktracks; ++bt) {
        const Matrix cand = retract(U - alpha * grad, U);
        const double f_cand = objective(cand);
        const double move = (cand - U).squaredNorm();
        if (f_cand <= f_curr - cfg.armijo_c / alpha * move && move > 0.0) {
          U = cand;
          f_curr = f_cand;
          accepted = true;
          break;
        }
        alpha *= cfg.backtrack_ratio;
      }
      ++total_steps;
      if (!accepted) {
        stalled = true;  // numerically stuck at this sigma
        break;
      }
    }
    if (penalty_gap(U) > cfg.eps2) {
      // Exact-penalty escalation: a (near-)stationary point still violating
      // the orthogonality tolerance means sigma is too small.
      sigma *= 10.0;
      f_curr = objective(U);
      continue;
    }
    if (stationary || stalled) break;
    // Budget exhausted with the gap closed: spend another round on
    // stationarity at the same sigma.
  }
  out.iteration_capped = measure > cfg.eps1 || penalty_gap(U) > cfg.eps2;

  // The subsolver must not undo the L_beta descent of the U block: f_sigma
  // descent alone bounds the reconstruction increase only by sigma*eps2.
  const double h0 = data_term(U0);
  if (data_term(U) > h0 + 1e-12 * std::max(1.0, std::abs(h0)) &&
      penalty_gap(U0) <= cfg.eps2) {
    out.U = U0;
    out.rejected = true;
    out.stationarity = measure;
    out.penalty_gap = penalty_gap(U0);
  } else {
    out.U = std::move(U);
    out.stationarity = measure;
    out.penalty_gap = penalty_gap(out.U);
  }
  out.sigma_u = sigma;
  out.inner_iters = total_steps;
  return out;
}

Matrix solve_sylvester(const Matrix& P, const Matrix& Q, const Matrix& R) {
  if (P.rows() != P.cols() || Q.rows() != Q.cols()) {
    throw ContractViolation("sylvester: P and Q must be square");
  }
  if (R.rows() != P.rows() || R.cols() != Q.rows()) {
    throw ContractViolation("sylvester: R must be P.rows() × Q.rows()");
  }
  return sylvester_from_eigs(sym_eig(P), sym_eig(Q), R, 0.0);
}

AUpdateResult update_a(const Matrix& W, const Matrix& U, const Matrix& Z, const GraphContext& ctx,
                       const Hyperparams& hp) {
  return solve_a_precomp(APrecomp(ctx, hp), W, U, Z, ctx, hp);
}

ZUpdateResult update_z(const Matrix& W, const Matrix& U, const Matrix& A) {
  const Matrix gram = A.transpose() * A;  // c×c
  const Matrix rhs = A.transpose() * (W.transpose() * U);

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(gram);
  ZUpdateResult out;
  out.rank_deficient = cod.rank() < gram.rows();
  out.Z_bar = cod.solve(rhs);
  out.grad_residual_rel = (gram * out.Z_bar - rhs).norm() / std::max(rhs.norm(), 1e-300);
  out.Z = out.Z_bar.cwiseMax(0.0);
  return out;
}

Matrix update_e(const Matrix& V, const PenaltySpec& spec) {
  Matrix E(V.rows(), V.cols());
  for (Eigen::Index i = 0; i < V.rows(); ++i) {
    E.row(i) = prox_row(spec, V.row(i).transpose()).transpose();
  }
  return E;
}

Matrix update_lambda(const Matrix& Lambda, const Matrix& residual, double beta) {
  return Lambda - beta * residual;
}

SolverState init_state(const DataMatrix& data, const GraphContext& ctx, const Hyperparams& hp,
                       InitStrategy strategy) {
  const Eigen::Index d = data.dim();
  const Eigen::Index n = data.num_samples();
  const int c = ctx.num_classes;
  const int r = hp.effective_rank(c);
  if (r < 1 || r > std::min(d, n)) {
    throw ContractViolation("init_state: rank must be in [1, min(d, n)]");
  }

  std::mt19937_64 rng(hp.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto fill_uniform = [&](Matrix& M) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      for (Eigen::Index i = 0; i < M.rows(); ++i) M(i, j) = u01(rng);
    }
  };

  SolverState state;
  state.U.resize(d, r);
  state.A = Matrix::Zero(n, c);
  state.Z.resize(c, r);

  if (strategy == InitStrategy::KMeans) {
    const BaselineResult km = kmeans(data.values, r, 50, hp.seed);
    for (int j = 0; j < r; ++j) {
      Vector centroid = Vector::Zero(d);
      Eigen::Index count = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (km.labels[static_cast<std::size_t>(i)] == j) {
          centroid += data.values.col(i);
          ++count;
        }
      }
      if (count > 0) centroid /= static_cast<double>(count);
      const double norm = centroid.norm();
      if (norm > 1e-300) {
        state.U.col(j) = centroid / norm;
      } else {
        Vector random_col(d);
        for (Eigen::Index i = 0; i < d; ++i) random_col(i) = u01(rng);
        state.U.col(j) = random_col / random_col.norm();
      }
    }
    if (r == c) {
      for (Eigen::Index i = 0; i < n; ++i) {
        state.A(i, km.labels[static_cast<std::size_t>(i)]) = 1.0;
        if (ctx.labeled_mask[static_cast<std::size_t>(i)]) {
          state.A.row(i) = 0.5 * state.A.row(i) + 0.5 * ctx.Y.row(i);
        }
      }
    } else {
      // The one-hot blend needs r == c; fall back to the random recipe.
      for (Eigen::Index i = 0; i < n; ++i) {
        if (ctx.labeled_mask[static_cast<std::size_t>(i)]) {
          state.A.row(i) = ctx.Y.row(i);
        } else {
          for (Eigen::Index j = 0; j < c; ++j) state.A(i, j) = 0.1 * u01(rng);
        }
      }
    }
  } else {
    fill_uniform(state.U);
    for (Eigen::Index j = 0; j < r; ++j) state.U.col(j) /= state.U.col(j).norm();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (ctx.labeled_mask[static_cast<std::size_t>(i)]) {
        state.A.row(i) = ctx.Y.row(i);
      } else {
        for (Eigen::Index j = 0; j < c; ++j) state.A(i, j) = 0.1 * u01(rng);
      }
    }
  }

  fill_uniform(state.Z);
  state.E = data.values - reconstruct(state);
  state.Lambda = Matrix::Zero(d, n);
  state.iter = 0;
  return state;
}

std::vector<int> predict_labels(SolverState& state) {
  std::vector<int> labels(static_cast<std::size_t>(state.A.rows()), 0);
  for (Eigen::Index i = 0; i < state.A.rows(); ++i) {
    int best = 0;
    for (Eigen::Index j = 1; j < state.A.cols(); ++j) {
      if (state.A(i, j) > state.A(i, best)) best = static_cast<int>(j);
    }
    if (state.A.row(i).maxCoeff() == 0.0 && state.A.row(i).minCoeff() == 0.0) {
      state.prediction_flagged = true;
      best = 0;
    }
    labels[static_cast<std::size_t>(i)] = best;
  }
  return labels;
}

ClusteringResult fit(const DataMatrix& data, const GraphContext& ctx, const Hyperparams& hp,
                     const PenaltySpec& spec, InitStrategy strategy) {
  const ValidationReport report = validate(data);
  if (!report.ok()) {
    throw ContractViolation("fit: invalid data matrix:\n" + report.to_string());
  }
  hp.check(data.dim(), data.num_samples());
  if (ctx.num_samples() != data.num_samples()) {
    throw ContractViolation("fit: graph context does not match the data matrix");
  }

  const Matrix& X = data.values;
  const double x_norm = std::max(X.norm(), 1e-300);
  const PenaltySpec eff = spec.with_sigma(1.0 / hp.beta);

  USubsolverConfig ucfg;
  ucfg.eps1 = hp.eps1;
  ucfg.eps2 = hp.eps2;
  ucfg.ortho_penalty = hp.ortho_penalty > 0.0
                           ? hp.ortho_penalty
                           : 10.0 * X.norm() / static_cast<double>(X.size());

  SolverState state = init_state(data, ctx, hp, strategy);
  const Eigen::Index r = state.U.cols();

  ClusteringResult result;

  if (hp.max_outer_iters > 0) {
    const APrecomp a_pre(ctx, hp);

    auto lagrangian = [&](const SolverState& s) {
      return augmented_lagrangian(X, s, ctx, hp, eff);
    };
    auto check_finite = [&](const Matrix& M, const char* block, int iter) {
      if (!M.allFinite()) throw NumericalAbort(block, iter);
    };

    // The drawn U has unit columns but is far from orthogonal. Run the
    // exact-penalty subsolver once on the initial reconstruction target and
    // re-anchor E so the first traced iteration starts from an
    // orthogonality-feasible, exactly feasible point.
    {
      const Matrix W0 = X - state.E - state.Lambda / hp.beta;
      UUpdateResult polish = update_u(state.U, W0, state.Z, state.A, ucfg);
      state.U = std::move(polish.U);
      check_finite(state.U, "U", 0);
      ucfg.ortho_penalty = polish.sigma_u;
      state.E = X - reconstruct(state);
    }

    for (int k = 1; k <= hp.max_outer_iters; ++k) {
      IterationRecord rec;
      rec.iter = k;
      rec.lagrangian_before = lagrangian(state);

      const Matrix W = X - state.E - state.Lambda / hp.beta;

      UUpdateResult u_res = update_u(state.U, W, state.Z, state.A, ucfg);
      state.U = std::move(u_res.U);
      check_finite(state.U, "U", k);
      ucfg.ortho_penalty = u_res.sigma_u;  // carry any escalation forward
      rec.lagrangian_after_u = lagrangian(state);

      AUpdateResult a_res = solve_a_precomp(a_pre, W, state.U, state.Z, ctx, hp);
      state.A = std::move(a_res.A);
      check_finite(state.A, "A", k);
      rec.lagrangian_after_a = lagrangian(state);

      ZUpdateResult z_res = update_z(W, state.U, state.A);
      state.Z = std::move(z_res.Z);
      check_finite(state.Z, "Z", k);
      rec.lagrangian_after_z = lagrangian(state);

      const Matrix V = X - reconstruct(state) - state.Lambda / hp.beta;
      state.E = update_e(V, eff);
      check_finite(state.E, "E", k);
      rec.lagrangian_after_e = lagrangian(state);

      const Matrix residual = X - reconstruct(state) - state.E;
      state.Lambda = update_lambda(state.Lambda, residual, hp.beta);
      check_finite(state.Lambda, "Lambda", k);
      rec.lagrangian_after_lambda = lagrangian(state);

      rec.feasibility = residual.norm() / x_norm;
      rec.ortho_residual =
          (state.U.transpose() * state.U - Matrix::Identity(r, r)).norm();
      rec.u_penalty_gap = u_res.penalty_gap;
      rec.u_stationarity = u_res.stationarity;
      rec.a_residual_rel = a_res.residual_rel;
      rec.z_residual_rel = z_res.grad_residual_rel;
      rec.sigma_u = u_res.sigma_u;
      rec.u_inner_iters = u_res.inner_iters;
      rec.u_iteration_capped = u_res.iteration_capped;
      rec.u_rejected = u_res.rejected;
      rec.a_regularized = a_res.regularized;
      rec.z_rank_deficient = z_res.rank_deficient;

      state.iter = k;
      state.trace.push_back(rec);
      if (rec.feasibility <= hp.outer_tol) break;
    }
  }

  result.final_feasibility =
      (X - reconstruct(state) - state.E).norm() / x_norm;
  result.iterations = state.iter;
  result.labels = predict_labels(state);
  if (data.has_labels()) {
    bool complete = true;
    for (int y : data.labels) {
      if (y == kUnlabeled) {
        complete = false;
        break;
      }
    }
    if (complete) result.metrics = evaluate(result.labels, data.labels);
  }
  result.state = std::move(state);
  return result;
}

}  // namespace ronmf
