#pragma once

#include "ronmf/graph.hpp"
#include "ronmf/penalty.hpp"
#include "ronmf/types.hpp"

namespace ronmf {

enum class InitStrategy { Random, KMeans };

InitStrategy init_strategy_from_string(const std::string& name);
std::string to_string(InitStrategy s);

/// Configuration of the exact-penalty projected-gradient subsolver for the
/// orthogonality-constrained U block.
struct USubsolverConfig {
  double ortho_penalty = 1.0;  // sigma_U
  double eps1 = 1e-4;
  double eps2 = 1e-4;
  int max_inner_iters = 100;
  double armijo_c = 1e-4;
  double backtrack_ratio = 0.5;

  /// e/√r; unit norm by construction.
  static Vector direction_vector(Eigen::Index r) {
    return Vector::Constant(r, 1.0 / std::sqrt(static_cast<double>(r)));
  }
};

/// L_β(U, A, Z, E, Λ) = ‖E‖₂,φ + λTr(AᵀLA) + μTr((A−Y)ᵀS(A−Y))
///                      − ⟨Λ, X−UZᵀAᵀ−E⟩ + (β/2)‖X−UZᵀAᵀ−E‖²_F.
/// The penalty scale of `spec` is taken as given; fit() evaluates it with
/// σ := 1/β, the scale the E-update optimizes.
double augmented_lagrangian(const Matrix& X, const SolverState& state, const GraphContext& ctx,
                            const Hyperparams& hp, const PenaltySpec& spec);

/// ½‖W − UZᵀAᵀ‖²_F + σ_U(‖Uv‖²−1), the exact-penalty surrogate of the
/// U subproblem.
double f_sigma(const Matrix& U, const Matrix& W, const Matrix& Z, const Matrix& A, double sigma_u,
               const Vector& v);

/// Euclidean gradient ∇f_σ(U) = −(W − UZᵀAᵀ)AZ + 2σ_U(Uv)vᵀ.
Matrix grad_f_sigma_euclidean(const Matrix& U, const Matrix& W, const Matrix& Z, const Matrix& A,
                              double sigma_u, const Vector& v);

/// Riemannian gradient grad f_σ(U) = ∇f_σ(U) − U Diag(Uᵀ∇f_σ(U)).
Matrix grad_f_sigma(const Matrix& U, const Matrix& W, const Matrix& Z, const Matrix& A,
                    double sigma_u, const Vector& v);

/// ‖min(U, grad f_σ(U))‖_F, the projected-gradient stationarity measure.
double u_stationarity(const Matrix& U, const Matrix& grad);

struct UUpdateResult {
  Matrix U;
  double stationarity = 0.0;
  double penalty_gap = 0.0;  // ‖Uv‖² − 1
  double sigma_u = 0.0;      // possibly escalated
  int inner_iters = 0;
  bool iteration_capped = false;
  bool rejected = false;  // reconstruction-descent guard kept the input U
};

/// Projected-gradient solve of min f_σ over {U ≥ 0, unit-norm columns},
/// started at `U0`. Escalates σ_U when a stationary point misses the eps2
/// orthogonality tolerance, and refuses to return a U that would increase
/// ½‖W − UZᵀAᵀ‖² relative to U0.
UUpdateResult update_u(const Matrix& U0, const Matrix& W, const Matrix& Z, const Matrix& A,
                       const USubsolverConfig& cfg);

struct AUpdateResult {
  Matrix A_bar;  // pre-projection Sylvester solution
  Matrix A;      // max(A_bar, 0)
  double residual_rel = 0.0;  // ‖P·Ā + Ā·Q − R‖_F / ‖R‖_F
  bool regularized = false;
};

/// Solves (2λL + 2μS)·Ā + Ā·(βZZᵀ) = βWᵀUZᵀ + 2μSY and projects onto the
/// non-negative orthant. A singular spectrum pairing is lifted by adding
/// 1e-10·I to βZZᵀ.
AUpdateResult update_a(const Matrix& W, const Matrix& U, const Matrix& Z, const GraphContext& ctx,
                       const Hyperparams& hp);

/// Eigendecomposition solve of P·A + A·Q = R for symmetric PSD P, Q.
/// Throws ContractViolation when some eigenvalue pair p_i + q_j < 1e-12.
Matrix solve_sylvester(const Matrix& P, const Matrix& Q, const Matrix& R);

struct ZUpdateResult {
  Matrix Z_bar;  // (AᵀA)⁻¹AᵀWᵀU before projection
  Matrix Z;      // max(Z_bar, 0)
  double grad_residual_rel = 0.0;  // ‖AᵀAZ̄ − AᵀWᵀU‖_F / ‖AᵀWᵀU‖_F
  bool rank_deficient = false;
};

/// Least-squares Z̄ = (AᵀA)⁻¹AᵀWᵀU (pseudoinverse when AᵀA is rank
/// deficient), projected onto the non-negative orthant.
ZUpdateResult update_z(const Matrix& W, const Matrix& U, const Matrix& A);

/// Row-wise proximal update: E_i = prox_row(spec, V_i) for V = X−UZᵀAᵀ−Λ/β.
/// `spec` is expected to carry σ = 1/β already.
Matrix update_e(const Matrix& V, const PenaltySpec& spec);

/// Λ ← Λ − β(X − UZᵀAᵀ − E).
Matrix update_lambda(const Matrix& Lambda, const Matrix& residual, double beta);

/// Builds the starting iterate. Random: U ~ U(0,1) with unit-norm columns,
/// A = Y plus 0.1·U(0,1) on unlabeled rows, Z ~ U(0,1), E = X − UZᵀAᵀ, Λ = 0.
/// KMeans: U columns are normalized k-means centroids; A blends the k-means
/// one-hot with Y on labeled rows (requires r = c, else A falls back to the
/// random recipe).
SolverState init_state(const DataMatrix& data, const GraphContext& ctx, const Hyperparams& hp,
                       InitStrategy strategy);

/// Row-wise argmax of A; ties break to the lowest column index and an
/// all-zero row maps to class 0 (flagged on the state).
std::vector<int> predict_labels(SolverState& state);

/// Full ADMM loop: U → A → Z → E → Λ until the relative feasibility
/// ‖X−UZᵀAᵀ−E‖_F/‖X‖_F drops below hp.outer_tol or hp.max_outer_iters is
/// reached. Computes metrics when ground-truth labels are present.
ClusteringResult fit(const DataMatrix& data, const GraphContext& ctx, const Hyperparams& hp,
                     const PenaltySpec& spec, InitStrategy strategy = InitStrategy::Random);

}  // namespace ronmf
