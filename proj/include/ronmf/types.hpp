#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ronmf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sentinel for samples without a ground-truth label.
inline constexpr int kUnlabeled = -1;

/// Thrown when a caller violates an operation's preconditions
/// (dimension mismatches, invalid parameter ranges).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an iterate becomes non-finite; carries the block and iteration.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(const std::string& block, int iteration)
      : std::runtime_error("non-finite values in " + block + " update at iteration " +
                           std::to_string(iteration)),
        block_(block),
        iteration_(iteration) {}

  const std::string& block() const { return block_; }
  int iteration() const { return iteration_; }

 private:
  std::string block_;
  int iteration_;
};

/// A d×n observation matrix (features × samples, all entries ≥ 0) with
/// optional ground-truth labels per sample.
struct DataMatrix {
  Matrix values;            // d×n, non-negative
  std::vector<int> labels;  // length n or empty; kUnlabeled marks a gap
  int num_classes = 0;      // c, meaningful only when labels are present

  Eigen::Index dim() const { return values.rows(); }
  Eigen::Index num_samples() const { return values.cols(); }
  bool has_labels() const { return !labels.empty(); }
};

/// One rule violation found by validate(); never thrown.
struct Violation {
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// Checks every DataMatrix invariant and reports all failures
/// (negative/non-finite entries with their position, label range, sizes).
ValidationReport validate(const DataMatrix& data);

struct Hyperparams {
  double lambda = 1000.0;         // graph-regularization weight
  double mu = 1.0;                // label-propagation weight
  double beta = 1.0;              // ADMM penalty
  int rank = 0;                   // r; 0 means "use the class count"
  double labeled_fraction = 0.3;  // p
  int knn = 5;
  int max_outer_iters = 200;
  double outer_tol = 1e-5;        // relative feasibility
  double eps1 = 1e-4;             // U-subsolver stationarity
  double eps2 = 1e-4;             // U-subsolver orthogonality slack
  double ortho_penalty = 0.0;     // sigma_U; 0 means scale-matched default
  std::uint64_t seed = 0;

  /// Throws ContractViolation if any range constraint fails.
  void check(Eigen::Index d, Eigen::Index n) const;

  /// Rank actually used for a given class count.
  int effective_rank(int num_classes) const { return rank > 0 ? rank : num_classes; }
};

enum class PenaltyKind { MCP, SCAD, ETP };

std::string to_string(PenaltyKind kind);
PenaltyKind penalty_kind_from_string(const std::string& name);

/// Which non-convex φ_σ to use, with its shape parameters. Construct through
/// the named factories; they reject out-of-range shapes (τ within 1e-6 of the
/// open bound included, since the middle-branch denominators blow up there).
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::MCP;
  double tau = 3.0;    // MCP: τ>1, SCAD: τ>2
  double gamma = 2.0;  // ETP decay
  double sigma = 1.0;  // penalty scale inside φ_σ

  static PenaltySpec mcp(double sigma = 1.0, double tau = 3.0);
  static PenaltySpec scad(double sigma = 1.0, double tau = 3.7);
  static PenaltySpec etp(double sigma = 1.0, double gamma = 2.0);
  static PenaltySpec make(PenaltyKind kind, double sigma, double tau, double gamma);

  /// Same penalty with the scale replaced (the solver substitutes σ := 1/β).
  PenaltySpec with_sigma(double s) const;
};

/// Per-iteration diagnostics recorded by fit(). The lagrangian_* fields hold
/// the augmented Lagrangian evaluated after each block update with Λ fixed
/// at its pre-iteration value; lagrangian_after_lambda re-evaluates with the
/// fresh multiplier.
struct IterationRecord {
  int iter = 0;
  double lagrangian_before = 0.0;
  double lagrangian_after_u = 0.0;
  double lagrangian_after_a = 0.0;
  double lagrangian_after_z = 0.0;
  double lagrangian_after_e = 0.0;
  double lagrangian_after_lambda = 0.0;
  double feasibility = 0.0;      // ‖X−UZᵀAᵀ−E‖_F / ‖X‖_F
  double ortho_residual = 0.0;   // ‖UᵀU−I‖_F
  double u_penalty_gap = 0.0;    // ‖Uv‖²−1 at the accepted U
  double u_stationarity = 0.0;   // ‖min(U, grad f_σ)‖_F at exit
  double a_residual_rel = 0.0;   // Sylvester residual of Ā, relative to ‖RHS‖
  double z_residual_rel = 0.0;   // pre-projection gradient norm of Z̄, relative
  double sigma_u = 0.0;
  int u_inner_iters = 0;
  bool u_iteration_capped = false;
  bool u_rejected = false;       // reconstruction-descent guard kept previous U
  bool a_regularized = false;    // singular Sylvester system was shifted
  bool z_rank_deficient = false; // AᵀA solved by pseudoinverse
};

/// The ADMM iterate tuple plus its convergence trace.
struct SolverState {
  Matrix U;       // d×r basis
  Matrix A;       // n×c membership
  Matrix Z;       // c×r auxiliary
  Matrix E;       // d×n residual (sign-unrestricted)
  Matrix Lambda;  // d×n multiplier
  int iter = 0;
  std::vector<IterationRecord> trace;
  bool prediction_flagged = false;  // an all-zero A row was assigned class 0
};

/// U Zᵀ Aᵀ for consistent factor shapes; throws ContractViolation otherwise.
Matrix reconstruct(const SolverState& state);

struct MetricReport {
  double acc = 0.0;
  double f1 = 0.0;
  double nmi = 0.0;
  double pur = 0.0;
  Eigen::MatrixXi confusion;  // padded square contingency table
};

struct ClusteringResult {
  std::vector<int> labels;  // argmax of rows of A
  SolverState state;
  std::optional<MetricReport> metrics;  // present when ground truth was given
  double final_feasibility = 0.0;
  int iterations = 0;
};

}  // namespace ronmf
