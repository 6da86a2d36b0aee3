#include "ronmf/types.hpp"

#include <cmath>
#include <sstream>

namespace ronmf {

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v.message << '\n';
  return out.str();
}

ValidationReport validate(const DataMatrix& data) {
  ValidationReport report;
  auto add = [&report](std::string msg) { report.violations.push_back({std::move(msg)}); };

  const Eigen::Index d = data.values.rows();
  const Eigen::Index n = data.values.cols();
  if (d < 1) add("matrix must have at least one feature row (d >= 1)");
  if (n < 2) add("matrix must have at least two samples (n >= 2)");

  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double x = data.values(i, j);
      if (!std::isfinite(x)) {
        std::ostringstream msg;
        msg << "non-finite entry at (" << i << ", " << j << ")";
        add(msg.str());
      } else if (x < 0.0) {
        std::ostringstream msg;
        msg << "negative entry " << x << " at (" << i << ", " << j << ")";
        add(msg.str());
      }
    }
  }

  if (data.has_labels()) {
    if (static_cast<Eigen::Index>(data.labels.size()) != n) {
      std::ostringstream msg;
      msg << "label vector length " << data.labels.size() << " does not match sample count " << n;
      add(msg.str());
    }
    if (data.num_classes < 2) add("num_classes must be >= 2 when labels are present");
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
      const int y = data.labels[i];
      if (y == kUnlabeled) continue;
      if (y < 0 || y >= data.num_classes) {
        std::ostringstream msg;
        msg << "label out of range: sample " << i << " has label " << y << ", expected [0, "
            << data.num_classes << ")";
        add(msg.str());
      }
    }
  }
  return report;
}

void Hyperparams::check(Eigen::Index d, Eigen::Index n) const {
  auto fail = [](const std::string& msg) { throw ContractViolation("hyperparams: " + msg); };
  if (lambda < 0.0) fail("lambda must be >= 0");
  if (mu < 0.0) fail("mu must be >= 0");
  if (beta <= 0.0) fail("beta must be > 0");
  if (rank < 0) fail("rank must be positive (or 0 for the class-count default)");
  if (rank > 0 && rank > std::min(d, n)) fail("rank must not exceed min(d, n)");
  if (labeled_fraction <= 0.0 || labeled_fraction > 1.0) fail("labeled_fraction must be in (0, 1]");
  if (knn < 1) fail("knn must be >= 1");
  if (max_outer_iters < 0) fail("max_outer_iters must be >= 0");
  if (outer_tol <= 0.0) fail("outer_tol must be > 0");
  if (eps1 <= 0.0 || eps2 <= 0.0) fail("eps1 and eps2 must be > 0");
  if (ortho_penalty < 0.0) fail("ortho_penalty must be >= 0 (0 selects the default)");
}

std::string to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::MCP: return "mcp";
    case PenaltyKind::SCAD: return "scad";
    case PenaltyKind::ETP: return "etp";
  }
  return "unknown";
}

PenaltyKind penalty_kind_from_string(const std::string& name) {
  if (name == "mcp" || name == "MCP") return PenaltyKind::MCP;
  if (name == "scad" || name == "SCAD") return PenaltyKind::SCAD;
  if (name == "etp" || name == "ETP") return PenaltyKind::ETP;
  throw ContractViolation("unknown penalty kind: " + name);
}

namespace {
// Open bounds on τ are enforced with a 1e-6 margin: the middle-branch
// denominators are τ−1 (MCP) and τ−2 (SCAD).
constexpr double kTauMargin = 1e-6;
}  // namespace

PenaltySpec PenaltySpec::mcp(double sigma, double tau) {
  if (sigma <= 0.0) throw ContractViolation("MCP: sigma must be > 0");
  if (tau <= 1.0 + kTauMargin) throw ContractViolation("MCP: tau must be > 1");
  return {PenaltyKind::MCP, tau, 0.0, sigma};
}

PenaltySpec PenaltySpec::scad(double sigma, double tau) {
  if (sigma <= 0.0) throw ContractViolation("SCAD: sigma must be > 0");
  if (tau <= 2.0 + kTauMargin) throw ContractViolation("SCAD: tau must be > 2");
  return {PenaltyKind::SCAD, tau, 0.0, sigma};
}

PenaltySpec PenaltySpec::etp(double sigma, double gamma) {
  if (sigma <= 0.0) throw ContractViolation("ETP: sigma must be > 0");
  if (gamma <= 0.0) throw ContractViolation("ETP: gamma must be > 0");
  return {PenaltyKind::ETP, 0.0, gamma, sigma};
}

PenaltySpec PenaltySpec::make(PenaltyKind kind, double sigma, double tau, double gamma) {
  switch (kind) {
    case PenaltyKind::MCP: return mcp(sigma, tau);
    case PenaltyKind::SCAD: return scad(sigma, tau);
    case PenaltyKind::ETP: return etp(sigma, gamma);
  }
  throw ContractViolation("unknown penalty kind");
}

PenaltySpec PenaltySpec::with_sigma(double s) const {
  return make(kind, s, tau, gamma);
}

Matrix reconstruct(const SolverState& state) {
  const Eigen::Index r = state.U.cols();
  const Eigen::Index c = state.A.cols();
  if (state.Z.rows() != c || state.Z.cols() != r) {
    throw ContractViolation("reconstruct: Z must be c×r with c = A.cols(), r = U.cols()");
  }
  return state.U * state.Z.transpose() * state.A.transpose();
}

}  // namespace ronmf
