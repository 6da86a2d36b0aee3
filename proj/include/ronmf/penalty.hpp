#pragma once

#include "ronmf/types.hpp"

namespace ronmf {

/// Result of the scalar proximal map: the minimizer candidate and the value
/// of ½(x−v)² + φ_σ(x) attained at it.
struct ProxResult {
  double value = 0.0;
  double objective = 0.0;
};

/// φ_σ(x). Even, non-negative, φ_σ(0) = 0; piecewise forms:
///   MCP  (τ>1): σ|x| − x²/(2τ) on |x| ≤ στ, then saturates at σ²τ/2.
///   SCAD (τ>2): σ|x|, then (στ|x| − ½(x²+σ²))/(τ−1), saturating at σ²(τ+1)/2.
///   ETP:        σ(1−exp(−γ|x|))/(1−exp(−γ)).
double phi_value(const PenaltySpec& spec, double x);

/// Closed-form thresholding for ½(x−v)² + φ_σ(x). Odd in v, |result| ≤ |v|,
/// zero on the dead zone |v| ≤ σ. For MCP and SCAD this is the global
/// minimizer; the ETP form is the customary firm-threshold surrogate, which
/// deviates from the exact minimizer near |v| = σ (see README).
ProxResult prox_scalar(const PenaltySpec& spec, double v);

/// Row-structured prox: rescales v so its ℓ2 norm equals
/// prox_scalar(spec, ‖v‖₂).value, preserving direction; 0 maps to 0.
Vector prox_row(const PenaltySpec& spec, const Vector& v);

/// Σᵢ φ_σ(‖row i of Y‖₂), the ℓ2,φ loss.
double l2phi_norm(const PenaltySpec& spec, const Matrix& Y);

}  // namespace ronmf
