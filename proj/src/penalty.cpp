#include "ronmf/penalty.hpp"

#include <cmath>

namespace ronmf {

namespace {

inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double phi_mcp(double sigma, double tau, double a) {
  if (a <= sigma * tau) return sigma * a - a * a / (2.0 * tau);
  return sigma * sigma * tau / 2.0;
}

double phi_scad(double sigma, double tau, double a) {
  if (a <= sigma) return sigma * a;
  if (a <= sigma * tau) return (sigma * tau * a - 0.5 * (a * a + sigma * sigma)) / (tau - 1.0);
  return sigma * sigma * (tau + 1.0) / 2.0;
}

double phi_etp(double sigma, double gamma, double a) {
  return sigma / (1.0 - std::exp(-gamma)) * (1.0 - std::exp(-gamma * a));
}

double prox_value_mcp(double sigma, double tau, double v) {
  const double a = std::abs(v);
  if (a <= sigma) return 0.0;
  if (a <= sigma * tau) return sgn(v) * tau * (a - sigma) / (tau - 1.0);
  return v;
}

double prox_value_scad(double sigma, double tau, double v) {
  const double a = std::abs(v);
  if (a <= sigma) return 0.0;
  if (a <= 2.0 * sigma) return sgn(v) * (a - sigma);
  if (a <= sigma * tau) return sgn(v) * ((tau - 1.0) * a - sigma * tau) / (tau - 2.0);
  return v;
}

double prox_value_etp(double sigma, double gamma, double v) {
  const double a = std::abs(v);
  if (a <= sigma) return 0.0;
  if (a <= sigma * (1.0 + 1.0 / gamma)) return sgn(v) * (a - sigma / gamma);
  return v;
}

}  // namespace

double phi_value(const PenaltySpec& spec, double x) {
  const double a = std::abs(x);
  switch (spec.kind) {
    case PenaltyKind::MCP: return phi_mcp(spec.sigma, spec.tau, a);
    case PenaltyKind::SCAD: return phi_scad(spec.sigma, spec.tau, a);
    case PenaltyKind::ETP: return phi_etp(spec.sigma, spec.gamma, a);
  }
  return 0.0;
}

ProxResult prox_scalar(const PenaltySpec& spec, double v) {
  double x = 0.0;
  switch (spec.kind) {
    case PenaltyKind::MCP: x = prox_value_mcp(spec.sigma, spec.tau, v); break;
    case PenaltyKind::SCAD: x = prox_value_scad(spec.sigma, spec.tau, v); break;
    case PenaltyKind::ETP: x = prox_value_etp(spec.sigma, spec.gamma, v); break;
  }
  const double diff = x - v;
  return {x, 0.5 * diff * diff + phi_value(spec, x)};
}

Vector prox_row(const PenaltySpec& spec, const Vector& v) {
  const double norm = v.norm();
  if (norm == 0.0) return Vector::Zero(v.size());
  const double shrunk = prox_scalar(spec, norm).value;
  return v * (shrunk / norm);
}

double l2phi_norm(const PenaltySpec& spec, const Matrix& Y) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < Y.rows(); ++i) {
    total += phi_value(spec, Y.row(i).norm());
  }
  return total;
}

}  // namespace ronmf
