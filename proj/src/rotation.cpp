#include "apsl/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace apsl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// One forward pass over [0, 2X] serves both estimators: the angle at X and 2X,
// the window average over [0, 2X] and the zero count on (0, X].
RotationEstimate single_pass(double lambda, const CoefficientTriple& v, double X, const ode::IntegratorConfig& cfg,
                             PruferAngle theta0) {
  if (!(X > 0.0)) throw std::invalid_argument("rotation: horizon X must be positive");
  PruferFlow flow(lambda, v, theta0, 1.0, cfg, 2.0 * X);
  flow.advance_to(X);
  const PruferAngle at_x = flow.angle();
  const std::int64_t zeros = flow.zero_count_through(kEndpointTol * (1.0 + X));
  flow.advance_to(2.0 * X);
  const PruferAngle at_2x = flow.angle();

  RotationEstimate e;
  e.X = X;
  e.method = RotationMethod::angle;
  e.rho_head = angle_difference(at_x, theta0) / X;
  e.rho_tail = angle_difference(at_2x, at_x) / X;
  e.rho_angle = flow.weighted_average();
  e.rho = e.rho_angle;
  e.err = std::abs(e.rho_tail - e.rho_head) + kTwoPi / X;
  e.zero_count = zeros;
  e.rho_zeros = std::numbers::pi * static_cast<double>(zeros) / X;
  return e;
}

}  // namespace

std::string to_string(RotationMethod m) {
  switch (m) {
    case RotationMethod::angle:
      return "angle";
    case RotationMethod::zeros:
      return "zeros";
    case RotationMethod::combined:
      return "combined";
  }
  return "unknown";
}

RotationEstimate rho_angle(double lambda, const CoefficientTriple& v, double X, const ode::IntegratorConfig& cfg,
                           PruferAngle theta0) {
  return single_pass(lambda, v, X, cfg, theta0);
}

RotationEstimate rho_zeros(double lambda, const CoefficientTriple& v, double X, const ode::IntegratorConfig& cfg,
                           PruferAngle theta0) {
  if (!(X > 0.0)) throw std::invalid_argument("rho_zeros: horizon X must be positive");
  const auto traj = evolve(lambda, v, theta0, X, cfg);
  RotationEstimate e;
  e.X = X;
  e.method = RotationMethod::zeros;
  e.zero_count = *traj.zero_count;
  e.rho_zeros = std::numbers::pi * static_cast<double>(e.zero_count) / X;
  e.rho = e.rho_zeros;
  e.err = kTwoPi / X;
  return e;
}

RhoProtocol RhoProtocol::defaults_for(const CoefficientTriple& v, double target_err) {
  RhoProtocol p;
  p.target_err = target_err;
  p.X_init = 1e3 * kTwoPi / v.base().min_generator();
  p.X_max = 256.0 * p.X_init;
  return p;
}

RotationEstimate rho(double lambda, const CoefficientTriple& v, const RhoProtocol& protocol,
                     const ode::IntegratorConfig& cfg) {
  RhoProtocol p = protocol;
  const RhoProtocol d = RhoProtocol::defaults_for(v, p.target_err);
  if (p.X_init <= 0.0) p.X_init = d.X_init;
  if (p.X_max <= 0.0) p.X_max = 256.0 * p.X_init;
  if (!(p.target_err > 0.0)) throw std::invalid_argument("rho: target_err must be positive");
  if (p.X_init > p.X_max) throw std::invalid_argument("rho: X_init must not exceed X_max");

  RotationEstimate best;
  best.err = std::numeric_limits<double>::infinity();
  for (double X = p.X_init; X <= p.X_max; X *= 2.0) {
    RotationEstimate e = single_pass(lambda, v, X, cfg, {});
    e.method = RotationMethod::combined;
    const double angle_err = e.err;
    e.err = std::max(angle_err, std::abs(e.rho_angle - e.rho_zeros));
    if (e.err <= best.err) best = e;
    if (angle_err <= p.target_err) return e;
  }
  throw HorizonExceeded(best);
}

}  // namespace apsl
