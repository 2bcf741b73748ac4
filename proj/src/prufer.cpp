#include "apsl/prufer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace apsl {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;
}  // namespace

PruferAngle PruferAngle::from_value(double theta) {
  const double turns = std::floor(theta / kTwoPi);
  double residual = theta - turns * kTwoPi;
  auto winding = static_cast<std::int64_t>(turns);
  if (residual >= kTwoPi) {
    residual -= kTwoPi;
    ++winding;
  } else if (residual < 0.0) {
    residual += kTwoPi;
    --winding;
  }
  return {winding, residual};
}

double PruferAngle::value() const { return kTwoPi * static_cast<double>(winding) + residual; }

double angle_difference(const PruferAngle& a, const PruferAngle& b) {
  return kTwoPi * static_cast<double>(a.winding - b.winding) + (a.residual - b.residual);
}

double prufer_rhs(double x, double theta, double lambda, const CoefficientTriple& v) {
  const auto c = v.at(x);
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  return c.r * cs * cs + (lambda * c.w - c.q) * sn * sn;
}

double window_weight(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return std::exp(-1.0 / (t * (1.0 - t)));
}

ode::State<double, 3> detail::PruferField::operator()(double x, const ode::State<double, 3>& y) const {
  const auto c = v->at(x);
  const double cs = std::cos(y[0]);
  const double sn = std::sin(y[0]);
  const double dtheta = c.r * cs * cs + (lambda * c.w - c.q) * sn * sn;
  ode::State<double, 3> out;
  out[0] = dtheta;
  if (window > 0.0) {
    const double wt = window_weight(x / window);
    out[1] = wt * dtheta;
    out[2] = wt;
  } else {
    out[1] = 0.0;
    out[2] = 0.0;
  }
  return out;
}

namespace {

ode::State<double, 3> initial_state(const PruferAngle& theta0) { return {theta0.residual, 0.0, 0.0}; }

// The residual is an angle; its error is judged against a half turn rather
// than against its own magnitude, which collapses to atol after each wrap.
ode::IntegratorConfig angle_config(ode::IntegratorConfig cfg) {
  cfg.atol = std::max(cfg.atol, cfg.rtol * kPi);
  return cfg;
}

}  // namespace

PruferFlow::PruferFlow(double lambda, const CoefficientTriple& v, PruferAngle theta0, double direction,
                       const ode::IntegratorConfig& cfg, double weight_window)
    : stepper_(detail::PruferField{lambda, &v, weight_window}, 0.0, initial_state(theta0), direction, angle_config(cfg)),
      winding_(theta0.winding) {}

void PruferFlow::advance_to(double x_target, std::vector<PruferSample>* samples) {
  const bool forward = stepper_.direction() > 0.0;
  while (stepper_.step_toward(x_target)) {
    const double a = stepper_.y_prev()[0];
    const double b = stepper_.y()[0];
    if (forward) {
      // multiples k*pi with a < k*pi <= b
      const auto crossed = static_cast<std::int64_t>(std::floor(b / kPi) - std::floor(a / kPi));
      if (crossed > 0) {
        zeros_ += crossed;
        last_zero_step_ = ZeroStep{stepper_.x_prev(),    stepper_.x(),     stepper_.y_prev(), stepper_.y(),
                                   stepper_.dydx_prev(), stepper_.dydx(), std::floor(b / kPi) * kPi};
      }
    }
    const double turns = std::floor(b / kTwoPi);
    if (turns != 0.0) {
      winding_ += static_cast<std::int64_t>(turns);
      stepper_.translate_state({-turns * kTwoPi, 0.0, 0.0});
    }
    if (samples) samples->push_back({stepper_.x(), angle()});
  }
}

std::optional<double> PruferFlow::last_zero() const {
  if (!last_zero_step_) return std::nullopt;
  const auto& s = *last_zero_step_;
  auto theta_at = [&](double x) {
    const double h = s.x1 - s.x0;
    const double t = (x - s.x0) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * s.y0[0] + h10 * h * s.f0[0] + h01 * s.y1[0] + h11 * h * s.f1[0];
  };
  double lo = s.x0;
  double hi = s.x1;
  for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-12 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (theta_at(mid) < s.level)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::int64_t PruferFlow::zero_count_through(double x_tol) const {
  // a zero just past x that the integrator resolved as just short of it
  const double theta = stepper_.y()[0];
  const double gap = (std::floor(theta / kPi) + 1.0) * kPi - theta;
  return zeros_ + (gap <= std::abs(stepper_.dydx()[0]) * x_tol ? 1 : 0);
}

double PruferFlow::weighted_average() const {
  const auto& y = stepper_.y();
  return y[2] > 0.0 ? y[1] / y[2] : std::numeric_limits<double>::quiet_NaN();
}

PruferTrajectory evolve(double lambda, const CoefficientTriple& v, PruferAngle theta0, double x_end,
                        const ode::IntegratorConfig& cfg, bool record_samples) {
  PruferTrajectory out;
  const double direction = x_end >= 0.0 ? 1.0 : -1.0;
  PruferFlow flow(lambda, v, theta0, direction, cfg);
  if (record_samples) out.samples.push_back({0.0, theta0});
  flow.advance_to(x_end, record_samples ? &out.samples : nullptr);
  out.theta_end = flow.angle();
  out.stats = flow.stats();
  if (direction > 0.0 && x_end > 0.0) {
    out.zero_count = flow.zero_count_through(kEndpointTol * (1.0 + x_end));
  }
  return out;
}

double cocycle_check(double lambda, const CoefficientTriple& v, PruferAngle theta0, double x1, double x2,
                     const ode::IntegratorConfig& cfg) {
  if (x2 == 0.0) return 0.0;
  const auto whole = evolve(lambda, v, theta0, x1 + x2, cfg);
  const auto first = evolve(lambda, v, theta0, x2, cfg);
  const auto second = evolve(lambda, shift(v, x2), first.theta_end, x1, cfg);
  return std::abs(angle_difference(whole.theta_end, second.theta_end));
}

ode::IntegratorConfig default_config(const CoefficientTriple& v) {
  ode::IntegratorConfig cfg;
  cfg.h_max = v.default_step_ceiling();
  return cfg;
}

}  // namespace apsl
