#ifndef APSL_PRUFER_HPP
#define APSL_PRUFER_HPP

#include "apsl/apfun.hpp"
#include "apsl/ode.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace apsl {

// Relative distance within which a zero counts as sitting on the endpoint.
inline constexpr double kEndpointTol = 1e-7;

// theta = 2*pi*winding + residual with residual in [0, 2*pi). Differences of
// large angles are taken winding-first so the residuals never cancel.
struct PruferAngle {
  std::int64_t winding = 0;
  double residual = 0.0;

  static PruferAngle from_value(double theta);
  double value() const;
  PruferAngle plus_turns(std::int64_t k) const { return {winding + k, residual}; }
};

// a - b
double angle_difference(const PruferAngle& a, const PruferAngle& b);

struct PruferSample {
  double x;
  PruferAngle theta;
};

struct PruferTrajectory {
  PruferAngle theta_end;
  // Zeros of phi on (0, x_end]; unset for backward evolution.
  std::optional<std::int64_t> zero_count;
  std::vector<PruferSample> samples;
  ode::Statistics stats;
};

// r(x) cos^2(theta) + (lambda w(x) - q(x)) sin^2(theta)
double prufer_rhs(double x, double theta, double lambda, const CoefficientTriple& v);

// Smooth bump exp(-1/(t(1-t))) on (0, 1), zero outside.
double window_weight(double t);

namespace detail {

// State: [theta residual, int wt*theta', int wt] where wt is the window bump.
struct PruferField {
  double lambda;
  const CoefficientTriple* v;
  double window;

  ode::State<double, 3> operator()(double x, const ode::State<double, 3>& y) const;
};

}  // namespace detail

// Prufer angle evolution for tau_v phi = lambda phi. The integrator carries the
// residual; whole turns move into the winding counter after each step.
class PruferFlow {
 public:
  // With weight_window > 0 the flow also accumulates the bump-weighted average
  // of theta' over [0, weight_window].
  PruferFlow(double lambda, const CoefficientTriple& v, PruferAngle theta0, double direction,
             const ode::IntegratorConfig& cfg, double weight_window = 0.0);

  void advance_to(double x_target, std::vector<PruferSample>* samples = nullptr);

  double x() const { return stepper_.x(); }
  PruferAngle angle() const { return {winding_, stepper_.y()[0]}; }

  // Zeros of phi in (0, x] during forward evolution: multiples of pi reached
  // after the start.
  std::int64_t zero_count() const { return zeros_; }
  // Same, also counting a zero that lies within x_tol beyond x.
  std::int64_t zero_count_through(double x_tol) const;

  // Location of the most recent zero, bisected on the dense output of the
  // step that contained it.
  std::optional<double> last_zero() const;

  double weighted_average() const;
  const ode::Statistics& stats() const { return stepper_.stats(); }

 private:
  struct ZeroStep {
    double x0, x1;
    ode::State<double, 3> y0, y1, f0, f1;
    double level;
  };

  ode::DormandPrince<double, 3, detail::PruferField> stepper_;
  std::int64_t winding_;
  std::int64_t zeros_ = 0;
  std::optional<ZeroStep> last_zero_step_;
};

PruferTrajectory evolve(double lambda, const CoefficientTriple& v, PruferAngle theta0, double x_end,
                        const ode::IntegratorConfig& cfg, bool record_samples = false);

// |theta(x1 + x2, Theta; v) - theta(x1, theta(x2, Theta; v); shift(v, x2))|
double cocycle_check(double lambda, const CoefficientTriple& v, PruferAngle theta0, double x1, double x2,
                     const ode::IntegratorConfig& cfg);

// rtol 1e-9, atol 1e-12, h_max = 0.1 * shortest declared period.
ode::IntegratorConfig default_config(const CoefficientTriple& v);

}  // namespace apsl

#endif  // APSL_PRUFER_HPP
