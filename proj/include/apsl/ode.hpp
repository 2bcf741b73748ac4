#ifndef APSL_ODE_HPP
#define APSL_ODE_HPP

// Dormand-Prince 5(4) with a standard step-size controller and cubic Hermite
// dense output on the last accepted step. Templated on the scalar (double or
// std::complex<double>) and the fixed state dimension.

#include "apsl/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace apsl::ode {

struct IntegratorConfig {
  double rtol = 1e-9;
  double atol = 1e-12;
  double h_init = 0.0;  // 0 selects a starting step automatically
  double h_max = std::numeric_limits<double>::infinity();
  long max_steps = 50'000'000;

  void validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0)) throw std::invalid_argument("IntegratorConfig: rtol and atol must be positive");
    if (!(h_max > 0.0)) throw std::invalid_argument("IntegratorConfig: h_max must be positive");
    if (h_init < 0.0) throw std::invalid_argument("IntegratorConfig: h_init must be nonnegative");
    if (max_steps <= 0) throw std::invalid_argument("IntegratorConfig: max_steps must be positive");
  }
};

struct Statistics {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

template <typename Scalar, int N>
using State = Eigen::Matrix<Scalar, N, 1>;

namespace detail {

template <typename Scalar, int N>
bool all_finite(const State<Scalar, N>& y) {
  for (int i = 0; i < N; ++i) {
    if (!std::isfinite(std::real(y[i])) || !std::isfinite(std::imag(y[i]))) return false;
  }
  return true;
}

}  // namespace detail

// Single-trajectory stepper. The right-hand side is any callable
// (double x, const State&) -> State. Callers drive it with step_toward() and
// may replace the state between steps (angle wrapping, chart changes).
template <typename Scalar, int N, typename Rhs>
class DormandPrince {
 public:
  using StateT = State<Scalar, N>;

  DormandPrince(Rhs rhs, double x0, const StateT& y0, double direction, const IntegratorConfig& cfg)
      : rhs_(std::move(rhs)), cfg_(cfg), dir_(direction >= 0.0 ? 1.0 : -1.0), x_(x0), y_(y0) {
    cfg_.validate();
    f_ = eval(x_, y_);
    x_prev_ = x_;
    y_prev_ = y_;
    f_prev_ = f_;
    h_ = cfg_.h_init > 0.0 ? std::min(cfg_.h_init, cfg_.h_max) : 0.0;
  }

  double x() const { return x_; }
  const StateT& y() const { return y_; }
  const StateT& dydx() const { return f_; }
  double x_prev() const { return x_prev_; }
  const StateT& y_prev() const { return y_prev_; }
  const StateT& dydx_prev() const { return f_prev_; }
  const Statistics& stats() const { return stats_; }
  double direction() const { return dir_; }

  // Replaces the current state; the next step restarts its derivative cache.
  void reset_state(const StateT& y) {
    y_ = y;
    f_ = eval(x_, y_);
    y_prev_ = y_;
    f_prev_ = f_;
    x_prev_ = x_;
  }

  // Adds delta to the current and previous state without touching the
  // derivative cache. Only valid when the rhs is invariant under the shift
  // (e.g. whole turns of an angle).
  void translate_state(const StateT& delta) {
    y_ += delta;
    y_prev_ += delta;
  }

  // Takes one accepted step that does not pass x_stop. Returns false if the
  // stepper already sits at x_stop.
  bool step_toward(double x_stop) {
    double remaining = (x_stop - x_) * dir_;
    if (remaining <= 0.0) return false;
    if (h_ == 0.0) h_ = initial_step(remaining);

    while (true) {
      if (stats_.accepted + stats_.rejected >= cfg_.max_steps)
        throw StepLimitExceeded("integrator exceeded " + std::to_string(cfg_.max_steps) + " steps");
      double h = std::min({h_, cfg_.h_max, remaining});
      bool last = false;
      // land exactly on x_stop rather than leaving a sliver
      if (h >= remaining * (1.0 - 1e-12)) {
        h = remaining;
        last = true;
      }
      if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x_)))
        throw StepLimitExceeded("step size underflow at x = " + std::to_string(x_));

      StateT y_new, f_new;
      const double err = attempt(h * dir_, y_new, f_new);
      if (err <= 1.0) {
        ++stats_.accepted;
        x_prev_ = x_;
        y_prev_ = y_;
        f_prev_ = f_;
        x_ = last ? x_stop : x_ + h * dir_;
        y_ = y_new;
        f_ = f_new;
        const double fac = err == 0.0 ? kFacMax : std::clamp(kSafety * std::pow(err, -0.2), kFacMin, kFacMax);
        h_ = h * (rejected_last_ ? std::min(fac, 1.0) : fac);
        rejected_last_ = false;
        return true;
      }
      ++stats_.rejected;
      rejected_last_ = true;
      h_ = h * std::max(kFacMin, kSafety * std::pow(err, -0.2));
    }
  }

  // Cubic Hermite interpolant on [x_prev, x].
  StateT dense(double x) const {
    const double h = x_ - x_prev_;
    if (h == 0.0) return y_;
    const double s = (x - x_prev_) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * y_prev_ + (h10 * h) * f_prev_ + h01 * y_ + (h11 * h) * f_;
  }

 private:
  static constexpr double kSafety = 0.9;
  static constexpr double kFacMin = 0.2;
  static constexpr double kFacMax = 5.0;

  StateT eval(double x, const StateT& y) {
    ++stats_.rhs_evals;
    StateT f = rhs_(x, y);
    if (!detail::all_finite<Scalar, N>(f))
      throw NonFiniteState("right-hand side returned a non-finite value at x = " + std::to_string(x));
    return f;
  }

  double error_norm(const StateT& e, const StateT& y0, const StateT& y1) const {
    double worst = 0.0;
    for (int i = 0; i < N; ++i) {
      const double scale = cfg_.atol + cfg_.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      worst = std::max(worst, std::abs(e[i]) / scale);
    }
    return worst;
  }

  // Hairer-Norsett-Wanner starting step heuristic.
  double initial_step(double remaining) {
    StateT scale;
    for (int i = 0; i < N; ++i) scale[i] = cfg_.atol + cfg_.rtol * std::abs(y_[i]);
    auto norm = [&](const StateT& v) {
      double s = 0.0;
      for (int i = 0; i < N; ++i) s += std::norm(v[i]) / (std::real(scale[i]) * std::real(scale[i]));
      return std::sqrt(s / N);
    };
    const double d0 = norm(y_);
    const double d1 = norm(f_);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min({h0, remaining, cfg_.h_max});
    const StateT y1 = y_ + (dir_ * h0) * f_;
    const StateT f1 = eval(x_ + dir_ * h0, y1);
    const double d2 = norm(f1 - f_) / h0;
    const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / std::max(d1, d2), 0.2);
    return std::min({100.0 * h0, h1, remaining, cfg_.h_max});
  }

  double attempt(double h, StateT& y_new, StateT& f_new) {
    // Dormand-Prince coefficients
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    const StateT& k1 = f_;
    const StateT k2 = eval(x_ + c2 * h, y_ + h * (a21 * k1));
    const StateT k3 = eval(x_ + c3 * h, y_ + h * (a31 * k1 + a32 * k2));
    const StateT k4 = eval(x_ + c4 * h, y_ + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const StateT k5 = eval(x_ + c5 * h, y_ + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const StateT k6 = eval(x_ + h, y_ + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    y_new = y_ + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f_new = eval(x_ + h, y_new);
    const StateT err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * f_new);
    return error_norm(err, y_, y_new);
  }

  Rhs rhs_;
  IntegratorConfig cfg_;
  double dir_;
  double h_ = 0.0;
  bool rejected_last_ = false;
  double x_, x_prev_;
  StateT y_, y_prev_;
  StateT f_, f_prev_;
  Statistics stats_;
};

template <typename Scalar, int N, typename Rhs>
DormandPrince<Scalar, N, Rhs> make_stepper(Rhs rhs, double x0, const State<Scalar, N>& y0, double x1,
                                           const IntegratorConfig& cfg) {
  return DormandPrince<Scalar, N, Rhs>(std::move(rhs), x0, y0, x1 >= x0 ? 1.0 : -1.0, cfg);
}

template <typename Scalar, int N>
struct Trajectory {
  std::vector<double> xs;              // accepted step endpoints, starting at x0
  std::vector<State<Scalar, N>> ys;
  Statistics stats;

  const State<Scalar, N>& final_state() const { return ys.back(); }
  double final_x() const { return xs.back(); }
};

template <typename Scalar, int N, typename Rhs>
Trajectory<Scalar, N> integrate(Rhs rhs, const State<Scalar, N>& y0, double x0, double x1,
                                const IntegratorConfig& cfg) {
  auto stepper = make_stepper<Scalar, N>(std::move(rhs), x0, y0, x1, cfg);
  Trajectory<Scalar, N> out;
  out.xs.push_back(x0);
  out.ys.push_back(y0);
  while (stepper.step_toward(x1)) {
    out.xs.push_back(stepper.x());
    out.ys.push_back(stepper.y());
  }
  out.stats = stepper.stats();
  return out;
}

struct Crossing {
  double x;
  int direction;  // +1 event rising, -1 falling
};

template <typename Scalar, int N>
struct EventResult {
  Trajectory<Scalar, N> trajectory;
  std::vector<Crossing> crossings;
  std::size_t count() const { return crossings.size(); }
};

// Bisects a sign change of g on the stepper's current dense interval down to
// |dx| <= 1e-10 * (1 + |x|).
template <typename Stepper, typename Event>
double locate_crossing(const Stepper& stepper, Event&& event, double a, double b, double ga) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (std::abs(b - a) <= 1e-10 * (1.0 + std::abs(mid))) break;
    const double gm = event(stepper.dense(mid));
    if ((gm < 0.0) == (ga < 0.0) && gm != 0.0) {
      a = mid;
      ga = gm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// Records sign changes of event(y) between accepted steps.
template <typename Scalar, int N, typename Rhs, typename Event>
EventResult<Scalar, N> integrate_with_events(Rhs rhs, const State<Scalar, N>& y0, double x0, double x1,
                                             const IntegratorConfig& cfg, Event event) {
  auto stepper = make_stepper<Scalar, N>(std::move(rhs), x0, y0, x1, cfg);
  EventResult<Scalar, N> out;
  out.trajectory.xs.push_back(x0);
  out.trajectory.ys.push_back(y0);
  double g_prev = event(y0);
  while (stepper.step_toward(x1)) {
    const double g = event(stepper.y());
    const bool changed = (g_prev < 0.0 && g >= 0.0) || (g_prev > 0.0 && g <= 0.0);
    if (changed) {
      const double where = g == 0.0 ? stepper.x() : locate_crossing(stepper, event, stepper.x_prev(), stepper.x(), g_prev);
      out.crossings.push_back({where, g_prev < 0.0 ? +1 : -1});
    }
    if (g != 0.0 || g_prev != 0.0) g_prev = g;
    out.trajectory.xs.push_back(stepper.x());
    out.trajectory.ys.push_back(stepper.y());
  }
  out.trajectory.stats = stepper.stats();
  return out;
}

}  // namespace apsl::ode

#endif  // APSL_ODE_HPP
