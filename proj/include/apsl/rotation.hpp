#ifndef APSL_ROTATION_HPP
#define APSL_ROTATION_HPP

#include "apsl/apfun.hpp"
#include "apsl/errors.hpp"
#include "apsl/ode.hpp"
#include "apsl/prufer.hpp"

#include <cstdint>
#include <limits>
#include <string>

namespace apsl {

enum class RotationMethod { angle, zeros, combined };

std::string to_string(RotationMethod m);

// rho in rad per unit x.
struct RotationEstimate {
  double rho = 0.0;
  double err = 0.0;
  double X = 0.0;
  RotationMethod method = RotationMethod::angle;

  // Diagnostics. Angle quotients over [0, X] and [X, 2X], the zero-count
  // estimate and the count itself; NaN / -1 when not computed.
  double rho_head = std::numeric_limits<double>::quiet_NaN();
  double rho_tail = std::numeric_limits<double>::quiet_NaN();
  double rho_angle = std::numeric_limits<double>::quiet_NaN();
  double rho_zeros = std::numeric_limits<double>::quiet_NaN();
  std::int64_t zero_count = -1;
};

class HorizonExceeded : public Error {
 public:
  explicit HorizonExceeded(const RotationEstimate& best)
      : Error("rotation number did not reach the target error before X_max (best err " + std::to_string(best.err) +
              ")"),
        best_(best) {}
  const RotationEstimate& best() const { return best_; }

 private:
  RotationEstimate best_;
};

// Angle estimator over [0, 2X]. rho is the bump-window average of theta';
// err = |tail quotient - head quotient| + 2 pi / X.
RotationEstimate rho_angle(double lambda, const CoefficientTriple& v, double X, const ode::IntegratorConfig& cfg,
                           PruferAngle theta0 = {});

// pi * N / X with N the zero count on (0, X]; err = 2 pi / X.
RotationEstimate rho_zeros(double lambda, const CoefficientTriple& v, double X, const ode::IntegratorConfig& cfg,
                           PruferAngle theta0 = {});

struct RhoProtocol {
  double target_err = 2e-3;
  double X_init = 0.0;  // 0: 1e3 * 2 pi / min beta
  double X_max = 0.0;   // 0: 256 * X_init

  static RhoProtocol defaults_for(const CoefficientTriple& v, double target_err = 2e-3);
};

// Doubles X from X_init until the angle estimator's err <= target_err.
// The returned estimate is cross-checked against the zero count at the same
// horizon. Throws HorizonExceeded (carrying the best estimate) past X_max.
RotationEstimate rho(double lambda, const CoefficientTriple& v, const RhoProtocol& protocol,
                     const ode::IntegratorConfig& cfg);

}  // namespace apsl

#endif  // APSL_ROTATION_HPP
