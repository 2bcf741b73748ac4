#ifndef APSL_SCAN_HPP
#define APSL_SCAN_HPP

#include "apsl/apfun.hpp"
#include "apsl/rotation.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace apsl {

struct ScanConfig {
  double lambda_min = 0.0;
  double lambda_max = 1.0;
  int n_points = 64;
  double target_err = 2e-3;
  double plateau_tol = 5e-3;
  int min_run = 3;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
  double step() const { return (lambda_max - lambda_min) / (n_points - 1); }
};

struct CurvePoint {
  double lambda;
  RotationEstimate estimate;
  bool horizon_exceeded = false;
};

struct RhoCurve {
  std::vector<CurvePoint> points;
};

// rho on the uniform lambda grid. Points whose protocol runs out of horizon
// keep their best estimate and are flagged.
RhoCurve scan_rho(const CoefficientTriple& v, const ScanConfig& cfg, const ode::IntegratorConfig& ode_cfg,
                  std::optional<RhoProtocol> protocol = std::nullopt);

struct Plateau {
  std::size_t first;  // inclusive
  std::size_t last;   // inclusive
  double rho;         // run median
};

// Maximal runs of >= min_run points whose rho lies within plateau_tol of the
// run median and whose err <= plateau_tol.
std::vector<Plateau> detect_plateaus(const RhoCurve& curve, double plateau_tol, int min_run);

struct LabelCandidate {
  IntVector n;
  double residual;
};

struct GapLabel {
  IntVector label;
  double label_value = 0.0;
  double residual = 0.0;
  bool ambiguous = false;
  std::vector<LabelCandidate> alternatives;  // other vectors with residual <= tol
};

// Integer vector n with |n_j| <= n_max minimising |target - n . generators|.
// Ties go to the smaller L1 norm, then lexicographic order. All candidates
// with residual <= tol besides the winner are returned as alternatives.
GapLabel fit_integer_combination(double target, const Eigen::VectorXd& generators, double tol, int n_max);

// Labels a plateau by 2 rho in the module. Throws NoLabelWithinTol when the
// best residual exceeds tol.
GapLabel label_gap(double rho_plateau, const FrequencyModule& module, double tol, int n_max);

struct GapReport {
  double lambda_lo;
  double lambda_hi;
  double rho_plateau;
  IntVector label;
  double label_value;
  double residual;
  bool ambiguous;
  bool within_tol;
  std::vector<LabelCandidate> alternatives;
};

struct LabelConfig {
  double tol = 1e-2;
  int n_max = 10;
};

std::vector<GapReport> find_gaps(const RhoCurve& curve, const FrequencyModule& module, double plateau_tol,
                                 int min_run, const LabelConfig& label_cfg);

}  // namespace apsl

#endif  // APSL_SCAN_HPP
