#ifndef APSL_WEYLGREEN_HPP
#define APSL_WEYLGREEN_HPP

// Weyl m-functions m = p phi' / phi of the solutions square integrable at
// +infinity (m_plus) and -infinity (m_minus), obtained by Riccati integration
// from far away, and the Green function diagonal G(x, x, z) = 1 / (m_- - m_+).

#include "apsl/apfun.hpp"
#include "apsl/ode.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace apsl {

using cplx = std::complex<double>;

enum class Chart { direct, inverted };

struct MFunctionSample {
  double x = 0.0;
  cplx value;  // m in the direct chart, 1/m in the inverted chart
  Chart chart = Chart::direct;

  // m itself; infinite when the inverted value is zero.
  cplx m() const;
  // (a, b) with m = a / b, i.e. proportional to (p phi', phi).
  std::pair<cplx, cplx> homogeneous() const;
};

struct GreenDiagSample {
  double x = 0.0;
  cplx G;
  cplx dGdx;
};

struct WeylConfig {
  ode::IntegratorConfig ode;
  double decay_tol = 1e-6;   // allowed disagreement of two initializations
  double chart_switch = 2.0;  // change chart once |value| exceeds this

  static WeylConfig defaults_for(const CoefficientTriple& v);
};

// (q(x) - z w(x)) - r(x) m^2
cplx riccati_rhs(double x, cplx m, cplx z, const CoefficientTriple& v);

// max(40, 12 / |Im z|) for complex z; 40 as the starting distance for real z.
double default_x_far(cplx z);

// Distance between two samples measured in a common chart (chordal when they
// straddle |m| = 1).
double sample_distance(const MFunctionSample& a, const MFunctionSample& b);

enum class WeylSide { plus, minus };

// Integrates the Riccati equation from x_far beyond the extreme sample
// (backward for plus, forward for minus) through every x in xs, starting from
// m = init (infinite init starts in the inverted chart at 0). Samples are
// returned in the order of xs.
std::vector<MFunctionSample> riccati_sweep(cplx z, const CoefficientTriple& v, WeylSide side,
                                           const std::vector<double>& xs, double x_far, cplx init,
                                           const WeylConfig& cfg);

// Two initializations (i and 2i times sign Im z, or 0 and infinity for real z) swept
// over xs; throws NotDecayed if they disagree beyond cfg.decay_tol. Without an
// explicit x_far, real z doubles the distance from 40 up to 40 * 2^10.
std::vector<MFunctionSample> weyl_m(cplx z, const CoefficientTriple& v, WeylSide side,
                                    const std::vector<double>& xs, std::optional<double> x_far,
                                    const WeylConfig& cfg);

MFunctionSample m_plus(cplx z, const CoefficientTriple& v, double x, std::optional<double> x_far,
                       const WeylConfig& cfg);
MFunctionSample m_minus(cplx z, const CoefficientTriple& v, double x, std::optional<double> x_far,
                        const WeylConfig& cfg);

// Largest disagreement between the two initializations at x.
double initialization_gap(cplx z, const CoefficientTriple& v, WeylSide side, double x, double x_far,
                          const WeylConfig& cfg);

// G = b+ b- / (a- b+ - a+ b-), dG/dx = r (a+ b- + b+ a-) / (a- b+ - a+ b-).
GreenDiagSample green_from_m(double x, const MFunctionSample& plus, const MFunctionSample& minus,
                             const CoefficientTriple& v);

GreenDiagSample green_diag(cplx z, const CoefficientTriple& v, double x, std::optional<double> x_far,
                           const WeylConfig& cfg);

struct GreenRow {
  MFunctionSample plus;
  MFunctionSample minus;
  GreenDiagSample green;
  bool herglotz_ok = true;
};

// For Im z != 0: Im m+ and Im G share the sign of Im z; Im m- has the opposite.
bool herglotz_signs_ok(cplx z, const MFunctionSample& plus, const MFunctionSample& minus, const GreenDiagSample& g);

std::vector<GreenRow> green_profile(cplx z, const CoefficientTriple& v, const std::vector<double>& xs,
                                    std::optional<double> x_far, const WeylConfig& cfg);

// N(phi+) + N(phi-) on (0, X], from Prufer evolution started at
// theta(0) = atan2(1, m(0)).
std::int64_t count_green_zeros(double lambda, const CoefficientTriple& v, double X, std::optional<double> x_far,
                               const WeylConfig& cfg);

struct GreenZero {
  double s;
  double dGdx;
  double r;  // 1/p at s
};

// Zeros of the real diagonal G(x, x, lambda) on [0, X], bracketed on a grid of
// the given step and refined on the Hermite interpolant of (G, dG/dx).
std::vector<GreenZero> green_diagonal_zeros(double lambda, const CoefficientTriple& v, double X, double step,
                                            std::optional<double> x_far, const WeylConfig& cfg);

// max over xs of |G(x + t; v) - G(x; shift(v, t))|
double check_shift_covariance(cplx z, const CoefficientTriple& v, double t, const std::vector<double>& xs,
                              std::optional<double> x_far, const WeylConfig& cfg);

struct AlmostPeriodDeviation {
  double tau;
  double dev_G;
  double dev_dGdx;
};

std::vector<AlmostPeriodDeviation> almost_period_scan(cplx z, const CoefficientTriple& v,
                                                      const std::vector<double>& taus, const std::vector<double>& xs,
                                                      std::optional<double> x_far, const WeylConfig& cfg);

}  // namespace apsl

#endif  // APSL_WEYLGREEN_HPP
