#include "apsl/weylgreen.hpp"

#include "apsl/errors.hpp"
#include "apsl/prufer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace apsl {

cplx MFunctionSample::m() const {
  if (chart == Chart::direct) return value;
  if (value == cplx{}) return {std::numeric_limits<double>::infinity(), 0.0};
  return 1.0 / value;
}

std::pair<cplx, cplx> MFunctionSample::homogeneous() const {
  return chart == Chart::direct ? std::pair<cplx, cplx>{value, 1.0} : std::pair<cplx, cplx>{1.0, value};
}

WeylConfig WeylConfig::defaults_for(const CoefficientTriple& v) {
  WeylConfig cfg;
  cfg.ode.h_max = v.default_step_ceiling();
  return cfg;
}

cplx riccati_rhs(double x, cplx m, cplx z, const CoefficientTriple& v) {
  const auto c = v.at(x);
  return (c.q - z * c.w) - c.r * m * m;
}

double default_x_far(cplx z) {
  const double im = std::abs(z.imag());
  return im > 0.0 ? std::max(40.0, 12.0 / im) : 40.0;
}

double sample_distance(const MFunctionSample& a, const MFunctionSample& b) {
  auto [a1, b1] = a.homogeneous();
  auto [a2, b2] = b.homogeneous();
  if (std::abs(a1) <= std::abs(b1) && std::abs(a2) <= std::abs(b2)) return std::abs(a1 / b1 - a2 / b2);
  if (std::abs(a1) >= std::abs(b1) && std::abs(a2) >= std::abs(b2)) return std::abs(b1 / a1 - b2 / a2);
  const double n1 = std::sqrt(std::norm(a1) + std::norm(b1));
  const double n2 = std::sqrt(std::norm(a2) + std::norm(b2));
  return std::abs(a1 * b2 - a2 * b1) / (n1 * n2);
}

namespace {

using CState = ode::State<cplx, 1>;

// The same field in either chart: m' = (q - z w) - r m^2, and for n = 1/m,
// n' = r - (q - z w) n^2.
struct RiccatiField {
  cplx z;
  const CoefficientTriple* v;
  const Chart* chart;

  CState operator()(double x, const CState& y) const {
    const auto c = v->at(x);
    const cplx pot = c.q - z * c.w;
    CState out;
    out[0] = (*chart == Chart::direct) ? pot - c.r * y[0] * y[0] : c.r - pot * y[0] * y[0];
    return out;
  }
};

cplx sign_of_im(cplx z) { return z.imag() > 0.0 ? 1.0 : (z.imag() < 0.0 ? -1.0 : 0.0); }

std::pair<cplx, cplx> initializations(cplx z, WeylSide side) {
  const cplx i{0.0, 1.0};
  const cplx s = sign_of_im(z);
  // Neumann and Dirichlet data at x_far
  if (s == cplx{}) return {0.0, std::numeric_limits<double>::infinity()};
  const cplx base = (side == WeylSide::plus ? 1.0 : -1.0) * i * s;
  return {base, 2.0 * base};
}

}  // namespace

std::vector<MFunctionSample> riccati_sweep(cplx z, const CoefficientTriple& v, WeylSide side,
                                           const std::vector<double>& xs, double x_far, cplx init,
                                           const WeylConfig& cfg) {
  if (xs.empty()) return {};
  if (!(x_far > 0.0)) throw std::invalid_argument("riccati_sweep: x_far must be positive");
  const bool plus = side == WeylSide::plus;
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return plus ? xs[a] > xs[b] : xs[a] < xs[b]; });
  const double x_start = plus ? xs[order.front()] + x_far : xs[order.front()] - x_far;

  Chart chart = Chart::direct;
  CState y0;
  y0[0] = init;
  if (std::abs(init) > cfg.chart_switch) {
    chart = Chart::inverted;
    y0[0] = std::isinf(std::abs(init)) ? cplx{} : 1.0 / init;
  }
  ode::DormandPrince<cplx, 1, RiccatiField> stepper(RiccatiField{z, &v, &chart}, x_start, y0, plus ? -1.0 : 1.0,
                                                    cfg.ode);
  std::vector<MFunctionSample> out(xs.size());
  for (std::size_t idx : order) {
    while (stepper.step_toward(xs[idx])) {
      const cplx value = stepper.y()[0];
      if (std::abs(value) > cfg.chart_switch) {
        chart = chart == Chart::direct ? Chart::inverted : Chart::direct;
        CState flipped;
        flipped[0] = 1.0 / value;
        stepper.reset_state(flipped);
      }
    }
    out[idx] = {xs[idx], stepper.y()[0], chart};
  }
  return out;
}

namespace {

double max_distance(const std::vector<MFunctionSample>& a, const std::vector<MFunctionSample>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, sample_distance(a[i], b[i]));
  return worst;
}

}  // namespace

std::vector<MFunctionSample> weyl_m(cplx z, const CoefficientTriple& v, WeylSide side, const std::vector<double>& xs,
                                    std::optional<double> x_far, const WeylConfig& cfg) {
  const auto [init_a, init_b] = initializations(z, side);
  const bool real_z = z.imag() == 0.0;
  double distance = x_far.value_or(default_x_far(z));
  const double limit = (x_far || !real_z) ? distance : 40.0 * 1024.0;
  double gap = 0.0;
  while (true) {
    auto a = riccati_sweep(z, v, side, xs, distance, init_a, cfg);
    auto b = riccati_sweep(z, v, side, xs, distance, init_b, cfg);
    gap = max_distance(a, b);
    if (gap <= cfg.decay_tol) return a;
    distance *= 2.0;
    if (distance > limit) break;
  }
  throw NotDecayed(std::string("Weyl ") + (side == WeylSide::plus ? "m_plus" : "m_minus") +
                       ": initializations disagree by " + std::to_string(gap) +
                       " (x_far too small, or real lambda not in a gap)",
                   gap);
}

MFunctionSample m_plus(cplx z, const CoefficientTriple& v, double x, std::optional<double> x_far,
                       const WeylConfig& cfg) {
  return weyl_m(z, v, WeylSide::plus, {x}, x_far, cfg).front();
}

MFunctionSample m_minus(cplx z, const CoefficientTriple& v, double x, std::optional<double> x_far,
                        const WeylConfig& cfg) {
  return weyl_m(z, v, WeylSide::minus, {x}, x_far, cfg).front();
}

double initialization_gap(cplx z, const CoefficientTriple& v, WeylSide side, double x, double x_far,
                          const WeylConfig& cfg) {
  const auto [init_a, init_b] = initializations(z, side);
  const auto a = riccati_sweep(z, v, side, {x}, x_far, init_a, cfg);
  const auto b = riccati_sweep(z, v, side, {x}, x_far, init_b, cfg);
  return sample_distance(a.front(), b.front());
}

GreenDiagSample green_from_m(double x, const MFunctionSample& plus, const MFunctionSample& minus,
                             const CoefficientTriple& v) {
  const auto [ap, bp] = plus.homogeneous();
  const auto [am, bm] = minus.homogeneous();
  const cplx wronskian = am * bp - ap * bm;
  const double scale = std::sqrt((std::norm(ap) + std::norm(bp)) * (std::norm(am) + std::norm(bm)));
  if (std::abs(wronskian) <= 1e-13 * scale)
    throw WronskianVanished("Weyl solutions are linearly dependent at x = " + std::to_string(x));
  const double r = v.at(x).r;
  return {x, bp * bm / wronskian, r * (ap * bm + bp * am) / wronskian};
}

GreenDiagSample green_diag(cplx z, const CoefficientTriple& v, double x, std::optional<double> x_far,
                           const WeylConfig& cfg) {
  return green_from_m(x, m_plus(z, v, x, x_far, cfg), m_minus(z, v, x, x_far, cfg), v);
}

bool herglotz_signs_ok(cplx z, const MFunctionSample& plus, const MFunctionSample& minus, const GreenDiagSample& g) {
  const double s = z.imag() > 0.0 ? 1.0 : (z.imag() < 0.0 ? -1.0 : 0.0);
  if (s == 0.0) return true;
  auto im_m = [](const MFunctionSample& m) { return m.chart == Chart::direct ? m.value.imag() : -m.value.imag(); };
  return s * im_m(plus) > 0.0 && s * im_m(minus) < 0.0 && s * g.G.imag() > 0.0;
}

std::vector<GreenRow> green_profile(cplx z, const CoefficientTriple& v, const std::vector<double>& xs,
                                    std::optional<double> x_far, const WeylConfig& cfg) {
  const auto plus = weyl_m(z, v, WeylSide::plus, xs, x_far, cfg);
  const auto minus = weyl_m(z, v, WeylSide::minus, xs, x_far, cfg);
  std::vector<GreenRow> rows;
  rows.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    GreenRow row{plus[i], minus[i], green_from_m(xs[i], plus[i], minus[i], v), true};
    row.herglotz_ok = herglotz_signs_ok(z, row.plus, row.minus, row.green);
    rows.push_back(row);
  }
  return rows;
}

namespace {

PruferAngle angle_of(const MFunctionSample& m) {
  // p phi' + i phi ~ e^{i theta}: cos ~ a, sin ~ b
  const auto [a, b] = m.homogeneous();
  double theta = std::atan2(b.real(), a.real());
  if (theta < 0.0) theta += std::numbers::pi;
  return PruferAngle::from_value(theta);
}

}  // namespace

std::int64_t count_green_zeros(double lambda, const CoefficientTriple& v, double X, std::optional<double> x_far,
                               const WeylConfig& cfg) {
  if (!(X > 0.0)) throw std::invalid_argument("count_green_zeros: X must be positive");
  const cplx z{lambda, 0.0};
  const auto plus = m_plus(z, v, 0.0, x_far, cfg);
  const auto minus = m_minus(z, v, 0.0, x_far, cfg);
  const auto n_plus = evolve(lambda, v, angle_of(plus), X, cfg.ode).zero_count.value();
  const auto n_minus = evolve(lambda, v, angle_of(minus), X, cfg.ode).zero_count.value();
  return n_plus + n_minus;
}

std::vector<GreenZero> green_diagonal_zeros(double lambda, const CoefficientTriple& v, double X, double step,
                                            std::optional<double> x_far, const WeylConfig& cfg) {
  if (!(X > 0.0) || !(step > 0.0)) throw std::invalid_argument("green_diagonal_zeros: X and step must be positive");
  std::vector<double> xs;
  const auto n = static_cast<std::size_t>(std::ceil(X / step));
  for (std::size_t i = 0; i <= n; ++i) xs.push_back(std::min(X, static_cast<double>(i) * step));
  const auto rows = green_profile({lambda, 0.0}, v, xs, x_far, cfg);

  std::vector<GreenZero> zeros;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double x0 = xs[i];
    const double x1 = xs[i + 1];
    const double g0 = rows[i].green.G.real();
    const double g1 = rows[i + 1].green.G.real();
    if (g0 == 0.0) {
      zeros.push_back({x0, rows[i].green.dGdx.real(), v.at(x0).r});
      continue;
    }
    if ((g0 < 0.0) == (g1 < 0.0) || g1 == 0.0) continue;
    const double d0 = rows[i].green.dGdx.real();
    const double d1 = rows[i + 1].green.dGdx.real();
    const double h = x1 - x0;
    auto value = [&](double t) {
      return (1 + 2 * t) * (1 - t) * (1 - t) * g0 + t * (1 - t) * (1 - t) * h * d0 + t * t * (3 - 2 * t) * g1 +
             t * t * (t - 1) * h * d1;
    };
    auto slope = [&](double t) {
      return (6 * t * t - 6 * t) * g0 / h + (3 * t * t - 4 * t + 1) * d0 + (6 * t - 6 * t * t) * g1 / h +
             (3 * t * t - 2 * t) * d1;
    };
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((value(mid) < 0.0) == (g0 < 0.0))
        lo = mid;
      else
        hi = mid;
    }
    const double t = 0.5 * (lo + hi);
    const double s = x0 + t * h;
    zeros.push_back({s, slope(t), v.at(s).r});
  }
  return zeros;
}

double check_shift_covariance(cplx z, const CoefficientTriple& v, double t, const std::vector<double>& xs,
                              std::optional<double> x_far, const WeylConfig& cfg) {
  if (t == 0.0 || xs.empty()) return 0.0;
  std::vector<double> moved(xs);
  for (double& x : moved) x += t;
  const auto direct = green_profile(z, v, moved, x_far, cfg);
  const auto shifted = green_profile(z, shift(v, t), xs, x_far, cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    worst = std::max(worst, std::abs(direct[i].green.G - shifted[i].green.G));
  return worst;
}

std::vector<AlmostPeriodDeviation> almost_period_scan(cplx z, const CoefficientTriple& v,
                                                      const std::vector<double>& taus, const std::vector<double>& xs,
                                                      std::optional<double> x_far, const WeylConfig& cfg) {
  std::vector<AlmostPeriodDeviation> out;
  if (xs.empty()) {
    for (double tau : taus) out.push_back({tau, 0.0, 0.0});
    return out;
  }
  const auto base = green_profile(z, v, xs, x_far, cfg);
  for (double tau : taus) {
    if (tau == 0.0) {
      out.push_back({tau, 0.0, 0.0});
      continue;
    }
    std::vector<double> moved(xs);
    for (double& x : moved) x += tau;
    const auto rows = green_profile(z, v, moved, x_far, cfg);
    AlmostPeriodDeviation d{tau, 0.0, 0.0};
    for (std::size_t i = 0; i < xs.size(); ++i) {
      d.dev_G = std::max(d.dev_G, std::abs(rows[i].green.G - base[i].green.G));
      d.dev_dGdx = std::max(d.dev_dGdx, std::abs(rows[i].green.dGdx - base[i].green.dGdx));
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace apsl
