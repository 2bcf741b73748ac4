#include "apsl/periodic.hpp"

#include "apsl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace apsl {

Eigen::Vector2d linear_system_rhs(double x, const Eigen::Vector2d& y, double lambda, const CoefficientTriple& v) {
  const auto c = v.at(x);
  return {c.r * y[1], (c.q - lambda * c.w) * y[0]};
}

void validate_periodic(const CoefficientTriple& v, double period) {
  if (!(period > 0.0)) throw std::invalid_argument("period must be positive");
  constexpr int kSamples = 257;
  double worst = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double x = period * i / (kSamples - 1);
    const auto a = v.at(x);
    const auto b = v.at(x + period);
    worst = std::max({worst, std::abs(a.r - b.r), std::abs(a.q - b.q), std::abs(a.w - b.w)});
  }
  if (worst > 1e-12)
    throw NotPeriodic("coefficients are not periodic with period " + std::to_string(period) + " (max deviation " +
                          std::to_string(worst) + ")",
                      worst);
}

namespace {

using Columns = ode::State<double, 4>;  // (u1, pu1', u2, pu2')

struct LinearField {
  double lambda;
  const CoefficientTriple* v;

  Columns operator()(double x, const Columns& y) const {
    const auto c = v->at(x);
    const double pot = c.q - lambda * c.w;
    return {c.r * y[1], pot * y[0], c.r * y[3], pot * y[2]};
  }
};

Monodromy monodromy_unchecked(double lambda, const CoefficientTriple& v, double period,
                              const ode::IntegratorConfig& cfg) {
  const Columns id{1.0, 0.0, 0.0, 1.0};
  auto stepper = ode::make_stepper<double, 4>(LinearField{lambda, &v}, 0.0, id, period, cfg);
  while (stepper.step_toward(period)) {
  }
  const auto& y = stepper.y();
  Monodromy m;
  m.period = period;
  m.matrix << y[0], y[2], y[1], y[3];
  return m;
}

}  // namespace

Monodromy monodromy(double lambda, const CoefficientTriple& v, double period, const ode::IntegratorConfig& cfg) {
  validate_periodic(v, period);
  return monodromy_unchecked(lambda, v, period, cfg);
}

std::vector<BandEdge> band_edges(const CoefficientTriple& v, double period, double lambda_min, double lambda_max,
                                 int n_seed, const ode::IntegratorConfig& cfg) {
  validate_periodic(v, period);
  if (!(lambda_min < lambda_max)) return {};
  if (n_seed < 2) throw std::invalid_argument("band_edges: n_seed must be at least 2");

  auto delta = [&](double lambda) { return monodromy_unchecked(lambda, v, period, cfg).discriminant(); };
  std::vector<double> lambdas(n_seed), deltas(n_seed);
  for (int i = 0; i < n_seed; ++i) {
    lambdas[i] = lambda_min + (lambda_max - lambda_min) * i / (n_seed - 1);
    deltas[i] = delta(lambdas[i]);
  }

  std::vector<BandEdge> edges;
  for (double level : {2.0, -2.0}) {
    for (int i = 0; i + 1 < n_seed; ++i) {
      double a = lambdas[i];
      double b = lambdas[i + 1];
      double fa = deltas[i] - level;
      const double fb = deltas[i + 1] - level;
      if (fa == 0.0) {
        edges.push_back({a, level > 0 ? EdgeType::periodic : EdgeType::antiperiodic});
        continue;
      }
      if ((fa < 0.0) == (fb < 0.0) || fb == 0.0) continue;
      while (b - a > 1e-8) {
        const double mid = 0.5 * (a + b);
        const double fm = delta(mid) - level;
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      edges.push_back({0.5 * (a + b), level > 0 ? EdgeType::periodic : EdgeType::antiperiodic});
    }
    if (deltas.back() - level == 0.0) edges.push_back({lambdas.back(), level > 0 ? EdgeType::periodic : EdgeType::antiperiodic});
  }
  std::sort(edges.begin(), edges.end(), [](const BandEdge& a, const BandEdge& b) { return a.lambda < b.lambda; });
  return edges;
}

std::vector<LambdaInterval> oracle_gaps(const CoefficientTriple& v, double period, double lambda_min,
                                        double lambda_max, int n_seed, const ode::IntegratorConfig& cfg) {
  const auto edges = band_edges(v, period, lambda_min, lambda_max, n_seed, cfg);
  std::vector<double> cuts{lambda_min};
  for (const auto& e : edges) cuts.push_back(e.lambda);
  cuts.push_back(lambda_max);

  std::vector<LambdaInterval> gaps;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (std::abs(monodromy_unchecked(mid, v, period, cfg).discriminant()) > 2.0) {
      if (!gaps.empty() && gaps.back().hi == cuts[i])
        gaps.back().hi = cuts[i + 1];
      else
        gaps.push_back({cuts[i], cuts[i + 1]});
    }
  }
  return gaps;
}

}  // namespace apsl
