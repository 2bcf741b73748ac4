// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "apsl/periodic.hpp"
#include "apsl/prufer.hpp"
#include "apsl/rotation.hpp"
#include "apsl/scan.hpp"
#include "apsl/weylgreen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace apsl;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

// Fig-1 band edges on [-1, 5] from an independent DOP853 (rtol 1e-12)
// integration of the monodromy and Brent root finding on Delta = +-2.
const double kFig1Edges[] = {-0.4591492941, -0.4588904718, -0.0177616909, -0.0149022325, 0.4920338464,
                             0.5087573837,  1.0460673132,  1.1140778885,  1.6006700604,  1.8029237468,
                             2.1496039140,  2.5833963233,  2.7720475477,  3.4690532498,  3.5527946752,
                             4.4734260600,  4.5075721735};

IntVector kvec(std::initializer_list<int> k) {
  IntVector v(static_cast<Eigen::Index>(k.size()));
  Eigen::Index i = 0;
  for (int x : k) v[i++] = x;
  return v;
}

CoefficientTriple fig1() {
  const FrequencyBase b(Eigen::VectorXd::Ones(1));
  return {TrigPolynomial(b, 2.0, {{kvec({1}), 0.0, 1.0}}), TrigPolynomial(b, 0.0, {{kvec({1}), 2.0, 0.0}}),
          TrigPolynomial(b, 2.0, {{kvec({1}), -1.0, 0.0}})};
}

CoefficientTriple fig2() {
  Eigen::VectorXd g(2);
  g << 1.0, std::numbers::sqrt2;
  const FrequencyBase b(g, {"1", "sqrt2"});
  return {TrigPolynomial(b, 2.0, {{kvec({1, 0}), 0.0, 1.0}}), TrigPolynomial(b, 0.0, {{kvec({0, 1}), 2.0, 0.0}}),
          TrigPolynomial(b, 2.0, {{kvec({1, 0}), -1.0, 0.0}})};
}

ode::IntegratorConfig tight(const CoefficientTriple& v) {
  auto cfg = default_config(v);
  cfg.rtol = 1e-11;
  cfg.atol = 1e-13;
  return cfg;
}

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("criterion %2d %s  %s: %s\n", id, ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Scan {
  ScanConfig cfg;
  RhoCurve curve;
  std::vector<GapReport> gaps;
  double seconds;
};

Scan run_scan(const CoefficientTriple& v, double lmin, double lmax, int n) {
  Scan s;
  s.cfg.lambda_min = lmin;
  s.cfg.lambda_max = lmax;
  s.cfg.n_points = n;
  const auto t0 = std::chrono::steady_clock::now();
  s.curve = scan_rho(v, s.cfg, default_config(v));
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.gaps = find_gaps(s.curve, module_of(v), s.cfg.plateau_tol, s.cfg.min_run, LabelConfig{});
  return s;
}

bool overlaps(double a0, double a1, double b0, double b1) { return a0 <= b1 && b0 <= a1; }

}  // namespace

int main() {
  const auto free = CoefficientTriple::constant(1.0, 0.0, 1.0);
  const auto f1 = fig1();
  const auto f2 = fig2();

  // 1
  {
    double worst = 0.0, worst_time = 0.0;
    for (double lambda : {1.0, 4.0, 9.0}) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto e = rho_angle(lambda, free, 400.0, default_config(free));
      worst_time = std::max(worst_time, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      worst = std::max(worst, std::abs(e.rho - std::sqrt(lambda)));
    }
    report(1, "free rotation law", worst <= 1e-3,
           fmt("max |rho - sqrt(lambda)| = %.3e at X = 400 (tol 1e-3), slowest point %.2f s", worst, worst_time));
  }

  const auto s1 = run_scan(f1, -1.0, 5.0, 400);
  const double h1 = s1.cfg.step();

  // 2
  {
    const auto plateaus = detect_plateaus(s1.curve, s1.cfg.plateau_tol, s1.cfg.min_run);
    double worst = 0.0;
    std::ostringstream heights;
    for (const auto& p : plateaus) {
      worst = std::max(worst, std::abs(2 * p.rho - std::round(2 * p.rho)));
      heights << " " << p.rho;
    }
    report(2, "fig1 plateaus", s1.curve.points.size() >= 400 && plateaus.size() >= 3 && worst <= 1e-2,
           fmt("%zu points on [-1, 5], %zu plateaus, max |2 rho - round| = %.2e (tol 1e-2), %.0f s; heights",
               s1.curve.points.size(), plateaus.size(), worst, s1.seconds) +
               heights.str());
  }

  // 3
  {
    const auto edges = band_edges(f1, 2 * pi, -1.0, 5.0, 400, tight(f1));
    double edge_dev = edges.size() == std::size(kFig1Edges) ? 0.0 : INFINITY;
    if (std::isfinite(edge_dev))
      for (std::size_t i = 0; i < edges.size(); ++i) edge_dev = std::max(edge_dev, std::abs(edges[i].lambda - kFig1Edges[i]));

    const auto oracle = oracle_gaps(f1, 2 * pi, -1.0, 5.0, 400, tight(f1));
    bool ok = edge_dev <= 1e-7;
    int matched_scan = 0, checked_oracle = 0, matched_oracle = 0;
    double worst_edge = 0.0;
    for (const auto& g : s1.gaps) {
      bool hit = false;
      for (const auto& o : oracle) {
        if (!overlaps(g.lambda_lo, g.lambda_hi, o.lo, o.hi)) continue;
        hit = true;
        worst_edge = std::max({worst_edge, std::abs(g.lambda_lo - o.lo), std::abs(g.lambda_hi - o.hi)});
      }
      matched_scan += hit;
    }
    for (const auto& o : oracle) {
      if (o.hi - o.lo <= 2 * h1) continue;
      ++checked_oracle;
      for (const auto& g : s1.gaps)
        if (overlaps(g.lambda_lo, g.lambda_hi, o.lo, o.hi)) {
          ++matched_oracle;
          break;
        }
    }
    ok = ok && matched_scan == static_cast<int>(s1.gaps.size()) && matched_oracle == checked_oracle &&
         worst_edge <= 2 * h1;
    report(3, "oracle cross-check", ok,
           fmt("edges vs frozen reference max dev %.1e; scan gaps overlapping |Delta|>2: %d/%zu; oracle gaps wider "
               "than 2 steps found by scan: %d/%d; max edge disagreement %.4f (2 steps = %.4f)",
               edge_dev, matched_scan, s1.gaps.size(), matched_oracle, checked_oracle, worst_edge, 2 * h1));
  }

  const auto s2 = run_scan(f2, -1.0, 5.0, 400);

  // 4
  {
    bool all_fit = !s2.gaps.empty();
    int irrational = 0, ambiguous = 0;
    std::ostringstream labels;
    for (const auto& g : s2.gaps) {
      all_fit = all_fit && g.within_tol && g.residual <= 1e-2 && g.label.cwiseAbs().maxCoeff() <= 10;
      irrational += g.label[1] != 0;
      ambiguous += g.ambiguous;
      labels << " (" << g.label[0] << "," << g.label[1] << ")";
    }
    const auto p1 = detect_plateaus(s1.curve, s1.cfg.plateau_tol, s1.cfg.min_run);
    const auto p2 = detect_plateaus(s2.curve, s2.cfg.plateau_tol, s2.cfg.min_run);
    int new_heights = 0;
    for (const auto& p : p2)
      if (std::none_of(p1.begin(), p1.end(), [&](const Plateau& q) { return std::abs(q.rho - p.rho) <= 1e-2; }))
        ++new_heights;
    report(4, "fig2 labels", all_fit && irrational >= 1,
           fmt("%zu gaps on [-1, 5] (%.0f s), all residual <= 1e-2 with |n|,|m| <= 10: %s; m != 0: %d; ambiguous: "
               "%d; heights absent from fig1: %d; labels",
               s2.gaps.size(), s2.seconds, all_fit ? "yes" : "no", irrational, ambiguous, new_heights) +
               labels.str());
  }

  // 5
  {
    double worst_excess = -INFINITY, worst_diff = 0.0;
    std::size_t n = 0;
    for (const auto* s : {&s1, &s2})
      for (const auto& p : s->curve.points) {
        const auto& e = p.estimate;
        const double diff = std::abs(e.rho_angle - e.rho_zeros);
        worst_diff = std::max(worst_diff, diff);
        worst_excess = std::max(worst_excess, diff - (2 * pi / e.X + 2e-3));
        ++n;
      }
    report(5, "estimator agreement", worst_excess <= 0.0,
           fmt("%zu scanned points, max |rho_angle - rho_zeros| = %.3e, max excess over 2pi/X + 2e-3 = %.3e", n,
               worst_diff, worst_excess));
  }

  // 6
  {
    const auto cfg = default_config(f1);
    double equiv = 0.0;
    for (double lambda : {-0.7, 0.3, 2.0, 4.5})
      for (std::int64_t k : {1, -3, 1000}) {
        const PruferAngle th{0, 0.8};
        const auto a = evolve(lambda, f1, th, 50.0, cfg);
        const auto b = evolve(lambda, f1, th.plus_turns(k), 50.0, cfg);
        equiv = std::max(equiv, std::abs(angle_difference(b.theta_end, a.theta_end) - 2 * pi * static_cast<double>(k)));
      }

    double indep_excess = -INFINITY;
    const double X = 1000.0;
    for (double lambda : {-0.2, 0.8, 2.4, 4.0}) {
      const auto a = rho_angle(lambda, f1, X, cfg);
      const auto b = rho_angle(lambda, f1, X, cfg, {0, 1.0});
      indep_excess = std::max(indep_excess, std::abs(a.rho - b.rho) - 2 * pi / X);
    }

    double cocycle = 0.0;
    for (double lambda : {-0.5, 0.25, 1.0, 3.0, 5.0}) cocycle = std::max(cocycle, cocycle_check(lambda, f1, {}, 10.0, 10.0, cfg));

    int monotone_fail = 0;
    for (int i = 0; i < 10; ++i) {
      const double l1 = -1.0 + 0.6 * i, l2 = l1 + 0.01;
      for (int j = 1; j <= 10; ++j) {
        const double x = 2.0 * j;
        if (!(angle_difference(evolve(l2, f1, {}, x, cfg).theta_end, evolve(l1, f1, {}, x, cfg).theta_end) > 0.0))
          ++monotone_fail;
      }
    }

    int curve_fail = 0;
    for (const auto* s : {&s1, &s2})
      for (std::size_t i = 1; i < s->curve.points.size(); ++i) {
        const auto& a = s->curve.points[i - 1].estimate;
        const auto& b = s->curve.points[i].estimate;
        if (b.rho < a.rho - 2 * std::max(a.err, b.err)) ++curve_fail;
      }

    report(6, "invariance suite",
           equiv <= 1e-9 && indep_excess <= 0.0 && cocycle <= 1e-6 && monotone_fail == 0 && curve_fail == 0,
           fmt("2pi-equivariance dev %.1e; initial-angle excess over 2pi/X %.2e; cocycle %.2e (tol 1e-6); lambda "
               "monotonicity failures %d/100; curve decreases beyond 2 err %d",
               equiv, indep_excess, cocycle, monotone_fail, curve_fail));
  }

  // 7
  {
    const auto cfg = WeylConfig::defaults_for(free);
    const double s = 1.0 / std::sqrt(2.0);
    const double e1 = std::abs(m_plus(I, free, 0.0, std::nullopt, cfg).m() - cplx(-s, s));
    const double e2 = std::abs(m_minus(I, free, 0.0, std::nullopt, cfg).m() - cplx(s, -s));
    const double e3 = std::abs(green_diag(I, free, 0.0, std::nullopt, cfg).G - cplx(std::sqrt(2.0) / 4, std::sqrt(2.0) / 4));
    const double e4 = std::abs(m_plus(-1.0, free, 0.0, std::nullopt, cfg).m() - (-1.0));
    const double e5 = std::abs(m_minus(-1.0, free, 0.0, std::nullopt, cfg).m() - 1.0);
    const double e6 = std::abs(green_diag(-1.0, free, 0.0, std::nullopt, cfg).G - 0.5);
    const double worst = std::max({e1, e2, e3, e4, e5, e6});
    report(7, "Weyl/Green closed forms", worst <= 1e-6,
           fmt("z=i: |dm+| %.1e |dm-| %.1e |dG| %.1e; lambda=-1: |dm+| %.1e |dm-| %.1e |dG| %.1e (tol 1e-6)", e1, e2,
               e3, e4, e5, e6));
  }

  // 8
  {
    double worst = 0.0;
    for (const auto* v : {&free, &f1}) {
      const auto cfg = WeylConfig::defaults_for(*v);
      for (auto side : {WeylSide::plus, WeylSide::minus})
        worst = std::max(worst, initialization_gap(cplx(1.0, 1.0), *v, side, 0.0, 40.0, cfg));
    }
    report(8, "limit-point forgetting", worst <= 1e-6,
           fmt("max gap between i and 2i initializations at x = 0, z = 1+i, X_far = 40: %.2e (tol 1e-6)", worst));
  }

  // 9
  {
    const auto cfg = WeylConfig::defaults_for(f1);
    std::vector<double> xs;
    for (int i = 0; i <= 32; ++i) xs.push_back(2 * pi * i / 32);
    const double cov = check_shift_covariance(cplx(1.0, 1.0), f1, 2 * pi, xs, std::nullopt, cfg);

    // gap lambda inside the plateau of the fig1 scan that contains it
    const double lambda = 0.18;
    double rho_plateau = NAN;
    for (const auto& g : s1.gaps)
      if (g.lambda_lo <= lambda && lambda <= g.lambda_hi) rho_plateau = g.rho_plateau;

    const double X = 200.0;
    const auto zeros = green_diagonal_zeros(lambda, f1, X, 0.05, std::nullopt, cfg);
    double slope_dev = zeros.empty() ? INFINITY : 0.0;
    for (const auto& z : zeros) slope_dev = std::max(slope_dev, std::abs(std::abs(z.dGdx) - z.r));
    const auto count = count_green_zeros(lambda, f1, X, std::nullopt, cfg);
    const double count_dev = std::abs(pi * static_cast<double>(count) / X - 2 * rho_plateau);
    report(9, "Green structure", cov <= 1e-6 && slope_dev <= 1e-3 && count_dev <= 2 * (2 * pi / X),
           fmt("shift covariance at tau = 2pi %.2e (tol 1e-6); lambda = %.2f, %zu zeros of G on [0, %.0f], max ||G'| - "
               "r| %.2e (tol 1e-3); pi N / X = %.4f vs 2 rho = %.4f, dev %.2e (tol %.3e)",
               cov, lambda, zeros.size(), X, slope_dev, pi * static_cast<double>(count) / X, 2 * rho_plateau,
               count_dev, 2 * (2 * pi / X)));
  }

  // 10
  {
    std::vector<double> xs;
    for (int i = 0; i <= 40; ++i) xs.push_back(-20.0 + i);
    std::size_t samples = 0, violations = 0;
    for (const auto* v : {&free, &f1, &f2}) {
      const auto cfg = WeylConfig::defaults_for(*v);
      for (cplx z : {cplx(1.0, 1.0), cplx(-0.5, 0.2), cplx(0.18, 0.05), cplx(3.0, 2.0)})
        for (const auto& row : green_profile(z, *v, xs, std::nullopt, cfg)) {
          ++samples;
          violations += !row.herglotz_ok;
        }
    }
    std::mt19937_64 rng(20261018);
    std::uniform_real_distribution<double> U(-0.5, 10.0);
    double det = 0.0;
    for (int i = 0; i < 100; ++i) det = std::max(det, std::abs(monodromy(U(rng), f1, 2 * pi, tight(f1)).determinant() - 1.0));
    report(10, "Herglotz and determinant", violations == 0 && det <= 1e-9,
           fmt("Herglotz violations %zu of %zu samples; max |det - 1| over 100 random lambda in [-0.5, 10] = %.2e",
               violations, samples, det));
  }

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
