#include "apsl/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace apsl {

void ScanConfig::validate() const {
  if (!(lambda_min < lambda_max)) throw std::invalid_argument("scan: lambda_min must be below lambda_max");
  if (n_points < 16) throw std::invalid_argument("scan: n_points must be at least 16");
  if (min_run < 3) throw std::invalid_argument("scan: min_run must be at least 3");
  if (!(plateau_tol > 0.0) || !(target_err > 0.0)) throw std::invalid_argument("scan: tolerances must be positive");
}

RhoCurve scan_rho(const CoefficientTriple& v, const ScanConfig& cfg, const ode::IntegratorConfig& ode_cfg,
                  std::optional<RhoProtocol> protocol) {
  cfg.validate();
  const RhoProtocol proto = protocol.value_or(RhoProtocol::defaults_for(v, cfg.target_err));

  RhoCurve curve;
  curve.points.resize(static_cast<std::size_t>(cfg.n_points));
  for (int i = 0; i < cfg.n_points; ++i) {
    // the last point is pinned to lambda_max exactly
    curve.points[i].lambda = (i == cfg.n_points - 1) ? cfg.lambda_max : cfg.lambda_min + i * cfg.step();
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= curve.points.size()) return;
      auto& pt = curve.points[i];
      try {
        pt.estimate = rho(pt.lambda, v, proto, ode_cfg);
      } catch (const HorizonExceeded& e) {
        pt.estimate = e.best();
        pt.horizon_exceeded = true;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  n_threads = std::clamp(n_threads, 1u, static_cast<unsigned>(cfg.n_points));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return curve;
}

namespace {

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Median of rho over [first, last] if every point is within tol of it.
std::optional<double> run_median(const RhoCurve& curve, std::size_t first, std::size_t last, double tol) {
  std::vector<double> rhos;
  for (std::size_t i = first; i <= last; ++i) {
    if (curve.points[i].estimate.err > tol) return std::nullopt;
    rhos.push_back(curve.points[i].estimate.rho);
  }
  const double m = median(rhos);
  for (double r : rhos)
    if (std::abs(r - m) > tol) return std::nullopt;
  return m;
}

}  // namespace

std::vector<Plateau> detect_plateaus(const RhoCurve& curve, double plateau_tol, int min_run) {
  if (curve.points.empty()) throw std::invalid_argument("detect_plateaus: empty curve");
  std::vector<Plateau> out;
  const std::size_t n = curve.points.size();
  std::size_t i = 0;
  while (i < n) {
    auto m = run_median(curve, i, i, plateau_tol);
    if (!m) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n) {
      auto grown = run_median(curve, i, j + 1, plateau_tol);
      if (!grown) break;
      m = grown;
      ++j;
    }
    if (j - i + 1 >= static_cast<std::size_t>(min_run)) {
      out.push_back({i, j, *m});
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

GapLabel fit_integer_combination(double target, const Eigen::VectorXd& generators, double tol, int n_max) {
  if (!(tol > 0.0)) throw std::invalid_argument("label: tol must be positive");
  if (n_max < 1) throw std::invalid_argument("label: N_max must be at least 1");
  const auto d = generators.size();

  std::vector<LabelCandidate> all;
  IntVector n = IntVector::Constant(d, -n_max);
  while (true) {
    all.push_back({n, std::abs(target - n.cast<double>().dot(generators))});
    Eigen::Index j = 0;
    for (; j < d; ++j) {
      if (++n[j] <= n_max) break;
      n[j] = -n_max;
    }
    if (j == d) break;
  }

  auto better = [](const LabelCandidate& a, const LabelCandidate& b) {
    const double scale = 1e-12 * std::max(1.0, std::max(a.residual, b.residual));
    if (std::abs(a.residual - b.residual) > scale) return a.residual < b.residual;
    const int l1a = a.n.cwiseAbs().sum();
    const int l1b = b.n.cwiseAbs().sum();
    if (l1a != l1b) return l1a < l1b;
    return std::lexicographical_compare(a.n.data(), a.n.data() + a.n.size(), b.n.data(), b.n.data() + b.n.size());
  };
  std::sort(all.begin(), all.end(), better);

  GapLabel out;
  out.label = all.front().n;
  out.label_value = out.label.cast<double>().dot(generators);
  out.residual = all.front().residual;
  for (std::size_t i = 1; i < all.size() && all[i].residual <= tol; ++i) out.alternatives.push_back(all[i]);
  out.ambiguous = !out.alternatives.empty();
  return out;
}

GapLabel label_gap(double rho_plateau, const FrequencyModule& module, double tol, int n_max) {
  GapLabel g = fit_integer_combination(2.0 * rho_plateau, module.base().generators(), tol, n_max);
  if (g.residual > tol)
    throw NoLabelWithinTol("no integer combination within tol of 2*rho = " + std::to_string(2.0 * rho_plateau) +
                           " (best residual " + std::to_string(g.residual) + ")");
  return g;
}

std::vector<GapReport> find_gaps(const RhoCurve& curve, const FrequencyModule& module, double plateau_tol,
                                 int min_run, const LabelConfig& label_cfg) {
  std::vector<GapReport> out;
  for (const auto& p : detect_plateaus(curve, plateau_tol, min_run)) {
    const GapLabel g =
        fit_integer_combination(2.0 * p.rho, module.base().generators(), label_cfg.tol, label_cfg.n_max);
    out.push_back({curve.points[p.first].lambda, curve.points[p.last].lambda, p.rho, g.label, g.label_value,
                   g.residual, g.ambiguous, g.residual <= label_cfg.tol, g.alternatives});
  }
  return out;
}

}  // namespace apsl
