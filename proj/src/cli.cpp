#include "apsl/cli.hpp"

#include "apsl/coeffile.hpp"
#include "apsl/errors.hpp"
#include "apsl/output.hpp"
#include "apsl/periodic.hpp"
#include "apsl/rotation.hpp"
#include "apsl/scan.hpp"
#include "apsl/weylgreen.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace apsl {

namespace {

CoefficientFile load(const std::string& path, std::ostream& err) {
  auto file = load_coefficients(path);
  for (const auto& w : file.base().rational_dependence_warnings()) err << "warning: " << w << "\n";
  return file;
}

// Writes to the named file, or to `fallback` when the name is empty.
void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  body(os);
  if (!os) throw Error("write to '" + path + "' failed");
}

std::vector<double> grid(double from, double to, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("--x-step must be positive");
  if (to < from) throw std::invalid_argument("--x-to must not be smaller than --x-from");
  std::vector<double> xs;
  const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long i = 0; i <= n; ++i) xs.push_back(from + step * static_cast<double>(i));
  return xs;
}

struct RhoArgs {
  std::string coeff;
  double lambda = 0.0;
  double err = 1e-3;
};

int cmd_rho(const RhoArgs& a, std::ostream& out, std::ostream& err) {
  const auto file = load(a.coeff, err);
  const auto& v = file.triple;
  const auto protocol = RhoProtocol::defaults_for(v, a.err);
  try {
    const auto e = rho(a.lambda, v, protocol, default_config(v));
    write_rho_csv(out, a.lambda, e, false);
    return exit_ok;
  } catch (const HorizonExceeded& h) {
    write_rho_csv(out, a.lambda, h.best(), true);
    err << "error: " << h.what() << "\n";
    return exit_horizon;
  }
}

struct ScanArgs {
  std::string coeff;
  ScanConfig scan;
  LabelConfig label;
  std::string out, svg, gaps;
};

int cmd_scan(ScanArgs a, std::ostream& out, std::ostream& err) {
  a.scan.validate();
  const auto file = load(a.coeff, err);
  const auto& v = file.triple;
  const auto curve = scan_rho(v, a.scan, default_config(v));

  std::size_t flagged = 0;
  for (const auto& p : curve.points) flagged += p.horizon_exceeded;
  if (flagged) err << "warning: " << flagged << " point(s) exceeded the horizon and are flagged\n";

  emit(a.out, out, [&](std::ostream& os) { write_curve_csv(os, curve); });

  const auto module = module_of(v);
  const auto gaps = find_gaps(curve, module, a.scan.plateau_tol, a.scan.min_run, a.label);
  for (const auto& g : gaps)
    if (!g.within_tol)
      err << "warning: plateau at rho " << format_double(g.rho_plateau) << " has no label within tolerance in "
          << module.describe() << "\n";
  if (!a.gaps.empty()) emit(a.gaps, out, [&](std::ostream& os) { write_gaps_csv(os, gaps, v.base().dim()); });

  if (!a.svg.empty()) {
    std::vector<double> heights;
    for (const auto& p : detect_plateaus(curve, a.scan.plateau_tol, a.scan.min_run)) heights.push_back(p.rho);
    emit(a.svg, out, [&](std::ostream& os) { os << render_rho_svg(curve, heights); });
  }
  return exit_ok;
}

struct GreenArgs {
  std::string coeff;
  double z_re = 0.0, z_im = 0.0;
  double x_from = 0.0, x_to = 0.0, x_step = 1.0;
  std::optional<double> x_far;
  std::string out;
  bool gap_lambda = false;
  std::optional<double> check_shift;
};

int cmd_green(const GreenArgs& a, std::ostream& out, std::ostream& err) {
  if (a.z_im == 0.0 && !a.gap_lambda)
    throw std::invalid_argument("real z needs --gap-lambda to assert that z lies in a spectral gap");
  const auto file = load(a.coeff, err);
  const auto& v = file.triple;
  const cplx z(a.z_re, a.z_im);
  const auto cfg = WeylConfig::defaults_for(v);
  const auto xs = grid(a.x_from, a.x_to, a.x_step);

  const auto rows = green_profile(z, v, xs, a.x_far, cfg);
  for (const auto& row : rows)
    if (!row.herglotz_ok) err << "warning: Herglotz sign violated at x = " << format_double(row.green.x) << "\n";
  emit(a.out, out, [&](std::ostream& os) { write_green_csv(os, rows); });

  if (a.check_shift) {
    const double dev = check_shift_covariance(z, v, *a.check_shift, xs, a.x_far, cfg);
    err << "shift_covariance_max_deviation=" << format_double(dev) << "\n";
  }
  return exit_ok;
}

struct BandsArgs {
  std::string coeff;
  double period = 0.0;
  double lmin = 0.0, lmax = 0.0;
  int n = 200;
  std::string out;
};

int cmd_bands(const BandsArgs& a, std::ostream& out, std::ostream& err) {
  if (a.n < 2) throw std::invalid_argument("--n must be at least 2");
  const auto file = load(a.coeff, err);
  const auto& v = file.triple;
  validate_periodic(v, a.period);
  auto cfg = default_config(v);
  cfg.rtol = 1e-11;
  cfg.atol = 1e-13;

  std::vector<DeltaSample> samples;
  for (int i = 0; i < a.n; ++i) {
    const double lambda = a.lmin + (a.lmax - a.lmin) * i / (a.n - 1);
    samples.push_back({lambda, monodromy(lambda, v, a.period, cfg).discriminant()});
  }
  emit(a.out, out, [&](std::ostream& os) { write_bands_csv(os, samples); });
  const auto edges = band_edges(v, a.period, a.lmin, a.lmax, a.n, cfg);
  if (a.out.empty()) out << "\n";
  write_edges_csv(out, edges);
  return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rotation numbers, gap labels and Weyl-Green diagnostics for almost periodic Sturm-Liouville operators",
               "apsl"};
  app.require_subcommand(1);

  RhoArgs rho_args;
  auto* rho_cmd = app.add_subcommand("rho", "rotation number at one lambda, one CSV row on stdout");
  rho_cmd->add_option("--coeff", rho_args.coeff, "coefficient file")->required();
  rho_cmd->add_option("--lambda", rho_args.lambda, "spectral parameter")->required();
  rho_cmd->add_option("--err", rho_args.err, "target error")->capture_default_str();

  ScanArgs scan_args;
  auto* scan_cmd = app.add_subcommand("scan", "rho over a lambda grid, plateaus and gap labels");
  scan_cmd->add_option("--coeff", scan_args.coeff, "coefficient file")->required();
  scan_cmd->add_option("--lmin", scan_args.scan.lambda_min, "grid start")->required();
  scan_cmd->add_option("--lmax", scan_args.scan.lambda_max, "grid end")->required();
  scan_cmd->add_option("--n", scan_args.scan.n_points, "grid points (>= 16)")->capture_default_str();
  scan_cmd->add_option("--err", scan_args.scan.target_err, "target error per point")->capture_default_str();
  scan_cmd->add_option("--plateau-tol", scan_args.scan.plateau_tol, "plateau tolerance")->capture_default_str();
  scan_cmd->add_option("--min-run", scan_args.scan.min_run, "minimum plateau length")->capture_default_str();
  scan_cmd->add_option("--nmax", scan_args.label.n_max, "label coefficient bound")->capture_default_str();
  scan_cmd->add_option("--label-tol", scan_args.label.tol, "label residual tolerance")->capture_default_str();
  scan_cmd->add_option("--threads", scan_args.scan.threads, "worker threads (0: all cores)")->capture_default_str();
  scan_cmd->add_option("--out", scan_args.out, "curve CSV (default stdout)");
  scan_cmd->add_option("--svg", scan_args.svg, "SVG chart");
  scan_cmd->add_option("--gaps", scan_args.gaps, "gap CSV");

  GreenArgs green_args;
  auto* green_cmd = app.add_subcommand("green", "Weyl m-functions and Green diagonal along x");
  green_cmd->add_option("--coeff", green_args.coeff, "coefficient file")->required();
  green_cmd->add_option("--z-re", green_args.z_re, "Re z")->capture_default_str();
  green_cmd->add_option("--z-im", green_args.z_im, "Im z")->capture_default_str();
  green_cmd->add_option("--x-from", green_args.x_from, "first x")->capture_default_str();
  green_cmd->add_option("--x-to", green_args.x_to, "last x")->capture_default_str();
  green_cmd->add_option("--x-step", green_args.x_step, "x spacing")->capture_default_str();
  green_cmd->add_option("--xfar", green_args.x_far, "Riccati start distance beyond the sample range");
  green_cmd->add_option("--out", green_args.out, "CSV (default stdout)");
  green_cmd->add_flag("--gap-lambda", green_args.gap_lambda, "assert that real z lies in a spectral gap");
  green_cmd->add_option("--check-shift", green_args.check_shift, "report max |G(x+t; v) - G(x; v_t)| on stderr");

  BandsArgs bands_args;
  auto* bands_cmd = app.add_subcommand("bands", "Hill discriminant and band edges of a periodic triple");
  bands_cmd->add_option("--coeff", bands_args.coeff, "coefficient file")->required();
  bands_cmd->add_option("--period", bands_args.period, "common period T")->required();
  bands_cmd->add_option("--lmin", bands_args.lmin, "grid start")->required();
  bands_cmd->add_option("--lmax", bands_args.lmax, "grid end")->required();
  bands_cmd->add_option("--n", bands_args.n, "grid points")->capture_default_str();
  bands_cmd->add_option("--out", bands_args.out, "Delta CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*rho_cmd) return cmd_rho(rho_args, out, err);
    if (*scan_cmd) return cmd_scan(scan_args, out, err);
    if (*green_cmd) return cmd_green(green_args, out, err);
    if (*bands_cmd) return cmd_bands(bands_args, out, err);
  } catch (const NotDecayed& e) {
    err << "error: " << e.what() << "\n";
    return exit_not_decayed;
  } catch (const NotPeriodic& e) {
    err << "error: " << e.what() << "\n";
    return exit_not_periodic;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace apsl
