#include "apsl/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace apsl {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), ptr);
}

void write_rho_csv(std::ostream& os, double lambda, const RotationEstimate& e, bool horizon_exceeded) {
  os << "lambda,rho,err,X,method" << (horizon_exceeded ? ",flag" : "") << "\n";
  os << format_double(lambda) << "," << format_double(e.rho) << "," << format_double(e.err) << ","
     << format_double(e.X) << "," << to_string(e.method) << (horizon_exceeded ? ",horizon_exceeded" : "") << "\n";
}

void write_curve_csv(std::ostream& os, const RhoCurve& curve) {
  os << "lambda,rho,err,flag\n";
  for (const auto& p : curve.points)
    os << format_double(p.lambda) << "," << format_double(p.estimate.rho) << "," << format_double(p.estimate.err)
       << "," << (p.horizon_exceeded ? "horizon_exceeded" : "ok") << "\n";
}

void write_gaps_csv(std::ostream& os, const std::vector<GapReport>& gaps, int dim) {
  os << "lambda_lo,lambda_hi,rho";
  for (int j = 1; j <= dim; ++j) os << ",label_n" << j;
  os << ",label_value,residual,ambiguous\n";
  for (const auto& g : gaps) {
    os << format_double(g.lambda_lo) << "," << format_double(g.lambda_hi) << "," << format_double(g.rho_plateau);
    for (int j = 0; j < dim; ++j) os << "," << g.label[j];
    os << "," << format_double(g.label_value) << "," << format_double(g.residual) << "," << (g.ambiguous ? 1 : 0)
       << "\n";
  }
}

void write_green_csv(std::ostream& os, const std::vector<GreenRow>& rows) {
  os << "x,re_m_plus,im_m_plus,re_m_minus,im_m_minus,re_G,im_G,re_dG,im_dG\n";
  for (const auto& row : rows) {
    const cplx mp = row.plus.m();
    const cplx mm = row.minus.m();
    os << format_double(row.green.x) << "," << format_double(mp.real()) << "," << format_double(mp.imag()) << ","
       << format_double(mm.real()) << "," << format_double(mm.imag()) << "," << format_double(row.green.G.real())
       << "," << format_double(row.green.G.imag()) << "," << format_double(row.green.dGdx.real()) << ","
       << format_double(row.green.dGdx.imag()) << "\n";
  }
}

void write_bands_csv(std::ostream& os, const std::vector<DeltaSample>& samples) {
  os << "lambda,delta,in_band\n";
  for (const auto& s : samples)
    os << format_double(s.lambda) << "," << format_double(s.delta) << "," << (std::abs(s.delta) <= 2.0 ? 1 : 0)
       << "\n";
}

void write_edges_csv(std::ostream& os, const std::vector<BandEdge>& edges) {
  os << "edge_lambda,type\n";
  for (const auto& e : edges)
    os << format_double(e.lambda) << "," << (e.type == EdgeType::periodic ? "periodic" : "antiperiodic") << "\n";
}

namespace {

double nice_step(double span, int target_ticks) {
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace

std::string render_rho_svg(const RhoCurve& curve, const std::vector<double>& plateau_heights,
                           const std::string& title) {
  constexpr double width = 800, height = 500;
  constexpr double left = 70, right = 20, top = 40, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double x_lo = curve.points.empty() ? 0.0 : curve.points.front().lambda;
  double x_hi = curve.points.empty() ? 1.0 : curve.points.back().lambda;
  double y_lo = 0.0, y_hi = 1.0;
  if (!curve.points.empty()) {
    auto [mn, mx] = std::minmax_element(curve.points.begin(), curve.points.end(),
                                        [](const CurvePoint& a, const CurvePoint& b) { return a.estimate.rho < b.estimate.rho; });
    y_lo = std::min(0.0, mn->estimate.rho);
    y_hi = mx->estimate.rho;
  }
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;
  y_hi += 0.05 * (y_hi - y_lo);

  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
     << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << xml_escape(title) << "</text>\n";

  // axes
  os << "<g stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
     << top + plot_h << "\"/>\n"
     << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h << "\"/>\n"
     << "</g>\n";

  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  const double xs = nice_step(x_hi - x_lo, 8);
  for (double t = std::ceil(x_lo / xs) * xs; t <= x_hi + 1e-9 * xs; t += xs) {
    const double X = px(t);
    os << "<line x1=\"" << fmt(X) << "\" y1=\"" << top + plot_h << "\" x2=\"" << fmt(X) << "\" y2=\""
       << top + plot_h + 5 << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << fmt(X) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">"
       << fmt(std::abs(t) < 1e-12 * xs ? 0.0 : t) << "</text>\n";
  }
  const double ys = nice_step(y_hi - y_lo, 6);
  for (double t = std::ceil(y_lo / ys) * ys; t <= y_hi + 1e-9 * ys; t += ys) {
    const double Y = py(t);
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt(Y) << "\" x2=\"" << left << "\" y2=\"" << fmt(Y)
       << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << left - 8 << "\" y=\"" << fmt(Y + 4) << "\" text-anchor=\"end\">"
       << fmt(std::abs(t) < 1e-12 * ys ? 0.0 : t) << "</text>\n";
  }
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">lambda</text>\n"
     << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << top + plot_h / 2 << ")\">rho</text>\n"
     << "</g>\n";

  os << "<g stroke=\"#999999\" stroke-width=\"0.8\" stroke-dasharray=\"4,3\">\n";
  for (double h : plateau_heights) {
    const double Y = py(h);
    os << "<line x1=\"" << left << "\" y1=\"" << fmt(Y) << "\" x2=\"" << left + plot_w << "\" y2=\"" << fmt(Y)
       << "\"/>\n";
  }
  os << "</g>\n";

  os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i];
    os << (i ? " " : "") << fmt(px(p.lambda), 8) << "," << fmt(py(p.estimate.rho), 8);
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

}  // namespace apsl
