#ifndef APSL_OUTPUT_HPP
#define APSL_OUTPUT_HPP

#include "apsl/periodic.hpp"
#include "apsl/scan.hpp"
#include "apsl/weylgreen.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace apsl {

// Shortest decimal that round-trips to the same double (at most 17 digits).
std::string format_double(double value);

void write_rho_csv(std::ostream& os, double lambda, const RotationEstimate& e, bool horizon_exceeded);
void write_curve_csv(std::ostream& os, const RhoCurve& curve);
void write_gaps_csv(std::ostream& os, const std::vector<GapReport>& gaps, int dim);
void write_green_csv(std::ostream& os, const std::vector<GreenRow>& rows);

struct DeltaSample {
  double lambda;
  double delta;
};
void write_bands_csv(std::ostream& os, const std::vector<DeltaSample>& samples);
void write_edges_csv(std::ostream& os, const std::vector<BandEdge>& edges);

// Self-contained SVG 1.1: one polyline of rho against lambda (one vertex per
// curve point), axes with ticks, and a dashed guide at each plateau height.
std::string render_rho_svg(const RhoCurve& curve, const std::vector<double>& plateau_heights,
                           const std::string& title = "rotation number");

}  // namespace apsl

#endif  // APSL_OUTPUT_HPP
