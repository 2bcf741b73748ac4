#ifndef APSL_PERIODIC_HPP
#define APSL_PERIODIC_HPP

// Floquet oracle for triples sharing a common period T: monodromy matrix,
// Hill discriminant and band edges. Used to cross-check rotation-number
// plateaus; non-periodic triples are refused.

#include "apsl/apfun.hpp"
#include "apsl/ode.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <vector>

namespace apsl {

// (phi, p phi')' = (r y2, (q - lambda w) y1)
Eigen::Vector2d linear_system_rhs(double x, const Eigen::Vector2d& y, double lambda, const CoefficientTriple& v);

// Columns are the solutions with identity data at 0, evaluated at T:
// [[u1, u2], [p u1', p u2']].
struct Monodromy {
  double period = 0.0;
  Eigen::Matrix2d matrix = Eigen::Matrix2d::Identity();

  double discriminant() const { return matrix(0, 0) + matrix(1, 1); }
  double determinant() const { return matrix.determinant(); }
};

// Throws NotPeriodic when max |v(x + T) - v(x)| over a sample of x exceeds 1e-12.
void validate_periodic(const CoefficientTriple& v, double period);

Monodromy monodromy(double lambda, const CoefficientTriple& v, double period, const ode::IntegratorConfig& cfg);

enum class EdgeType { periodic, antiperiodic };

struct BandEdge {
  double lambda;
  EdgeType type;  // Delta = 2 or Delta = -2
};

// Sign changes of Delta - 2 and Delta + 2 on n_seed samples, bisected to
// |d lambda| <= 1e-8.
std::vector<BandEdge> band_edges(const CoefficientTriple& v, double period, double lambda_min, double lambda_max,
                                 int n_seed, const ode::IntegratorConfig& cfg);

struct LambdaInterval {
  double lo;
  double hi;
};

// Intervals of [lambda_min, lambda_max] on which |Delta| > 2, delimited by the
// band edges (or the range ends).
std::vector<LambdaInterval> oracle_gaps(const CoefficientTriple& v, double period, double lambda_min,
                                        double lambda_max, int n_seed, const ode::IntegratorConfig& cfg);

}  // namespace apsl

#endif  // APSL_PERIODIC_HPP
