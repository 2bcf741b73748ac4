#ifndef APSL_APFUN_HPP
#define APSL_APFUN_HPP

// Quasi-periodic trigonometric polynomials over a declared frequency base,
// and the coefficient triple (r = 1/p, q, w) built from them.

#include <Eigen/Core>

#include <complex>
#include <string>
#include <vector>

namespace apsl {

using IntVector = Eigen::VectorXi;

// Generators beta_1..beta_d (rad per unit x). Rational independence is a
// declaration by the caller, never inferred.
class FrequencyBase {
 public:
  explicit FrequencyBase(Eigen::VectorXd generators, std::vector<std::string> labels = {});

  int dim() const { return static_cast<int>(generators_.size()); }
  const Eigen::VectorXd& generators() const { return generators_; }
  const std::vector<std::string>& labels() const { return labels_; }

  // omega = sum_j k_j beta_j
  double frequency(const IntVector& k) const;
  double min_generator() const { return generators_.minCoeff(); }
  double max_generator() const { return generators_.maxCoeff(); }

  // Pairs (i, j) whose ratio sits within 1e-12 of p/q with p, q <= 64.
  std::vector<std::string> rational_dependence_warnings() const;

  friend bool operator==(const FrequencyBase& a, const FrequencyBase& b);

 private:
  Eigen::VectorXd generators_;
  std::vector<std::string> labels_;
};

struct TrigTerm {
  IntVector k;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

// constant + sum cos_amp*cos(omega x) + sin_amp*sin(omega x), omega = k . beta.
class TrigPolynomial {
 public:
  explicit TrigPolynomial(FrequencyBase base, double constant = 0.0, std::vector<TrigTerm> terms = {});

  const FrequencyBase& base() const { return base_; }
  double constant() const { return constant_; }
  const std::vector<TrigTerm>& terms() const { return terms_; }

  double operator()(double x) const;

  // |constant| + sum of term amplitudes; an upper bound on the sup norm.
  double amplitude_bound() const;

  friend bool operator==(const TrigPolynomial& a, const TrigPolynomial& b);

 private:
  FrequencyBase base_;
  double constant_;
  std::vector<TrigTerm> terms_;
};

double evaluate(const TrigPolynomial& f, double x);

// g(x) = f(x + t); each term's amplitude pair is rotated by omega*t.
TrigPolynomial shift(const TrigPolynomial& f, double t);

inline double mean_value(const TrigPolynomial& f) { return f.constant(); }

std::complex<double> fourier_coefficient(const TrigPolynomial& f, double lambda, double tol);

// Certified lower bound of the torus lift over [0, 2pi)^d: grid minimum minus
// Lipschitz slack L * (pi / grid_per_dim) * sqrt(d).
double hull_min(const TrigPolynomial& f, int grid_per_dim);

// Grid-only minimum of the torus lift (no slack). Used to watch refinement.
double hull_grid_min(const TrigPolynomial& f, int grid_per_dim);

// Doubles the grid from grid_start until hull_min is positive or grid_max is
// reached. Returns the positive bound or throws PositivityError(section).
double certify_hull_positive(const TrigPolynomial& f, const std::string& section, int grid_start = 256,
                             int grid_max = 4096);

struct CoefficientValues {
  double r;  // 1/p
  double q;
  double w;
};

// v = (1/p, q, w). Construction certifies hull positivity of r and w; p itself
// is never stored.
class CoefficientTriple {
 public:
  CoefficientTriple(TrigPolynomial r, TrigPolynomial q, TrigPolynomial w);

  // Skips certification and adopts the given floors. Used for shifts, whose
  // hull is unchanged.
  CoefficientTriple(TrigPolynomial r, TrigPolynomial q, TrigPolynomial w, double hull_floor_r,
                    double hull_floor_w);

  // (r, q, w) constants over base {1}.
  static CoefficientTriple constant(double r, double q, double w);

  const FrequencyBase& base() const { return r_.base(); }
  const TrigPolynomial& r() const { return r_; }
  const TrigPolynomial& q() const { return q_; }
  const TrigPolynomial& w() const { return w_; }
  double hull_floor_r() const { return floor_r_; }
  double hull_floor_w() const { return floor_w_; }

  // Evaluates all three polynomials with one sincos per distinct frequency.
  CoefficientValues at(double x) const;

  // 0.1 * shortest declared period; the default integrator step ceiling.
  double default_step_ceiling() const;

 private:
  void build_phase_table();

  TrigPolynomial r_, q_, w_;
  double floor_r_ = 0.0;
  double floor_w_ = 0.0;

  struct Slot {
    int phase;
    double cos_amp;
    double sin_amp;
  };
  std::vector<double> omegas_;
  std::vector<Slot> r_slots_, q_slots_, w_slots_;
};

CoefficientTriple shift(const CoefficientTriple& v, double t);

// Additive group generated by the integer vectors present in r, q, w.
class FrequencyModule {
 public:
  FrequencyModule(FrequencyBase base, std::vector<IntVector> witnesses);

  const FrequencyBase& base() const { return base_; }
  const std::vector<IntVector>& witnesses() const { return witnesses_; }

  double value_of(const IntVector& n) const { return base_.frequency(n); }

  // Rank of the lattice spanned by the witnesses; 0 for the trivial module.
  int rank() const;
  bool trivial() const { return witnesses_.empty(); }

  // e.g. "Z", "Z + sqrt2 Z", "{0}"
  std::string describe() const;

 private:
  FrequencyBase base_;
  std::vector<IntVector> witnesses_;
};

FrequencyModule module_of(const TrigPolynomial& r, const TrigPolynomial& q, const TrigPolynomial& w);
FrequencyModule module_of(const CoefficientTriple& v);

}  // namespace apsl

#endif  // APSL_APFUN_HPP
