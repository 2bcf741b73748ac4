#include "apsl/apfun.hpp"

#include "apsl/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace apsl {

namespace {

bool same_vector(const IntVector& a, const IntVector& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

bool lex_less(const IntVector& a, const IntVector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

FrequencyBase::FrequencyBase(Eigen::VectorXd generators, std::vector<std::string> labels)
    : generators_(std::move(generators)), labels_(std::move(labels)) {
  if (generators_.size() < 1) throw DimensionError("frequency base needs at least one generator");
  for (Eigen::Index j = 0; j < generators_.size(); ++j) {
    if (!(generators_[j] > 0.0) || !std::isfinite(generators_[j]))
      throw DimensionError("frequency generators must be finite and strictly positive");
  }
  if (labels_.empty()) {
    for (Eigen::Index j = 0; j < generators_.size(); ++j) {
      std::ostringstream os;
      os.precision(17);
      os << generators_[j];
      labels_.push_back(os.str());
    }
  } else if (static_cast<Eigen::Index>(labels_.size()) != generators_.size()) {
    throw DimensionError("label count does not match generator count");
  }
}

double FrequencyBase::frequency(const IntVector& k) const {
  if (k.size() != generators_.size()) throw DimensionError("integer vector length does not match base dimension");
  return k.cast<double>().dot(generators_);
}

std::vector<std::string> FrequencyBase::rational_dependence_warnings() const {
  std::vector<std::string> out;
  for (int i = 0; i < dim(); ++i) {
    for (int j = i + 1; j < dim(); ++j) {
      const double ratio = generators_[i] / generators_[j];
      for (int den = 1; den <= 64; ++den) {
        const double num = std::round(ratio * den);
        if (num < 1 || num > 64) continue;
        if (std::abs(ratio - num / den) <= 1e-12) {
          std::ostringstream os;
          os << "generators " << i + 1 << " and " << j + 1 << " have ratio close to " << num << "/" << den
             << "; the base is declared independent but looks rationally dependent";
          out.push_back(os.str());
          break;
        }
      }
    }
  }
  return out;
}

bool operator==(const FrequencyBase& a, const FrequencyBase& b) {
  return a.generators_.size() == b.generators_.size() && a.generators_ == b.generators_;
}

TrigPolynomial::TrigPolynomial(FrequencyBase base, double constant, std::vector<TrigTerm> terms)
    : base_(std::move(base)), constant_(constant), terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& k = terms_[i].k;
    if (k.size() != base_.dim())
      throw DimensionError("term k-vector has length " + std::to_string(k.size()) + ", base has dimension " +
                           std::to_string(base_.dim()));
    if ((k.array() == 0).all()) throw DimensionError("term k-vector must be nonzero");
    for (std::size_t j = 0; j < i; ++j) {
      if (same_vector(terms_[j].k, k)) throw DimensionError("duplicate term k-vector");
    }
  }
}

double TrigPolynomial::operator()(double x) const {
  double s = constant_;
  for (const auto& t : terms_) {
    const double phase = base_.frequency(t.k) * x;
    s += t.cos_amp * std::cos(phase) + t.sin_amp * std::sin(phase);
  }
  return s;
}

double TrigPolynomial::amplitude_bound() const {
  double s = std::abs(constant_);
  for (const auto& t : terms_) s += std::hypot(t.cos_amp, t.sin_amp);
  return s;
}

bool operator==(const TrigPolynomial& a, const TrigPolynomial& b) {
  if (!(a.base_ == b.base_) || a.constant_ != b.constant_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    const auto& s = a.terms_[i];
    const auto& t = b.terms_[i];
    if (!same_vector(s.k, t.k) || s.cos_amp != t.cos_amp || s.sin_amp != t.sin_amp) return false;
  }
  return true;
}

double evaluate(const TrigPolynomial& f, double x) { return f(x); }

TrigPolynomial shift(const TrigPolynomial& f, double t) {
  if (t == 0.0) return f;
  std::vector<TrigTerm> terms;
  terms.reserve(f.terms().size());
  for (const auto& term : f.terms()) {
    const double phase = f.base().frequency(term.k) * t;
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    terms.push_back({term.k, term.cos_amp * c + term.sin_amp * s, term.sin_amp * c - term.cos_amp * s});
  }
  return TrigPolynomial(f.base(), f.constant(), std::move(terms));
}

std::complex<double> fourier_coefficient(const TrigPolynomial& f, double lambda, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("fourier_coefficient: tol must be positive");
  std::complex<double> found{0.0, 0.0};
  double found_omega = std::numeric_limits<double>::quiet_NaN();
  auto take = [&](double omega, std::complex<double> c) {
    if (std::abs(lambda - omega) > tol) return;
    if (!std::isnan(found_omega) && omega != found_omega)
      throw AmbiguousFrequency("two term frequencies lie within tol of the requested exponent");
    found_omega = omega;
    found = c;
  };
  take(0.0, {f.constant(), 0.0});
  for (const auto& t : f.terms()) {
    const double omega = f.base().frequency(t.k);
    take(omega, {0.5 * t.cos_amp, -0.5 * t.sin_amp});
    take(-omega, {0.5 * t.cos_amp, 0.5 * t.sin_amp});
  }
  return found;
}

namespace {

// Walks the g^d grid on the torus and returns the minimum of the lift.
double torus_grid_min(const TrigPolynomial& f, int grid_per_dim) {
  const int d = f.base().dim();
  const auto& terms = f.terms();
  if (terms.empty()) return f.constant();

  const double step = 2.0 * std::numbers::pi / grid_per_dim;
  std::vector<int> idx(d, 0);
  // phase of each term = step * (k . idx); kept incrementally in integer units
  std::vector<long long> units(terms.size(), 0);
  // per-term grid period: phases repeat modulo grid_per_dim
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> cos_table(grid_per_dim), sin_table(grid_per_dim);
  for (int i = 0; i < grid_per_dim; ++i) {
    cos_table[i] = std::cos(step * i);
    sin_table[i] = std::sin(step * i);
  }
  while (true) {
    double s = f.constant();
    for (std::size_t t = 0; t < terms.size(); ++t) {
      long long u = units[t] % grid_per_dim;
      if (u < 0) u += grid_per_dim;
      s += terms[t].cos_amp * cos_table[u] + terms[t].sin_amp * sin_table[u];
    }
    best = std::min(best, s);
    int j = 0;
    for (; j < d; ++j) {
      ++idx[j];
      for (std::size_t t = 0; t < terms.size(); ++t) units[t] += terms[t].k[j];
      if (idx[j] < grid_per_dim) break;
      for (std::size_t t = 0; t < terms.size(); ++t) units[t] -= static_cast<long long>(terms[t].k[j]) * grid_per_dim;
      idx[j] = 0;
    }
    if (j == d) break;
  }
  return best;
}

}  // namespace

double hull_grid_min(const TrigPolynomial& f, int grid_per_dim) {
  if (grid_per_dim < 8) throw std::invalid_argument("hull_min: grid_per_dim must be at least 8");
  return torus_grid_min(f, grid_per_dim);
}

double hull_min(const TrigPolynomial& f, int grid_per_dim) {
  const double grid_min = hull_grid_min(f, grid_per_dim);
  double lipschitz = 0.0;
  for (const auto& t : f.terms()) lipschitz += t.k.cast<double>().norm() * std::hypot(t.cos_amp, t.sin_amp);
  return grid_min - lipschitz * (std::numbers::pi / grid_per_dim) * std::sqrt(static_cast<double>(f.base().dim()));
}

double certify_hull_positive(const TrigPolynomial& f, const std::string& section, int grid_start, int grid_max) {
  // beyond ~6.7e7 grid points a single pass takes too long to be useful
  constexpr double max_points = 1 << 26;
  double bound = -std::numeric_limits<double>::infinity();
  for (int g = grid_start; g <= grid_max; g *= 2) {
    if (std::pow(static_cast<double>(g), f.base().dim()) > max_points) break;
    bound = hull_min(f, g);
    if (bound > 0.0) return bound;
  }
  throw PositivityError(section, bound);
}

CoefficientTriple::CoefficientTriple(TrigPolynomial r, TrigPolynomial q, TrigPolynomial w)
    : r_(std::move(r)), q_(std::move(q)), w_(std::move(w)) {
  if (!(r_.base() == q_.base()) || !(r_.base() == w_.base()))
    throw BaseMismatch("r, q and w must share one frequency base");
  floor_r_ = certify_hull_positive(r_, "r");
  floor_w_ = certify_hull_positive(w_, "w");
  build_phase_table();
}

CoefficientTriple::CoefficientTriple(TrigPolynomial r, TrigPolynomial q, TrigPolynomial w, double hull_floor_r,
                                     double hull_floor_w)
    : r_(std::move(r)), q_(std::move(q)), w_(std::move(w)), floor_r_(hull_floor_r), floor_w_(hull_floor_w) {
  if (!(r_.base() == q_.base()) || !(r_.base() == w_.base()))
    throw BaseMismatch("r, q and w must share one frequency base");
  if (!(floor_r_ > 0.0) || !(floor_w_ > 0.0)) throw std::invalid_argument("hull floors must be positive");
  build_phase_table();
}

CoefficientTriple CoefficientTriple::constant(double r, double q, double w) {
  FrequencyBase base(Eigen::VectorXd::Ones(1));
  return CoefficientTriple(TrigPolynomial(base, r), TrigPolynomial(base, q), TrigPolynomial(base, w));
}

void CoefficientTriple::build_phase_table() {
  std::vector<IntVector> keys;
  auto slots_for = [&](const TrigPolynomial& f) {
    std::vector<Slot> slots;
    for (const auto& t : f.terms()) {
      auto it = std::find_if(keys.begin(), keys.end(), [&](const IntVector& k) { return same_vector(k, t.k); });
      int idx = static_cast<int>(it - keys.begin());
      if (it == keys.end()) {
        keys.push_back(t.k);
        omegas_.push_back(base().frequency(t.k));
      }
      slots.push_back({idx, t.cos_amp, t.sin_amp});
    }
    return slots;
  };
  r_slots_ = slots_for(r_);
  q_slots_ = slots_for(q_);
  w_slots_ = slots_for(w_);
}

CoefficientValues CoefficientTriple::at(double x) const {
  // small fixed buffer covers every realistic triple without allocating
  constexpr std::size_t kInline = 16;
  double cs_inline[2 * kInline];
  std::vector<double> cs_heap;
  double* cs = cs_inline;
  if (omegas_.size() > kInline) {
    cs_heap.resize(2 * omegas_.size());
    cs = cs_heap.data();
  }
  for (std::size_t i = 0; i < omegas_.size(); ++i) {
    const double phase = omegas_[i] * x;
    cs[2 * i] = std::cos(phase);
    cs[2 * i + 1] = std::sin(phase);
  }
  auto sum = [&](double c, const std::vector<Slot>& slots) {
    for (const auto& s : slots) c += s.cos_amp * cs[2 * s.phase] + s.sin_amp * cs[2 * s.phase + 1];
    return c;
  };
  return {sum(r_.constant(), r_slots_), sum(q_.constant(), q_slots_), sum(w_.constant(), w_slots_)};
}

double CoefficientTriple::default_step_ceiling() const {
  return 0.1 * 2.0 * std::numbers::pi / base().max_generator();
}

CoefficientTriple shift(const CoefficientTriple& v, double t) {
  return CoefficientTriple(shift(v.r(), t), shift(v.q(), t), shift(v.w(), t), v.hull_floor_r(), v.hull_floor_w());
}

FrequencyModule::FrequencyModule(FrequencyBase base, std::vector<IntVector> witnesses)
    : base_(std::move(base)), witnesses_(std::move(witnesses)) {
  for (const auto& k : witnesses_) {
    if (k.size() != base_.dim()) throw DimensionError("witness length does not match base dimension");
  }
  std::sort(witnesses_.begin(), witnesses_.end(), lex_less);
  witnesses_.erase(std::unique(witnesses_.begin(), witnesses_.end(), same_vector), witnesses_.end());
}

int FrequencyModule::rank() const {
  if (witnesses_.empty()) return 0;
  Eigen::MatrixXd m(base_.dim(), static_cast<Eigen::Index>(witnesses_.size()));
  for (std::size_t i = 0; i < witnesses_.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = witnesses_[i].cast<double>();
  return static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(m).rank());
}

std::string FrequencyModule::describe() const {
  if (trivial()) return "{0}";
  // Full-rank modules read as the base lattice; others list their generators.
  if (rank() == base_.dim()) {
    std::string s;
    for (int j = 0; j < base_.dim(); ++j) {
      if (j) s += " + ";
      const auto& label = base_.labels()[j];
      s += (label == "1") ? "Z" : label + " Z";
    }
    return s;
  }
  std::ostringstream os;
  os << "span{";
  for (std::size_t i = 0; i < witnesses_.size(); ++i) {
    if (i) os << ", ";
    os << "(";
    for (Eigen::Index j = 0; j < witnesses_[i].size(); ++j) os << (j ? " " : "") << witnesses_[i][j];
    os << ")";
  }
  os << "}";
  return os.str();
}

FrequencyModule module_of(const TrigPolynomial& r, const TrigPolynomial& q, const TrigPolynomial& w) {
  if (!(r.base() == q.base()) || !(r.base() == w.base()))
    throw BaseMismatch("r, q and w must share one frequency base");
  std::vector<IntVector> witnesses;
  for (const auto* f : {&r, &q, &w})
    for (const auto& t : f->terms()) witnesses.push_back(t.k);
  return FrequencyModule(r.base(), std::move(witnesses));
}

FrequencyModule module_of(const CoefficientTriple& v) { return module_of(v.r(), v.q(), v.w()); }

}  // namespace apsl
