#ifndef APSL_TESTS_COMMON_HPP
#define APSL_TESTS_COMMON_HPP

#include "apsl/apfun.hpp"

#include <cmath>
#include <numbers>

namespace apsl::test {

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt2 = std::numbers::sqrt2;

inline IntVector kvec(std::initializer_list<int> k) {
  IntVector v(static_cast<Eigen::Index>(k.size()));
  Eigen::Index i = 0;
  for (int x : k) v[i++] = x;
  return v;
}

inline FrequencyBase base1() { return FrequencyBase(Eigen::VectorXd::Ones(1)); }

inline FrequencyBase base_sqrt2() {
  Eigen::VectorXd g(2);
  g << 1.0, sqrt2;
  return FrequencyBase(g, {"1", "sqrt2"});
}

// r = sin x + 2, q = 2 cos x, w = 2 - cos x
inline CoefficientTriple fig1() {
  const auto b = base1();
  return {TrigPolynomial(b, 2.0, {{kvec({1}), 0.0, 1.0}}), TrigPolynomial(b, 0.0, {{kvec({1}), 2.0, 0.0}}),
          TrigPolynomial(b, 2.0, {{kvec({1}), -1.0, 0.0}})};
}

// fig1 with q = 2 cos(sqrt2 x)
inline CoefficientTriple fig2() {
  const auto b = base_sqrt2();
  return {TrigPolynomial(b, 2.0, {{kvec({1, 0}), 0.0, 1.0}}), TrigPolynomial(b, 0.0, {{kvec({0, 1}), 2.0, 0.0}}),
          TrigPolynomial(b, 2.0, {{kvec({1, 0}), -1.0, 0.0}})};
}

inline CoefficientTriple free_triple() { return CoefficientTriple::constant(1.0, 0.0, 1.0); }

}  // namespace apsl::test

#endif
