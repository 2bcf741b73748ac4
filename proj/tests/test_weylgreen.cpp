#include "apsl/errors.hpp"
#include "apsl/weylgreen.hpp"

#include "common.hpp"

#include <doctest.h>

using namespace apsl;
using namespace apsl::test;

namespace {

const cplx I(0.0, 1.0);

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("riccati rhs") {
  const auto v = free_triple();
  CHECK(std::abs(riccati_rhs(0.0, I * std::sqrt(I), I, v)) < 1e-15);
  const auto f = fig1();
  const cplx z(0.3, 0.2);
  const auto c = f.at(1.1);
  CHECK(close(riccati_rhs(1.1, 0.0, z, f), c.q - z * c.w, 1e-15));
  CHECK(riccati_rhs(1.1, 0.7, 0.4, f).imag() == 0.0);
}

TEST_CASE("closed forms at z = i") {
  const auto v = free_triple();
  const auto cfg = WeylConfig::defaults_for(v);
  const auto mp = m_plus(I, v, 0.0, 40.0, cfg).m();
  const auto mm = m_minus(I, v, 0.0, 40.0, cfg).m();
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(close(mp, cplx(-s, s), 1e-6));
  CHECK(close(mm, cplx(s, -s), 1e-6));
  CHECK(close(m_plus(I, v, 0.0, 80.0, cfg).m(), mp, 1e-6));
  CHECK(initialization_gap(I, v, WeylSide::plus, 0.0, 40.0, cfg) < 1e-10);

  const auto g = green_diag(I, v, 0.0, 40.0, cfg);
  CHECK(close(g.G, cplx(std::sqrt(2.0) / 4, std::sqrt(2.0) / 4), 1e-6));
  CHECK(std::abs(g.dGdx) < 1e-6);

  const auto gc = green_diag(-I, v, 0.0, 40.0, cfg);
  CHECK(close(gc.G, std::conj(g.G), 1e-9));
}

TEST_CASE("real lambda in the gap below the free spectrum") {
  const auto v = free_triple();
  const auto cfg = WeylConfig::defaults_for(v);
  const auto mp = m_plus(-1.0, v, 0.0, std::nullopt, cfg);
  const auto mm = m_minus(-1.0, v, 0.0, std::nullopt, cfg);
  CHECK(close(mp.m(), -1.0, 1e-6));
  CHECK(close(mm.m(), 1.0, 1e-6));
  CHECK(std::abs(mm.m().imag()) <= 1e-8);
  const auto g = green_diag(-1.0, v, 0.0, std::nullopt, cfg);
  CHECK(close(g.G, 0.5, 1e-6));
  CHECK(std::abs(g.dGdx) < 1e-6);
  CHECK(count_green_zeros(-1.0, v, 50.0, std::nullopt, cfg) == 0);
}

TEST_CASE("reflection symmetry") {
  // r = 2 + cos x, q = cos 2x, w = 1.5 - 0.5 cos x are even
  const auto b = base1();
  const CoefficientTriple v(TrigPolynomial(b, 2.0, {{kvec({1}), 1.0, 0.0}}),
                            TrigPolynomial(b, 0.0, {{kvec({2}), 1.0, 0.0}}),
                            TrigPolynomial(b, 1.5, {{kvec({1}), -0.5, 0.0}}));
  const auto cfg = WeylConfig::defaults_for(v);
  const cplx z(0.8, 0.5);
  CHECK(close(m_minus(z, v, 0.0, std::nullopt, cfg).m(), -m_plus(z, v, 0.0, std::nullopt, cfg).m(), 1e-7));
}

TEST_CASE("limit point forgetting") {
  for (const auto& v : {free_triple(), fig1()}) {
    const auto cfg = WeylConfig::defaults_for(v);
    for (auto side : {WeylSide::plus, WeylSide::minus})
      CHECK(initialization_gap(cplx(1.0, 1.0), v, side, 0.0, 40.0, cfg) <= 1e-6);
  }
  const auto v = fig1();
  auto cfg = WeylConfig::defaults_for(v);
  cfg.decay_tol = 1e-12;
  CHECK_THROWS_AS(m_plus(cplx(1.0, 0.01), v, 0.0, 1.0, cfg), NotDecayed);
}

TEST_CASE("herglotz signs along x") {
  for (const auto& v : {free_triple(), fig1(), fig2()}) {
    const auto cfg = WeylConfig::defaults_for(v);
    std::vector<double> xs;
    for (int i = 0; i <= 40; ++i) xs.push_back(-10.0 + 0.5 * i);
    for (cplx z : {cplx(1.0, 1.0), cplx(0.2, 0.3), cplx(5.0, 2.0)}) {
      for (const auto& row : green_profile(z, v, xs, std::nullopt, cfg)) {
        CHECK(row.herglotz_ok);
        CHECK(row.plus.m().imag() > 0.0);
        CHECK(row.minus.m().imag() < 0.0);
        CHECK(row.green.G.imag() > 0.0);
      }
    }
  }
}

TEST_CASE("shift covariance") {
  const std::vector<double> xs{0.0, 0.7, 1.9, 3.3, 5.0};
  const auto f = fig1();
  const auto cf = WeylConfig::defaults_for(f);
  CHECK(check_shift_covariance(cplx(1.0, 1.0), f, 0.0, xs, std::nullopt, cf) == 0.0);
  CHECK(check_shift_covariance(cplx(1.0, 1.0), f, 2 * pi, xs, std::nullopt, cf) <= 1e-6);
  const auto v = free_triple();
  CHECK(check_shift_covariance(cplx(0.5, 0.5), v, 3.7, xs, std::nullopt, WeylConfig::defaults_for(v)) <= 1e-8);
  const auto dev = almost_period_scan(cplx(1.0, 1.0), f, {0.0, 2 * pi, 1.0}, xs, std::nullopt, cf);
  REQUIRE(dev.size() == 3);
  CHECK(dev[0].dev_G == 0.0);
  CHECK(dev[1].dev_G <= 1e-6);
  CHECK(dev[2].dev_G > 1e-3);
}

TEST_CASE("green zeros in a fig1 gap") {
  const auto v = fig1();
  const auto cfg = WeylConfig::defaults_for(v);
  const double lambda = 0.18;  // Hill discriminant gap (-0.0149, 0.4920), rho = 1
  const double X = 60.0;
  const auto zeros = green_diagonal_zeros(lambda, v, X, 0.05, std::nullopt, cfg);
  REQUIRE(!zeros.empty());
  for (const auto& z : zeros) CHECK(std::abs(std::abs(z.dGdx) - z.r) <= 1e-3);

  const auto n = count_green_zeros(lambda, v, X, std::nullopt, cfg);
  CHECK(std::abs(pi * static_cast<double>(n) / X - 2.0) <= 2 * (2 * pi / X));
  CHECK(count_green_zeros(lambda, v, 2 * X, std::nullopt, cfg) >= n);
}
