#include "apsl/coeffile.hpp"
#include "apsl/errors.hpp"
#include "apsl/output.hpp"

#include "common.hpp"

#include <doctest.h>

#include <limits>
#include <random>

using namespace apsl;
using namespace apsl::test;

TEST_CASE("example files") {
  const auto f1 = load_coefficients(APSL_DATA_DIR "/fig1.coef");
  CHECK(f1.triple.r() == fig1().r());
  CHECK(f1.triple.q() == fig1().q());
  CHECK(f1.triple.w() == fig1().w());
  CHECK(module_of(f1.triple).describe() == "Z");

  const auto f2 = load_coefficients(APSL_DATA_DIR "/fig2.coef");
  CHECK(f2.base().dim() == 2);
  CHECK(f2.base().generators()[1] == sqrt2);
  CHECK(module_of(f2.triple).rank() == 2);

  const auto f0 = load_coefficients(APSL_DATA_DIR "/free.coef");
  CHECK(module_of(f0.triple).trivial());
}

TEST_CASE("round trip") {
  for (const char* name : {"/fig1.coef", "/fig2.coef", "/free.coef"}) {
    const auto a = load_coefficients(std::string(APSL_DATA_DIR) + name);
    const auto text = render_coefficients(a);
    const auto b = parse_coefficients(text);
    CHECK(b.triple.r() == a.triple.r());
    CHECK(b.triple.q() == a.triple.q());
    CHECK(b.triple.w() == a.triple.w());
    CHECK(render_coefficients(b) == text);
  }

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto base = base_sqrt2();
  const TrigPolynomial r(base, 5.0, {{kvec({1, 0}), U(rng), U(rng)}, {kvec({-3, 2}), U(rng), U(rng)}});
  const TrigPolynomial q(base, U(rng), {{kvec({0, 1}), U(rng) * 1e-7, U(rng) * 1e5}});
  const TrigPolynomial w(base, 4.0 + U(rng), {{kvec({2, 2}), U(rng), 0.0}});
  const CoefficientTriple v(r, q, w);
  const auto back = parse_coefficients(render_coefficients(v));
  CHECK(back.triple.r() == r);
  CHECK(back.triple.q() == q);
  CHECK(back.triple.w() == w);
}

TEST_CASE("format double") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-1.5e-20) == "-1.5e-20");
  const double x = 1.0 / 3.0;
  CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(std::numbers::sqrt2) == "1.4142135623730951");
}

TEST_CASE("grammar details") {
  const auto f = parse_coefficients(
      "# comment only\n"
      "  [base]  \n"
      "omega=1   # trailing\n"
      "[r]\nconst = 1\n"
      "[w]\n const = 3\n term = \xE2\x88\x92" "1 0 @ 1\n");
  CHECK(f.triple.w().terms().front().cos_amp == -1.0);
  CHECK(f.triple.q().terms().empty());
  CHECK(f.triple.q().constant() == 0.0);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(parse_coefficients("[base]\nomega = 1\n[r]\nconst = 1\n[w]\nconst = 1\nterm = 1 0 @ 1\n"),
                  PositivityError);
  try {
    (void)parse_coefficients("[base]\nomega = 1\n[r]\nconst = 1\n[w]\nconst = 1\nterm = 1 0 @ 1\n");
  } catch (const PositivityError& e) {
    CHECK(e.section() == "w");
  }
  try {
    (void)parse_coefficients("[base]\nomega = 1\n[r]\nconst = 1\nterm = 1 x @ 1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
  }
  CHECK_THROWS_AS(parse_coefficients("[base]\nomega = 1, 2.5\n[r]\nconst = 1\nterm = 0.1 0 @ 1\n[w]\nconst = 1\n"),
                  DimensionError);
  CHECK_THROWS_AS(parse_coefficients("[r]\nconst = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_coefficients("[base]\nomega = 1\n[p]\n"), ParseError);
  CHECK_THROWS_AS(parse_coefficients("[base]\nomega = 0\n"), ParseError);
  CHECK_THROWS_AS(parse_coefficients("omega = 1\n"), ParseError);
  CHECK_THROWS_AS(load_coefficients("/nonexistent/file.coef"), Error);
}
