#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "henon/complex_dynamics.hpp"
#include "henon/family.hpp"

using namespace henon;

namespace {

LaurentPoly t_pow(long e, long num = 1, long den = 1) {
  return LaurentPoly::term(e, CRat(Rat(num, den), Rat(0)));
}

LaurentPoly one() { return LaurentPoly::constant(CRat(1)); }

}  // namespace

TEST_CASE("family invariants") {
  CHECK_THROWS_AS(HenonFamily(1, {t_pow(0)}, t_pow(0)), DegenerateFamily);
  CHECK_THROWS_AS(HenonFamily(2, {LaurentPoly(), t_pow(0)}, LaurentPoly()), DegenerateFamily);
  CHECK_THROWS_AS(HenonFamily(2, {LaurentPoly(), t_pow(0)}, t_pow(0), 0.5), DegenerateFamily);
}

TEST_CASE("specialization carries the filtration constants") {
  // p = x^2 + t, a = t^{-1}, c = 5
  HenonFamily f(2, {LaurentPoly(), t_pow(1)}, t_pow(-1));
  const ComplexHenon h = f.at({0.5, 0.0});
  CHECK(h.a == C(2.0, 0.0));
  CHECK(h.ai[1] == C(0.5, 0.0));
  // R = 5 max{1, 2, 1/2, 1/4, 0, 1/2} = 10
  CHECK(h.R == doctest::Approx(10.0));
  // delta at c = 5, d = 2: (25 + 25 - 5 - 1)/(125 - 25) = 0.44
  CHECK(h.delta == doctest::Approx(0.44));
  CHECK_THROWS_AS(f.at({0.0, 0.0}), ZeroParameter);
}

TEST_CASE("normalization: already monic is the identity") {
  GeneralFamily g;
  g.d = 2;
  g.coeffs = {one(), LaurentPoly(), t_pow(1)};  // x^2 + t
  g.a = t_pow(2);
  g.b = one();
  const NormalizedFamily n = normalize_family(g);
  CHECK(n.subst_exponent == 1);
  CHECK(n.family.a_coeffs[1] == t_pow(1));
  CHECK(n.family.a == t_pow(2));
  CHECK(verify_normalization(g, n));
}

TEST_CASE("normalization: d = 2 with a0 = t") {
  GeneralFamily g;
  g.d = 2;
  g.coeffs = {t_pow(1), t_pow(0, 3), t_pow(-1)};  // t x^2 + 3x + t^{-1}
  g.a = t_pow(1);
  g.b = one();
  const NormalizedFamily n = normalize_family(g);
  // lambda = t (d-1 = 1, no substitution), a_1' = 3, a_2' = t^{-1} * t = 1
  CHECK(n.family.a_coeffs[0] == t_pow(0, 3));
  CHECK(n.family.a_coeffs[1] == t_pow(0));
  CHECK(verify_normalization(g, n));
}

TEST_CASE("normalization: d = 3 with a0 = t^2 needs t = s^2") {
  GeneralFamily g;
  g.d = 3;
  g.coeffs = {t_pow(2), LaurentPoly(), t_pow(1), t_pow(0)};  // t^2 x^3 + t x + 1
  g.a = t_pow(1);
  g.b = one();
  const NormalizedFamily n = normalize_family(g);
  CHECK(n.subst_exponent == 2);
  // lambda(s)^2 = a0(s^2) = s^4 forces lambda = s^2:
  // a_2'(s) = t(s) lambda^{2-2} = s^2, a_3'(s) = 1 * lambda^{3-2} = s^2
  CHECK(n.family.a_coeffs[1] == t_pow(2));
  CHECK(n.family.a_coeffs[2] == t_pow(2));
  CHECK(n.family.a == t_pow(2));
  CHECK(verify_normalization(g, n));
}

TEST_CASE("normalization: unit part forces a genuine series root") {
  GeneralFamily g;
  g.d = 3;
  g.coeffs = {t_pow(2) + t_pow(3), LaurentPoly(), LaurentPoly(), t_pow(0)};
  g.a = one();
  g.b = t_pow(1);
  const NormalizedFamily n = normalize_family(g, 16);
  // lambda(s)^2 must reproduce a0(s^2) = s^4 + s^6 within the window
  CHECK(verify_normalization(g, n));
  // a(s) = a(s^2) b(s^2) = s^2
  CHECK(n.family.a == t_pow(2));
}

TEST_CASE("normalization rejects degenerate input") {
  GeneralFamily g;
  g.d = 2;
  g.coeffs = {LaurentPoly(), one(), one()};
  g.a = one();
  g.b = one();
  CHECK_THROWS_AS(normalize_family(g), DegenerateFamily);
  g.coeffs[0] = one();
  g.b = LaurentPoly();
  CHECK_THROWS_AS(normalize_family(g), DegenerateFamily);
}
