#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "henon/family.hpp"
#include "henon/measure.hpp"

using namespace henon;

namespace {

LaurentPoly t_pow(long e, long num = 1, long den = 1) {
  return LaurentPoly::term(e, CRat(Rat(num, den), Rat(0)));
}

LaurentPoly lconst(long v) { return LaurentPoly::constant(CRat(Rat(v), Rat(0))); }

ComplexHenon std_henon(double aval = 1.0) {
  HenonFamily f(2, {LaurentPoly(), lconst(-1)}, lconst(1));
  ComplexHenon h = f.at({0.5, 0.0});
  h.a = C(aval, 0.0);
  return h;
}

GridSpec unit_box(int res, double eps) {
  GridSpec gs;
  for (int a = 0; a < 4; ++a) {
    gs.lo[a] = -2.0;
    gs.hi[a] = 2.0;
  }
  gs.n_per_axis = res;
  gs.smoothing_eps = eps;
  return gs;
}

}  // namespace

TEST_CASE("grid bookkeeping") {
  GridSpec gs = unit_box(8, 0.25);
  gs.validate();
  CHECK(gs.step(0) == doctest::Approx(0.5));
  CHECK(gs.cell_volume() == doctest::Approx(0.0625));
  CHECK(gs.node_count() == 4096);
  CHECK(gs.coord(0, 0) == doctest::Approx(-1.75));
  GridSpec bad = unit_box(4, 0.25);
  CHECK_THROWS(bad.validate());

  GreenField f = sample_field(gs, [](C, C) { return 1.0; });
  CHECK(f.values.size() == 4096);
  CHECK(f.at(3, 1, 0, 7) == 1.0);
}

TEST_CASE("toric calibration: log+ max norm mass approaches 1 with resolution") {
  // the model potential of the torus measure; total mass exactly 1 in the
  // limit. Fixed smoothing width, growing resolution: the error shrinks.
  double err16 = 0.0, err24 = 0.0;
  for (const int res : {16, 24}) {
    GridSpec gs;
    for (int a = 0; a < 4; ++a) {
      gs.lo[a] = -3.0;
      gs.hi[a] = 3.0;
    }
    gs.n_per_axis = res;
    gs.smoothing_eps = 0.3;
    const GreenField f = sample_field(
        gs, [](C x, C y) { return std::log(std::max({std::abs(x), std::abs(y), 1.0})); });
    const GridMeasure m = ma_measure(f);
    CHECK(m.total_mass == doctest::Approx(1.0).epsilon(0.2));
    (res == 16 ? err16 : err24) = std::abs(m.total_mass - 1.0);
  }
  CHECK(err24 < err16);
}

TEST_CASE("calibration transfers to a rescaled torus on another box") {
  // u(x,y) = log+ max{|2x|,|2y|}: same total mass 1, supported on the torus
  // of radius 1/2; box and smoothing width differ from the reference setup
  GridSpec gs;
  for (int a = 0; a < 4; ++a) {
    gs.lo[a] = -1.5;
    gs.hi[a] = 1.5;
  }
  gs.n_per_axis = 24;
  gs.smoothing_eps = 0.15;
  const GreenField f = sample_field(gs, [](C x, C y) {
    return std::log(std::max({2.0 * std::abs(x), 2.0 * std::abs(y), 1.0}));
  });
  const GridMeasure m = ma_measure(f);
  CHECK(m.total_mass == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("pluriharmonic fields carry no mass") {
  GridSpec gs = unit_box(16, 0.3);
  // Re(x) + Im(y) and log|x - 4| (x stays away from 4 in this box)
  const GreenField f1 =
      sample_field(gs, [](C x, C y) { return x.real() + 2.0 * y.imag(); });
  CHECK(ma_measure(f1).total_mass < 1e-10);
  const GreenField f2 =
      sample_field(gs, [](C x, C y) { return std::log(std::abs(x - 4.0)); });
  CHECK(ma_measure(f2).total_mass < 1e-3);
}

TEST_CASE("mass scales quadratically with the potential") {
  // (dd^c (c u))^2 = c^2 (dd^c u)^2
  GridSpec gs = unit_box(16, 0.35);
  auto u = [](C x, C y) { return std::log(std::max({std::abs(x), std::abs(y), 1.0})); };
  const double m1 = ma_measure(sample_field(gs, u)).total_mass;
  const double m3 = ma_measure(sample_field(gs, [&](C x, C y) { return 3.0 * u(x, y); }))
                        .total_mass;
  CHECK(m3 == doctest::Approx(9.0 * m1).epsilon(1e-9));
}

TEST_CASE("integration against the grid measure") {
  GridSpec gs = unit_box(16, 0.25);
  const GreenField f = sample_field(
      gs, [](C x, C y) { return std::log(std::max({std::abs(x), std::abs(y), 1.0})); });
  const GridMeasure m = ma_measure(f);
  // the pairing is mass-normalized: constants integrate to themselves
  const double one = integrate(m, [](C, C) { return 1.0; });
  CHECK(one == doctest::Approx(1.0));
  // linearity
  auto g1 = [](C x, C) { return x.real(); };
  auto g2 = [](C, C y) { return std::abs(y); };
  const double lhs = integrate(m, [&](C x, C y) { return 2.0 * g1(x, y) - g2(x, y); });
  CHECK(lhs == doctest::Approx(2.0 * integrate(m, g1) - integrate(m, g2)).epsilon(1e-12));
  // the toric model measure is supported on the unit torus |x| = |y| = 1
  const double avg = integrate(m, [](C x, C y) {
    return std::max(std::abs(std::abs(x) - 1.0), std::abs(std::abs(y) - 1.0));
  });
  CHECK(avg < 0.6);
}

TEST_CASE("green field of the standard map is finite and plausible") {
  const ComplexHenon h = std_henon();
  GridSpec gs = default_grid(h, 8, 0.5);
  const GreenField f = build_green_grid(h, gs);
  double mx = 0.0;
  for (double v : f.values) {
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
    mx = std::max(mx, v);
  }
  CHECK(mx > 1.0);
}

TEST_CASE("lyapunov exponents at an anchored fixed point") {
  // p = x^2 - 1, a = 1: fixed saddle at x = 1 + sqrt(2); DH eigenvalues are
  // the roots of s^2 - 2x s + 1 = 0, product 1, so lambda1 = -lambda2
  const ComplexHenon h = std_henon();
  const double xf = 1.0 + std::sqrt(2.0);
  const double expect = std::log(xf + std::sqrt(xf * xf - 1.0));
  // the QR estimate carries an O(1/n) transient from the initial frame
  const LyapunovResult r = lyapunov_qr(h, C(xf, 0), C(xf, 0), 100000, 0.0, 1);
  CHECK(r.lambda1 == doctest::Approx(expect).epsilon(1e-5));
  CHECK(r.lambda2 == doctest::Approx(-expect).epsilon(1e-5));
  CHECK(r.sum_residual < 1e-9);
  CHECK(r.lambda1 >= r.lambda2);
}

TEST_CASE("lyapunov sum identity for dissipative parameters") {
  // lambda1 + lambda2 = log|det DH| = log|a| along any orbit
  const ComplexHenon h = std_henon(0.3);
  const std::vector<C> fps = fixed_points(h);
  REQUIRE(fps.size() == 2);
  for (const C& z : fps) {
    const LyapunovResult r = lyapunov_qr(h, z, z, 3000, 0.0, 1);
    CHECK(r.lambda1 + r.lambda2 == doctest::Approx(std::log(0.3)).epsilon(1e-8));
    CHECK(r.sum_residual < 1e-8);
    CHECK(r.lambda1 >= r.lambda2);
  }
}

TEST_CASE("fixed points solve the fixed point equation") {
  const ComplexHenon h = std_henon(0.7);
  for (const C& z : fixed_points(h)) {
    const auto [fx, fy] = h.apply(z, z);
    CHECK(std::abs(fx - z) < 1e-10);
    CHECK(std::abs(fy - z) < 1e-10);
  }
}

TEST_CASE("measure-averaged expansion dominates the anchored rate") {
  const ComplexHenon h = std_henon();
  GridSpec gs = default_grid(h, 12, 0.5);
  const GreenField f = build_green_grid(h, gs);
  const GridMeasure m = ma_measure(f);
  CHECK(m.total_mass > 0.1);
  const double avg = lyapunov_measure_avg(h, m, 12);
  // the maximal exponent of the invariant measure is at least log 2 for
  // perturbations of the quadratic family; the finite-horizon norm average
  // overestimates it (cells that escape contribute superexponential growth)
  // but must stay finite and comfortably positive
  CHECK(avg > 0.3);
  CHECK(std::isfinite(avg));
}

TEST_CASE("csv and summary outputs") {
  GridSpec gs = unit_box(8, 0.5);
  const GreenField f = sample_field(
      gs, [](C x, C y) { return std::log(std::max({std::abs(x), std::abs(y), 1.0})); });
  const GridMeasure m = ma_measure(f);
  std::ostringstream csv;
  write_measure_csv(m, csv);
  CHECK(csv.str().rfind("re_x,im_x,re_y,im_y,weight", 0) == 0);
  std::ostringstream js;
  write_measure_summary_json(m, js);
  CHECK(js.str().find("\"total_mass\"") != std::string::npos);
  CHECK(js.str().find("\"resolution\": 8") != std::string::npos);
}
