// End-to-end acceptance run: ten numbered checks covering the certified
// complex dynamics, the exact non-archimedean limit, homogenization, the
// Monge-Ampere measure and the degeneration experiments. Each check prints
// one PASS/FAIL line; the exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "henon/complex_dynamics.hpp"
#include "henon/family.hpp"
#include "henon/homogenization.hpp"
#include "henon/hybrid.hpp"
#include "henon/laurent.hpp"
#include "henon/measure.hpp"
#include "henon/na_dynamics.hpp"

using namespace henon;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d. %s — %s\n", pass ? "PASS" : "FAIL", idx, name, detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

LaurentPoly lp(long exp, long num, long den = 1) {
  return LaurentPoly::term(exp, CRat(Rat(num) / Rat(den), Rat(0)));
}

// The three benchmark families, all genuinely degenerating at t = 0:
//   A: p = x^2 + t,     a = t^{-1}
//   B: p = x^2 - 1,     a = t^2
//   C: p = x^2 + t^{-1}, a = t
struct NamedFamily {
  const char* name;
  HenonFamily f;
};

std::vector<NamedFamily> benchmark_families() {
  return {
      {"A", HenonFamily(2, {LaurentPoly(), lp(1, 1)}, lp(-1, 1))},
      {"B", HenonFamily(2, {LaurentPoly(), lp(0, -1)}, lp(2, 1))},
      {"C", HenonFamily(2, {LaurentPoly(), lp(-1, 1)}, lp(1, 1))},
  };
}

// ---------------------------------------------------------------------------
// 1. forward/backward degree-d sandwich on the escape wedges

void check_sandwich() {
  const auto t0 = std::chrono::steady_clock::now();
  int violations = 0;
  long checked_plus = 0, checked_minus = 0;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979324);

  for (const auto& nf : benchmark_families()) {
    for (const double tv : {0.5, 0.05, 0.005}) {
      const ComplexHenon h = nf.f.at(C(tv, 0.0));
      std::uniform_real_distribution<double> inner(0.0, h.R);
      std::uniform_real_distribution<double> outer(1.0, 4.0);
      const auto polar = [&](double m) { return std::polar(m, angle(rng)); };

      for (int i = 0; i < 100000; ++i) {
        // V+ sample: |x| above both R and |y|
        const C y = polar(inner(rng));
        const C x = polar(std::max(h.R, std::abs(y)) * outer(rng));
        if (h.classify(x, y) != Region::VPlus) continue;
        ++checked_plus;
        const auto [fx, fy] = h.apply(x, y);
        const double n = std::max(std::abs(fx), std::abs(fy));
        const double xd = std::pow(std::abs(x), h.d);
        if (n < (1 - h.delta) * xd || n > (1 + h.delta) * xd) ++violations;
      }
      for (int i = 0; i < 100000; ++i) {
        // V- sample: |y| above both R and |x|
        const C x = polar(inner(rng));
        const C y = polar(std::max(h.R, std::abs(x)) * outer(rng));
        if (h.classify(x, y) != Region::VMinus) continue;
        ++checked_minus;
        const auto [bx, by] = h.apply_inverse(x, y);
        const double n = std::max(std::abs(bx), std::abs(by));
        const double yd = std::pow(std::abs(y), h.d) / std::abs(h.a);
        if (n < (1 - h.delta) * yd || n > (1 + h.delta) * yd) ++violations;
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%ld V+ and %ld V- points, %d violations of the (1±δ) bounds (%.1fs)",
                checked_plus, checked_minus, violations, seconds_since(t0));
  report(1, "degree-d sandwich on the escape wedges", violations == 0, buf);
}

// ---------------------------------------------------------------------------
// 2. uniform convergence rate of the Green approximants along the ladder

void check_uniformity() {
  const auto t0 = std::chrono::steady_clock::now();
  const double r = 0.5;
  const HybridBase base(r, {C(r, 0), C(r * r, 0), C(std::pow(r, 4), 0), C(std::pow(r, 8), 0)});
  int violations = 0;
  double worst_spread = 0.0;
  for (const auto& nf : benchmark_families()) {
    const DegenerationReport rep = run_green_uniformity(nf.f, base, 2, 8, 2000, 1);
    violations += rep.violations;
    // rows are t-major: row index = rung * 7 + (n - 2)
    for (int n = 0; n < 7; ++n) {
      double lo = 1e300, hi = 0.0;
      for (std::size_t rung = 0; rung < base.t_samples.size(); ++rung) {
        const double ratio = rep.rows[rung * 7 + n][3];
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      if (lo > 0.0) worst_spread = std::max(worst_spread, hi / lo);
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "sup gap / log|t|^-1 vs (α+β)/d^n: %d violations; worst ladder spread %.2fx "
                "(%.1fs)",
                violations, worst_spread, seconds_since(t0));
  report(2, "uniform Green convergence across the ladder", violations == 0 && worst_spread < 3.0,
         buf);
}

// ---------------------------------------------------------------------------
// 3. non-archimedean escape-rate exactness

void check_na_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> exp_dist(-6, 2);
  std::uniform_int_distribution<long> num_dist(-9, 9);
  int escaping = 0, stable = 0;
  // keep a fixed window of exact leading terms: ord() stays certified while
  // coefficient sizes stay polynomial instead of doubling every squaring
  const auto trim = [](NAPoint& pt) {
    for (TruncatedSeries* s : {&pt.x, &pt.y})
      if (s->order_known() && s->ord()) *s = s->truncated(*s->ord() + 24);
  };
  const auto fams = benchmark_families();
  std::size_t which = 0;
  while (escaping < 1000) {
    const HenonFamily& f = fams[which % fams.size()].f;
    ++which;
    const long rho = na_radius_ord(f);
    TruncatedSeries xs, ys;
    long n1 = num_dist(rng), n2 = num_dist(rng);
    if (n1 == 0) n1 = 1;
    const long e1 = exp_dist(rng);
    xs.set(e1, CRat(Rat(n1), Rat(0)));
    if (n2 != 0) xs.set(e1 + 1 + (exp_dist(rng) & 3), CRat(Rat(n2), Rat(0)));
    long n3 = num_dist(rng);
    if (n3 != 0) ys.set(exp_dist(rng), CRat(Rat(n3), Rat(0)));
    NAPoint p(xs, ys, 0.5);

    // iterate until V+ entry, then five more exact steps
    int entry = -1;
    for (int n = 0; n <= 10; ++n) {
      const ValPoint w = na_val(p);
      if (w.u && na_classify(f, w, rho) == Region::VPlus) {
        entry = n;
        break;
      }
      p = na_apply(f, p);
      trim(p);
    }
    if (entry < 0) continue;
    ++escaping;
    const Rat q0 = -Rat(*p.x.ord()) / Rat(1L << entry);
    bool ok = true;
    NAPoint q = p;
    for (int k = 1; k <= 5; ++k) {
      q = na_apply(f, q);
      trim(q);
      const Rat qk = -Rat(*q.x.ord()) / Rat(1L << (entry + k));
      if (qk != q0) ok = false;
    }
    if (ok) ++stable;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%d escaping points, %d with -ord(x_n)/d^n the same exact rational over "
                "escape..escape+5 (%.1fs)",
                escaping, stable, seconds_since(t0));
  report(3, "exact rational escape rate stability", stable == escaping, buf);
}

// ---------------------------------------------------------------------------
// 4. tropical filtration invariance

void check_filtration() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> num(-32, 32);
  std::uniform_int_distribution<long> den(1, 4);
  int violations = 0, ties = 0;
  long checked = 0;
  for (const auto& nf : benchmark_families()) {
    const long rho = na_radius_ord(nf.f);
    std::vector<ValPoint> sample;
    sample.reserve(10000);
    for (int i = 0; i < 10000; ++i)
      sample.push_back({Rat(num(rng)) / Rat(den(rng)), Rat(num(rng)) / Rat(den(rng))});
    const FiltrationReport fr = na_filtration_check(nf.f, sample, rho);
    violations += fr.violations;
    ties += fr.ties;
    checked += fr.checked;

    // backward invariance of V-
    const auto ords = nf.f.coeff_orders();
    const auto oa = nf.f.ord_a();
    for (const auto& w : sample) {
      if (na_classify(nf.f, w, rho) != Region::VMinus) continue;
      ++checked;
      try {
        const ValPoint b = tropical_step_inverse(w, ords, oa, nf.f.d);
        if (na_classify(nf.f, b, rho) != Region::VMinus) ++violations;
      } catch (const TropicalTie&) {
        ++ties;
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%ld inclusions checked (%d generic ties skipped), %d violations (%.1fs)",
                checked, ties, violations, seconds_since(t0));
  report(4, "valuation filtration invariance", violations == 0, buf);
}

// ---------------------------------------------------------------------------
// 5. homogenized iterate structure (exact symbolic)

void check_homogenization() {
  const auto t0 = std::chrono::steady_clock::now();
  const LaurentPoly one = LaurentPoly::constant(CRat(1));
  bool ok = true;
  std::string why = "all exact";
  for (const auto& nf : benchmark_families()) {
    for (int n = 1; n <= 3 && ok; ++n) {
      HomogeneousDatum dat;
      try {
        dat = homogenize_datum(nf.f, n);  // structural throws on failure
      } catch (const StructureViolation& e) {
        ok = false;
        why = std::string("structure violation: ") + e.what();
        break;
      }
      const long deg = 1L << n;
      for (const auto& sec : dat.sections)
        if (!sec.num.is_zero() && !sec.num.homogeneous_of_degree(deg)) ok = false;
      // leading monomials
      if (!(dat.sections[0].num.coeff(deg, 0, 0) == one)) ok = false;
      if (!(dat.sections[3].num.coeff(0, deg, 0) == one)) ok = false;
      // Z = 0 slice must collapse to (X^deg, 0, 0, Y^deg, 0), exactly
      for (int s = 0; s < 5; ++s) {
        for (const auto& [key, c] : dat.sections[s].num.terms()) {
          if (key[2] != 0) continue;  // term carries a Z factor
          const bool expected = (s == 0 && key[0] == deg && key[1] == 0 && c == one) ||
                                (s == 3 && key[0] == 0 && key[1] == deg && c == one);
          if (!expected) ok = false;
        }
      }
      if (!ok) why = std::string("family ") + nf.name + " at n=" + std::to_string(n);
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "degrees 2,4,8 over 3 families: %s (%.1fs)", why.c_str(),
                seconds_since(t0));
  report(5, "homogeneous datum structure", ok, buf);
}

// ---------------------------------------------------------------------------
// 6. model-function / Green chart identity

void check_model_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  const double r = 0.5;
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  long checked = 0, exact_fallbacks = 0;
  int violations = 0;
  double worst = 0.0;

  const HenonFamily f = benchmark_families()[0].f;  // family A
  for (int n = 1; n <= 3; ++n) {
    const HomogeneousDatum dat = homogenize_datum(f, n);
    const double dn = std::pow(2.0, n);
    for (int rung = 0; rung < 4; ++rung) {
      const double tv = std::pow(r, 1 << rung);
      const ComplexHenon h = f.at(C(tv, 0.0));
      for (int i = 0; i < 10000; ++i) {
        const C x(box(rng), box(rng)), y(box(rng), box(rng));
        const double phi = model_function_phi(f, dat, x, y, C(1.0, 0.0), C(tv, 0.0));
        const double gp = green_n(h, x, y, n, +1);
        const double gm = green_n(h, x, y, n, -1);
        const double gn = std::max(gp, gm);
        const double fs = 0.5 * std::log(std::norm(x) + std::norm(y) + 1.0);
        const double resid = std::abs(phi / dn - gn + fs);
        ++checked;
        worst = std::max(worst, resid);
        if (resid <= 1e-12) continue;
        // double round-off exceeded the target: settle the identity exactly.
        // log max|s| of the datum equals d^n * G_n by construction, so the
        // two max arguments must agree as exact rationals.
        ++exact_fallbacks;
        const CRat xe{std::complex<double>(x)}, ye{std::complex<double>(y)};
        const CRat te{std::complex<double>(tv, 0.0)};
        const CRat ae = f.a.eval_exact(te);
        Rat max_sec(0);
        for (const auto& sec : dat.sections) {
          Rat m = sec.num.eval_exact(xe, ye, CRat(1), te).abs2();
          if (sec.apow > 0) m /= pow(ae, static_cast<unsigned long>(sec.apow)).abs2();
          if (m > max_sec) max_sec = m;
        }
        ExactHenon eh;
        eh.d = f.d;
        eh.a = ae;
        for (const auto& ci : f.a_coeffs) eh.ai.push_back(ci.eval_exact(te));
        CRat fx = xe, fy = ye, bx = xe, by = ye;
        Rat max_orb(1);
        for (int k = 0; k < n; ++k) {
          std::tie(fx, fy) = eh.apply(fx, fy);
          // backward step (x,y) -> (y, (p(y) - x)/a), exact
          CRat py = pow(by, static_cast<unsigned long>(eh.d));
          for (int j = 1; j <= eh.d; ++j)
            py += eh.ai[static_cast<std::size_t>(j - 1)] *
                  pow(by, static_cast<unsigned long>(eh.d - j));
          const CRat nbx = by, nby = (py - bx) / ae;
          bx = nbx;
          by = nby;
        }
        for (const Rat& m : {fx.abs2(), fy.abs2(), bx.abs2(), by.abs2()})
          if (m > max_orb) max_orb = m;
        if (max_sec != max_orb) ++violations;
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%ld points (n<=3, 4 rungs); worst double residual %.1e, %ld settled exactly, "
                "%d exact mismatches (%.1fs)",
                checked, worst, exact_fallbacks, violations, seconds_since(t0));
  report(6, "model function equals the Green chart potential", violations == 0, buf);
}

// ---------------------------------------------------------------------------
// 7. total Lyapunov exponent identity

void check_total_lyapunov() {
  const auto t0 = std::chrono::steady_clock::now();
  const HybridBase base = HybridBase::default_ladder(0.5);
  double worst = 0.0;
  int failures = 0;
  for (const auto& nf : benchmark_families()) {
    for (const auto& t : base.t_samples) {
      const ComplexHenon h = nf.f.at(t);
      // anchored non-escaping orbit at the strongest saddle fixed point
      const auto fps = fixed_points(h);
      C best = fps.front();
      for (const auto& fp : fps)
        if (std::abs(h.dp(fp)) > std::abs(h.dp(best))) best = fp;
      const LyapunovResult lr = lyapunov_qr(h, best, best, 10000, 0.0, 1);
      worst = std::max(worst, lr.sum_residual);
      if (lr.sum_residual > 1e-6) ++failures;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "λ1+λ2 vs log|a(t)| over 10^4-step anchored orbits, worst residual %.1e (%.1fs)",
                worst, seconds_since(t0));
  report(7, "total Lyapunov exponent equals log|a(t)|", failures == 0, buf);
}

// ---------------------------------------------------------------------------
// 8. degeneration slope of the total exponent

void check_lyapunov_slope() {
  const auto t0 = std::chrono::steady_clock::now();
  const HybridBase base = HybridBase::default_ladder(0.5);
  bool ok = true;
  double final_worst = 0.0;
  for (const auto& nf : benchmark_families()) {
    const long orda = *nf.f.ord_a();
    double prev = 1e300;
    double resid = 0.0;
    for (const auto& t : base.t_samples) {
      const ComplexHenon h = nf.f.at(t);
      const auto fps = fixed_points(h);
      C best = fps.front();
      for (const auto& fp : fps)
        if (std::abs(h.dp(fp)) > std::abs(h.dp(best))) best = fp;
      const LyapunovResult lr = lyapunov_qr(h, best, best, 10000, 0.0, 1);
      const double lt = -std::log(std::abs(t));
      const double slope = (lr.lambda1 + lr.lambda2) / lt;
      resid = std::abs(slope - static_cast<double>(-orda));
      // monotone decrease until the QR round-off floor: with monomial a(t) the
      // slope is exact at every rung, so residuals jitter around ~1e-8
      if (resid > std::max(prev, 1e-6)) ok = false;
      prev = resid;
    }
    final_worst = std::max(final_worst, resid);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "slopes (λ1+λ2)/log|t|^-1 → -ord(a), monotone residuals, final %.1e (%.1fs)",
                final_worst, seconds_since(t0));
  report(8, "Lyapunov degeneration slope", ok && final_worst < 0.05, buf);
}

// ---------------------------------------------------------------------------
// 9. Monge-Ampere calibration

void check_ma_calibration() {
  const auto t0 = std::chrono::steady_clock::now();
  // toric model at fixed absolute smoothing, resolution ladder
  std::vector<double> masses;
  for (const int res : {16, 24, 32}) {
    GridSpec gs;
    for (int a = 0; a < 4; ++a) {
      gs.lo[a] = -3.0;
      gs.hi[a] = 3.0;
    }
    gs.n_per_axis = res;
    gs.smoothing_eps = 0.3;
    const GreenField f = sample_field(
        gs, [](C x, C y) { return std::log(std::max({std::abs(x), std::abs(y), 1.0})); });
    masses.push_back(ma_measure(f).total_mass);
  }
  const bool monotone = std::abs(masses[1] - 1.0) <= std::abs(masses[0] - 1.0) &&
                        std::abs(masses[2] - 1.0) <= std::abs(masses[1] - 1.0);
  const bool window = masses[2] > 0.85 && masses[2] < 1.15;

  // one genuine Henon map at the default grid
  const HenonFamily classical(2, {LaurentPoly(), lp(0, -1)}, lp(0, 1));
  const ComplexHenon h = classical.at(C(0.5, 0.0));
  const GreenField hf = build_green_grid(h, default_grid(h, 16));
  const GridMeasure hm = ma_measure(hf);
  const bool henon_ok = hm.total_mass > 0.8 && hm.total_mass < 1.2 && hm.clipped_mass < 0.1;

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "toric mass %.3f → %.3f → %.3f (target 1); Henon mass %.3f, clipped %.3f (%.1fs)",
                masses[0], masses[1], masses[2], hm.total_mass, hm.clipped_mass,
                seconds_since(t0));
  report(9, "Monge-Ampere calibration", monotone && window && henon_ok, buf);
}

// ---------------------------------------------------------------------------
// 10. measure convergence along the ladder

void check_measure_convergence() {
  const auto t0 = std::chrono::steady_clock::now();
  const HenonFamily f = benchmark_families()[0].f;  // family A: clean vertex
  const HybridBase base = HybridBase::default_ladder(0.5);
  const std::vector<HybridObservable> obs = {
      {"max_log", [](double lx, double ly) { return std::max(lx, ly); }},
      {"sum_log", [](double lx, double ly) { return lx + ly; }},
      {"exp_gap", [](double lx, double ly) { return std::exp(-std::abs(lx - ly)); }},
  };
  MeasureConvergenceParams params;
  params.resolution = 12;
  const DegenerationReport rep = run_measure_convergence(f, base, obs, params);

  // reassemble per-observable pairing sequences from the rows
  const std::size_t rungs = base.t_samples.size();
  bool decreasing = true, predicted = true;
  double worst_rel = 0.0;
  for (std::size_t oi = 0; oi < obs.size(); ++oi) {
    std::vector<double> p;
    for (std::size_t k = 0; k < rungs; ++k) p.push_back(rep.rows[k * obs.size() + oi][2]);
    for (std::size_t k = rungs - 3; k + 1 < rungs; ++k)
      if (std::abs(p[k + 1] - p[k]) >= std::abs(p[k] - p[k - 1])) decreasing = false;
    const double pred = rep.rows[(rungs - 1) * obs.size() + oi][3];
    const double rel = std::abs(p.back() - pred) / std::max(std::abs(pred), 1e-12);
    worst_rel = std::max(worst_rel, rel);
    if (rel > 0.10) predicted = false;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "gaps strictly decreasing on the last 3 rungs: %s; final pairings within %.1f%% "
                "of the tropical prediction (%.1fs)",
                decreasing ? "yes" : "no", 100.0 * worst_rel, seconds_since(t0));
  report(10, "measure pairings stabilize to the tropical limit", decreasing && predicted, buf);
}

}  // namespace

int main() {
  std::printf("acceptance run: certified Henon degeneration toolkit\n");
  check_sandwich();
  check_uniformity();
  check_na_exactness();
  check_filtration();
  check_homogenization();
  check_model_identity();
  check_total_lyapunov();
  check_lyapunov_slope();
  check_ma_calibration();
  check_measure_convergence();
  if (g_failures == 0)
    std::printf("all 10 acceptance checks passed\n");
  else
    std::printf("%d acceptance check(s) failed\n", g_failures);
  return g_failures;
}
