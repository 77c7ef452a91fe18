#include "henon/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <numbers>
#include <random>

namespace henon {

HybridBase::HybridBase(double rr, std::vector<C> ts) : r(rr), t_samples(std::move(ts)) {
  if (!(r > 0.0 && r < 1.0)) throw InvalidRadius("hybrid base radius must lie in (0,1)");
  double prev = r;
  bool first = true;
  for (const auto& t : t_samples) {
    const double a = std::abs(t);
    if (!(a > 0.0 && a <= r)) throw InvalidRadius("ladder parameter outside (0, r]");
    if (!first && !(a < prev)) throw InvalidRadius("ladder must be strictly decreasing");
    prev = a;
    first = false;
  }
}

HybridBase HybridBase::default_ladder(double r) {
  std::vector<C> ts;
  for (const int e : {1, 2, 4, 8, 16}) ts.emplace_back(std::pow(r, e), 0.0);
  return HybridBase(r, std::move(ts));
}

double tau_norm(const LaurentPoly& f, C t, double r) {
  if (t == C(0.0, 0.0)) return tau_norm_at_zero(f, r);
  const double v = std::abs(f.eval(t));
  if (v == 0.0) return 0.0;
  return std::pow(v, std::log(r) / std::log(std::abs(t)));
}

double tau_norm_at_zero(const LaurentPoly& f, double r) {
  const auto o = f.ord();
  if (!o) return 0.0;
  return std::pow(r, static_cast<double>(*o));
}

double scale_factor(C t, double r) {
  const double a = std::abs(t);
  if (!(a > 0.0 && a < 1.0)) throw InvalidRadius("scale factor needs 0 < |t| < 1");
  return std::log(r) / std::log(a);
}

namespace {

void write_table(const DegenerationReport& rep, std::ostream& os, char sep) {
  os << std::setprecision(17);
  for (std::size_t i = 0; i < rep.columns.size(); ++i)
    os << (i ? std::string(1, sep) : std::string()) << rep.columns[i];
  os << '\n';
  for (const auto& row : rep.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? std::string(1, sep) : std::string()) << row[i];
    os << '\n';
  }
}

}  // namespace

void write_report_csv(const DegenerationReport& rep, std::ostream& os) {
  write_table(rep, os, ',');
}

void write_report_dat(const DegenerationReport& rep, std::ostream& os) {
  os << "# " << rep.experiment << '\n';
  write_table(rep, os, ' ');
}

void write_report_json(const DegenerationReport& rep, std::ostream& os) {
  os << std::setprecision(17) << "{\"experiment\": \"" << rep.experiment
     << "\", \"violations\": " << rep.violations << ", \"columns\": [";
  for (std::size_t i = 0; i < rep.columns.size(); ++i)
    os << (i ? ", " : "") << '"' << rep.columns[i] << '"';
  os << "], \"rows\": [";
  for (std::size_t j = 0; j < rep.rows.size(); ++j) {
    os << (j ? ", [" : "[");
    for (std::size_t i = 0; i < rep.rows[j].size(); ++i) os << (i ? ", " : "") << rep.rows[j][i];
    os << ']';
  }
  os << "], \"notes\": [";
  for (std::size_t i = 0; i < rep.notes.size(); ++i)
    os << (i ? ", " : "") << '"' << rep.notes[i] << '"';
  os << "]}\n";
}

DegenerationReport run_green_uniformity(const HenonFamily& f, const HybridBase& base,
                                        int n_min, int n_max, int sample_size,
                                        std::uint64_t seed) {
  if (n_min < 2 || n_max < n_min) throw BudgetExceeded("iterate range must start at 2");
  DegenerationReport rep;
  rep.experiment = "green_uniformity";
  rep.columns = {"t_abs", "n", "sup_gap", "ratio", "bound", "pass"};

  // the dynamically active region shrinks like a power of |t| while the
  // filtration box grows, so a uniform box sample alone misses it at deep
  // rungs; half the sample takes valuation-uniform magnitudes |t|^w with w
  // spanning the coefficient-order scales
  double wmax = 1.0;
  if (const auto oa = f.ord_a())
    wmax = std::max(wmax, std::abs(static_cast<double>(*oa)) / (f.d - 1));
  const auto ords = f.coeff_orders();
  for (int i = 1; i <= f.d; ++i)
    if (ords[static_cast<size_t>(i - 1)])
      wmax = std::max(wmax, std::abs(static_cast<double>(*ords[static_cast<size_t>(i - 1)])) /
                                static_cast<double>(i));
  wmax += 2.0;

  for (const auto& t : base.t_samples) {
    const ComplexHenon h = f.at(t);
    const UniformityConstants uc = uniformity_constants(h);
    const double lt = -std::log(std::abs(t));
    const int N = n_max + 8;
    const double proxy_tail = (uc.alpha + uc.beta) / std::pow(h.d, N) * lt;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-h.R - 1.0, h.R + 1.0);
    std::uniform_real_distribution<double> wdist(-wmax, wmax);
    std::uniform_real_distribution<double> adist(0.0, 2.0 * std::numbers::pi);
    std::vector<std::pair<C, C>> pts;
    pts.reserve(static_cast<size_t>(sample_size));
    for (int i = 0; i < sample_size; ++i) {
      if (i % 2 == 0) {
        pts.emplace_back(C(dist(rng), dist(rng)), C(dist(rng), dist(rng)));
      } else {
        const C x = std::polar(std::pow(std::abs(t), wdist(rng)), adist(rng));
        const C y = std::polar(std::pow(std::abs(t), wdist(rng)), adist(rng));
        pts.emplace_back(x, y);
      }
    }

    std::vector<double> gN(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double gp = green_n(h, pts[i].first, pts[i].second, N, +1);
      const double gm = green_n(h, pts[i].first, pts[i].second, N, -1);
      gN[i] = std::max(gp, gm);
    }
    for (int n = n_min; n <= n_max; ++n) {
      double sup = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double gp = green_n(h, pts[i].first, pts[i].second, n, +1);
        const double gm = green_n(h, pts[i].first, pts[i].second, n, -1);
        sup = std::max(sup, std::abs(gN[i] - std::max(gp, gm)));
      }
      const double ratio = sup / lt;
      const double bound = (uc.alpha + uc.beta) / std::pow(h.d, n);
      const bool pass = sup <= bound * lt + proxy_tail;
      if (!pass) ++rep.violations;
      rep.rows.push_back({std::abs(t), static_cast<double>(n), sup, ratio, bound,
                          pass ? 1.0 : 0.0});
    }
  }
  return rep;
}

TropicalVertex tropical_vertex(const HenonFamily& f) {
  TropicalVertex v{Rat(0), true};
  const auto oa = f.ord_a();
  if (!oa) throw ZeroDivision("tropical vertex of a degenerate family");
  v.u = Rat(*oa) / Rat(f.d - 1);
  // the balance d*u = ord(a) + u must not be undercut by a_i terms at u
  const Rat balance = Rat(f.d) * v.u;
  const auto ords = f.coeff_orders();
  for (int i = 1; i <= f.d; ++i) {
    const auto& oi = ords[static_cast<size_t>(i - 1)];
    if (oi && Rat(*oi) + Rat(f.d - i) * v.u < balance) v.clean = false;
  }
  return v;
}

DegenerationReport run_measure_convergence(const HenonFamily& f, const HybridBase& base,
                                           const std::vector<HybridObservable>& obs,
                                           const MeasureConvergenceParams& params) {
  DegenerationReport rep;
  rep.experiment = "measure_convergence";
  rep.columns = {"t_abs",      "obs",        "pairing", "prediction",
                 "total_mass", "clipped",    "stable",  "pass"};

  const TropicalVertex vx = tropical_vertex(f);
  if (!vx.clean)
    rep.notes.push_back("tropical vertex not clean; prediction is heuristic");
  const double ustar = to_double(vx.u);

  std::vector<std::vector<double>> pairings(obs.size());
  std::vector<double> tabs;
  for (const auto& t : base.t_samples) {
    const ComplexHenon h = f.at(t);
    const double half = params.box_scale * std::pow(std::abs(t), ustar);
    GridSpec gs;
    for (int a = 0; a < 4; ++a) {
      gs.lo[a] = -half;
      gs.hi[a] = half;
    }
    gs.n_per_axis = params.resolution;
    gs.smoothing_eps = params.eps * half;
    const GreenField field = build_green_grid(h, gs, params.threads);
    const GridMeasure mu = ma_measure(field, params.threads);

    const double s = scale_factor(t, base.r);
    tabs.push_back(std::abs(t));
    for (std::size_t oi = 0; oi < obs.size(); ++oi) {
      const auto& ob = obs[oi];
      const double val = integrate(mu, [&](C x, C y) {
        const double lx = std::log(std::max(std::abs(x), 1e-300));
        const double ly = std::log(std::max(std::abs(y), 1e-300));
        return ob.f(s * lx, s * ly);
      });
      pairings[oi].push_back(val);
      rep.rows.push_back({std::abs(t), static_cast<double>(oi), val, 0.0, mu.total_mass,
                          mu.clipped_mass, 0.0, 1.0});
    }
  }

  // prediction from the valuation vertex: s log|x| -> u* log r
  const double pred_arg = ustar * std::log(base.r);
  std::size_t row = 0;
  for (std::size_t k = 0; k < tabs.size(); ++k) {
    for (std::size_t oi = 0; oi < obs.size(); ++oi, ++row) {
      rep.rows[row][3] = obs[oi].f(pred_arg, pred_arg);
      if (k + 2 < tabs.size()) continue;
      // stabilization: last gap no bigger than the previous one
      const auto& p = pairings[oi];
      if (p.size() >= 3) {
        const double g1 = std::abs(p[p.size() - 1] - p[p.size() - 2]);
        const double g2 = std::abs(p[p.size() - 2] - p[p.size() - 3]);
        rep.rows[row][6] = g1 <= g2 + 1e-12 ? 1.0 : 0.0;
      }
    }
  }
  return rep;
}

DegenerationReport run_lyapunov_degeneration(const HenonFamily& f, const HybridBase& base,
                                             const LyapunovDegenerationParams& params) {
  DegenerationReport rep;
  rep.experiment = "lyapunov_degeneration";
  rep.columns = {"t_abs",        "lambda1",    "lambda2", "log_abs_a",
                 "sum_residual", "total_slope", "lam1_slope", "pass"};
  for (const auto& t : base.t_samples) {
    const ComplexHenon h = f.at(t);
    const std::vector<C> fps = fixed_points(h);
    std::size_t pick = 0;
    if (params.fp_index >= 0 && static_cast<std::size_t>(params.fp_index) < fps.size()) {
      pick = static_cast<std::size_t>(params.fp_index);
    } else {
      double best = -1.0;
      for (std::size_t i = 0; i < fps.size(); ++i) {
        const double m = std::abs(h.dp(fps[i]));
        if (m > best) {
          best = m;
          pick = i;
        }
      }
    }
    const C x0 = fps[pick];
    const LyapunovResult lr =
        lyapunov_qr(h, x0, x0, params.n_steps, 0.0, params.reset_every);
    const double lt = -std::log(std::abs(t));
    const double la = std::log(std::abs(h.a));
    const bool pass = lr.sum_residual < 1e-6;
    if (!pass) ++rep.violations;
    rep.rows.push_back({std::abs(t), lr.lambda1, lr.lambda2, la, lr.sum_residual,
                        (lr.lambda1 + lr.lambda2) / lt, lr.lambda1 / lt, pass ? 1.0 : 0.0});
  }
  return rep;
}

}  // namespace henon
