#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "henon/family.hpp"
#include "henon/measure.hpp"
#include "henon/na_dynamics.hpp"

namespace henon {

// Base radius and a decreasing ladder of parameters inside the closed disk
// of radius r.
struct HybridBase {
  double r = 0.5;
  std::vector<C> t_samples;

  HybridBase(double rr, std::vector<C> ts);
  static HybridBase default_ladder(double r = 0.5);  // |t| = r, r^2, r^4, r^8, r^16
};

// Seminorm of the fiberwise evaluation: |f(t)|^{log r / log|t|} for t != 0,
// r^{ord_0 f} on the central fiber.
double tau_norm(const LaurentPoly& f, C t, double r);
double tau_norm_at_zero(const LaurentPoly& f, double r);

// log r / log|t|, the exponent carrying fiberwise norms to the central
// fiber: |f(t)|^{scale} = tau_norm. Equals 1 at |t| = r and decays to 0.
double scale_factor(C t, double r);

struct DegenerationReport {
  std::string experiment;
  std::vector<std::string> columns;  // last column is "pass" (0/1)
  std::vector<std::vector<double>> rows;
  int violations = 0;
  std::vector<std::string> notes;
};

void write_report_csv(const DegenerationReport& rep, std::ostream& os);
void write_report_json(const DegenerationReport& rep, std::ostream& os);
void write_report_dat(const DegenerationReport& rep, std::ostream& os);

// sup over a point sample of |G_t - G_{n,t}|, normalized by log|t|^{-1} and
// compared to the (alpha+beta)/d^n bound; G_t is proxied by a deeper
// approximant and every assertion is widened by the proxy tail.
DegenerationReport run_green_uniformity(const HenonFamily& f, const HybridBase& base,
                                        int n_min, int n_max, int sample_size,
                                        std::uint64_t seed = 1);

// Observable on the rescaled log-coordinates (s log|x|, s log|y|) with
// s = scale_factor(t, r); this class descends to the central fiber.
struct HybridObservable {
  std::string name;
  std::function<double(double, double)> f;
};

struct MeasureConvergenceParams {
  int resolution = 16;
  double eps = 0.25;
  double box_scale = 3.0;  // box half-width = box_scale * |t|^{u*}
  int threads = 0;
};

// Pairs each observable with mu_t along the ladder, flags Cauchy
// stabilization, and compares the final pairing with the tropical
// prediction (the observable at the valuation vertex of the limit).
DegenerationReport run_measure_convergence(const HenonFamily& f, const HybridBase& base,
                                           const std::vector<HybridObservable>& obs,
                                           const MeasureConvergenceParams& params = {});

// u* = v* = ord(a)/(d-1): the balance of x^d against a y at the self-dual
// vertex of the tropical system. Flagged unsuitable when some middle
// coefficient undercuts the balance there.
struct TropicalVertex {
  Rat u;
  bool clean = true;  // no coefficient term strictly below the balance
};
TropicalVertex tropical_vertex(const HenonFamily& f);

struct LyapunovDegenerationParams {
  int n_steps = 10000;
  int reset_every = 1;  // anchored orbit: pin to the start point each step
  int fp_index = -1;    // fixed point choice; -1 = largest multiplier
};

DegenerationReport run_lyapunov_degeneration(const HenonFamily& f, const HybridBase& base,
                                             const LyapunovDegenerationParams& params = {});

}  // namespace henon
