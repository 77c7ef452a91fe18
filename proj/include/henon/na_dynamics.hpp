#pragma once

#include <optional>
#include <vector>

#include "henon/complex_dynamics.hpp"  // Region
#include "henon/family.hpp"
#include "henon/laurent.hpp"

namespace henon {

// Classical point of the affine plane over the Laurent series field, with
// coordinates carried to finite precision and a base radius r for norms.
struct NAPoint {
  TruncatedSeries x, y;
  double r = 0.5;

  NAPoint(TruncatedSeries xx, TruncatedSeries yy, double rr);
};

// Valuation shadow of a point: |x| = r^u, |y| = r^v. nullopt encodes the
// +infinity order of a zero coordinate.
struct ValPoint {
  std::optional<Rat> u, v;
};

struct NAGreenValue {
  enum class Status { Exact, BoundedToBudget };
  Rat q;  // G = q * log(1/r)
  Status status = Status::Exact;
};

ValPoint na_val(const NAPoint& p);
double na_norm(const NAPoint& p);

NAPoint na_apply(const HenonFamily& f, const NAPoint& p);
// Division by a(t) truncates; `work_prec` is the inversion target.
NAPoint na_apply_inverse(const HenonFamily& f, const NAPoint& p, long work_prec = 64);

// Generic valuation-level step. Candidate indices in TropicalTie:
// 0 = x^d, 1..d = a_i x^{d-i}, d+1 = a*y (and symmetrically backwards).
ValPoint tropical_step(const ValPoint& w, const std::vector<std::optional<long>>& coeff_ords,
                       std::optional<long> ord_a, int d);
ValPoint tropical_step_inverse(const ValPoint& w,
                               const std::vector<std::optional<long>>& coeff_ords,
                               std::optional<long> ord_a, int d);

// Smallest power of r strictly larger than max{|a_1|,...,|a_d|,|a|,1}: the
// filtration radius R = r^rho as an exponent.
long na_radius_ord(const HenonFamily& f);

// Region of a valuation point for R = r^rho; same tie-break as the complex
// classify. Throws InvalidRadius unless R exceeds every coefficient norm.
Region na_classify(const HenonFamily& f, const ValPoint& w, long rho);

NAGreenValue na_green_plus(const HenonFamily& f, const NAPoint& p, int budget = 64);
NAGreenValue na_green_minus(const HenonFamily& f, const NAPoint& p, int budget = 64);
NAGreenValue na_green_max(const HenonFamily& f, const NAPoint& p, int budget = 64);

// Purely tropical variants; throw TropicalTie when the generic step is
// undetermined (callers with exact coordinates should use the NAPoint form).
NAGreenValue na_green_plus(const HenonFamily& f, const ValPoint& w, int budget = 64);
NAGreenValue na_green_minus(const HenonFamily& f, const ValPoint& w, int budget = 64);

struct FiltrationReport {
  int checked = 0;
  int ties = 0;        // steps skipped because the generic order is undetermined
  int violations = 0;  // claimed inclusions that failed
  std::optional<ValPoint> counterexample;
};

// Checks the invariance of the filtration under one forward step on every
// sample: V+ maps into V+ (with norm raised to the power d), and V+ u W maps
// into V+ u W.
FiltrationReport na_filtration_check(const HenonFamily& f, const std::vector<ValPoint>& sample,
                                     long rho);

}  // namespace henon
