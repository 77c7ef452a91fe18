#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "henon/errors.hpp"
#include "henon/rational.hpp"

namespace henon {

using C = std::complex<double>;

enum class Region { VPlus, VMinus, W };

const char* region_name(Region r);

// A Henon map at a fixed complex parameter: (x,y) -> (p(x) - a y, x)
// with p(x) = x^d + a1 x^{d-1} + ... + ad.
struct ComplexHenon {
  int d = 2;
  C t0{0.0, 0.0};
  std::vector<C> ai;  // a1..ad
  C a{1.0, 0.0};
  double c = 5.0;
  double R = 0.0;      // filtration radius
  double delta = 0.0;  // distortion constant on V+/V-

  C p(C x) const;
  C dp(C x) const;  // p'
  std::pair<C, C> apply(C x, C y) const;
  std::pair<C, C> apply_inverse(C x, C y) const;
  Region classify(C x, C y) const;
};

// Point tracked in log coordinates once doubles would overflow:
// x = sx * exp(ux), |sx| = 1 (and likewise for y).
struct LogPoint {
  double ux = 0.0, uy = 0.0;
  C sx{1.0, 0.0}, sy{1.0, 0.0};

  static LogPoint from(C x, C y);
  double norm_log() const { return ux > uy ? ux : uy; }
};

struct GreenEstimate {
  double value = 0.0;
  double error = 0.0;  // certified bound on |value - true|
  int steps = 0;       // total iterations used
  bool escaped = false;
  Region region = Region::W;  // region where iteration stopped
};

// One forward/backward step in log coordinates; valid once the point is
// deep in V+ (resp. V-). Correction terms underflow gracefully.
LogPoint log_step(const ComplexHenon& h, const LogPoint& p);
LogPoint log_step_inverse(const ComplexHenon& h, const LogPoint& p);

// n-th Green approximant d^{-n} log+ ||H^{+-n}(x,y)||, overflow-safe.
double green_n(const ComplexHenon& h, C x, C y, int n, int sign);

// Certified value of G^+ / G^- / G = max(G^+, G^-) with error <= eps when
// the orbit escapes within the budget; bounded orbits report value 0 with
// the decay bound at the budget as the certified error.
GreenEstimate green_plus(const ComplexHenon& h, C x, C y, double eps = 1e-13,
                         int escape_budget = 400);
GreenEstimate green_minus(const ComplexHenon& h, C x, C y, double eps = 1e-13,
                          int escape_budget = 400);
GreenEstimate green_max(const ComplexHenon& h, C x, C y, double eps = 1e-13,
                        int escape_budget = 400);

// Escape time to V+ (forward) or V- (backward); nullopt if still bounded
// after `budget` steps.
std::optional<int> escape_time(const ComplexHenon& h, C x, C y, int sign, int budget);

struct UniformityConstants {
  double alpha = 0.0;  // scale of |G - log+||.|| | against log|t|^{-1}
  double beta = 0.0;   // backward-branch correction from log|a|^{-1}
};

UniformityConstants uniformity_constants(const ComplexHenon& h);

// Exact-rational forward iteration, for evaluations that must be certified
// beyond double round-off.
struct ExactHenon {
  int d = 2;
  std::vector<CRat> ai;  // a1..ad
  CRat a;

  std::pair<CRat, CRat> apply(const CRat& x, const CRat& y) const;
};

// d^{-n} log+ max(|x_n|, |y_n|) with the orbit computed exactly; only the
// final logarithm is rounded.
double green_n_exact(const ExactHenon& h, CRat x, CRat y, int n);

}  // namespace henon
