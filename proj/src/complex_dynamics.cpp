#include "henon/complex_dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace henon {

namespace {
constexpr double kLogSwitch = 1e60;  // switch to log coordinates above this
}

const char* region_name(Region r) {
  switch (r) {
    case Region::VPlus: return "V+";
    case Region::VMinus: return "V-";
    case Region::W: return "W";
  }
  return "?";
}

C ComplexHenon::p(C x) const {
  C v(1.0, 0.0);
  for (int i = 0; i < d; ++i) v = v * x + ai[static_cast<size_t>(i)];
  return v;
}

C ComplexHenon::dp(C x) const {
  C v(static_cast<double>(d), 0.0);
  for (int i = 0; i < d - 1; ++i)
    v = v * x + static_cast<double>(d - 1 - i) * ai[static_cast<size_t>(i)];
  return v;
}

std::pair<C, C> ComplexHenon::apply(C x, C y) const { return {p(x) - a * y, x}; }

std::pair<C, C> ComplexHenon::apply_inverse(C x, C y) const {
  if (a == C(0.0, 0.0)) throw ZeroDivision("inverse of a degenerate Henon map");
  return {y, (p(y) - x) / a};
}

Region ComplexHenon::classify(C x, C y) const {
  const double ax = std::abs(x), ay = std::abs(y);
  if (std::max(ax, ay) <= R) return Region::W;
  return ax >= ay ? Region::VPlus : Region::VMinus;
}

LogPoint LogPoint::from(C x, C y) {
  LogPoint p;
  const double ax = std::abs(x), ay = std::abs(y);
  p.ux = std::log(ax);
  p.uy = std::log(ay);
  p.sx = ax > 0 ? x / ax : C(1.0, 0.0);
  p.sy = ay > 0 ? y / ay : C(1.0, 0.0);
  return p;
}

LogPoint log_step(const ComplexHenon& h, const LogPoint& p) {
  // x' = x^d (1 + sum a_i x^{-i} - a y x^{-d}), valid in V+ where the
  // correction factor w stays away from 0.
  C w(1.0, 0.0);
  for (int i = 1; i <= h.d; ++i) {
    const double e = std::exp(-i * p.ux);
    if (e == 0.0) break;
    w += h.ai[static_cast<size_t>(i - 1)] * e * std::pow(p.sx, -i);
  }
  const double ey = std::exp(p.uy - h.d * p.ux);
  if (ey > 0.0) w -= h.a * ey * p.sy * std::pow(p.sx, -h.d);
  const double aw = std::abs(w);
  if (!(aw > 0.0)) throw OrbitEscaped(-1);
  LogPoint q;
  q.ux = h.d * p.ux + std::log(aw);
  q.sx = std::pow(p.sx, h.d) * (w / aw);
  q.uy = p.ux;
  q.sy = p.sx;
  return q;
}

LogPoint log_step_inverse(const ComplexHenon& h, const LogPoint& p) {
  // y'' = (p(y) - x)/a with x'' = y; valid deep in V-.
  C w(1.0, 0.0);
  for (int i = 1; i <= h.d; ++i) {
    const double e = std::exp(-i * p.uy);
    if (e == 0.0) break;
    w += h.ai[static_cast<size_t>(i - 1)] * e * std::pow(p.sy, -i);
  }
  const double ex = std::exp(p.ux - h.d * p.uy);
  if (ex > 0.0) w -= ex * p.sx * std::pow(p.sy, -h.d);
  const double aw = std::abs(w);
  if (!(aw > 0.0)) throw OrbitEscaped(-1);
  LogPoint q;
  q.uy = h.d * p.uy + std::log(aw) - std::log(std::abs(h.a));
  q.sy = std::pow(p.sy, h.d) * (w / aw) * (std::abs(h.a) / h.a);
  q.ux = p.uy;
  q.sx = p.sy;
  return q;
}

namespace {

// Iterate with plain doubles until coordinates threaten to overflow, then
// continue in log coordinates. Returns log max(|x|,|y|,1) after n steps.
double log_norm_after(const ComplexHenon& h, C x, C y, int n, int sign) {
  std::optional<LogPoint> lp;
  for (int k = 0; k < n; ++k) {
    if (!lp) {
      const auto [nx, ny] = sign >= 0 ? h.apply(x, y) : h.apply_inverse(x, y);
      x = nx;
      y = ny;
      if (!std::isfinite(std::abs(x)) || !std::isfinite(std::abs(y))) throw OrbitEscaped(k);
      if (std::max(std::abs(x), std::abs(y)) > kLogSwitch) lp = LogPoint::from(x, y);
    } else {
      lp = sign >= 0 ? log_step(h, *lp) : log_step_inverse(h, *lp);
    }
  }
  const double u = lp ? lp->norm_log() : std::log(std::max(std::abs(x), std::abs(y)));
  return std::max(u, 0.0);
}

}  // namespace

double green_n(const ComplexHenon& h, C x, C y, int n, int sign) {
  return log_norm_after(h, x, y, n, sign) / std::pow(static_cast<double>(h.d), n);
}

std::optional<int> escape_time(const ComplexHenon& h, C x, C y, int sign, int budget) {
  const Region target = sign >= 0 ? Region::VPlus : Region::VMinus;
  if (h.classify(x, y) == target) return 0;
  for (int k = 1; k <= budget; ++k) {
    const auto [nx, ny] = sign >= 0 ? h.apply(x, y) : h.apply_inverse(x, y);
    x = nx;
    y = ny;
    if (std::max(std::abs(x), std::abs(y)) > kLogSwitch) return k;  // certainly escaped
    if (h.classify(x, y) == target) return k;
  }
  return std::nullopt;
}

namespace {

GreenEstimate green_one_sided(const ComplexHenon& h, C x, C y, int sign, double eps,
                              int escape_budget) {
  GreenEstimate est;
  const double d = static_cast<double>(h.d);
  const double log_tail = -std::log1p(-h.delta);  // log(1/(1-delta))
  // Per-step gap between log||.|| and its degree-d model on the relevant
  // wedge; the backward branch also pays the division by a.
  double gap = log_tail;
  if (sign < 0) {
    const double la = std::log(std::abs(h.a));
    gap = std::max(std::abs(std::log1p(-h.delta) - la), std::abs(std::log1p(h.delta) - la));
  }

  int n0 = 0;
  std::optional<LogPoint> lp;
  const Region target = sign >= 0 ? Region::VPlus : Region::VMinus;
  while (n0 <= escape_budget) {
    if (h.classify(x, y) == target) break;
    const auto [nx, ny] = sign >= 0 ? h.apply(x, y) : h.apply_inverse(x, y);
    x = nx;
    y = ny;
    ++n0;
    if (!std::isfinite(std::abs(x)) || !std::isfinite(std::abs(y))) throw OrbitEscaped(n0);
    if (std::max(std::abs(x), std::abs(y)) > kLogSwitch) break;  // in the wedge for sure
  }
  est.region = h.classify(x, y);
  if (est.region != target && std::max(std::abs(x), std::abs(y)) <= kLogSwitch) {
    // bounded to budget: G <= d^{-(n-1)} (log R + gap/(d-1))
    est.value = 0.0;
    est.error = std::pow(d, -(n0 - 1)) * (std::log(h.R) + gap / (d - 1.0));
    est.steps = n0;
    est.escaped = false;
    return est;
  }

  // refine inside the wedge until the geometric tail is below eps
  lp = LogPoint::from(x, y);
  int m = 0;
  const double scale0 = std::pow(d, -n0);
  while (scale0 * std::pow(d, -m) * gap / (d - 1.0) > eps && m < 2000) {
    lp = sign >= 0 ? log_step(h, *lp) : log_step_inverse(h, *lp);
    ++m;
  }
  const double u = std::max(lp->norm_log(), 0.0);
  est.value = scale0 * std::pow(d, -m) * u;
  est.error = scale0 * std::pow(d, -m) * gap / (d - 1.0);
  est.steps = n0 + m;
  est.escaped = true;
  est.region = target;
  return est;
}

}  // namespace

GreenEstimate green_plus(const ComplexHenon& h, C x, C y, double eps, int escape_budget) {
  return green_one_sided(h, x, y, +1, eps, escape_budget);
}

GreenEstimate green_minus(const ComplexHenon& h, C x, C y, double eps, int escape_budget) {
  return green_one_sided(h, x, y, -1, eps, escape_budget);
}

GreenEstimate green_max(const ComplexHenon& h, C x, C y, double eps, int escape_budget) {
  const GreenEstimate gp = green_plus(h, x, y, eps, escape_budget);
  const GreenEstimate gm = green_minus(h, x, y, eps, escape_budget);
  GreenEstimate est;
  est.steps = gp.steps + gm.steps;
  est.escaped = gp.escaped || gm.escaped;
  if (gp.value - gp.error > gm.value + gm.error) {
    est.value = gp.value;
    est.error = gp.error;
    est.region = gp.region;
  } else if (gm.value - gm.error > gp.value + gp.error) {
    est.value = gm.value;
    est.error = gm.error;
    est.region = gm.region;
  } else {
    est.value = std::max(gp.value, gm.value);
    est.error = std::max(gp.error, gm.error);
    est.region = gp.value >= gm.value ? gp.region : gm.region;
  }
  return est;
}

UniformityConstants uniformity_constants(const ComplexHenon& h) {
  const double d = static_cast<double>(h.d);
  const double lt = -std::log(std::abs(h.t0));
  if (!(lt > 0.0)) throw ParameterTooLarge("uniformity constants need |t| < 1");
  UniformityConstants u;
  const double log_tail = -std::log1p(-h.delta);
  u.alpha = d * (std::log(h.R) + log_tail / (d - 1.0)) / lt;
  u.beta = d * std::max(0.0, -std::log(std::abs(h.a))) / ((d - 1.0) * lt);
  return u;
}

std::pair<CRat, CRat> ExactHenon::apply(const CRat& x, const CRat& y) const {
  CRat v(Rat(1), Rat(0));
  for (int i = 0; i < d; ++i) v = v * x + ai[static_cast<size_t>(i)];
  return {v - a * y, x};
}

double green_n_exact(const ExactHenon& h, CRat x, CRat y, int n) {
  for (int k = 0; k < n; ++k) {
    auto [nx, ny] = h.apply(x, y);
    x = std::move(nx);
    y = std::move(ny);
  }
  Rat m2 = x.abs2();
  const Rat y2 = y.abs2();
  if (y2 > m2) m2 = y2;
  if (m2 <= 1) return 0.0;
  return 0.5 * log_rat(m2) / std::pow(static_cast<double>(h.d), n);
}

}  // namespace henon
