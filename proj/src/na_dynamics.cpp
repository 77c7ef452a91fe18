#include "henon/na_dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace henon {

namespace {

using ORat = std::optional<Rat>;

// min with nullopt = +infinity
bool less(const ORat& a, const ORat& b) {
  if (!a) return false;
  if (!b) return true;
  return *a < *b;
}

bool leq(const ORat& a, const ORat& b) { return !less(b, a); }

TruncatedSeries one() { return TruncatedSeries(LaurentPoly::constant(CRat(1))); }

Rat pow_d(int d, int n) {
  Rat v = 1;
  for (int i = 0; i < n; ++i) v *= d;
  return v;
}

}  // namespace

NAPoint::NAPoint(TruncatedSeries xx, TruncatedSeries yy, double rr)
    : x(std::move(xx)), y(std::move(yy)), r(rr) {
  if (!(r > 0.0 && r < 1.0)) throw InvalidRadius("base radius r must lie in (0,1)");
  if (!x.order_known() || !y.order_known())
    throw InsufficientPrecision("point coordinate has no certain leading term");
}

ValPoint na_val(const NAPoint& p) {
  ValPoint w;
  if (auto o = p.x.ord()) w.u = Rat(*o);
  if (auto o = p.y.ord()) w.v = Rat(*o);
  return w;
}

double na_norm(const NAPoint& p) {
  const ValPoint w = na_val(p);
  const double nx = w.u ? std::pow(p.r, to_double(*w.u)) : 0.0;
  const double ny = w.v ? std::pow(p.r, to_double(*w.v)) : 0.0;
  return std::max(nx, ny);
}

NAPoint na_apply(const HenonFamily& f, const NAPoint& p) {
  TruncatedSeries v = one();
  for (int i = 0; i < f.d; ++i)
    v = v * p.x + TruncatedSeries(f.a_coeffs[static_cast<size_t>(i)]);
  return NAPoint(v - TruncatedSeries(f.a) * p.y, p.x, p.r);
}

NAPoint na_apply_inverse(const HenonFamily& f, const NAPoint& p, long work_prec) {
  TruncatedSeries v = one();
  for (int i = 0; i < f.d; ++i)
    v = v * p.y + TruncatedSeries(f.a_coeffs[static_cast<size_t>(i)]);
  const TruncatedSeries num = v - p.x;
  return NAPoint(p.y, num * invert_series(f.a, work_prec), p.r);
}

namespace {

// shared tropical kernel: order of p(w) - a*other given the leading order w
// of the (degree-d) variable; `other` is the order of the subtracted term
// including ord(a) where applicable.
ORat tropical_poly_min(const ORat& w, const std::vector<std::optional<long>>& coeff_ords,
                       const ORat& other, int d) {
  std::vector<std::pair<int, Rat>> cand;
  if (w) cand.emplace_back(0, Rat(d) * *w);
  for (int i = 1; i <= d; ++i) {
    const auto& oi = coeff_ords[static_cast<size_t>(i - 1)];
    if (!oi) continue;
    if (i == d) {
      cand.emplace_back(i, Rat(*oi));
    } else if (w) {
      cand.emplace_back(i, Rat(*oi) + Rat(d - i) * *w);
    }
  }
  if (other) cand.emplace_back(d + 1, *other);
  if (cand.empty()) return std::nullopt;
  Rat m = cand.front().second;
  for (const auto& [idx, val] : cand)
    if (val < m) m = val;
  std::vector<int> mins;
  for (const auto& [idx, val] : cand)
    if (val == m) mins.push_back(idx);
  if (mins.size() > 1) throw TropicalTie(std::move(mins));
  return m;
}

}  // namespace

ValPoint tropical_step(const ValPoint& w, const std::vector<std::optional<long>>& coeff_ords,
                       std::optional<long> ord_a, int d) {
  ORat ay;
  if (ord_a && w.v) ay = Rat(*ord_a) + *w.v;
  ValPoint out;
  out.u = tropical_poly_min(w.u, coeff_ords, ay, d);
  out.v = w.u;
  return out;
}

ValPoint tropical_step_inverse(const ValPoint& w,
                               const std::vector<std::optional<long>>& coeff_ords,
                               std::optional<long> ord_a, int d) {
  if (!ord_a) throw ZeroDivision("inverse tropical step of a degenerate family");
  ValPoint out;
  out.u = w.v;
  const ORat m = tropical_poly_min(w.v, coeff_ords, w.u, d);
  if (m) out.v = *m - Rat(*ord_a);
  return out;
}

long na_radius_ord(const HenonFamily& f) {
  long m = 0;
  for (const auto& o : f.coeff_orders())
    if (o) m = std::min(m, *o);
  if (auto o = f.ord_a()) m = std::min(m, *o);
  return m - 1;
}

Region na_classify(const HenonFamily& f, const ValPoint& w, long rho) {
  if (rho > na_radius_ord(f))
    throw InvalidRadius("filtration radius must dominate every coefficient norm");
  const Rat r(rho);
  const bool x_small = !w.u || *w.u >= r;  // |x| <= R
  const bool y_small = !w.v || *w.v >= r;
  if (x_small && y_small) return Region::W;
  return leq(w.u, w.v) ? Region::VPlus : Region::VMinus;
}

namespace {

// Cap the relative precision so bounded orbits do not accumulate support;
// only the leading order matters downstream. Small series are left exact so
// that genuine cancellations to zero stay certifiable.
TruncatedSeries windowed(const TruncatedSeries& s, long work_prec) {
  const auto o = s.ord();
  if (!o || static_cast<long>(s.coeffs().size()) <= work_prec) return s;
  const long cut = *o + work_prec;
  return cut < s.prec() ? s.truncated(cut) : s;
}

NAPoint windowed(const NAPoint& p, long work_prec) {
  return NAPoint(windowed(p.x, work_prec), windowed(p.y, work_prec), p.r);
}

NAGreenValue green_plus_impl(const HenonFamily& f, NAPoint p, int budget, long work_prec) {
  const long rho = na_radius_ord(f);
  for (int n = 0; n <= budget; ++n) {
    const ValPoint w = na_val(p);
    if (na_classify(f, w, rho) == Region::VPlus)
      return {-*w.u / pow_d(f.d, n), NAGreenValue::Status::Exact};
    if (n == budget) break;
    p = windowed(na_apply(f, p), work_prec);
  }
  return {Rat(0), NAGreenValue::Status::BoundedToBudget};
}

NAGreenValue green_minus_impl(const HenonFamily& f, const NAPoint& p0, int budget,
                              long work_prec) {
  const long rho = na_radius_ord(f);
  const Rat corr = Rat(*f.ord_a()) / Rat(f.d - 1);
  NAPoint p = p0;
  for (int n = 0; n <= budget; ++n) {
    const ValPoint w = na_val(p);
    if (na_classify(f, w, rho) == Region::VMinus)
      return {(-*w.v + corr) / pow_d(f.d, n), NAGreenValue::Status::Exact};
    if (n == budget) break;
    p = windowed(na_apply_inverse(f, p, work_prec), work_prec);
  }
  return {Rat(0), NAGreenValue::Status::BoundedToBudget};
}

}  // namespace

NAGreenValue na_green_plus(const HenonFamily& f, const NAPoint& p, int budget) {
  for (long wp = 64; wp <= 1024; wp *= 2) {
    try {
      return green_plus_impl(f, p, budget, wp);
    } catch (const InsufficientPrecision&) {
      if (wp * 2 > 1024) throw;
    }
  }
  throw InsufficientPrecision("unreachable");
}

NAGreenValue na_green_minus(const HenonFamily& f, const NAPoint& p, int budget) {
  for (long wp = 64; wp <= 1024; wp *= 2) {
    try {
      return green_minus_impl(f, p, budget, wp);
    } catch (const InsufficientPrecision&) {
      if (wp * 2 > 1024) throw;
    }
  }
  throw InsufficientPrecision("unreachable");
}

NAGreenValue na_green_max(const HenonFamily& f, const NAPoint& p, int budget) {
  const NAGreenValue gp = na_green_plus(f, p, budget);
  const NAGreenValue gm = na_green_minus(f, p, budget);
  NAGreenValue out;
  out.q = std::max(gp.q, gm.q);
  out.status = (gp.status == NAGreenValue::Status::Exact &&
                gm.status == NAGreenValue::Status::Exact)
                   ? NAGreenValue::Status::Exact
                   : NAGreenValue::Status::BoundedToBudget;
  return out;
}

NAGreenValue na_green_plus(const HenonFamily& f, const ValPoint& w0, int budget) {
  const long rho = na_radius_ord(f);
  const auto ords = f.coeff_orders();
  const auto oa = f.ord_a();
  ValPoint w = w0;
  for (int n = 0; n <= budget; ++n) {
    if (na_classify(f, w, rho) == Region::VPlus)
      return {-*w.u / pow_d(f.d, n), NAGreenValue::Status::Exact};
    if (n == budget) break;
    w = tropical_step(w, ords, oa, f.d);
  }
  return {Rat(0), NAGreenValue::Status::BoundedToBudget};
}

NAGreenValue na_green_minus(const HenonFamily& f, const ValPoint& w0, int budget) {
  const long rho = na_radius_ord(f);
  const auto ords = f.coeff_orders();
  const auto oa = f.ord_a();
  const Rat corr = Rat(*oa) / Rat(f.d - 1);
  ValPoint w = w0;
  for (int n = 0; n <= budget; ++n) {
    if (na_classify(f, w, rho) == Region::VMinus)
      return {(-*w.v + corr) / pow_d(f.d, n), NAGreenValue::Status::Exact};
    if (n == budget) break;
    w = tropical_step_inverse(w, ords, oa, f.d);
  }
  return {Rat(0), NAGreenValue::Status::BoundedToBudget};
}

FiltrationReport na_filtration_check(const HenonFamily& f, const std::vector<ValPoint>& sample,
                                     long rho) {
  FiltrationReport rep;
  const auto ords = f.coeff_orders();
  const auto oa = f.ord_a();
  for (const auto& w : sample) {
    const Region before = na_classify(f, w, rho);
    ValPoint next;
    try {
      next = tropical_step(w, ords, oa, f.d);
    } catch (const TropicalTie&) {
      ++rep.ties;
      continue;
    }
    ++rep.checked;
    const Region after = na_classify(f, next, rho);
    bool ok = true;
    if (before == Region::VPlus) {
      // forward invariance with the norm raised to the d-th power
      ok = after == Region::VPlus && next.u && w.u && *next.u == Rat(f.d) * *w.u;
    } else if (before == Region::W) {
      ok = after == Region::VPlus || after == Region::W;
    }
    if (!ok) {
      ++rep.violations;
      if (!rep.counterexample) rep.counterexample = w;
    }
  }
  return rep;
}

}  // namespace henon
