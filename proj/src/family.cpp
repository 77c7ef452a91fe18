#include "henon/family.hpp"

#include <cmath>

#include "henon/complex_dynamics.hpp"

namespace henon {

HenonFamily::HenonFamily(int deg, std::vector<LaurentPoly> coeffs, LaurentPoly aa, double cc)
    : d(deg), a_coeffs(std::move(coeffs)), a(std::move(aa)), c(cc) {
  if (d < 2) throw DegenerateFamily("degree must be at least 2");
  if (a.is_zero()) throw DegenerateFamily("a(t) is identically zero");
  if (!(c > 1.0)) throw DegenerateFamily("filtration constant c must exceed 1");
  a_coeffs.resize(static_cast<size_t>(d));
}

ComplexHenon HenonFamily::at(std::complex<double> t0) const {
  if (t0 == std::complex<double>(0.0, 0.0)) throw ZeroParameter();
  ComplexHenon h;
  h.d = d;
  h.t0 = t0;
  h.c = c;
  h.ai.resize(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) h.ai[static_cast<size_t>(i)] = a_coeffs[static_cast<size_t>(i)].eval(t0);
  h.a = a.eval(t0);
  double m = std::max(1.0, std::abs(h.a));
  m = std::max(m, 1.0 / std::abs(h.a));
  m = std::max(m, 1.0 / (std::abs(h.a) * std::abs(h.a)));
  for (const auto& ai : h.ai) m = std::max(m, std::abs(ai));
  h.R = c * m;
  const double cd = std::pow(c, d);
  h.delta = (cd + c * c - c - 1.0) / (cd * c - cd);
  return h;
}

std::vector<std::optional<long>> HenonFamily::coeff_orders() const {
  std::vector<std::optional<long>> v;
  v.reserve(a_coeffs.size());
  for (const auto& f : a_coeffs) v.push_back(f.ord());
  return v;
}

namespace {

// Exact k-th root of a rational when one exists (integer root of numerator
// and denominator); nullopt otherwise.
std::optional<Rat> exact_root(const Rat& q, unsigned long k) {
  using boost::multiprecision::mpz_int;
  if (q == 0) return Rat(0);
  if (q < 0 && k % 2 == 0) return std::nullopt;
  mpz_int num = boost::multiprecision::numerator(q);
  mpz_int den = boost::multiprecision::denominator(q);
  const bool neg = num < 0;
  if (neg) num = -num;
  mpz_int rn, rd;
  if (mpz_root(rn.backend().data(), num.backend().data(), k) == 0) return std::nullopt;
  if (mpz_root(rd.backend().data(), den.backend().data(), k) == 0) return std::nullopt;
  Rat r(rn, rd);
  return neg ? -r : r;
}

// (1+h)^{1/k} as an exact binomial series, ord(h) >= 1 required.
TruncatedSeries binomial_root(const LaurentPoly& h, unsigned long k, long prec) {
  const Rat alpha(1, static_cast<long>(k));
  TruncatedSeries acc{LaurentPoly::constant(CRat(1))};
  acc = acc.truncated(prec);
  TruncatedSeries hp = acc;  // h^j, truncated
  const TruncatedSeries hs{h, prec};
  Rat binom = 1;
  for (long j = 1; j < prec; ++j) {
    binom *= (alpha - (j - 1)) / j;
    hp = (hp * hs).truncated(prec);
    if (hp.coeffs().empty()) break;
    TruncatedSeries term;
    term.set_prec(prec);
    for (const auto& [e, cf] : hp.coeffs()) term.set(e, CRat(binom, 0) * cf);
    acc = acc + term;
  }
  return acc;
}

LaurentPoly poly_of(const TruncatedSeries& s) {
  LaurentPoly f;
  for (const auto& [e, cf] : s.coeffs()) f.set(e, cf);
  return f;
}

}  // namespace

NormalizedFamily normalize_family(const GeneralFamily& g, long prec) {
  const int d = g.d;
  if (d < 2) throw DegenerateFamily("degree must be at least 2");
  if (g.coeffs.size() != static_cast<size_t>(d) + 1)
    throw DegenerateFamily("expected d+1 leading-to-constant coefficients");
  const LaurentPoly& a0 = g.coeffs.front();
  if (a0.is_zero()) throw DegenerateFamily("a0(t) vanishes identically");
  if (g.b.is_zero()) throw DegenerateFamily("b(t) vanishes identically");
  if (g.a.is_zero()) throw DegenerateFamily("a(t) vanishes identically");

  const unsigned long k = static_cast<unsigned long>(d - 1);
  const long m = *a0.ord();
  const CRat cm = a0.coeff(m);

  // cm^{1/(d-1)}: exact when available, numeric fallback otherwise.
  CRat root_cm;
  if (cm.im == 0 && cm.re > 0) {
    if (auto r = exact_root(cm.re, k)) {
      root_cm = CRat(*r, Rat(0));
    } else {
      root_cm = CRat(rat_of(std::pow(to_double(cm.re), 1.0 / static_cast<double>(k))), Rat(0));
    }
  } else {
    const std::complex<double> z = std::pow(cm.to_complex(), 1.0 / static_cast<double>(k));
    root_cm = CRat(z);
  }

  // unit part: a0 = cm t^m (1 + h), ord(h) >= 1
  LaurentPoly h;
  for (const auto& [e, cf] : a0.coeffs())
    if (e != m) h.set(e - m, cf / cm);

  // lambda(s) = root_cm s^m (1+h(s^{d-1}))^{1/(d-1)}
  const TruncatedSeries unit_root = binomial_root(h, k, prec);
  TruncatedSeries lambda;
  lambda.set_prec(prec);
  for (const auto& [e, cf] : unit_root.coeffs()) lambda.set(e * k + m, root_cm * cf);
  lambda.set_prec(unit_root.prec() == TruncatedSeries::PREC_EXACT
                      ? prec
                      : unit_root.prec() * static_cast<long>(k) + m);
  lambda = lambda.truncated(prec);

  const TruncatedSeries lambda_inv = invert_series(lambda, prec);

  // a_i'(s) = a_i(s^{d-1}) lambda^{i-(d-1)}, a'(s) = a(s^{d-1}) b(s^{d-1})
  std::vector<LaurentPoly> new_coeffs;
  new_coeffs.reserve(static_cast<size_t>(d));
  for (int i = 1; i <= d; ++i) {
    const LaurentPoly ai_s = g.coeffs[static_cast<size_t>(i)].substitute_power(d - 1);
    const long e = i - (d - 1);
    TruncatedSeries lp = (e >= 0) ? lambda.pow(static_cast<unsigned long>(e))
                                  : lambda_inv.pow(static_cast<unsigned long>(-e));
    new_coeffs.push_back(poly_of(TruncatedSeries(ai_s) * lp));
  }
  LaurentPoly new_a = g.a.substitute_power(d - 1) * g.b.substitute_power(d - 1);

  NormalizedFamily out{HenonFamily(d, std::move(new_coeffs), std::move(new_a)),
                       static_cast<long>(k), prec, lambda};
  return out;
}

bool verify_normalization(const GeneralFamily& g, const NormalizedFamily& n) {
  const int d = g.d;
  // lambda^{d-1} must reproduce a0(s^{d-1}) up to the tracked precision
  const TruncatedSeries lpow = n.lambda.pow(static_cast<unsigned long>(d - 1));
  const TruncatedSeries a0s{g.coeffs.front().substitute_power(d - 1)};
  if (!lpow.agrees_with(a0s)) {
    // numeric fallback for inexact roots
    const std::complex<double> s0(0.037, 0.011);
    const std::complex<double> lhs = poly_of(lpow).eval(s0);
    const std::complex<double> rhs = poly_of(a0s.truncated(lpow.prec())).eval(s0);
    if (std::abs(lhs - rhs) > 1e-9 * (1.0 + std::abs(rhs))) return false;
  }
  // spot-check the conjugation identity at numeric points
  const std::complex<double> s0(0.05, 0.02);
  const std::complex<double> t0 = std::pow(s0, d - 1);
  const std::complex<double> lam = poly_of(n.lambda).eval(s0);
  const std::complex<double> bv = g.b.eval(t0);
  const std::complex<double> av = g.a.eval(t0);
  for (const auto& z : {std::complex<double>(0.3, -0.2), std::complex<double>(1.1, 0.7)}) {
    const std::complex<double> x = z, y = std::conj(z) + 0.25;
    // sigma^{-1}
    const std::complex<double> xs = x / lam, ys = bv * y / lam;
    // H_t
    std::complex<double> q(0.0, 0.0);
    for (int i = 0; i <= d; ++i) q = q * xs + g.coeffs[static_cast<size_t>(i)].eval(t0);
    const std::complex<double> hx = q - av * ys, hy = bv * xs;
    // sigma
    const std::complex<double> cx = lam * hx, cy = lam / bv * hy;
    // monic family applied directly
    std::complex<double> p = std::pow(x, d);
    for (int i = 1; i <= d; ++i)
      p += n.family.a_coeffs[static_cast<size_t>(i - 1)].eval(s0) * std::pow(x, d - i);
    const std::complex<double> mx = p - n.family.a.eval(s0) * y;
    const double scale = std::max({1.0, std::abs(cx), std::abs(mx)});
    if (std::abs(cx - mx) > 1e-6 * scale) return false;
    if (std::abs(cy - x) > 1e-9 * std::max(1.0, std::abs(x))) return false;
  }
  return true;
}

}  // namespace henon
