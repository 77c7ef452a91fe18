#include "henon/laurent.hpp"

#include <algorithm>
#include <cmath>

namespace henon {

LaurentPoly LaurentPoly::term(long exp, CRat coeff) {
  LaurentPoly f;
  if (!coeff.is_zero()) f.c_.emplace(exp, std::move(coeff));
  return f;
}

CRat LaurentPoly::coeff(long exp) const {
  auto it = c_.find(exp);
  return it == c_.end() ? CRat() : it->second;
}

std::optional<long> LaurentPoly::ord() const {
  if (c_.empty()) return std::nullopt;
  return c_.begin()->first;
}

long LaurentPoly::max_exp() const { return c_.rbegin()->first; }

void LaurentPoly::set(long exp, CRat coeff) {
  if (coeff.is_zero())
    c_.erase(exp);
  else
    c_[exp] = std::move(coeff);
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly f;
  for (const auto& [e, a] : c_) f.c_.emplace(e, -a);
  return f;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (const auto& [e, a] : o.c_) {
    auto it = c_.find(e);
    if (it == c_.end()) {
      c_.emplace(e, a);
    } else {
      it->second += a;
      if (it->second.is_zero()) c_.erase(it);
    }
  }
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly f;
  for (const auto& [ea, ca] : a.c_)
    for (const auto& [eb, cb] : b.c_) {
      auto it = f.c_.find(ea + eb);
      if (it == f.c_.end()) {
        f.c_.emplace(ea + eb, ca * cb);
      } else {
        it->second += ca * cb;
      }
    }
  for (auto it = f.c_.begin(); it != f.c_.end();)
    it = it->second.is_zero() ? f.c_.erase(it) : std::next(it);
  return f;
}

LaurentPoly LaurentPoly::pow(unsigned long e) const {
  LaurentPoly acc = constant(CRat(1));
  LaurentPoly base = *this;
  while (e) {
    if (e & 1) acc *= base;
    if (e >>= 1) base *= base;
  }
  return acc;
}

LaurentPoly LaurentPoly::shifted(long k) const {
  LaurentPoly f;
  for (const auto& [e, a] : c_) f.c_.emplace(e + k, a);
  return f;
}

LaurentPoly LaurentPoly::substitute_power(long m) const {
  LaurentPoly f;
  for (const auto& [e, a] : c_) f.c_.emplace(e * m, a);
  return f;
}

std::complex<double> LaurentPoly::eval(std::complex<double> t0) const {
  if (t0 == std::complex<double>(0.0, 0.0)) {
    auto o = ord();
    if (o && *o < 0) throw ZeroParameter();
    return coeff(0).to_complex();
  }
  // Horner over the support, split at exponent 0.
  std::complex<double> acc(0.0, 0.0);
  long prev = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    for (long k = prev; k > it->first; --k) acc *= t0;
    acc += it->second.to_complex();
    prev = it->first;
  }
  for (long k = prev; k < 0; ++k) acc /= t0;
  for (long k = 0; k < prev; ++k) acc *= t0;
  return acc;
}

CRat LaurentPoly::eval_exact(const CRat& t0) const {
  if (t0.is_zero()) {
    auto o = ord();
    if (o && *o < 0) throw ZeroParameter();
    return coeff(0);
  }
  CRat acc;
  long prev = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    for (long k = prev; k > it->first; --k) acc *= t0;
    acc += it->second;
    prev = it->first;
  }
  if (prev < 0) {
    const CRat inv = CRat(1) / t0;
    for (long k = prev; k < 0; ++k) acc *= inv;
  }
  for (long k = 0; k < prev; ++k) acc *= t0;
  return acc;
}

std::optional<long> ord(const LaurentPoly& f) { return f.ord(); }

double t_adic_norm(const LaurentPoly& f, const HybridNormParams& p) {
  auto o = f.ord();
  if (!o) return 0.0;
  return std::pow(p.r, static_cast<double>(*o));
}

double hybrid_norm(const LaurentPoly& f, const HybridNormParams& p) {
  double s = 0.0;
  for (const auto& [e, a] : f.coeffs()) {
    const double mod = std::sqrt(to_double(a.abs2()));
    s += std::max(mod, 1.0) * std::pow(p.r, static_cast<double>(e));
  }
  return s;
}

std::optional<LaurentPoly> div_exact(const LaurentPoly& f, const LaurentPoly& g) {
  if (g.is_zero()) throw ZeroDivision();
  if (f.is_zero()) return LaurentPoly();
  const long og = *g.ord();
  const CRat lead = g.coeff(og);
  LaurentPoly rem = f;
  LaurentPoly quot;
  while (!rem.is_zero()) {
    const long orr = *rem.ord();
    if (rem.max_exp() - orr < 0) return std::nullopt;  // unreachable, defensive
    const CRat q = rem.coeff(orr) / lead;
    quot.set(orr - og, q);
    rem -= LaurentPoly::term(orr - og, q) * g;
    if (!rem.is_zero() && *rem.ord() <= orr) return std::nullopt;
    if (!rem.is_zero() && rem.max_exp() > f.max_exp() + 64) return std::nullopt;
    if (!rem.is_zero() && *rem.ord() > f.max_exp()) return std::nullopt;
  }
  return quot;
}

// --- TruncatedSeries ---

TruncatedSeries::TruncatedSeries(const LaurentPoly& f, long prec) : prec_(prec) {
  for (const auto& [e, a] : f.coeffs()) c_.emplace(e, a);
  drop_at_or_above_prec();
}

void TruncatedSeries::drop_at_or_above_prec() {
  if (prec_ == PREC_EXACT) return;
  c_.erase(c_.lower_bound(prec_), c_.end());
}

std::optional<long> TruncatedSeries::ord() const {
  if (!order_known())
    throw InsufficientPrecision("series order only bounded below by prec=" + std::to_string(prec_));
  if (c_.empty()) return std::nullopt;
  return c_.begin()->first;
}

void TruncatedSeries::set(long exp, CRat coeff) {
  if (coeff.is_zero())
    c_.erase(exp);
  else if (exp < prec_)
    c_[exp] = std::move(coeff);
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries s;
  s.prec_ = prec_;
  for (const auto& [e, a] : c_) s.c_.emplace(e, -a);
  return s;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries s;
  s.prec_ = std::min(a.prec_, b.prec_);
  s.c_ = a.c_;
  for (const auto& [e, v] : b.c_) {
    auto it = s.c_.find(e);
    if (it == s.c_.end()) {
      s.c_.emplace(e, v);
    } else {
      it->second += v;
      if (it->second.is_zero()) s.c_.erase(it);
    }
  }
  s.drop_at_or_above_prec();
  return s;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries s;
  // prec of a product: unknown tail of one factor enters at its prec plus the
  // order of the other factor.
  long pa = TruncatedSeries::PREC_EXACT, pb = TruncatedSeries::PREC_EXACT;
  if (a.prec_ != TruncatedSeries::PREC_EXACT) {
    const long ob = b.c_.empty() ? (b.prec_ == TruncatedSeries::PREC_EXACT
                                        ? TruncatedSeries::PREC_EXACT
                                        : b.prec_)
                                 : b.c_.begin()->first;
    pa = (ob >= TruncatedSeries::PREC_EXACT) ? TruncatedSeries::PREC_EXACT : a.prec_ + ob;
  }
  if (b.prec_ != TruncatedSeries::PREC_EXACT) {
    const long oa = a.c_.empty() ? (a.prec_ == TruncatedSeries::PREC_EXACT
                                        ? TruncatedSeries::PREC_EXACT
                                        : a.prec_)
                                 : a.c_.begin()->first;
    pb = (oa >= TruncatedSeries::PREC_EXACT) ? TruncatedSeries::PREC_EXACT : b.prec_ + oa;
  }
  s.prec_ = std::min({pa, pb, TruncatedSeries::PREC_EXACT});
  // exact-zero times anything is exact zero
  if ((a.c_.empty() && a.prec_ == TruncatedSeries::PREC_EXACT) ||
      (b.c_.empty() && b.prec_ == TruncatedSeries::PREC_EXACT)) {
    s.prec_ = TruncatedSeries::PREC_EXACT;
    return s;
  }
  for (const auto& [ea, ca] : a.c_)
    for (const auto& [eb, cb] : b.c_) {
      if (ea + eb >= s.prec_) continue;
      auto it = s.c_.find(ea + eb);
      if (it == s.c_.end()) {
        s.c_.emplace(ea + eb, ca * cb);
      } else {
        it->second += ca * cb;
      }
    }
  for (auto it = s.c_.begin(); it != s.c_.end();)
    it = it->second.is_zero() ? s.c_.erase(it) : std::next(it);
  return s;
}

TruncatedSeries TruncatedSeries::truncated(long prec) const {
  TruncatedSeries s = *this;
  s.prec_ = std::min(prec_, prec);
  s.drop_at_or_above_prec();
  return s;
}

TruncatedSeries TruncatedSeries::pow(unsigned long e) const {
  TruncatedSeries acc{LaurentPoly::constant(CRat(1))};
  TruncatedSeries base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    if (e >>= 1) base = base * base;
  }
  return acc;
}

bool TruncatedSeries::agrees_with(const TruncatedSeries& o, long limit) const {
  const long lim = std::min({prec_, o.prec_, limit});
  for (const auto& [e, a] : c_)
    if (e < lim && !(o.coeffs().count(e) && o.coeffs().at(e) == a)) return false;
  for (const auto& [e, a] : o.c_)
    if (e < lim && !c_.count(e)) return false;
  return true;
}

TruncatedSeries invert_series(const LaurentPoly& f, long prec) {
  if (f.is_zero()) throw ZeroDivision();
  return invert_series(TruncatedSeries(f), prec);
}

TruncatedSeries invert_series(const TruncatedSeries& f, long prec) {
  if (!f.order_known() || f.coeffs().empty()) throw ZeroDivision();
  const long of = f.coeffs().begin()->first;
  const CRat lead = f.coeffs().begin()->second;
  // g = t^{-of}/lead * sum_k (-h)^k with h = f*t^{-of}/lead - 1, ord(h) >= 1
  TruncatedSeries h;
  h.set_prec(f.prec() == TruncatedSeries::PREC_EXACT ? prec : f.prec() - of);
  for (const auto& [e, a] : f.coeffs())
    if (e != of) h.set(e - of, a / lead);
  TruncatedSeries acc{LaurentPoly::constant(CRat(1))};
  acc = acc.truncated(prec);
  TruncatedSeries term = acc;
  for (long k = 1; k < prec; ++k) {
    term = (term * (-h)).truncated(prec);
    if (term.coeffs().empty()) break;
    acc = (acc + term).truncated(prec);
  }
  // shift by -of and divide by the leading coefficient
  TruncatedSeries g;
  g.set_prec(std::min(acc.prec(), prec) - of);
  const CRat inv_lead = CRat(1) / lead;
  for (const auto& [e, a] : acc.coeffs()) g.set(e - of, a * inv_lead);
  return g;
}

}  // namespace henon
