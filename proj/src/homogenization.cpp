#include "henon/homogenization.hpp"

#include <algorithm>
#include <cmath>

namespace henon {

BivarPoly BivarPoly::term(long i, long j, LaurentPoly c) {
  BivarPoly p;
  p.set(i, j, std::move(c));
  return p;
}

long BivarPoly::total_degree() const {
  long deg = 0;
  for (const auto& [k, c] : c_) deg = std::max(deg, k.first + k.second);
  return deg;
}

LaurentPoly BivarPoly::coeff(long i, long j) const {
  const auto it = c_.find({i, j});
  return it == c_.end() ? LaurentPoly() : it->second;
}

void BivarPoly::set(long i, long j, LaurentPoly c) {
  if (c.is_zero())
    c_.erase({i, j});
  else
    c_[{i, j}] = std::move(c);
}

BivarPoly& BivarPoly::operator+=(const BivarPoly& o) {
  for (const auto& [k, c] : o.c_) {
    auto it = c_.find(k);
    if (it == c_.end()) {
      c_.emplace(k, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) c_.erase(it);
    }
  }
  return *this;
}

BivarPoly& BivarPoly::operator-=(const BivarPoly& o) {
  for (const auto& [k, c] : o.c_) {
    auto it = c_.find(k);
    if (it == c_.end()) {
      c_.emplace(k, -c);
    } else {
      it->second -= c;
      if (it->second.is_zero()) c_.erase(it);
    }
  }
  return *this;
}

BivarPoly operator*(const BivarPoly& a, const BivarPoly& b) {
  BivarPoly p;
  for (const auto& [ka, ca] : a.c_)
    for (const auto& [kb, cb] : b.c_) {
      const BivarPoly::Key k{ka.first + kb.first, ka.second + kb.second};
      auto it = p.c_.find(k);
      if (it == p.c_.end()) {
        p.c_.emplace(k, ca * cb);
      } else {
        it->second += ca * cb;
      }
    }
  for (auto it = p.c_.begin(); it != p.c_.end();)
    it = it->second.is_zero() ? p.c_.erase(it) : std::next(it);
  return p;
}

BivarPoly BivarPoly::scaled(const LaurentPoly& c) const {
  BivarPoly p;
  if (c.is_zero()) return p;
  for (const auto& [k, v] : c_) p.c_.emplace(k, v * c);
  return p;
}

BivarPoly BivarPoly::pow(unsigned long e) const {
  BivarPoly acc = term(0, 0, LaurentPoly::constant(CRat(1)));
  BivarPoly base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

IteratePolys compose_iterates(const HenonFamily& f, int n, long budget) {
  if (n < 1) throw BudgetExceeded("iterate count must be at least 1");
  long dn = 1;
  for (int i = 0; i < n; ++i) {
    dn *= f.d;
    if (dn > budget) throw BudgetExceeded("symbolic degree d^n exceeds the budget");
  }

  const BivarPoly one = BivarPoly::term(0, 0, LaurentPoly::constant(CRat(1)));
  const auto p_of = [&](const BivarPoly& v) {
    BivarPoly acc = one;
    for (int i = 0; i < f.d; ++i)
      acc = acc * v + BivarPoly::term(0, 0, f.a_coeffs[static_cast<size_t>(i)]);
    return acc;
  };

  IteratePolys it;
  it.n = n;
  // forward: (x, y) -> (p(x) - a y, x)
  BivarPoly h1 = BivarPoly::var_x(), h2 = BivarPoly::var_y();
  for (int k = 0; k < n; ++k) {
    BivarPoly next = p_of(h1) - h2.scaled(f.a);
    h2 = h1;
    h1 = std::move(next);
  }
  it.fwd1 = std::move(h1);
  it.fwd2 = std::move(h2);

  // backward numerators over the common denominator a^apow:
  // H^{-1}(G1/a^k, G2/a^k) = (G2 a^{k(d-1)+1}, sum_i a_i G2^{d-i} a^{ki}
  //                            - G1 a^{k(d-1)}) / a^{kd+1}
  BivarPoly g1 = BivarPoly::var_x(), g2 = BivarPoly::var_y();
  long k = 0;
  for (int s = 0; s < n; ++s) {
    BivarPoly num = g2.pow(static_cast<unsigned long>(f.d));
    LaurentPoly ap = LaurentPoly::constant(CRat(1));
    for (int i = 1; i <= f.d; ++i) {
      ap = ap * f.a.pow(static_cast<unsigned long>(k));
      num += g2.pow(static_cast<unsigned long>(f.d - i)).scaled(f.a_coeffs[static_cast<size_t>(i - 1)] * ap);
    }
    const LaurentPoly a_kd1 = f.a.pow(static_cast<unsigned long>(k * (f.d - 1)));
    num -= g1.scaled(a_kd1);
    g1 = g2.scaled(a_kd1 * f.a);
    g2 = std::move(num);
    k = k * f.d + 1;
  }
  it.back1 = std::move(g1);
  it.back2 = std::move(g2);
  it.apow = k;
  return it;
}

LaurentPoly TrivarPoly::coeff(long i, long j, long k) const {
  const auto it = c_.find({i, j, k});
  return it == c_.end() ? LaurentPoly() : it->second;
}

void TrivarPoly::set(long i, long j, long k, LaurentPoly c) {
  if (c.is_zero())
    c_.erase({i, j, k});
  else
    c_[{i, j, k}] = std::move(c);
}

bool TrivarPoly::homogeneous_of_degree(long deg) const {
  for (const auto& [k, c] : c_)
    if (k[0] + k[1] + k[2] != deg) return false;
  return true;
}

BivarPoly TrivarPoly::dehomogenized() const {
  BivarPoly p;
  for (const auto& [k, c] : c_) {
    auto cur = p.coeff(k[0], k[1]);
    cur += c;
    p.set(k[0], k[1], cur);
  }
  return p;
}

namespace {

// std::pow on a zero complex base yields NaN; integer powers by squaring
std::complex<double> ipow(std::complex<double> b, long e) {
  std::complex<double> acc(1.0, 0.0);
  for (; e > 0; e >>= 1, b *= b)
    if (e & 1) acc *= b;
  return acc;
}

}  // namespace

std::complex<double> TrivarPoly::eval(std::complex<double> X, std::complex<double> Y,
                                      std::complex<double> Z, std::complex<double> t0) const {
  std::complex<double> acc(0.0, 0.0);
  for (const auto& [k, c] : c_)
    acc += c.eval(t0) * ipow(X, k[0]) * ipow(Y, k[1]) * ipow(Z, k[2]);
  return acc;
}

CRat TrivarPoly::eval_exact(const CRat& X, const CRat& Y, const CRat& Z, const CRat& t0) const {
  CRat acc;
  for (const auto& [k, c] : c_)
    acc += c.eval_exact(t0) * pow(X, static_cast<unsigned long>(k[0])) *
           pow(Y, static_cast<unsigned long>(k[1])) * pow(Z, static_cast<unsigned long>(k[2]));
  return acc;
}

TruncatedSeries TrivarPoly::eval_series(const TruncatedSeries& x,
                                        const TruncatedSeries& y) const {
  TruncatedSeries acc;  // exact zero
  for (const auto& [k, c] : c_)
    acc = acc + TruncatedSeries(c) * x.pow(static_cast<unsigned long>(k[0])) *
                    y.pow(static_cast<unsigned long>(k[1]));
  return acc;
}

namespace {

TrivarPoly homogenize(const BivarPoly& p, long deg) {
  TrivarPoly h;
  for (const auto& [k, c] : p.terms()) {
    if (k.first + k.second > deg)
      throw StructureViolation("affine iterate exceeds the homogenization degree");
    h.set(k.first, k.second, deg - k.first - k.second, c);
  }
  return h;
}

bool z_divides(const TrivarPoly& p) {
  for (const auto& [k, c] : p.terms())
    if (k[2] == 0) return false;
  return true;
}

// section is lead^{deg} + Z*(...), with lead = X (axis 0) or Y (axis 1)
void check_unipotent(const TrivarPoly& p, long deg, int axis, const char* what) {
  const LaurentPoly one = LaurentPoly::constant(CRat(1));
  for (const auto& [k, c] : p.terms()) {
    if (k[2] > 0) continue;
    const bool is_lead = (axis == 0 && k[0] == deg && k[1] == 0) ||
                         (axis == 1 && k[1] == deg && k[0] == 0);
    if (!is_lead || !(c == one))
      throw StructureViolation(std::string(what) + ": unexpected term off the Z divisor");
  }
  if (!(p.coeff(axis == 0 ? deg : 0, axis == 1 ? deg : 0, 0) == one))
    throw StructureViolation(std::string(what) + ": leading monomial is not monic");
}

}  // namespace

HomogeneousDatum homogenize_datum(const HenonFamily& f, int n, long budget) {
  const IteratePolys it = compose_iterates(f, n, budget);
  long dn = 1;
  for (int i = 0; i < n; ++i) dn *= f.d;

  HomogeneousDatum dat;
  dat.n = n;
  dat.deg = dn;
  dat.sections[0] = {homogenize(it.fwd1, dn), 0};
  dat.sections[1] = {homogenize(it.fwd2, dn), 0};
  dat.sections[2] = {homogenize(it.back1, dn), it.apow};
  dat.sections[3] = {homogenize(it.back2, dn), it.apow};
  TrivarPoly zn;
  zn.set(0, 0, dn, LaurentPoly::constant(CRat(1)));
  dat.sections[4] = {std::move(zn), 0};

  for (const auto& s : dat.sections)
    if (!s.num.homogeneous_of_degree(dn))
      throw StructureViolation("section is not homogeneous of degree d^n");
  check_unipotent(dat.sections[0].num, dn, 0, "forward first section");
  check_unipotent(dat.sections[3].num, dn, 1, "backward second section");
  if (!z_divides(dat.sections[1].num))
    throw StructureViolation("forward second section is not divisible by Z");
  if (!z_divides(dat.sections[2].num))
    throw StructureViolation("backward first section is not divisible by Z");
  if (!(dat.sections[0].num.dehomogenized() == it.fwd1) ||
      !(dat.sections[3].num.dehomogenized() == it.back2))
    throw StructureViolation("dehomogenization does not return the affine iterate");
  return dat;
}

double model_function_phi(const HenonFamily& f, const HomogeneousDatum& datum,
                          std::complex<double> X, std::complex<double> Y,
                          std::complex<double> Z, std::complex<double> t0, bool normalized) {
  const double av = std::abs(f.a.eval(t0));
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : datum.sections) {
    const double v =
        std::log(std::abs(s.num.eval(X, Y, Z, t0))) - s.apow * std::log(av);
    best = std::max(best, v);
  }
  if (!normalized) return best;
  const double n2 = std::norm(X) + std::norm(Y) + std::norm(Z);
  return best - 0.5 * static_cast<double>(datum.deg) * std::log(n2);
}

double model_function_phi_exact(const HenonFamily& f, const HomogeneousDatum& datum,
                                const CRat& X, const CRat& Y, const CRat& Z, const CRat& t0,
                                bool normalized) {
  const Rat a2 = f.a.eval_exact(t0).abs2();
  // compare |num|^2 / |a|^{2 apow} across sections exactly, log at the end
  Rat best2;
  long best_apow = 0;
  bool first = true;
  for (const auto& s : datum.sections) {
    const Rat v2 = s.num.eval_exact(X, Y, Z, t0).abs2();
    // v2 / a2^apow > best2 / a2^best_apow, cleared of denominators
    bool better;
    if (first) {
      better = true;
    } else if (s.apow >= best_apow) {
      Rat lhs = v2, rhs = best2;
      for (long i = 0; i < s.apow - best_apow; ++i) rhs *= a2;
      better = lhs > rhs;
    } else {
      Rat lhs = v2, rhs = best2;
      for (long i = 0; i < best_apow - s.apow; ++i) lhs *= a2;
      better = lhs > rhs;
    }
    if (better) {
      best2 = v2;
      best_apow = s.apow;
      first = false;
    }
  }
  double val = 0.5 * log_rat(best2) - 0.5 * static_cast<double>(best_apow) * log_rat(a2);
  if (!normalized) return val;
  const Rat n2 = X.abs2() + Y.abs2() + Z.abs2();
  return val - 0.5 * static_cast<double>(datum.deg) * log_rat(n2);
}

Rat na_model_function_g(const HenonFamily& f, const HomogeneousDatum& datum, const NAPoint& p) {
  const auto oa = f.ord_a();
  std::optional<Rat> min_ord;  // nullopt = +infinity (all sections vanish: impossible)
  for (const auto& s : datum.sections) {
    const TruncatedSeries v = s.num.eval_series(p.x, p.y);
    if (!v.order_known())
      throw InsufficientPrecision("section order undetermined at this precision");
    const auto o = v.ord();
    if (!o) continue;  // exactly zero section value
    Rat so = Rat(*o);
    if (s.apow > 0) {
      if (!oa) throw ZeroDivision("degenerate family in na model function");
      so -= Rat(s.apow) * Rat(*oa);
    }
    if (!min_ord || so < *min_ord) min_ord = so;
  }
  if (!min_ord) throw StructureViolation("all five sections vanished at a point");
  // d^n * min(ord x, ord y, 0) is the order of max{|x|,|y|,1}^{d^n}
  const ValPoint w = na_val(p);
  Rat m(0);
  if (w.u && *w.u < m) m = *w.u;
  if (w.v && *w.v < m) m = *w.v;
  return -(*min_ord - Rat(datum.deg) * m);
}

}  // namespace henon
