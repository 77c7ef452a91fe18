#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

namespace henon {

using Rat = boost::multiprecision::mpq_rational;

// Exact value of a double (doubles are dyadic rationals).
inline Rat rat_of(double x) { return Rat(x); }

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

// log of a positive rational, robust against double overflow in num/den.
inline double log_rat(const Rat& q) {
  signed long en = 0, ed = 0;
  const double mn = mpz_get_d_2exp(&en, mpq_numref(q.backend().data()));
  const double md = mpz_get_d_2exp(&ed, mpq_denref(q.backend().data()));
  return std::log(std::fabs(mn)) - std::log(std::fabs(md)) +
         (static_cast<double>(en) - static_cast<double>(ed)) * std::log(2.0);
}

// Exact complex rational. Kept minimal: the symbolic paths only need ring
// operations, conjugation and squared modulus.
struct CRat {
  Rat re, im;

  CRat() : re(0), im(0) {}
  CRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  explicit CRat(long r) : re(r), im(0) {}
  explicit CRat(const std::complex<double>& z) : re(rat_of(z.real())), im(rat_of(z.imag())) {}

  bool is_zero() const { return re == 0 && im == 0; }

  CRat operator-() const { return CRat(-re, -im); }
  CRat& operator+=(const CRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  CRat& operator-=(const CRat& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend CRat operator+(CRat a, const CRat& b) { return a += b; }
  friend CRat operator-(CRat a, const CRat& b) { return a -= b; }
  friend CRat operator*(const CRat& a, const CRat& b) {
    return CRat(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  CRat& operator*=(const CRat& o) { return *this = *this * o; }
  friend bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }

  CRat conj() const { return CRat(re, -im); }
  Rat abs2() const { return re * re + im * im; }

  // exact division (b != 0)
  friend CRat operator/(const CRat& a, const CRat& b) {
    const Rat n = b.abs2();
    const CRat p = a * b.conj();
    return CRat(p.re / n, p.im / n);
  }

  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  // log of the modulus; -inf for zero
  double log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return 0.5 * log_rat(abs2());
  }
};

inline CRat pow(CRat base, unsigned long e) {
  CRat acc(1);
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

}  // namespace henon
