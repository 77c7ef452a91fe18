#pragma once

#include <array>
#include <map>
#include <utility>

#include "henon/family.hpp"
#include "henon/na_dynamics.hpp"

namespace henon {

// Bivariate polynomial in (x, y) with Laurent-polynomial coefficients in t.
class BivarPoly {
 public:
  using Key = std::pair<long, long>;  // (x-exponent, y-exponent)

  BivarPoly() = default;
  static BivarPoly term(long i, long j, LaurentPoly c);
  static BivarPoly var_x() { return term(1, 0, LaurentPoly::constant(CRat(1))); }
  static BivarPoly var_y() { return term(0, 1, LaurentPoly::constant(CRat(1))); }

  bool is_zero() const { return c_.empty(); }
  const std::map<Key, LaurentPoly>& terms() const { return c_; }
  long total_degree() const;  // requires non-zero
  LaurentPoly coeff(long i, long j) const;

  BivarPoly& operator+=(const BivarPoly& o);
  BivarPoly& operator-=(const BivarPoly& o);
  friend BivarPoly operator+(BivarPoly a, const BivarPoly& b) { return a += b; }
  friend BivarPoly operator-(BivarPoly a, const BivarPoly& b) { return a -= b; }
  friend BivarPoly operator*(const BivarPoly& a, const BivarPoly& b);
  BivarPoly scaled(const LaurentPoly& c) const;
  BivarPoly pow(unsigned long e) const;
  friend bool operator==(const BivarPoly& a, const BivarPoly& b) { return a.c_ == b.c_; }

  void set(long i, long j, LaurentPoly c);  // erases on zero

 private:
  std::map<Key, LaurentPoly> c_;
};

// Both components of H^n and of H^{-n}. The backward pair carries the common
// denominator a(t)^apow: the true inverse iterate is (back1, back2) / a^apow.
// The numerators are polynomials; back2 is monic of degree d^n in y.
struct IteratePolys {
  int n = 1;
  BivarPoly fwd1, fwd2;
  BivarPoly back1, back2;
  long apow = 0;  // (d^n - 1)/(d - 1)
};

IteratePolys compose_iterates(const HenonFamily& f, int n, long budget = 64);

// Homogeneous trivariate polynomial in (X, Y, Z), Laurent coefficients.
class TrivarPoly {
 public:
  using Key = std::array<long, 3>;

  bool is_zero() const { return c_.empty(); }
  const std::map<Key, LaurentPoly>& terms() const { return c_; }
  LaurentPoly coeff(long i, long j, long k) const;
  void set(long i, long j, long k, LaurentPoly c);

  bool homogeneous_of_degree(long deg) const;
  // substitute Z = 1, collapsing to the affine chart
  BivarPoly dehomogenized() const;

  std::complex<double> eval(std::complex<double> X, std::complex<double> Y,
                            std::complex<double> Z, std::complex<double> t0) const;
  CRat eval_exact(const CRat& X, const CRat& Y, const CRat& Z, const CRat& t0) const;
  // evaluation on the chart Z = 1 with series coordinates (for t-adic norms)
  TruncatedSeries eval_series(const TruncatedSeries& x, const TruncatedSeries& y) const;

 private:
  std::map<Key, LaurentPoly> c_;
};

// One section of the degree-d^n datum: the polynomial `num` divided by
// a(t)^apow (forward sections and Z^{d^n} have apow = 0).
struct Section {
  TrivarPoly num;
  long apow = 0;
};

// The five sections defining the rational map P^2 -> P^4 attached to the
// n-th iterate: homogenizations of H1^(n), H2^(n), H1^(-n), H2^(-n) and
// Z^{d^n} itself.
struct HomogeneousDatum {
  int n = 1;
  long deg = 2;  // d^n
  std::array<Section, 5> sections;
};

// Builds the datum and verifies its structure: homogeneity of degree d^n,
// F1^(n) = X^{d^n} + Z*(...), back2 numerator = Y^{d^n} + Z*(...), Z divides
// F2^(n) and the back1 numerator. Throws StructureViolation on any failure.
HomogeneousDatum homogenize_datum(const HenonFamily& f, int n, long budget = 64);

// phi at a homogeneous point: log of the max section modulus, minus the
// Fubini-Study normalization (d^n/2) log(|X|^2+|Y|^2+|Z|^2) when
// `normalized` (the default); the raw log max otherwise.
double model_function_phi(const HenonFamily& f, const HomogeneousDatum& datum,
                          std::complex<double> X, std::complex<double> Y,
                          std::complex<double> Z, std::complex<double> t0,
                          bool normalized = true);

// Same with the orbit of moduli computed in exact rational arithmetic; only
// the final logarithms are rounded. Unnormalized convention on request.
double model_function_phi_exact(const HenonFamily& f, const HomogeneousDatum& datum,
                                const CRat& X, const CRat& Y, const CRat& Z, const CRat& t0,
                                bool normalized = true);

// Non-archimedean counterpart on the chart Z = 1: returns q with
// g = q log(1/r), where g = log max_s |s(x,y,1)| - d^n log max{|x|,|y|,1}.
Rat na_model_function_g(const HenonFamily& f, const HomogeneousDatum& datum, const NAPoint& p);

}  // namespace henon
