#pragma once

#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "henon/errors.hpp"
#include "henon/rational.hpp"

namespace henon {

struct HybridNormParams {
  double r;
  explicit HybridNormParams(double rr) : r(rr) {
    if (!(r > 0.0 && r < 1.0)) throw InvalidRadius("hybrid norm base r must lie in (0,1)");
  }
};

// Finite-support Laurent polynomial over the exact complex rationals.
// Canonical form: no stored coefficient is zero; the zero polynomial has
// empty support and order +infinity (std::nullopt).
class LaurentPoly {
 public:
  LaurentPoly() = default;

  static LaurentPoly term(long exp, CRat coeff);
  static LaurentPoly constant(CRat c) { return term(0, std::move(c)); }
  static LaurentPoly constant(double re, double im = 0.0) {
    return constant(CRat(rat_of(re), rat_of(im)));
  }

  bool is_zero() const { return c_.empty(); }
  const std::map<long, CRat>& coeffs() const { return c_; }
  CRat coeff(long exp) const;

  // t-adic order; nullopt is the +infinity sentinel of the zero polynomial.
  std::optional<long> ord() const;
  long max_exp() const;  // requires non-zero

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.c_ == b.c_; }

  LaurentPoly pow(unsigned long e) const;
  LaurentPoly shifted(long k) const;  // multiply by t^k

  // substitute t = s^m (Puiseux step of the monic normalization)
  LaurentPoly substitute_power(long m) const;

  std::complex<double> eval(std::complex<double> t0) const;  // throws ZeroParameter
  CRat eval_exact(const CRat& t0) const;                     // throws ZeroParameter

  void set(long exp, CRat coeff);  // erases on zero

 private:
  std::map<long, CRat> c_;
};

std::optional<long> ord(const LaurentPoly& f);
double t_adic_norm(const LaurentPoly& f, const HybridNormParams& p);
double hybrid_norm(const LaurentPoly& f, const HybridNormParams& p);

// Exact division: f / g when the remainder vanishes, nullopt otherwise.
std::optional<LaurentPoly> div_exact(const LaurentPoly& f, const LaurentPoly& g);

// Truncated Laurent series: coefficients of t^k for k < prec are stored
// (zeros omitted), everything at or above prec is unknown. PREC_EXACT marks a
// series that is a genuine Laurent polynomial with no unknown tail.
class TruncatedSeries {
 public:
  static constexpr long PREC_EXACT = std::numeric_limits<long>::max() / 4;

  TruncatedSeries() : prec_(PREC_EXACT) {}
  explicit TruncatedSeries(const LaurentPoly& f, long prec = PREC_EXACT);

  long prec() const { return prec_; }
  bool is_known_zero() const { return c_.empty() && prec_ == PREC_EXACT; }
  const std::map<long, CRat>& coeffs() const { return c_; }

  // Exact order when the support is non-empty (or the series is exactly 0);
  // nullopt when only the lower bound prec is known.
  bool order_known() const { return !c_.empty() || prec_ == PREC_EXACT; }
  std::optional<long> ord() const;  // nullopt == +infinity (exact zero); throws if unknown

  TruncatedSeries operator-() const;
  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.prec_ == b.prec_ && a.c_ == b.c_;
  }

  TruncatedSeries truncated(long prec) const;
  TruncatedSeries pow(unsigned long e) const;

  // agreement of all coefficients below min(prec_a, prec_b, limit)
  bool agrees_with(const TruncatedSeries& o, long limit = PREC_EXACT) const;

  void set(long exp, CRat coeff);
  void set_prec(long p) { prec_ = p; }

 private:
  void drop_at_or_above_prec();
  std::map<long, CRat> c_;
  long prec_;
};

// Multiplicative inverse of f as a truncated series: the result g satisfies
// f*g = 1 + O(t^{prec + ord f}) and ord(g) = -ord(f) exactly.
TruncatedSeries invert_series(const LaurentPoly& f, long prec);
TruncatedSeries invert_series(const TruncatedSeries& f, long prec);

}  // namespace henon
