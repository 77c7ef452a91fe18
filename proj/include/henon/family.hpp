#pragma once

#include <complex>
#include <vector>

#include "henon/laurent.hpp"

namespace henon {

struct ComplexHenon;

// A meromorphically degenerating family H_t(x,y) = (p_t(x) - a(t) y, x) with
// p_t(x) = x^d + a_1(t) x^{d-1} + ... + a_d(t) monic and a(t) nonvanishing on
// the punctured disk.
struct HenonFamily {
  int d = 2;
  std::vector<LaurentPoly> a_coeffs;  // a_1 ... a_d
  LaurentPoly a;
  double c = 5.0;

  HenonFamily() = default;
  HenonFamily(int deg, std::vector<LaurentPoly> coeffs, LaurentPoly aa, double cc = 5.0);

  ComplexHenon at(std::complex<double> t0) const;

  // t-adic orders of the coefficients (nullopt = identically zero term)
  std::vector<std::optional<long>> coeff_orders() const;
  std::optional<long> ord_a() const { return a.ord(); }
};

// General (not yet monic) family: (a0(t) x^d + ... + ad(t) - a(t) y, b(t) x).
struct GeneralFamily {
  int d = 2;
  std::vector<LaurentPoly> coeffs;  // a_0 ... a_d, size d+1
  LaurentPoly a;
  LaurentPoly b;
};

// Result of the monic normalization: the family is conjugated by the scaling
// sigma(x,y) = (lambda x, lambda/b * y) over the new parameter s with
// t = s^{d-1}, where lambda(s)^{d-1} = a0(s^{d-1}). lambda is computed as a
// truncated series (binomial expansion of the unit part); the returned
// coefficients are its truncation to `prec` terms.
struct NormalizedFamily {
  HenonFamily family;        // monic, over the parameter s
  long subst_exponent;       // d - 1, meaning t = s^{d-1}
  long prec;                 // truncation level of the series coefficients
  TruncatedSeries lambda;    // the conjugation scale, for verification
};

NormalizedFamily normalize_family(const GeneralFamily& g, long prec = 32);

// Symbolic check that sigma_s . H_{s^{d-1}} . sigma_s^{-1} agrees with the
// returned monic family up to the tracked precision. Returns true on
// agreement of every coefficient below the common precision.
bool verify_normalization(const GeneralFamily& g, const NormalizedFamily& n);

}  // namespace henon
