#pragma once

#include <gmpxx.h>

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qinv/errors.hpp"

namespace qinv::ring {

using Int = mpz_class;
using Rat = mpq_class;

// ---------------------------------------------------------------------------
// Dense integer polynomials (coefficients low-to-high, no leading zeros).
// Mainly used for cyclotomic polynomials and their reductions.
// ---------------------------------------------------------------------------
struct IntPoly {
  std::vector<Int> c;

  IntPoly() = default;
  explicit IntPoly(std::vector<Int> coeffs) : c(std::move(coeffs)) { normalize(); }

  void normalize();
  bool is_zero() const { return c.empty(); }
  long degree() const { return static_cast<long>(c.size()) - 1; }
  const Int& coeff(long k) const;
  bool operator==(const IntPoly& o) const { return c == o.c; }

  std::string to_string() const;
};

IntPoly mul(const IntPoly& a, const IntPoly& b);
IntPoly sub(const IntPoly& a, const IntPoly& b);
/// Exact division; throws invalid_argument if the remainder is nonzero.
IntPoly divexact(const IntPoly& a, const IntPoly& b);
std::complex<double> eval(const IntPoly& p, std::complex<double> x);

/// The n-th cyclotomic polynomial, by exact division of x^n - 1 by the
/// product of cyclotomic polynomials of the proper divisors of n. Cached;
/// each n is computed once even under concurrent callers.
IntPoly cyclotomic_polynomial(long n);

// ---------------------------------------------------------------------------
// Laurent polynomials in one variable A over Z.
// ---------------------------------------------------------------------------
class FieldElement;
class CyclotomicField;
using FieldPtr = std::shared_ptr<const CyclotomicField>;

class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  static LaurentPolynomial monomial(const Int& coeff, long exponent);
  static LaurentPolynomial constant(const Int& value) { return monomial(value, 0); }

  bool is_zero() const { return terms_.empty(); }
  Int coeff(long exponent) const;
  const std::map<long, Int>& terms() const { return terms_; }

  LaurentPolynomial operator+(const LaurentPolynomial& o) const;
  LaurentPolynomial operator-(const LaurentPolynomial& o) const;
  LaurentPolynomial operator*(const LaurentPolynomial& o) const;
  LaurentPolynomial operator-() const;
  bool operator==(const LaurentPolynomial& o) const { return terms_ == o.terms_; }

  /// Substitute an invertible field element for the variable A.
  FieldElement evaluate(const FieldElement& a_value) const;

  std::string to_string() const;

 private:
  // exponent -> nonzero coefficient; canonical form keeps no zero entries
  std::map<long, Int> terms_;
};

// ---------------------------------------------------------------------------
// Cyclotomic fields Q(zeta_n) = Q[x]/Phi_n(x), shared and immutable.
// ---------------------------------------------------------------------------
class CyclotomicField {
 public:
  /// Shared handle for Q(zeta_n); instances are cached and immutable.
  static FieldPtr get(long n);

  long n() const { return n_; }
  long degree() const { return degree_; }
  const IntPoly& minimal_polynomial() const { return phi_; }

  /// x^k reduced mod Phi_n, valid for 0 <= k < table_size().
  const std::vector<Int>& power_basis(long k) const { return xpow_[k]; }
  long table_size() const { return static_cast<long>(xpow_.size()); }

 private:
  explicit CyclotomicField(long n);

  long n_ = 0;
  long degree_ = 0;
  IntPoly phi_;
  std::vector<std::vector<Int>> xpow_;
};

// ---------------------------------------------------------------------------
// Field elements: exact vectors of rationals of length degree(), reduced
// mod Phi_n. All invariant scalars of the library live here.
// ---------------------------------------------------------------------------
class FieldElement {
 public:
  FieldElement() = default;

  static FieldElement zero(const FieldPtr& f);
  static FieldElement one(const FieldPtr& f);
  static FieldElement from_rational(const FieldPtr& f, const Rat& q);
  static FieldElement from_int(const FieldPtr& f, long v);
  /// zeta_n^e for any integer e (reduced mod n).
  static FieldElement zeta_pow(const FieldPtr& f, long e);
  static FieldElement from_coeffs(const FieldPtr& f, std::vector<Rat> coeffs);

  const FieldPtr& field() const { return field_; }
  const std::vector<Rat>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;
  Rat rational_value() const;
  /// True iff every coefficient of the canonical representative is an integer.
  bool is_integral() const;

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  FieldElement inverse() const;
  FieldElement pow(long e) const;

  /// Numeric value under the embedding zeta_n -> exp(2*pi*i*conjugate/n).
  std::complex<double> approx(long conjugate = 1) const;

  /// "c0 + c1*z + ..." with exact rational coefficients.
  std::string to_string() const;

 private:
  FieldElement(FieldPtr f, std::vector<Rat> c) : field_(std::move(f)), c_(std::move(c)) {}
  void check_same_field(const FieldElement& o, const char* op) const;

  FieldPtr field_;
  std::vector<Rat> c_;
};

/// Re-express a in Q(zeta_{n*factor}) via zeta_n -> zeta_{n*factor}^factor.
FieldElement extend_field(const FieldElement& a, long factor);

// ---------------------------------------------------------------------------
// Polynomials over F_p and the ideal J_p.
// ---------------------------------------------------------------------------
struct ModPoly {
  long p = 0;
  std::vector<long> c;  // coefficients in [0, p), no leading zeros

  void normalize();
  bool is_zero() const { return c.empty(); }
  bool is_one() const { return c.size() == 1 && c[0] == 1; }
  long degree() const { return static_cast<long>(c.size()) - 1; }
  bool operator==(const ModPoly& o) const { return p == o.p && c == o.c; }
};

ModPoly mod_reduce(const IntPoly& a, long p);
ModPoly mod_mul(const ModPoly& a, const ModPoly& b);
ModPoly mod_rem(const ModPoly& a, const ModPoly& b);
/// Monic gcd; gcd(a, 0) = monic(a).
ModPoly mod_gcd(const ModPoly& a, const ModPoly& b);
bool mod_divides(const ModPoly& divisor, const ModPoly& value);

bool is_odd_prime(long p);

/// J_p = (p, dim^p - dim) reduced to a single generator over F_p[x]/(Phi_n):
/// g = gcd of Phi_n mod p with the generator images. Membership in J_p is
/// then divisibility by g.
struct IdealJp {
  long p = 0;
  long n = 0;       // root-of-unity order of the ambient field
  ModPoly g;        // monic divisor of Phi_n mod p
  bool vacuous = false;  // g = 1, i.e. J_p is everything mod p
};

/// Builds J_p from the quantum dimensions. Every dim must be integral.
IdealJp jp_generator(long p, const FieldPtr& field, const std::vector<FieldElement>& dims);

/// Decides x in J_p. Denominators are cleared from the canonical rational
/// form; a denominator not invertible mod p raises
/// non_invertible_denominator rather than guessing a verdict.
bool in_ideal(const FieldElement& x, const IdealJp& J);

}  // namespace qinv::ring
