#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <functional>
#include <random>

#include "qinv/ring.hpp"

using namespace qinv;
using namespace qinv::ring;

// ---------------------------------------------------------------------------
// Independent oracles. These deliberately avoid the library's own recursion
// paths so a shared bug cannot cancel out.
// ---------------------------------------------------------------------------

namespace {

long totient_oracle(long n) {
  long result = n;
  long m = n;
  for (long q = 2; q * q <= m; ++q) {
    if (m % q == 0) {
      result -= result / q;
      while (m % q == 0) m /= q;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

int moebius_oracle(long n) {
  int mu = 1;
  for (long q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      n /= q;
      if (n % q == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

IntPoly x_pow_minus_one(long d) {
  std::vector<Int> c(d + 1, Int(0));
  c[0] = -1;
  c[d] = 1;
  return IntPoly(std::move(c));
}

// Phi_n via the Moebius product formula: prod over d|n of (x^d-1)^mu(n/d),
// assembled as one exact division of the mu=+1 part by the mu=-1 part.
IntPoly cyclotomic_oracle(long n) {
  IntPoly num({Int(1)});
  IntPoly den({Int(1)});
  for (long d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    int mu = moebius_oracle(n / d);
    if (mu == 1) num = mul(num, x_pow_minus_one(d));
    if (mu == -1) den = mul(den, x_pow_minus_one(d));
  }
  return divexact(num, den);
}

std::mt19937 rng(12345);

Rat random_rat() {
  static const long dens[] = {1, 1, 1, 2, 3, 5};
  long num = static_cast<long>(rng() % 19) - 9;
  long den = dens[rng() % 6];
  Rat q(num, den);
  q.canonicalize();
  return q;
}

FieldElement random_element(const FieldPtr& f) {
  std::vector<Rat> c(f->degree());
  for (auto& q : c) q = random_rat();
  return FieldElement::from_coeffs(f, std::move(c));
}

FieldElement random_integral_element(const FieldPtr& f) {
  std::vector<Rat> c(f->degree());
  for (auto& q : c) q = Rat(static_cast<long>(rng() % 19) - 9);
  return FieldElement::from_coeffs(f, std::move(c));
}

errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.code();
  }
  throw std::logic_error("expected a qinv::error");
}

}  // namespace

// ---------------------------------------------------------------------------
// Cyclotomic polynomials
// ---------------------------------------------------------------------------

TEST_CASE("cyclotomic polynomials match frozen small cases") {
  CHECK(cyclotomic_polynomial(1) == IntPoly({Int(-1), Int(1)}));
  CHECK(cyclotomic_polynomial(2) == IntPoly({Int(1), Int(1)}));
  CHECK(cyclotomic_polynomial(3) == IntPoly({Int(1), Int(1), Int(1)}));
  CHECK(cyclotomic_polynomial(4) == IntPoly({Int(1), Int(0), Int(1)}));
  CHECK(cyclotomic_polynomial(6) == IntPoly({Int(1), Int(-1), Int(1)}));
  // x^4 - x^2 + 1
  CHECK(cyclotomic_polynomial(12) == IntPoly({Int(1), Int(0), Int(-1), Int(0), Int(1)}));
  // first index with a coefficient outside {-1,0,1} is n = 105
  CHECK(cyclotomic_polynomial(105).coeff(7) == -2);
}

TEST_CASE("cyclotomic polynomials agree with the Moebius product oracle") {
  for (long n = 1; n <= 80; ++n) CHECK(cyclotomic_polynomial(n) == cyclotomic_oracle(n));
}

TEST_CASE("cyclotomic polynomials vanish at primitive roots and have degree phi(n)") {
  for (long n = 1; n <= 60; ++n) {
    const IntPoly& phi = cyclotomic_polynomial(n);
    CHECK(phi.degree() == totient_oracle(n));
    std::complex<double> root = std::polar(1.0, 2.0 * M_PI / static_cast<double>(n));
    CHECK(std::abs(eval(phi, root)) < 1e-6);
    if (n > 2) {
      // a non-primitive root must not be killed
      std::complex<double> nonprim = std::polar(1.0, 0.0);
      CHECK(std::abs(eval(phi, nonprim)) > 1e-9);
    }
  }
}

TEST_CASE("repeated lookups return identical polynomials") {
  CHECK(cyclotomic_polynomial(40) == cyclotomic_polynomial(40));
}

// ---------------------------------------------------------------------------
// Field construction and element arithmetic
// ---------------------------------------------------------------------------

TEST_CASE("field handles are shared per n") {
  FieldPtr a = CyclotomicField::get(12);
  FieldPtr b = CyclotomicField::get(12);
  CHECK(a.get() == b.get());
  CHECK(a->degree() == 4);
  CHECK(a->n() == 12);
}

TEST_CASE("zeta powers reduce mod n and embed correctly") {
  for (long n : {1L, 2L, 3L, 4L, 8L, 12L, 24L, 40L}) {
    FieldPtr f = CyclotomicField::get(n);
    CHECK(FieldElement::zeta_pow(f, n) == FieldElement::one(f));
    CHECK(FieldElement::zeta_pow(f, n + 3) == FieldElement::zeta_pow(f, 3));
    CHECK(FieldElement::zeta_pow(f, -1) * FieldElement::zeta_pow(f, 1) == FieldElement::one(f));
    for (long k = 0; k < n; ++k) {
      std::complex<double> expect = std::polar(1.0, 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n));
      CHECK(std::abs(FieldElement::zeta_pow(f, k).approx() - expect) < 1e-9);
    }
  }
}

TEST_CASE("frozen identities in small fields") {
  FieldPtr q4 = CyclotomicField::get(4);
  FieldElement i = FieldElement::zeta_pow(q4, 1);
  CHECK(i * i == -FieldElement::one(q4));
  CHECK(i.inverse() == -i);

  FieldPtr q12 = CyclotomicField::get(12);
  FieldElement z = FieldElement::zeta_pow(q12, 1);
  // z^2 + z^-2 = 2 cos(pi/3) = 1
  CHECK(z.pow(2) + z.pow(-2) == FieldElement::one(q12));
}

TEST_CASE("field arithmetic satisfies the ring axioms on random elements") {
  for (long n : {5L, 8L, 12L, 24L}) {
    FieldPtr f = CyclotomicField::get(n);
    FieldElement one = FieldElement::one(f);
    for (int trial = 0; trial < 300; ++trial) {
      FieldElement a = random_element(f);
      FieldElement b = random_element(f);
      FieldElement c = random_element(f);
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a - a == FieldElement::zero(f));
      CHECK(a * one == a);
      if (!a.is_zero()) {
        CHECK(a * a.inverse() == one);
        CHECK((b / a) * a == b);
      }
      CHECK(a.pow(3) == a * a * a);
      if (!a.is_zero()) CHECK(a.pow(-2) == (a * a).inverse());
    }
  }
}

TEST_CASE("numeric embedding is a ring homomorphism") {
  FieldPtr f = CyclotomicField::get(24);
  for (int trial = 0; trial < 50; ++trial) {
    FieldElement a = random_element(f);
    FieldElement b = random_element(f);
    CHECK(std::abs((a + b).approx() - (a.approx() + b.approx())) < 1e-6);
    CHECK(std::abs((a * b).approx() - (a.approx() * b.approx())) < 1e-6);
  }
}

TEST_CASE("rationality and integrality predicates") {
  FieldPtr f = CyclotomicField::get(12);
  FieldElement half = FieldElement::from_rational(f, Rat(1, 2));
  CHECK(half.is_rational());
  CHECK(half.rational_value() == Rat(1, 2));
  CHECK(!half.is_integral());
  FieldElement z = FieldElement::zeta_pow(f, 1);
  CHECK(!z.is_rational());
  CHECK(z.is_integral());
  CHECK((z + FieldElement::from_int(f, 7)).is_integral());
  CHECK(!(half * z).is_integral());
  CHECK(code_of([&] { z.rational_value(); }) == errc::invalid_argument);
}

TEST_CASE("to_string emits exact coefficients") {
  FieldPtr f = CyclotomicField::get(12);
  FieldElement x = FieldElement::from_rational(f, Rat(-3, 2)) + FieldElement::zeta_pow(f, 2);
  CHECK(x.to_string() == "-3/2 + z^2");
  CHECK(FieldElement::zero(f).to_string() == "0");
}

// ---------------------------------------------------------------------------
// Field extension
// ---------------------------------------------------------------------------

TEST_CASE("extend_field embeds compatibly with the numeric embedding") {
  FieldPtr f = CyclotomicField::get(12);
  for (int trial = 0; trial < 40; ++trial) {
    FieldElement a = random_element(f);
    FieldElement image = extend_field(a, 2);
    CHECK(image.field()->n() == 24);
    CHECK(std::abs(image.approx() - a.approx()) < 1e-9);
  }
}

TEST_CASE("extend_field is a ring homomorphism") {
  FieldPtr f = CyclotomicField::get(8);
  for (int trial = 0; trial < 40; ++trial) {
    FieldElement a = random_element(f);
    FieldElement b = random_element(f);
    CHECK(extend_field(a + b, 3) == extend_field(a, 3) + extend_field(b, 3));
    CHECK(extend_field(a * b, 3) == extend_field(a, 3) * extend_field(b, 3));
  }
  CHECK(extend_field(FieldElement::one(f), 5) == FieldElement::one(CyclotomicField::get(40)));
  // zeta_8 -> zeta_24^3
  CHECK(extend_field(FieldElement::zeta_pow(f, 1), 3) ==
        FieldElement::zeta_pow(CyclotomicField::get(24), 3));
}

// ---------------------------------------------------------------------------
// Laurent polynomials
// ---------------------------------------------------------------------------

TEST_CASE("laurent polynomial arithmetic") {
  LaurentPolynomial A = LaurentPolynomial::monomial(Int(1), 1);
  LaurentPolynomial Ainv = LaurentPolynomial::monomial(Int(1), -1);
  LaurentPolynomial s = A + Ainv;
  LaurentPolynomial sq = s * s;
  CHECK(sq.coeff(2) == 1);
  CHECK(sq.coeff(0) == 2);
  CHECK(sq.coeff(-2) == 1);
  CHECK(sq.coeff(1) == 0);
  CHECK((s - s).is_zero());
  CHECK(s.to_string() == "A^-1 + A");
}

TEST_CASE("laurent evaluation matches direct field arithmetic") {
  FieldPtr f = CyclotomicField::get(8);
  FieldElement zeta = FieldElement::zeta_pow(f, 1);
  LaurentPolynomial A = LaurentPolynomial::monomial(Int(1), 1);
  LaurentPolynomial Ainv = LaurentPolynomial::monomial(Int(1), -1);
  // A^2 + A^-2 at A = zeta_8 is i + (-i) = 0
  CHECK((A * A + Ainv * Ainv).evaluate(zeta).is_zero());
  LaurentPolynomial mix = A * A * A - LaurentPolynomial::constant(Int(5)) + Ainv;
  CHECK(mix.evaluate(zeta) ==
        zeta.pow(3) - FieldElement::from_int(f, 5) + zeta.pow(-1));
}

// ---------------------------------------------------------------------------
// F_p[x] helpers
// ---------------------------------------------------------------------------

TEST_CASE("mod arithmetic basics") {
  // x^2 + 1 and x over F_3: remainder 1, gcd 1
  ModPoly a = mod_reduce(cyclotomic_polynomial(4), 3);
  ModPoly x{3, {0, 1}};
  CHECK(mod_rem(a, x) == ModPoly{3, {1}});
  CHECK(mod_gcd(a, x).is_one());
  // gcd picks up a shared factor: (x-1)(x+1) vs (x-1)x over F_5
  ModPoly p1{5, {4, 0, 1}};  // x^2 - 1
  ModPoly p2{5, {0, 4, 1}};  // x^2 - x
  ModPoly g = mod_gcd(p1, p2);
  CHECK(g == ModPoly{5, {4, 1}});  // x - 1, monic
  CHECK(mod_divides(g, p1));
  CHECK(mod_divides(g, p2));
  CHECK(!mod_divides(p1, g));
  CHECK(mod_divides(g, ModPoly{5, {}}));
}

TEST_CASE("odd prime recognizer") {
  CHECK(is_odd_prime(3));
  CHECK(is_odd_prime(5));
  CHECK(is_odd_prime(97));
  CHECK(!is_odd_prime(2));
  CHECK(!is_odd_prime(1));
  CHECK(!is_odd_prime(9));
  CHECK(!is_odd_prime(91));  // 7 * 13
}

// ---------------------------------------------------------------------------
// The ideal J_p
// ---------------------------------------------------------------------------

TEST_CASE("J_p for dimensions {1,-1} is the principal ideal (p)") {
  // dim^p - dim vanishes for dim = +-1 and odd p, so only p survives
  FieldPtr f = CyclotomicField::get(12);
  std::vector<FieldElement> dims = {FieldElement::one(f), -FieldElement::one(f)};
  for (long p : {3L, 5L}) {
    IdealJp J = jp_generator(p, f, dims);
    CHECK(!J.vacuous);
    CHECK(J.g == mod_reduce(f->minimal_polynomial(), p));
    CHECK(in_ideal(FieldElement::from_int(f, p), J));
    CHECK(in_ideal(FieldElement::zero(f), J));
    CHECK(!in_ideal(FieldElement::one(f), J));
    CHECK(!in_ideal(FieldElement::zeta_pow(f, 1), J));
    for (int trial = 0; trial < 100; ++trial) {
      FieldElement a = random_integral_element(f);
      CHECK(in_ideal(FieldElement::from_int(f, p) * a, J));
      // (p) contains x iff every coefficient is divisible by p
      bool exact = true;
      for (const Rat& q : a.coeffs()) exact = exact && (q.get_num() % p == 0);
      CHECK(in_ideal(a, J) == exact);
    }
  }
}

TEST_CASE("a unit dimension can make J_p everything") {
  // dim = zeta_4, p = 3: zeta^3 - zeta = -2*zeta, and gcd(x^2+1, x) = 1
  FieldPtr f = CyclotomicField::get(4);
  IdealJp J = jp_generator(3, f, {FieldElement::zeta_pow(f, 1)});
  CHECK(J.vacuous);
  CHECK(J.g.is_one());
  CHECK(in_ideal(FieldElement::one(f), J));
  CHECK(in_ideal(random_integral_element(f), J));
}

TEST_CASE("J_p contains p and all its generators") {
  FieldPtr f = CyclotomicField::get(24);
  std::vector<FieldElement> dims = {
      FieldElement::one(f),
      FieldElement::zeta_pow(f, 2) + FieldElement::zeta_pow(f, -2),
      FieldElement::zeta_pow(f, 3) - FieldElement::one(f),
  };
  for (long p : {3L, 5L, 7L}) {
    IdealJp J = jp_generator(p, f, dims);
    CHECK(in_ideal(FieldElement::from_int(f, p), J));
    for (const FieldElement& d : dims) CHECK(in_ideal(d.pow(p) - d, J));
  }
}

TEST_CASE("ideal membership is closed under addition and multiplication") {
  FieldPtr f = CyclotomicField::get(12);
  std::vector<FieldElement> dims = {FieldElement::zeta_pow(f, 2) + FieldElement::zeta_pow(f, -2)};
  IdealJp J = jp_generator(5, f, dims);
  std::vector<FieldElement> members;
  members.push_back(FieldElement::from_int(f, 5));
  members.push_back(dims[0].pow(5) - dims[0]);
  for (int trial = 0; trial < 60; ++trial) {
    FieldElement a = members[rng() % members.size()];
    FieldElement b = members[rng() % members.size()];
    FieldElement c = random_integral_element(f);
    CHECK(in_ideal(a + b, J));
    CHECK(in_ideal(c * a, J));
    members.push_back(a + b);
    members.push_back(c * a);
  }
}

TEST_CASE("membership tolerates denominators coprime to p") {
  FieldPtr f = CyclotomicField::get(12);
  IdealJp J = jp_generator(3, f, {FieldElement::one(f)});
  // 3/2 = 3 * inverse(2) and 2 is a unit mod 3
  CHECK(in_ideal(FieldElement::from_rational(f, Rat(3, 2)), J));
  CHECK(!in_ideal(FieldElement::from_rational(f, Rat(1, 2)), J));
}

// ---------------------------------------------------------------------------
// Error paths
// ---------------------------------------------------------------------------

TEST_CASE("error reporting carries the right category") {
  FieldPtr f = CyclotomicField::get(12);
  FieldPtr g = CyclotomicField::get(8);

  CHECK_NOTHROW(FieldElement::one(f).inverse());
  CHECK(code_of([&] { FieldElement::zero(f).inverse(); }) == errc::division_by_zero);
  CHECK(code_of([&] { auto r = FieldElement::one(f) / FieldElement::zero(f); (void)r; }) ==
        errc::division_by_zero);
  CHECK(code_of([&] { auto r = FieldElement::one(f) + FieldElement::one(g); (void)r; }) ==
        errc::field_mismatch);
  CHECK(code_of([&] { jp_generator(4, f, {}); }) == errc::invalid_argument);
  CHECK(code_of([&] { jp_generator(3, f, {FieldElement::from_rational(f, Rat(1, 2))}); }) ==
        errc::not_integral);

  IdealJp J = jp_generator(3, f, {FieldElement::one(f)});
  CHECK(code_of([&] { in_ideal(FieldElement::from_rational(f, Rat(1, 3)), J); }) ==
        errc::non_invertible_denominator);
  CHECK(code_of([&] { in_ideal(FieldElement::one(g), J); }) == errc::field_mismatch);

  try {
    FieldElement::zero(f).inverse();
  } catch (const error& e) {
    CHECK(std::string(e.what()).find("DivisionByZero") != std::string::npos);
    CHECK(e.origin() == "ring.field_ops");
  }
}
