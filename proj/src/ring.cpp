#include "qinv/ring.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

namespace qinv::ring {

namespace {

const Int kZero(0);

// Rational dense polynomials, local helpers for inversion mod Phi_n.
using RatPoly = std::vector<Rat>;

void rp_normalize(RatPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

long rp_degree(const RatPoly& a) { return static_cast<long>(a.size()) - 1; }

RatPoly rp_sub(const RatPoly& a, const RatPoly& b) {
  RatPoly r(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  rp_normalize(r);
  return r;
}

RatPoly rp_mul(const RatPoly& a, const RatPoly& b) {
  if (a.empty() || b.empty()) return {};
  RatPoly r(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  rp_normalize(r);
  return r;
}

// a = q*b + r with deg r < deg b
std::pair<RatPoly, RatPoly> rp_divmod(RatPoly a, const RatPoly& b) {
  RatPoly q;
  if (b.empty()) throw error(errc::division_by_zero, "ring.field_ops", "polynomial division by zero");
  rp_normalize(a);
  long db = rp_degree(b);
  if (rp_degree(a) >= db) q.assign(a.size() - b.size() + 1, Rat(0));
  while (rp_degree(a) >= db) {
    long shift = rp_degree(a) - db;
    Rat f = a.back() / b.back();
    q[shift] = f;
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    rp_normalize(a);
  }
  return {q, a};
}

}  // namespace

// ---------------------------------------------------------------------------
// IntPoly
// ---------------------------------------------------------------------------

void IntPoly::normalize() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

const Int& IntPoly::coeff(long k) const {
  if (k < 0 || k >= static_cast<long>(c.size())) return kZero;
  return c[k];
}

std::string IntPoly::to_string() const {
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (long k = degree(); k >= 0; --k) {
    if (c[k] == 0) continue;
    Int a = c[k];
    if (first) {
      first = false;
      if (a < 0) { os << "-"; a = -a; }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    if (k == 0 || a != 1) os << a.get_str();
    if (k > 0) {
      if (a != 1) os << "*";
      os << "x";
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

IntPoly mul(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Int> r(a.c.size() + b.c.size() - 1, Int(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
  return IntPoly(std::move(r));
}

IntPoly sub(const IntPoly& a, const IntPoly& b) {
  std::vector<Int> r(std::max(a.c.size(), b.c.size()), Int(0));
  for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
  return IntPoly(std::move(r));
}

IntPoly divexact(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw error(errc::division_by_zero, "ring.divexact", "division by zero polynomial");
  std::vector<Int> rem = a.c;
  long db = b.degree();
  long dq = a.degree() - db;
  if (a.is_zero()) return {};
  if (dq < 0) throw error(errc::invalid_argument, "ring.divexact", "inexact polynomial division");
  std::vector<Int> q(dq + 1, Int(0));
  for (long k = dq; k >= 0; --k) {
    Int num = rem[k + db];
    if (num == 0) continue;
    if (!mpz_divisible_p(num.get_mpz_t(), b.c[db].get_mpz_t()))
      throw error(errc::invalid_argument, "ring.divexact", "inexact polynomial division");
    Int f = num / b.c[db];
    q[k] = f;
    for (long i = 0; i <= db; ++i) rem[k + i] -= f * b.c[i];
  }
  for (const Int& v : rem)
    if (v != 0) throw error(errc::invalid_argument, "ring.divexact", "inexact polynomial division");
  return IntPoly(std::move(q));
}

std::complex<double> eval(const IntPoly& p, std::complex<double> x) {
  std::complex<double> acc(0.0, 0.0);
  for (long k = p.degree(); k >= 0; --k) acc = acc * x + p.c[k].get_d();
  return acc;
}

IntPoly cyclotomic_polynomial(long n) {
  if (n < 1) throw error(errc::invalid_argument, "ring.cyclotomic_polynomial", "n must be positive");
  static std::mutex mtx;
  static std::map<long, IntPoly> cache;
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  IntPoly result;
  if (n == 1) {
    result = IntPoly({Int(-1), Int(1)});
  } else {
    // product of Phi_d over proper divisors d of n, then exact division
    IntPoly prod({Int(1)});
    for (long d = 1; d < n; ++d)
      if (n % d == 0) prod = mul(prod, cyclotomic_polynomial(d));
    std::vector<Int> xn(n + 1, Int(0));
    xn[0] = -1;
    xn[n] = 1;
    result = divexact(IntPoly(std::move(xn)), prod);
  }
  std::lock_guard<std::mutex> lock(mtx);
  auto [it, inserted] = cache.emplace(n, result);
  return it->second;
}

// ---------------------------------------------------------------------------
// LaurentPolynomial
// ---------------------------------------------------------------------------

LaurentPolynomial LaurentPolynomial::monomial(const Int& coeff, long exponent) {
  LaurentPolynomial r;
  if (coeff != 0) r.terms_[exponent] = coeff;
  return r;
}

Int LaurentPolynomial::coeff(long exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Int(0) : it->second;
}

LaurentPolynomial LaurentPolynomial::operator+(const LaurentPolynomial& o) const {
  LaurentPolynomial r = *this;
  for (const auto& [e, v] : o.terms_) {
    Int& slot = r.terms_[e];
    slot += v;
    if (slot == 0) r.terms_.erase(e);
  }
  return r;
}

LaurentPolynomial LaurentPolynomial::operator-(const LaurentPolynomial& o) const { return *this + (-o); }

LaurentPolynomial LaurentPolynomial::operator-() const {
  LaurentPolynomial r;
  for (const auto& [e, v] : terms_) r.terms_[e] = -v;
  return r;
}

LaurentPolynomial LaurentPolynomial::operator*(const LaurentPolynomial& o) const {
  LaurentPolynomial r;
  for (const auto& [e1, v1] : terms_)
    for (const auto& [e2, v2] : o.terms_) {
      Int& slot = r.terms_[e1 + e2];
      slot += v1 * v2;
      if (slot == 0) r.terms_.erase(e1 + e2);
    }
  return r;
}

FieldElement LaurentPolynomial::evaluate(const FieldElement& a_value) const {
  FieldElement acc = FieldElement::zero(a_value.field());
  for (const auto& [e, v] : terms_)
    acc = acc + FieldElement::from_rational(a_value.field(), Rat(v)) * a_value.pow(e);
  return acc;
}

std::string LaurentPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, v] : terms_) {
    Int a = v;
    if (first) {
      first = false;
      if (a < 0) { os << "-"; a = -a; }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    if (e == 0 || a != 1) os << a.get_str();
    if (e != 0) {
      if (a != 1) os << "*";
      os << "A";
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// CyclotomicField
// ---------------------------------------------------------------------------

CyclotomicField::CyclotomicField(long n) : n_(n) {
  phi_ = cyclotomic_polynomial(n);
  degree_ = phi_.degree();
  // remainders of x^k mod Phi_n for k up to max(n, 2*degree) - 1; Phi_n is
  // monic so the remainders stay integral
  long size = std::max(n, 2 * degree_);
  xpow_.resize(size);
  std::vector<Int> cur(1, Int(1));  // x^0
  for (long k = 0; k < size; ++k) {
    xpow_[k] = cur;
    xpow_[k].resize(degree_, Int(0));
    // multiply by x, reduce the top coefficient
    cur.insert(cur.begin(), Int(0));
    if (static_cast<long>(cur.size()) > degree_) {
      Int top = cur.back();
      cur.pop_back();
      if (top != 0)
        for (long i = 0; i < degree_; ++i) cur[i] -= top * phi_.c[i];
    }
  }
}

FieldPtr CyclotomicField::get(long n) {
  if (n < 1) throw error(errc::invalid_argument, "ring.cyclotomic_field", "n must be positive");
  static std::mutex mtx;
  static std::map<long, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  FieldPtr f(new CyclotomicField(n));
  cache.emplace(n, f);
  return f;
}

// ---------------------------------------------------------------------------
// FieldElement
// ---------------------------------------------------------------------------

FieldElement FieldElement::zero(const FieldPtr& f) {
  return FieldElement(f, std::vector<Rat>(f->degree(), Rat(0)));
}

FieldElement FieldElement::one(const FieldPtr& f) { return from_rational(f, Rat(1)); }

FieldElement FieldElement::from_rational(const FieldPtr& f, const Rat& q) {
  std::vector<Rat> c(f->degree(), Rat(0));
  if (f->degree() > 0) c[0] = q;
  return FieldElement(f, std::move(c));
}

FieldElement FieldElement::from_int(const FieldPtr& f, long v) { return from_rational(f, Rat(v)); }

FieldElement FieldElement::zeta_pow(const FieldPtr& f, long e) {
  long n = f->n();
  long k = ((e % n) + n) % n;
  const std::vector<Int>& row = f->power_basis(k);
  std::vector<Rat> c(f->degree(), Rat(0));
  for (long i = 0; i < f->degree(); ++i) c[i] = Rat(row[i]);
  return FieldElement(f, std::move(c));
}

FieldElement FieldElement::from_coeffs(const FieldPtr& f, std::vector<Rat> coeffs) {
  if (static_cast<long>(coeffs.size()) != f->degree())
    throw error(errc::invalid_argument, "ring.field_element", "coefficient vector length mismatch");
  for (Rat& q : coeffs) q.canonicalize();
  return FieldElement(f, std::move(coeffs));
}

bool FieldElement::is_zero() const {
  for (const Rat& q : c_)
    if (q != 0) return false;
  return true;
}

bool FieldElement::is_one() const {
  if (c_.empty() || c_[0] != 1) return false;
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

bool FieldElement::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Rat FieldElement::rational_value() const {
  if (!is_rational())
    throw error(errc::invalid_argument, "ring.field_element", "element is not rational");
  return c_.empty() ? Rat(0) : c_[0];
}

bool FieldElement::is_integral() const {
  for (const Rat& q : c_)
    if (q.get_den() != 1) return false;
  return true;
}

void FieldElement::check_same_field(const FieldElement& o, const char* op) const {
  if (!field_ || !o.field_ || field_->n() != o.field_->n())
    throw error(errc::field_mismatch, std::string("ring.") + op, "operands live in different fields");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_same_field(o, "field_ops");
  std::vector<Rat> c(c_);
  for (size_t i = 0; i < c.size(); ++i) c[i] += o.c_[i];
  return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  check_same_field(o, "field_ops");
  std::vector<Rat> c(c_);
  for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c_[i];
  return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::operator-() const {
  std::vector<Rat> c(c_);
  for (Rat& q : c) q = -q;
  return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same_field(o, "field_ops");
  long d = field_->degree();
  std::vector<Rat> prod(2 * d - 1, Rat(0));
  for (long i = 0; i < d; ++i) {
    if (c_[i] == 0) continue;
    for (long j = 0; j < d; ++j) {
      if (o.c_[j] == 0) continue;
      prod[i + j] += c_[i] * o.c_[j];
    }
  }
  std::vector<Rat> c(prod.begin(), prod.begin() + d);
  for (long k = d; k < 2 * d - 1; ++k) {
    if (prod[k] == 0) continue;
    const std::vector<Int>& row = field_->power_basis(k);
    for (long i = 0; i < d; ++i)
      if (row[i] != 0) c[i] += prod[k] * Rat(row[i]);
  }
  return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw error(errc::division_by_zero, "ring.field_ops", "inverse of zero");
  // extended Euclid against Phi_n over Q
  RatPoly a(c_.begin(), c_.end());
  rp_normalize(a);
  RatPoly phi(field_->minimal_polynomial().c.size());
  for (size_t i = 0; i < phi.size(); ++i) phi[i] = Rat(field_->minimal_polynomial().c[i]);
  // invariant: r0 = s0*a mod phi, r1 = s1*a mod phi
  RatPoly r0 = phi, r1 = a;
  RatPoly s0 = {}, s1 = {Rat(1)};
  while (!r1.empty()) {
    auto [q, r] = rp_divmod(r0, r1);
    RatPoly s2 = rp_sub(s0, rp_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r0 = gcd = nonzero constant (Phi_n irreducible over Q)
  if (rp_degree(r0) != 0)
    throw error(errc::division_by_zero, "ring.field_ops", "element has no inverse (unexpected gcd)");
  Rat lead = r0[0];
  std::vector<Rat> c(field_->degree(), Rat(0));
  for (size_t i = 0; i < s0.size() && i < c.size(); ++i) c[i] = s0[i] / lead;
  return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  check_same_field(o, "field_ops");
  return *this * o.inverse();
}

FieldElement FieldElement::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  FieldElement base = *this;
  FieldElement acc = FieldElement::one(field_);
  unsigned long k = static_cast<unsigned long>(e);
  while (k > 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

bool FieldElement::operator==(const FieldElement& o) const {
  if (!field_ || !o.field_) return !field_ && !o.field_;
  return field_->n() == o.field_->n() && c_ == o.c_;
}

std::complex<double> FieldElement::approx(long conjugate) const {
  std::complex<double> acc(0.0, 0.0);
  long n = field_->n();
  for (size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    double angle = 2.0 * M_PI * static_cast<double>((conjugate * static_cast<long>(k)) % n) / static_cast<double>(n);
    acc += c_[k].get_d() * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return acc;
}

std::string FieldElement::to_string() const {
  bool all_zero = true;
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    all_zero = false;
    Rat a = c_[k];
    if (first) {
      first = false;
      if (a < 0) { os << "-"; a = -a; }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    if (k == 0 || a != 1) os << a.get_str();
    if (k > 0) {
      if (a != 1) os << "*";
      os << "z";
      if (k > 1) os << "^" << k;
    }
  }
  if (all_zero) return "0";
  return os.str();
}

FieldElement extend_field(const FieldElement& a, long factor) {
  if (factor < 1)
    throw error(errc::invalid_argument, "ring.extend_field", "factor must be >= 1");
  if (factor == 1) return a;
  FieldPtr big = CyclotomicField::get(a.field()->n() * factor);
  FieldElement image = FieldElement::zero(big);
  const std::vector<Rat>& c = a.coeffs();
  for (size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    FieldElement term = FieldElement::zeta_pow(big, factor * static_cast<long>(k));
    image = image + FieldElement::from_rational(big, c[k]) * term;
  }
  return image;
}

// ---------------------------------------------------------------------------
// F_p[x] and J_p
// ---------------------------------------------------------------------------

namespace {

long mod_pos(const Int& v, long p) {
  Int r = v % p;
  if (r < 0) r += p;
  return r.get_si();
}

long mod_inv_scalar(long a, long p) {
  long t = 0, new_t = 1;
  long r = p, new_r = a % p;
  if (new_r < 0) new_r += p;
  while (new_r != 0) {
    long q = r / new_r;
    long tmp = t - q * new_t;
    t = new_t; new_t = tmp;
    tmp = r - q * new_r;
    r = new_r; new_r = tmp;
  }
  if (r != 1)
    throw error(errc::non_invertible_denominator, "ring.in_ideal", "scalar not invertible mod p");
  return ((t % p) + p) % p;
}

ModPoly mod_make_monic(ModPoly a) {
  if (a.is_zero()) return a;
  long inv = mod_inv_scalar(a.c.back(), a.p);
  for (long& v : a.c) v = (v * inv) % a.p;
  return a;
}

}  // namespace

void ModPoly::normalize() {
  for (long& v : c) v = ((v % p) + p) % p;
  while (!c.empty() && c.back() == 0) c.pop_back();
}

ModPoly mod_reduce(const IntPoly& a, long p) {
  ModPoly r;
  r.p = p;
  r.c.resize(a.c.size());
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = mod_pos(a.c[i], p);
  r.normalize();
  return r;
}

ModPoly mod_mul(const ModPoly& a, const ModPoly& b) {
  ModPoly r;
  r.p = a.p;
  if (a.is_zero() || b.is_zero()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = (r.c[i + j] + a.c[i] * b.c[j]) % a.p;
  r.normalize();
  return r;
}

ModPoly mod_rem(const ModPoly& a, const ModPoly& b) {
  if (b.is_zero()) throw error(errc::division_by_zero, "ring.mod_rem", "division by zero polynomial");
  ModPoly r = a;
  r.normalize();
  long p = a.p;
  long db = b.degree();
  long lead_inv = mod_inv_scalar(b.c.back(), p);
  while (r.degree() >= db) {
    long shift = r.degree() - db;
    long f = (r.c.back() * lead_inv) % p;
    for (long i = 0; i <= db; ++i) {
      long idx = shift + i;
      r.c[idx] = ((r.c[idx] - f * b.c[i]) % p + p) % p;
    }
    r.normalize();
  }
  return r;
}

ModPoly mod_gcd(const ModPoly& a, const ModPoly& b) {
  ModPoly x = a, y = b;
  x.normalize();
  y.normalize();
  while (!y.is_zero()) {
    ModPoly r = mod_rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return mod_make_monic(x);
}

bool mod_divides(const ModPoly& divisor, const ModPoly& value) {
  if (value.is_zero()) return true;
  if (divisor.is_zero()) return false;
  return mod_rem(value, divisor).is_zero();
}

bool is_odd_prime(long p) {
  if (p < 3 || p % 2 == 0) return false;
  for (long d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

IdealJp jp_generator(long p, const FieldPtr& field, const std::vector<FieldElement>& dims) {
  if (!is_odd_prime(p))
    throw error(errc::invalid_argument, "ring.jp_generator", "p must be an odd prime");
  ModPoly phi_bar = mod_reduce(field->minimal_polynomial(), p);
  ModPoly g = phi_bar;  // empty gcd convention: g starts at Phi_n mod p
  for (const FieldElement& d : dims) {
    if (d.field()->n() != field->n())
      throw error(errc::field_mismatch, "ring.jp_generator", "dimension lives in a different field");
    if (!d.is_integral())
      throw error(errc::not_integral, "ring.jp_generator",
                  "dimension is not an algebraic integer: " + d.to_string());
    FieldElement gen = d.pow(p) - d;  // dim^p - dim, a generator of J_p
    ModPoly image;
    image.p = p;
    image.c.resize(gen.coeffs().size());
    for (size_t i = 0; i < gen.coeffs().size(); ++i)
      image.c[i] = mod_pos(gen.coeffs()[i].get_num(), p);
    image.normalize();
    g = mod_gcd(g, image);
    if (g.is_one()) break;
  }
  IdealJp J;
  J.p = p;
  J.n = field->n();
  J.g = g;
  J.vacuous = g.is_one();
  return J;
}

bool in_ideal(const FieldElement& x, const IdealJp& J) {
  if (x.field()->n() != J.n)
    throw error(errc::field_mismatch, "ring.in_ideal", "element lives in a different field than J_p");
  // clear denominators: x = a / s with a integral, s a positive integer
  Int s(1);
  for (const Rat& q : x.coeffs()) {
    Int den = q.get_den();
    mpz_lcm(s.get_mpz_t(), s.get_mpz_t(), den.get_mpz_t());
  }
  long p = J.p;
  long s_bar = mod_pos(s, p);
  if (s_bar == 0)
    throw error(errc::non_invertible_denominator, "ring.in_ideal",
                "denominator " + s.get_str() + " is a zero divisor mod " + std::to_string(p) +
                    "; membership verdict indeterminate");
  long s_inv = mod_inv_scalar(s_bar, p);
  ModPoly h;
  h.p = p;
  h.c.resize(x.coeffs().size());
  for (size_t i = 0; i < x.coeffs().size(); ++i) {
    Int num = x.coeffs()[i].get_num() * s;  // numerator of s*x_i
    Int den = x.coeffs()[i].get_den();
    Int a = num / den;  // exact: s is the lcm of the denominators
    h.c[i] = (mod_pos(a, p) * s_inv) % p;
  }
  h.normalize();
  return mod_divides(J.g, h);
}

}  // namespace qinv::ring
