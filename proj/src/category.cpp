#include "qinv/category.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <sstream>

namespace qinv::category {

using ring::Int;
using ring::Rat;

FieldElement quantum_integer(const FieldElement& a_value, long m) {
  FieldElement acc = FieldElement::zero(a_value.field());
  for (long j = 0; j < m; ++j) acc = acc + a_value.pow(2 * (m - 1) - 4 * j);
  return acc;
}

namespace {

// Best rational p/q with q <= max_den approximating x, by continued
// fractions. Fails when no convergent lands within tol of x.
std::optional<Rat> round_to_rational(double x, long max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  double v = x;
  long long p0 = 1, q0 = 0;
  long long p1 = static_cast<long long>(std::llround(std::floor(v)));
  long long q1 = 1;
  double frac = v - std::floor(v);
  for (int step = 0; step < 64; ++step) {
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - x) <= tol) break;
    if (frac < 1e-13) break;
    v = 1.0 / frac;
    double fl = std::floor(v);
    if (fl > 4e18) break;
    long long a = static_cast<long long>(fl);
    frac = v - fl;
    long long p2 = a * p1 + p0;
    long long q2 = a * q1 + q0;
    if (q2 > max_den || q2 <= 0) break;
    p0 = p1; q0 = q1;
    p1 = p2; q1 = q2;
  }
  if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) > tol) return std::nullopt;
  Rat q(static_cast<long>(p1), static_cast<long>(q1));
  q.canonicalize();
  return q;
}

std::optional<FieldElement> rational_sqrt(const FieldElement& x) {
  if (!x.is_rational()) return std::nullopt;
  Rat v = x.rational_value();
  if (v == 0) return FieldElement::zero(x.field());
  if (v < 0) return std::nullopt;
  Int num = v.get_num();
  Int den = v.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  Int rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return FieldElement::from_rational(x.field(), Rat(rn) / Rat(rd));
}

// Square root search inside the field of x: pick signs for the square roots
// of the Galois conjugates of x (principal embedding fixed positive), solve
// for power-basis coordinates, round to rationals, verify exactly.
std::optional<FieldElement> sqrt_in_field(const FieldElement& x) {
  if (auto fast = rational_sqrt(x)) return fast;
  const FieldPtr& f = x.field();
  long m = f->n();
  long deg = f->degree();
  if (m <= 2) return std::nullopt;  // degree-1 fields carry only rationals

  std::vector<long> reps;  // one embedding per conjugate pair, a < m - a
  for (long a = 1; 2 * a < m; ++a)
    if (std::gcd(a, m) == 1) reps.push_back(a);
  long pairs = static_cast<long>(reps.size());
  if (2 * pairs != deg) return std::nullopt;  // real embeddings: rational case only

  Eigen::MatrixXd M(deg, deg);
  for (long t = 0; t < pairs; ++t) {
    for (long j = 0; j < deg; ++j) {
      double ang = 2.0 * M_PI * static_cast<double>((reps[t] * j) % m) / static_cast<double>(m);
      M(2 * t, j) = std::cos(ang);
      M(2 * t + 1, j) = std::sin(ang);
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);

  std::vector<std::complex<double>> w(pairs);
  for (long t = 0; t < pairs; ++t) w[t] = std::sqrt(x.approx(reps[t]));

  long free_signs = pairs - 1;
  long total = free_signs >= 20 ? (1L << 20) : (1L << free_signs);
  Eigen::VectorXd rhs(deg);
  for (long s = 0; s < total; ++s) {
    for (long t = 0; t < pairs; ++t) {
      double eps = (t == 0) ? 1.0 : (((s >> (t - 1)) & 1) ? -1.0 : 1.0);
      rhs(2 * t) = eps * w[t].real();
      rhs(2 * t + 1) = eps * w[t].imag();
    }
    Eigen::VectorXd c = lu.solve(rhs);
    std::vector<Rat> coeffs(deg);
    bool ok = true;
    for (long j = 0; j < deg && ok; ++j) {
      auto q = round_to_rational(c(j), 100000, 1e-7);
      if (!q) ok = false;
      else coeffs[j] = *q;
    }
    if (!ok) continue;
    FieldElement cand = FieldElement::from_coeffs(f, std::move(coeffs));
    if (cand * cand == x) return cand;
  }
  return std::nullopt;
}

std::string numeric_string(const FieldElement& v) {
  std::complex<double> z = v.approx();
  char buf[64];
  if (std::abs(z.imag()) < 1e-9 * std::max(1.0, std::abs(z.real()))) {
    std::snprintf(buf, sizeof(buf), "%.12g", z.real());
    return buf;
  }
  std::string out;
  std::snprintf(buf, sizeof(buf), "%.12g", z.real());
  out = buf;
  std::snprintf(buf, sizeof(buf), "%+.12g", z.imag());
  out += buf;
  out += "i";
  return out;
}

}  // namespace

FieldElement find_rank(const FieldElement& x) {
  for (int k = 0; k <= 3; ++k) {
    FieldElement lifted = k == 0 ? x : extend_field(x, 1L << k);
    if (auto y = sqrt_in_field(lifted)) return *y;
  }
  throw error(errc::rank_not_found, "category.find_rank",
              "no square root of " + x.to_string() + " within three field doublings");
}

FieldElement delta(const ModularDatum& datum) {
  FieldElement acc = FieldElement::zero(datum.field);
  for (long c = 0; c < datum.colors(); ++c)
    acc = acc + datum.dim[c] * datum.dim[c] * datum.twist_inv[c];
  return acc;
}

FieldElement kappa(const ModularDatum& datum) {
  if (datum.rank_D.is_zero())
    throw error(errc::division_by_zero, "category.kappa", "rank D is zero");
  return datum.delta_minus / datum.rank_D;
}

void validate_datum(const ModularDatum& datum) {
  auto fail = [](const std::string& what) {
    throw error(errc::degenerate_datum, "category.validate_datum", what);
  };
  if (datum.colors() < 1) fail("datum has no colors");
  if (datum.twist.size() != datum.dim.size() || datum.twist_inv.size() != datum.dim.size())
    fail("per-color arrays disagree in length");
  FieldElement one = FieldElement::one(datum.field);
  if (datum.dim[0] != one) fail("d_0 != 1");
  if (datum.twist[0] != one) fail("theta_0 != 1");
  FieldElement sum_sq = FieldElement::zero(datum.field);
  for (long c = 0; c < datum.colors(); ++c) {
    if (datum.dim[c].is_zero()) fail("d_" + std::to_string(c) + " = 0");
    if (datum.twist[c].is_zero() || datum.twist[c] * datum.twist_inv[c] != one)
      fail("theta_" + std::to_string(c) + " is not invertible");
    sum_sq = sum_sq + datum.dim[c] * datum.dim[c];
  }
  if (datum.rank_D * datum.rank_D != sum_sq) fail("rank_D^2 != sum of squared dims");
  if (datum.kappa * datum.rank_D != datum.delta_minus) fail("kappa * D != Delta");
  if (datum.delta_plus * datum.delta_minus != datum.rank_D * datum.rank_D)
    fail("Delta+ * Delta != D^2");
}

ModularDatum make_tl_datum(long r, long field_factor) {
  if (r < 3)
    throw error(errc::invalid_argument, "category.make_tl_datum", "r must be at least 3");
  if (field_factor < 1)
    throw error(errc::invalid_argument, "category.make_tl_datum", "field_factor must be >= 1");

  ModularDatum d;
  d.r = r;
  d.field = ring::CyclotomicField::get(4 * r * field_factor);
  d.A = FieldElement::zeta_pow(d.field, field_factor);

  for (long c = 0; c <= r - 2; ++c) {
    FieldElement qi = quantum_integer(d.A, c + 1);
    d.dim.push_back(c % 2 == 0 ? qi : -qi);
    FieldElement tw = d.A.pow(c * c + 2 * c);
    if (c % 2 == 1) tw = -tw;
    d.twist.push_back(tw);
    d.twist_inv.push_back(tw.inverse());
  }

  FieldElement sum_sq = FieldElement::zero(d.field);
  for (const FieldElement& v : d.dim) sum_sq = sum_sq + v * v;
  d.rank_D = find_rank(sum_sq);

  if (d.rank_D.field()->n() != d.field->n()) {
    long factor = d.rank_D.field()->n() / d.field->n();
    d.field = d.rank_D.field();
    d.A = extend_field(d.A, factor);
    for (auto& v : d.dim) v = extend_field(v, factor);
    for (auto& v : d.twist) v = extend_field(v, factor);
    for (auto& v : d.twist_inv) v = extend_field(v, factor);
  }

  d.delta_minus = delta(d);
  FieldElement plus = FieldElement::zero(d.field);
  for (long c = 0; c < d.colors(); ++c)
    plus = plus + d.dim[c] * d.dim[c] * d.twist[c];
  d.delta_plus = plus;
  d.kappa = kappa(d);

  validate_datum(d);
  return d;
}

std::string describe(const ModularDatum& datum) {
  std::ostringstream os;
  os << "Temperley-Lieb datum, r = " << datum.r << "\n";
  os << "field: Q(zeta_" << datum.field->n() << "), degree " << datum.field->degree() << "\n";
  os << "colors: 0.." << datum.colors() - 1 << "\n";
  os << "A = " << datum.A.to_string() << " ~ " << numeric_string(datum.A) << "\n";
  for (long c = 0; c < datum.colors(); ++c) {
    os << "d_" << c << " = " << datum.dim[c].to_string() << " ~ " << numeric_string(datum.dim[c])
       << "\n";
    os << "theta_" << c << " = " << datum.twist[c].to_string() << " ~ "
       << numeric_string(datum.twist[c]) << "\n";
  }
  os << "D = " << datum.rank_D.to_string() << " ~ " << numeric_string(datum.rank_D) << "\n";
  os << "Delta = " << datum.delta_minus.to_string() << " ~ " << numeric_string(datum.delta_minus)
     << "\n";
  os << "Delta+ = " << datum.delta_plus.to_string() << " ~ " << numeric_string(datum.delta_plus)
     << "\n";
  os << "kappa = " << datum.kappa.to_string() << " ~ " << numeric_string(datum.kappa) << "\n";
  return os.str();
}

}  // namespace qinv::category
