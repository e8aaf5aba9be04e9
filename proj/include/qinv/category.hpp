#pragma once

#include <string>
#include <vector>

#include "qinv/ring.hpp"

namespace qinv::category {

using ring::FieldElement;
using ring::FieldPtr;

// ---------------------------------------------------------------------------
// A fully materialized modular datum: colors with quantum dimensions and
// twists, a verified rank D, and the derived scalars used by the surgery
// formula. Immutable after construction; safe to share between threads.
// ---------------------------------------------------------------------------
struct ModularDatum {
  long r = 0;                      // loop order; colors run 0..r-2
  FieldPtr field;                  // ambient cyclotomic field (possibly extended)
  FieldElement A;                  // distinguished primitive 4r-th root of unity
  std::vector<FieldElement> dim;   // d_c, nonzero
  std::vector<FieldElement> twist;       // theta_c, units
  std::vector<FieldElement> twist_inv;   // theta_c^-1
  FieldElement rank_D;             // D with D^2 = sum of d_c^2
  FieldElement delta_minus;        // Delta = sum d_c^2 theta_c^-1
  FieldElement delta_plus;         // Delta+ = sum d_c^2 theta_c
  FieldElement kappa;              // Delta * D^-1

  long colors() const { return static_cast<long>(dim.size()); }
};

/// Quantum integer [m] at the given value of A, in summation form
/// [m] = sum_{j=0}^{m-1} A^{2(m-1)-4j}; [0] = 0, [1] = 1, [2] = A^2 + A^-2.
FieldElement quantum_integer(const FieldElement& a_value, long m);

/// Square root search for the rank: returns D with D^2 = X, principal
/// embedding on the positive branch. Tries the field of X first, then up to
/// three quadratic-free doublings n -> 2n, rounding numeric embeddings to
/// rational coordinates and verifying every candidate exactly.
/// Throws rank_not_found when the doubling bound is exhausted.
FieldElement find_rank(const FieldElement& x);

/// Delta = sum_c d_c^2 * theta_c^-1 (evaluation of the writhe -1 unknot).
FieldElement delta(const ModularDatum& datum);

/// kappa = Delta * D^-1.
FieldElement kappa(const ModularDatum& datum);

/// Checks every structural invariant (d_0 = 1, theta_0 = 1, dims nonzero,
/// twists invertible, D^2 = sum d_c^2, kappa*D = Delta, Delta+*Delta = D^2)
/// and throws degenerate_datum naming the first violation.
void validate_datum(const ModularDatum& datum);

/// The Temperley-Lieb datum at level r: field Q(zeta_{4r}) with A = zeta_{4r},
/// d_c = (-1)^c [c+1], theta_c = (-1)^c A^{c^2+2c}. The ambient field is
/// extended as needed so that D lives in it; field_factor pre-extends by the
/// given factor before the rank search (used to place runs in a common field).
ModularDatum make_tl_datum(long r, long field_factor = 1);

/// Human-readable summary: exact values plus 12-significant-digit numeric
/// approximations for every color and derived scalar.
std::string describe(const ModularDatum& datum);

}  // namespace qinv::category
