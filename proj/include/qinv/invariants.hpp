#pragma once

#include <map>
#include <string>
#include <vector>

#include "qinv/category.hpp"
#include "qinv/ring.hpp"
#include "qinv/skein.hpp"
#include "qinv/topology.hpp"

namespace qinv::invariants {

// ---------------------------------------------------------------------------
// A fixed colored part: components carrying a prescribed color are excluded
// from the coloring sum and contribute no dimension factor.
// ---------------------------------------------------------------------------
struct FixedPart {
  std::map<long, long> color_of;  // component id -> color
};

/// Sum over all colorings of the free (surgery) components of the product
/// of their quantum dimensions times the bracket evaluation. Colorings are
/// enumerated lexicographically; workers > 1 splits the enumeration into
/// contiguous chunks whose exact partial sums are combined in index order.
ring::FieldElement multi_bracket(const topology::LinkDiagram& link,
                                 const category::ModularDatum& datum,
                                 const FixedPart& fixed = {}, long workers = 1);

/// Surgery invariant: Delta^sigma * D^(-sigma - m - 1) * bracket, where
/// sigma and m are the signature of the linking matrix and the component
/// count of the surgery link (fixed components excluded from both).
ring::FieldElement tau(const topology::LinkDiagram& link, const category::ModularDatum& datum,
                       const FixedPart& fixed = {}, long workers = 1);

/// Normalized invariant: D * tau. Takes the value 1 on the empty link.
ring::FieldElement i_invariant(const topology::LinkDiagram& link,
                               const category::ModularDatum& datum,
                               const FixedPart& fixed = {}, long workers = 1);

// ---------------------------------------------------------------------------
// Machine-checkable congruence certificates. Every input needed to recompute
// the verdict is recorded; exact scalars serialize as coefficient lists.
// ---------------------------------------------------------------------------
struct Certificate {
  std::string kind;  // bracket-lemma | main-theorem | tau-corollary | trace-congruence
  long p = 0;
  long r = 0;
  long conductor = 0;  // the ambient field is Q(zeta_conductor)
  std::string tangle_text;
  std::vector<long> coloring;  // trace-congruence input coloring, else empty

  long components_total = 0;     // m, components of closure(T^p) or of omega^p
  long components_quotient = 0;  // m*, components of closure(T) or of omega
  long sigma_total = 0;
  long sigma_quotient = 0;
  long delta = 0;  // sigma_total - p * sigma_quotient

  ring::FieldElement lhs, rhs, difference;
  std::vector<long> ideal_generator;  // F_p coefficients of g, constant term first
  bool vacuous = false;
  bool member = false;
  bool negative_control = false;

  std::string orientation_convention;
  std::string framing_convention;
};

/// Bracket congruence for a p-periodic link: the bracket of closure(T^p)
/// agrees with the p-th power of the bracket of closure(T) mod J_p.
Certificate verify_periodic_bracket(const skein::SlicedTangle& T, long p,
                                    const category::ModularDatum& datum, long workers = 1,
                                    bool negative_control = false);

/// Invariant congruence: I(M) matches kappa^delta * I(M*)^p mod J_p, with
/// delta = sigma(L) - p * sigma(L*) from exact signatures.
Certificate verify_main_theorem(const skein::SlicedTangle& T, long p,
                                const category::ModularDatum& datum, long workers = 1,
                                bool negative_control = false);

/// Same congruence expressed for tau: tau(M) matches
/// kappa^delta * D^(p-1) * tau(M*)^p mod J_p.
Certificate verify_tau_corollary(const skein::SlicedTangle& T, long p,
                                 const category::ModularDatum& datum, long workers = 1,
                                 bool negative_control = false);

/// Trace congruence for a colored endomorphism tangle: the p-th power of
/// its quantum trace matches the quantum trace of its p-th power mod J_p.
Certificate verify_trace_congruence(const skein::SlicedTangle& omega,
                                    const skein::Coloring& coloring, long p,
                                    const category::ModularDatum& datum,
                                    bool negative_control = false);

// ---------------------------------------------------------------------------
// When the p-periodic setup presents a p-fold cyclic branched cover along a
// knot with Seifert matrix V, the exponent delta of a main-theorem
// certificate should equal minus the total level signature of V. The report
// is informational: the branched-cover assertion itself is the caller's.
// ---------------------------------------------------------------------------
struct BranchedCoverReport {
  long delta = 0;
  long expected = 0;  // -total_signature(V, p)
  bool consistent = false;
};

BranchedCoverReport check_branched_cover_exponent(const Certificate& cert,
                                                  const topology::SeifertMatrix& V, long p);

/// Deterministic JSON document for a certificate: all fields above plus a
/// human-readable summary line. Byte-identical across runs and worker
/// counts for the same inputs.
std::string certificate_json(const Certificate& cert);

}  // namespace qinv::invariants
