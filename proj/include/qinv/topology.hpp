#pragma once

#include <vector>

#include "qinv/ring.hpp"
#include "qinv/skein.hpp"

namespace qinv::topology {

// ---------------------------------------------------------------------------
// Oriented link diagrams. Orientations are assigned deterministically: the
// first-born segment of each component points up, and the direction flips
// across every cup and cap. Crossing signs then follow the right-hand rule,
// so a + slice between two upward strands is a positive crossing.
// ---------------------------------------------------------------------------
struct LinkDiagram {
  skein::SlicedTangle diagram;
  skein::TangleAnalysis analysis;
  std::vector<int> segment_direction;  // +1 up, -1 down, per segment

  long num_components() const { return analysis.num_components; }
};

/// Traces a closed diagram into oriented components. Throws
/// malformed_diagram when the diagram has open boundary strands.
LinkDiagram trace_components(const skein::SlicedTangle& diagram);

// ---------------------------------------------------------------------------
// Linking matrix in the blackboard framing: off-diagonal entries are linking
// numbers (half the signed count of crossings between the two components),
// diagonal entries are self-writhes (full signed self-crossing counts).
// ---------------------------------------------------------------------------
struct LinkingMatrix {
  std::vector<std::vector<long>> entry;

  long size() const { return static_cast<long>(entry.size()); }
};

LinkingMatrix linking_matrix(const LinkDiagram& link);

/// Signature of a symmetric integer matrix, computed exactly by congruence
/// diagonalization over the rationals. Throws not_symmetric.
long signature(const std::vector<std::vector<long>>& B);
long signature(const LinkingMatrix& B);

// ---------------------------------------------------------------------------
// Periodicity check for an (l,l) tangle T and an odd prime p: the closure of
// T^p is a free p-periodic link exactly when it has p times as many
// components as the closure of T. The winding numbers (strand passes of
// each quotient component through the closure axis) are reported alongside.
// ---------------------------------------------------------------------------
struct FreenessReport {
  long p = 0;
  long quotient_components = 0;  // components of closure(T)
  long total_components = 0;     // components of closure(T^p)
  bool pass = false;             // total == p * quotient
  std::vector<long> winding;     // strand passes per quotient component
};

FreenessReport freeness_check(const skein::SlicedTangle& tangle, long p);

// ---------------------------------------------------------------------------
// Equivariant knot signatures from a Seifert matrix V. At the p-th root of
// unity w = e^{2 pi i k / p} the level-k signature is the signature of the
// Hermitian form (1-w)V + (1-conj(w))V^T. The root must avoid the Alexander
// polynomial: det(V - wV^T) is checked exactly in Q(zeta_p) and
// singular_at_omega is thrown when it vanishes. Eigenvalue signs are taken
// numerically with a certified margin of 1e-8 times the matrix norm;
// anything closer to zero raises precision_failure.
// ---------------------------------------------------------------------------
struct SeifertMatrix {
  std::vector<std::vector<long>> entry;
};

long tristram_levine(const SeifertMatrix& V, long p, long k);

/// Minus the sum of tristram_levine(V, p, k) over k = 1..p-1.
long total_signature(const SeifertMatrix& V, long p);

}  // namespace qinv::topology
