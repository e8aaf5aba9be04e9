#include "qinv/topology.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "qinv/errors.hpp"

namespace qinv::topology {

using ring::FieldElement;
using ring::Rat;
using skein::Slice;
using skein::SliceKind;
using skein::SlicedTangle;

LinkDiagram trace_components(const SlicedTangle& diagram) {
  if (!diagram.closed())
    throw error(errc::malformed_diagram, "topology.trace_components",
                "diagram has open boundary strands");
  LinkDiagram link;
  link.diagram = diagram;
  link.analysis = skein::analyze(diagram);
  const skein::TangleAnalysis& an = link.analysis;

  // Each segment meets exactly two cup/cap events; the direction flips at
  // every event, so directions propagate around each component cycle.
  std::vector<std::vector<long>> adjacent(an.num_segments);
  for (const auto& pr : an.pairings) {
    adjacent[pr.a].push_back(pr.b);
    adjacent[pr.b].push_back(pr.a);
  }
  link.segment_direction.assign(an.num_segments, 0);
  for (long s = 0; s < an.num_segments; ++s) {
    if (link.segment_direction[s] != 0) continue;
    link.segment_direction[s] = 1;
    std::vector<long> stack{s};
    while (!stack.empty()) {
      long cur = stack.back();
      stack.pop_back();
      int want = -link.segment_direction[cur];
      for (long nb : adjacent[cur]) {
        if (link.segment_direction[nb] == 0) {
          link.segment_direction[nb] = want;
          stack.push_back(nb);
        } else if (link.segment_direction[nb] != want) {
          throw error(errc::malformed_diagram, "topology.trace_components",
                      "inconsistent strand orientation");
        }
      }
    }
  }
  return link;
}

LinkingMatrix linking_matrix(const LinkDiagram& link) {
  long m = link.num_components();
  const skein::TangleAnalysis& an = link.analysis;
  std::vector<std::vector<long>> acc(m, std::vector<long>(m, 0));
  for (size_t i = 0; i < link.diagram.slices.size(); ++i) {
    const Slice& s = link.diagram.slices[i];
    if (s.kind != SliceKind::cross) continue;
    long seg_a = an.frontier[i][s.pos];
    long seg_b = an.frontier[i][s.pos + 1];
    long sign = s.sign * link.segment_direction[seg_a] * link.segment_direction[seg_b];
    long u = an.segment_component[seg_a];
    long v = an.segment_component[seg_b];
    acc[u][v] += sign;
    if (u != v) acc[v][u] += sign;
  }
  LinkingMatrix out;
  out.entry.assign(m, std::vector<long>(m, 0));
  for (long u = 0; u < m; ++u) {
    for (long v = 0; v < m; ++v) {
      if (u == v) {
        out.entry[u][u] = acc[u][u];
      } else {
        if (acc[u][v] % 2 != 0)
          throw error(errc::malformed_diagram, "topology.linking_matrix",
                      "odd inter-component crossing sum between components " +
                          std::to_string(u) + " and " + std::to_string(v));
        out.entry[u][v] = acc[u][v] / 2;
      }
    }
  }
  return out;
}

long signature(const std::vector<std::vector<long>>& B) {
  long n = static_cast<long>(B.size());
  for (const auto& row : B)
    if (static_cast<long>(row.size()) != n)
      throw error(errc::not_symmetric, "topology.signature", "matrix is not square");
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      if (B[i][j] != B[j][i])
        throw error(errc::not_symmetric, "topology.signature",
                    "entry (" + std::to_string(i) + "," + std::to_string(j) +
                        ") differs from its transpose");

  std::vector<std::vector<Rat>> M(n, std::vector<Rat>(n));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) M[i][j] = B[i][j];

  // Congruence diagonalization: pivots carry the inertia. A zero diagonal
  // with a live off-diagonal entry gets a pivot by adding that row and
  // column (the other diagonal entry is zero then, so the pivot is 2M[i][j]).
  long sig = 0;
  for (long i = 0; i < n; ++i) {
    if (M[i][i] == 0) {
      long swap_j = -1, add_j = -1;
      for (long j = i + 1; j < n; ++j) {
        if (swap_j < 0 && M[j][j] != 0) swap_j = j;
        if (add_j < 0 && M[i][j] != 0) add_j = j;
      }
      if (swap_j >= 0) {
        M[i].swap(M[swap_j]);
        for (long t = 0; t < n; ++t) std::swap(M[t][i], M[t][swap_j]);
      } else if (add_j >= 0) {
        for (long t = 0; t < n; ++t) M[i][t] += M[add_j][t];
        for (long t = 0; t < n; ++t) M[t][i] += M[t][add_j];
      } else {
        continue;  // whole row is zero: a zero eigenvalue
      }
    }
    sig += mpq_sgn(M[i][i].get_mpq_t());
    Rat d = M[i][i];
    for (long j = i + 1; j < n; ++j) {
      if (M[j][i] == 0) continue;
      Rat f = M[j][i] / d;
      for (long t = i; t < n; ++t) M[j][t] -= f * M[i][t];
      for (long t = i; t < n; ++t) M[t][j] -= f * M[t][i];
    }
  }
  return sig;
}

long signature(const LinkingMatrix& B) { return signature(B.entry); }

FreenessReport freeness_check(const SlicedTangle& tangle, long p) {
  if (tangle.bottom_arity != tangle.top_arity)
    throw error(errc::arity_mismatch, "topology.freeness_check",
                "tangle has arity (" + std::to_string(tangle.bottom_arity) + ", " +
                    std::to_string(tangle.top_arity) + ")");
  if (!ring::is_odd_prime(p))
    throw error(errc::invalid_argument, "topology.freeness_check",
                "period " + std::to_string(p) + " is not an odd prime");

  skein::TangleAnalysis quotient = skein::analyze(skein::closure(tangle));
  skein::TangleAnalysis total = skein::analyze(skein::closure(skein::tangle_power(tangle, p)));

  FreenessReport report;
  report.p = p;
  report.quotient_components = quotient.num_components;
  report.total_components = total.num_components;
  report.pass = report.total_components == p * report.quotient_components;
  report.winding.assign(quotient.num_components, 0);
  for (long s = 0; s < tangle.bottom_arity; ++s)
    ++report.winding[quotient.segment_component[2 * s]];
  return report;
}

namespace {

void check_square(const SeifertMatrix& V, const char* where) {
  for (const auto& row : V.entry)
    if (row.size() != V.entry.size())
      throw error(errc::invalid_argument, where, "Seifert matrix is not square");
}

// exact determinant over a cyclotomic field by Gaussian elimination
FieldElement field_det(std::vector<std::vector<FieldElement>> M, const ring::FieldPtr& field) {
  long n = static_cast<long>(M.size());
  FieldElement det = FieldElement::one(field);
  for (long col = 0; col < n; ++col) {
    long pivot = -1;
    for (long row = col; row < n; ++row) {
      if (!M[row][col].is_zero()) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) return FieldElement::zero(field);
    if (pivot != col) {
      M[pivot].swap(M[col]);
      det = -det;
    }
    det = det * M[col][col];
    FieldElement inv = M[col][col].inverse();
    for (long row = col + 1; row < n; ++row) {
      if (M[row][col].is_zero()) continue;
      FieldElement f = M[row][col] * inv;
      for (long j = col; j < n; ++j) M[row][j] = M[row][j] - f * M[col][j];
    }
  }
  return det;
}

}  // namespace

long tristram_levine(const SeifertMatrix& V, long p, long k) {
  static const char* where = "topology.tristram_levine";
  if (!ring::is_odd_prime(p))
    throw error(errc::invalid_argument, where, std::to_string(p) + " is not an odd prime");
  if (k < 1 || k > p - 1)
    throw error(errc::invalid_argument, where,
                "level k = " + std::to_string(k) + " outside 1.." + std::to_string(p - 1));
  check_square(V, where);
  long n = static_cast<long>(V.entry.size());
  if (n == 0) return 0;

  // the form is singular exactly at roots of the Alexander polynomial;
  // check det(V - omega V^T) exactly in Q(zeta_p) before trusting floats
  ring::FieldPtr field = ring::CyclotomicField::get(p);
  FieldElement omega = FieldElement::zeta_pow(field, k);
  std::vector<std::vector<FieldElement>> M(n, std::vector<FieldElement>(n, FieldElement::zero(field)));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      M[i][j] = FieldElement::from_int(field, V.entry[i][j]) -
                omega * FieldElement::from_int(field, V.entry[j][i]);
  if (field_det(std::move(M), field).is_zero())
    throw error(errc::singular_at_omega, where,
                "det(V - omega V^T) vanishes at k = " + std::to_string(k) + ", p = " +
                    std::to_string(p));

  std::complex<double> w = std::polar(1.0, 2.0 * M_PI * static_cast<double>(k) / p);
  Eigen::MatrixXcd H(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      H(i, j) = (1.0 - w) * static_cast<double>(V.entry[i][j]) +
                (1.0 - std::conj(w)) * static_cast<double>(V.entry[j][i]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw error(errc::precision_failure, where, "eigenvalue iteration failed to converge");
  double tol = 1e-8 * H.norm();
  long sig = 0;
  for (long i = 0; i < n; ++i) {
    double ev = solver.eigenvalues()(i);
    if (ev > tol) ++sig;
    else if (ev < -tol) --sig;
    else
      throw error(errc::precision_failure, where,
                  "eigenvalue " + std::to_string(ev) + " inside the certification margin " +
                      std::to_string(tol));
  }
  return sig;
}

long total_signature(const SeifertMatrix& V, long p) {
  long sum = 0;
  for (long k = 1; k <= p - 1; ++k) sum += tristram_levine(V, p, k);
  return -sum;
}

}  // namespace qinv::topology
