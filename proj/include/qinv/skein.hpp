#pragma once

#include <map>
#include <string>
#include <vector>

#include "qinv/category.hpp"
#include "qinv/ring.hpp"

namespace qinv::skein {

using ring::FieldElement;

// ---------------------------------------------------------------------------
// Morse-position diagrams: a tangle is a word of elementary slices read
// bottom to top. Positions are 0-based among the strands present at that
// height. Cup inserts two strands, Cap removes two, Cross swaps neighbors.
// ---------------------------------------------------------------------------
enum class SliceKind { cup, cap, cross };

struct Slice {
  SliceKind kind = SliceKind::cup;
  long pos = 0;
  int sign = 0;  // +1 or -1 for crossings, 0 otherwise

  static Slice Cup(long i) { return {SliceKind::cup, i, 0}; }
  static Slice Cap(long i) { return {SliceKind::cap, i, 0}; }
  static Slice Cross(long i, int sign) { return {SliceKind::cross, i, sign}; }

  bool operator==(const Slice& o) const = default;
};

struct SlicedTangle {
  long bottom_arity = 0;
  long top_arity = 0;
  std::vector<Slice> slices;

  bool closed() const { return bottom_arity == 0 && top_arity == 0; }
};

/// Builds a tangle from a slice word, deriving top_arity from the width
/// profile. Throws malformed_diagram on out-of-range positions.
SlicedTangle make_tangle(long bottom_arity, std::vector<Slice> slices);

// ---------------------------------------------------------------------------
// Connectivity analysis. Strand segments are born at the bottom boundary or
// at cups, die at caps or the top boundary, and keep their identity through
// crossings. Components are unions of segments glued at cups and caps,
// numbered by first appearance.
// ---------------------------------------------------------------------------
struct TangleAnalysis {
  long num_segments = 0;
  long num_components = 0;
  std::vector<long> segment_component;

  /// frontier[i] = segment ids on the boundary just below slice i;
  /// frontier[slices.size()] is the top boundary. frontier[0] holds the
  /// bottom segments 0..bottom_arity-1.
  std::vector<std::vector<long>> frontier;

  /// Cup/cap gluings in slice order (a left of b at the event).
  struct Pairing {
    long a = 0, b = 0;
    long slice = 0;
    bool cup = false;
  };
  std::vector<Pairing> pairings;

  /// Birth site per component: slice index of its first cup and that cup's
  /// position, or birth_slice = -1 with birth_pos the bottom position for
  /// components entering through the bottom boundary.
  std::vector<long> birth_slice;
  std::vector<long> birth_pos;
};

TangleAnalysis analyze(const SlicedTangle& t);

// ---------------------------------------------------------------------------
// Colorings map component ids to colors of a modular datum.
// ---------------------------------------------------------------------------
struct Coloring {
  std::vector<long> color;
};

// ---------------------------------------------------------------------------
// Text format: "strands: l" header, then one slice per line ("cup i",
// "cap i", "x+ i", "x- i"). '#' starts a comment; blank lines are skipped.
// ---------------------------------------------------------------------------
SlicedTangle parse_tangle(const std::string& text);
std::string to_text(const SlicedTangle& t);

// ---------------------------------------------------------------------------
// Vertical stacking: p copies of an (l,l) tangle, bottom to top.
// ---------------------------------------------------------------------------
SlicedTangle tangle_power(const SlicedTangle& omega, long p);

/// The coloring of tangle_power(omega, p) induced by coloring every copy of
/// an omega component with that component's color. Throws invalid_coloring
/// when stacking merges components of different colors.
Coloring power_coloring(const SlicedTangle& omega, const Coloring& coloring, long p);

/// Nested plat closure of an (l,l) tangle: cups 0..l-1, the tangle word,
/// caps l-1..0. Segment s < l of the tangle (its s-th bottom strand)
/// becomes segment 2s of the closure, internal segment s >= l becomes
/// segment s + l. Throws arity_mismatch unless bottom and top arity agree.
SlicedTangle closure(const SlicedTangle& t);

// ---------------------------------------------------------------------------
// Temperley-Lieb elements: exact linear combinations of planar (k,k)
// diagrams. A basis diagram is a noncrossing perfect matching on 2k points,
// 0..k-1 on the bottom and k..2k-1 on the top, stored as a partner array.
// ---------------------------------------------------------------------------
using TLKey = std::vector<long>;
using TLElement = std::map<TLKey, FieldElement>;

TLKey tl_identity(long k);
/// The cup-cap generator joining strands i and i+1 (0-based), k strands total.
TLKey tl_e(long k, long i);

/// Stacks y on top of x, gluing x's top to y's bottom; closed loops formed
/// in the middle contribute a factor of delta_loop each.
TLElement tl_multiply(const TLElement& x, const TLElement& y, long k,
                      const FieldElement& delta_loop);

/// Realizes a basis diagram as a slice word (caps innermost first, then
/// cups), suitable for applying the diagram to a skein state at an offset.
std::vector<Slice> diagram_word(long k, const TLKey& diagram);

// ---------------------------------------------------------------------------
// Cabling: replace each strand of a color-c component by c parallel strands
// and mark one Jones-Wenzl insertion site per component. Color 0 deletes.
// ---------------------------------------------------------------------------
struct ProjectorSite {
  long word_index = 0;  // apply before this index of the cabled word
  long offset = 0;      // leftmost cabled strand position
  long color = 0;       // projector size
};

struct CabledDiagram {
  SlicedTangle tangle;
  std::vector<ProjectorSite> sites;  // sorted by (word_index, offset)
};

CabledDiagram cable(const SlicedTangle& diagram, const Coloring& coloring, long width_cap = 16);

// ---------------------------------------------------------------------------
// The evaluation engine: propagates states (linear combinations of
// noncrossing matchings of the current boundary) bottom to top, resolving
// crossings by the Kauffman relation with the datum's value of A. Pure and
// safe for concurrent use; the Jones-Wenzl table is filled at construction.
// ---------------------------------------------------------------------------
struct SkeinState {
  std::map<std::vector<long>, FieldElement> terms;
};

class Engine {
 public:
  explicit Engine(category::ModularDatum datum, long width_cap = 16);

  const category::ModularDatum& datum() const { return datum_; }
  long width_cap() const { return width_cap_; }
  /// Loop value -A^2 - A^-2.
  const FieldElement& loop_value() const { return delta_loop_; }

  /// Expansion of the projector f_k, 1 <= k <= r-2.
  const TLElement& jones_wenzl(long k) const;

  /// F of a closed colored diagram.
  FieldElement evaluate(const SlicedTangle& closed, const Coloring& coloring) const;

  /// Markov closure trace of an (l,l) tangle: joins top i to bottom i by
  /// nested arcs around the right side, transports the coloring to the
  /// closure, and evaluates.
  FieldElement quantum_trace(const SlicedTangle& omega, const Coloring& coloring) const;

 private:
  struct JWEntry {
    FieldElement coeff;
    std::vector<Slice> word;
  };

  void check_colors(const TangleAnalysis& an, const Coloring& coloring) const;
  FieldElement run(const CabledDiagram& cabled) const;

  category::ModularDatum datum_;
  long width_cap_ = 16;
  FieldElement delta_loop_;
  std::vector<TLElement> jw_;                    // index k, 1..r-2
  std::vector<std::vector<JWEntry>> jw_words_;   // parallel, precompiled
};

/// Wenzl recursion f_k = f_{k-1} - (D_{k-2}/D_{k-1}) f_{k-1} e_{k-1} f_{k-1}
/// with D_m = (-1)^m [m+1]. Throws quantum_integer_zero when a required
/// quantum integer vanishes (k beyond the admissible range for the datum).
TLElement jones_wenzl(long k, const category::ModularDatum& datum);

}  // namespace qinv::skein
