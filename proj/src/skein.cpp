#include "qinv/skein.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace qinv::skein {

using ring::FieldElement;
using ring::Rat;

// ---------------------------------------------------------------------------
// Construction and validation
// ---------------------------------------------------------------------------

SlicedTangle make_tangle(long bottom_arity, std::vector<Slice> slices) {
  if (bottom_arity < 0)
    throw error(errc::malformed_diagram, "skein.make_tangle", "negative arity");
  long w = bottom_arity;
  for (size_t i = 0; i < slices.size(); ++i) {
    const Slice& s = slices[i];
    long need = s.kind == SliceKind::cup ? 0 : 2;
    if (s.pos < 0 || s.pos + need > w)
      throw error(errc::malformed_diagram, "skein.make_tangle",
                  "slice " + std::to_string(i) + " position " + std::to_string(s.pos) +
                      " out of range at width " + std::to_string(w));
    if (s.kind == SliceKind::cross && s.sign != 1 && s.sign != -1)
      throw error(errc::malformed_diagram, "skein.make_tangle",
                  "slice " + std::to_string(i) + " has no crossing sign");
    if (s.kind == SliceKind::cup) w += 2;
    if (s.kind == SliceKind::cap) w -= 2;
  }
  SlicedTangle t;
  t.bottom_arity = bottom_arity;
  t.top_arity = w;
  t.slices = std::move(slices);
  return t;
}

TangleAnalysis analyze(const SlicedTangle& t) {
  SlicedTangle checked = make_tangle(t.bottom_arity, t.slices);
  if (checked.top_arity != t.top_arity)
    throw error(errc::malformed_diagram, "skein.analyze",
                "declared top arity " + std::to_string(t.top_arity) + " but slices end at width " +
                    std::to_string(checked.top_arity));

  TangleAnalysis an;
  std::vector<long> frontier(t.bottom_arity);
  std::iota(frontier.begin(), frontier.end(), 0);
  an.num_segments = t.bottom_arity;
  std::vector<long> seg_birth_slice(t.bottom_arity, -1);
  std::vector<long> seg_birth_pos;
  for (long i = 0; i < t.bottom_arity; ++i) seg_birth_pos.push_back(i);

  an.frontier.push_back(frontier);
  for (size_t i = 0; i < t.slices.size(); ++i) {
    const Slice& s = t.slices[i];
    switch (s.kind) {
      case SliceKind::cup: {
        long a = an.num_segments++;
        long b = an.num_segments++;
        seg_birth_slice.push_back(static_cast<long>(i));
        seg_birth_slice.push_back(static_cast<long>(i));
        seg_birth_pos.push_back(s.pos);
        seg_birth_pos.push_back(s.pos);
        frontier.insert(frontier.begin() + s.pos, {a, b});
        an.pairings.push_back({a, b, static_cast<long>(i), true});
        break;
      }
      case SliceKind::cap: {
        long a = frontier[s.pos];
        long b = frontier[s.pos + 1];
        frontier.erase(frontier.begin() + s.pos, frontier.begin() + s.pos + 2);
        an.pairings.push_back({a, b, static_cast<long>(i), false});
        break;
      }
      case SliceKind::cross:
        std::swap(frontier[s.pos], frontier[s.pos + 1]);
        break;
    }
    an.frontier.push_back(frontier);
  }

  // union segments glued by cups and caps; components in first-appearance order
  std::vector<long> parent(an.num_segments);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<long(long)> find = [&](long v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& pr : an.pairings) {
    long ra = find(pr.a), rb = find(pr.b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  an.segment_component.assign(an.num_segments, -1);
  for (long s = 0; s < an.num_segments; ++s) {
    long root = find(s);
    if (an.segment_component[root] < 0) {
      an.segment_component[root] = an.num_components++;
      an.birth_slice.push_back(seg_birth_slice[root]);
      an.birth_pos.push_back(seg_birth_pos[root]);
    }
    an.segment_component[s] = an.segment_component[root];
  }
  return an;
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

SlicedTangle parse_tangle(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  long strands = -1;
  std::vector<Slice> slices;
  auto fail = [&](const std::string& what) {
    throw error(errc::parse_error, "skein.parse_tangle",
                "line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = line.substr(0, line.find('#'));
    std::istringstream ls(stripped);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (strands < 0) {
      if (tok != "strands:") fail("expected 'strands: N' header, got '" + line + "'");
      if (!(ls >> strands) || strands < 0) fail("bad strand count");
      continue;
    }
    long pos;
    if (!(ls >> pos)) fail("missing position in '" + line + "'");
    std::string extra;
    if (ls >> extra) fail("trailing input '" + extra + "'");
    if (tok == "cup") slices.push_back(Slice::Cup(pos));
    else if (tok == "cap") slices.push_back(Slice::Cap(pos));
    else if (tok == "x+") slices.push_back(Slice::Cross(pos, +1));
    else if (tok == "x-") slices.push_back(Slice::Cross(pos, -1));
    else fail("unknown slice '" + tok + "'");
  }
  if (strands < 0) {
    lineno = 0;
    fail("missing 'strands: N' header");
  }
  return make_tangle(strands, std::move(slices));
}

std::string to_text(const SlicedTangle& t) {
  std::ostringstream os;
  os << "strands: " << t.bottom_arity << "\n";
  for (const Slice& s : t.slices) {
    switch (s.kind) {
      case SliceKind::cup: os << "cup " << s.pos << "\n"; break;
      case SliceKind::cap: os << "cap " << s.pos << "\n"; break;
      case SliceKind::cross: os << (s.sign > 0 ? "x+ " : "x- ") << s.pos << "\n"; break;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Stacking
// ---------------------------------------------------------------------------

SlicedTangle tangle_power(const SlicedTangle& omega, long p) {
  if (p < 1)
    throw error(errc::invalid_argument, "skein.tangle_power", "power must be >= 1");
  if (omega.bottom_arity != omega.top_arity)
    throw error(errc::arity_mismatch, "skein.tangle_power",
                "tangle has arity (" + std::to_string(omega.bottom_arity) + ", " +
                    std::to_string(omega.top_arity) + "), cannot stack");
  std::vector<Slice> slices;
  slices.reserve(omega.slices.size() * p);
  for (long i = 0; i < p; ++i)
    slices.insert(slices.end(), omega.slices.begin(), omega.slices.end());
  return make_tangle(omega.bottom_arity, std::move(slices));
}

Coloring power_coloring(const SlicedTangle& omega, const Coloring& coloring, long p) {
  TangleAnalysis an_o = analyze(omega);
  if (static_cast<long>(coloring.color.size()) != an_o.num_components)
    throw error(errc::invalid_coloring, "skein.power_coloring",
                "coloring has " + std::to_string(coloring.color.size()) + " entries for " +
                    std::to_string(an_o.num_components) + " components");
  SlicedTangle power = tangle_power(omega, p);
  TangleAnalysis an_p = analyze(power);
  long l = omega.bottom_arity;
  long per_copy = static_cast<long>(omega.slices.size());
  long cup_segments = an_o.num_segments - l;

  std::vector<long> out(an_p.num_components, -1);
  for (long copy = 0; copy < p; ++copy) {
    const std::vector<long>& entry_frontier = an_p.frontier[copy * per_copy];
    for (long s = 0; s < an_o.num_segments; ++s) {
      long stacked = s < l ? entry_frontier[s] : l + copy * cup_segments + (s - l);
      long comp_p = an_p.segment_component[stacked];
      long col = coloring.color[an_o.segment_component[s]];
      if (out[comp_p] < 0) out[comp_p] = col;
      else if (out[comp_p] != col)
        throw error(errc::invalid_coloring, "skein.power_coloring",
                    "stacking merges components of colors " + std::to_string(out[comp_p]) +
                        " and " + std::to_string(col));
    }
  }
  return {std::move(out)};
}

SlicedTangle closure(const SlicedTangle& t) {
  if (t.bottom_arity != t.top_arity)
    throw error(errc::arity_mismatch, "skein.closure",
                "tangle has arity (" + std::to_string(t.bottom_arity) + ", " +
                    std::to_string(t.top_arity) + ")");
  long l = t.bottom_arity;
  std::vector<Slice> slices;
  slices.reserve(t.slices.size() + 2 * static_cast<size_t>(l));
  for (long i = 0; i < l; ++i) slices.push_back(Slice::Cup(i));
  slices.insert(slices.end(), t.slices.begin(), t.slices.end());
  for (long i = l - 1; i >= 0; --i) slices.push_back(Slice::Cap(i));
  return make_tangle(0, std::move(slices));
}

// ---------------------------------------------------------------------------
// Temperley-Lieb diagram algebra
// ---------------------------------------------------------------------------

TLKey tl_identity(long k) {
  TLKey d(2 * k);
  for (long i = 0; i < k; ++i) {
    d[i] = k + i;
    d[k + i] = i;
  }
  return d;
}

TLKey tl_e(long k, long i) {
  TLKey d = tl_identity(k);
  d[i] = i + 1;
  d[i + 1] = i;
  d[k + i] = k + i + 1;
  d[k + i + 1] = k + i;
  return d;
}

namespace {

// Glue Q on top of P: P's top points meet Q's bottom points. Returns the
// resulting matching plus the count of closed loops swallowed in the middle.
std::pair<TLKey, long> glue_diagrams(const TLKey& P, const TLKey& Q, long k) {
  auto match = [&](long v) { return v < 2 * k ? P[v] : 2 * k + Q[v - 2 * k]; };
  auto external = [&](long v) { return v < k || v >= 3 * k; };
  auto across = [&](long v) { return v < 2 * k ? v + k : v - k; };
  auto out_index = [&](long v) { return v < k ? v : v - 2 * k; };

  TLKey result(2 * k, -1);
  std::vector<char> seen(4 * k, 0);
  for (long start = 0; start < 4 * k; ++start) {
    if (!external(start) || seen[start]) continue;
    seen[start] = 1;
    long u = match(start);
    while (!external(u)) {
      seen[u] = 1;
      u = across(u);
      seen[u] = 1;
      u = match(u);
    }
    seen[u] = 1;
    result[out_index(start)] = out_index(u);
    result[out_index(u)] = out_index(start);
  }
  long loops = 0;
  for (long v = 0; v < 4 * k; ++v) {
    if (seen[v] || external(v)) continue;
    ++loops;
    long u = v;
    while (!seen[u]) {
      seen[u] = 1;
      u = match(u);
      seen[u] = 1;
      u = across(u);
    }
  }
  return {std::move(result), loops};
}

}  // namespace

TLElement tl_multiply(const TLElement& x, const TLElement& y, long k,
                      const FieldElement& delta_loop) {
  TLElement out;
  for (const auto& [dp, cp] : x) {
    for (const auto& [dq, cq] : y) {
      auto [key, loops] = glue_diagrams(dp, dq, k);
      FieldElement term = cp * cq;
      for (long i = 0; i < loops; ++i) term = term * delta_loop;
      auto it = out.find(key);
      if (it == out.end()) out.emplace(std::move(key), term);
      else {
        it->second = it->second + term;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  }
  return out;
}

std::vector<Slice> diagram_word(long k, const TLKey& diagram) {
  std::vector<Slice> word;
  // bottom arcs, innermost first
  std::vector<long> remaining(k);
  std::iota(remaining.begin(), remaining.end(), 0);
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t i = 0; i + 1 < remaining.size(); ++i) {
      if (diagram[remaining[i]] == remaining[i + 1]) {
        word.push_back(Slice::Cap(static_cast<long>(i)));
        remaining.erase(remaining.begin() + i, remaining.begin() + i + 2);
        progress = true;
        break;
      }
    }
  }
  // top arcs: mirror of the cap procedure, emitted in reverse as cups
  std::vector<long> top(k);
  std::iota(top.begin(), top.end(), k);
  std::vector<Slice> cups;
  progress = true;
  while (progress) {
    progress = false;
    for (size_t i = 0; i + 1 < top.size(); ++i) {
      if (diagram[top[i]] == top[i + 1]) {
        cups.push_back(Slice::Cup(static_cast<long>(i)));
        top.erase(top.begin() + i, top.begin() + i + 2);
        progress = true;
        break;
      }
    }
  }
  word.insert(word.end(), cups.rbegin(), cups.rend());
  return word;
}

// ---------------------------------------------------------------------------
// Jones-Wenzl projectors
// ---------------------------------------------------------------------------

namespace {

// f_{j-1} on j-1 strands re-read inside TL_j with a through strand appended.
TLElement embed_right(const TLElement& f, long j) {
  TLElement out;
  for (const auto& [key, coeff] : f) {
    TLKey big(2 * j, -1);
    auto remap = [&](long v) { return v < j - 1 ? v : v + 1; };
    for (long v = 0; v < 2 * (j - 1); ++v) big[remap(v)] = remap(key[v]);
    big[j - 1] = 2 * j - 1;
    big[2 * j - 1] = j - 1;
    out.emplace(std::move(big), coeff);
  }
  return out;
}

TLElement scale(const TLElement& x, const FieldElement& c) {
  TLElement out;
  if (c.is_zero()) return out;
  for (const auto& [key, coeff] : x) out.emplace(key, coeff * c);
  return out;
}

TLElement add(const TLElement& x, const TLElement& y) {
  TLElement out = x;
  for (const auto& [key, coeff] : y) {
    auto it = out.find(key);
    if (it == out.end()) out.emplace(key, coeff);
    else {
      it->second = it->second + coeff;
      if (it->second.is_zero()) out.erase(it);
    }
  }
  return out;
}

// signed dimension D_m = (-1)^m [m+1]
FieldElement signed_dim(const category::ModularDatum& datum, long m) {
  FieldElement v = category::quantum_integer(datum.A, m + 1);
  return m % 2 == 0 ? v : -v;
}

TLElement wenzl_step(const TLElement& prev, long j, const category::ModularDatum& datum,
                     const FieldElement& delta_loop) {
  FieldElement denom = signed_dim(datum, j - 1);
  if (denom.is_zero())
    throw error(errc::quantum_integer_zero, "skein.jones_wenzl",
                "[" + std::to_string(j) + "] = 0; projector f_" + std::to_string(j) +
                    " does not exist at this datum");
  FieldElement ratio = signed_dim(datum, j - 2) / denom;
  TLElement g = embed_right(prev, j);
  TLElement e;
  e.emplace(tl_e(j, j - 2), FieldElement::one(datum.field));
  TLElement mid = tl_multiply(tl_multiply(g, e, j, delta_loop), g, j, delta_loop);
  return add(g, scale(mid, -ratio));
}

FieldElement datum_loop_value(const category::ModularDatum& datum) {
  return -(datum.A.pow(2) + datum.A.pow(-2));
}

}  // namespace

TLElement jones_wenzl(long k, const category::ModularDatum& datum) {
  if (k < 1)
    throw error(errc::invalid_argument, "skein.jones_wenzl", "k must be >= 1");
  FieldElement delta_loop = datum_loop_value(datum);
  TLElement f;
  f.emplace(tl_identity(1), FieldElement::one(datum.field));
  for (long j = 2; j <= k; ++j) f = wenzl_step(f, j, datum, delta_loop);
  return f;
}

// ---------------------------------------------------------------------------
// Cabling
// ---------------------------------------------------------------------------

CabledDiagram cable(const SlicedTangle& diagram, const Coloring& coloring, long width_cap) {
  TangleAnalysis an = analyze(diagram);
  if (static_cast<long>(coloring.color.size()) != an.num_components)
    throw error(errc::invalid_coloring, "skein.cable",
                "coloring has " + std::to_string(coloring.color.size()) + " entries for " +
                    std::to_string(an.num_components) + " components");
  for (long c : coloring.color)
    if (c < 0) throw error(errc::color_out_of_range, "skein.cable", "negative color");
  auto col = [&](long seg) { return coloring.color[an.segment_component[seg]]; };
  auto offset_of = [&](const std::vector<long>& frontier, long pos) {
    long o = 0;
    for (long j = 0; j < pos; ++j) o += col(frontier[j]);
    return o;
  };
  auto check_width = [&](long w) {
    if (w > width_cap)
      throw error(errc::width_overflow, "skein.cable",
                  "cabled width " + std::to_string(w) + " exceeds cap " +
                      std::to_string(width_cap));
  };

  CabledDiagram out;
  long width = offset_of(an.frontier[0], diagram.bottom_arity);
  check_width(width);
  out.tangle.bottom_arity = width;

  // components entering through the bottom get their projector straight away
  for (long comp = 0; comp < an.num_components; ++comp) {
    if (an.birth_slice[comp] >= 0 || coloring.color[comp] == 0) continue;
    out.sites.push_back({0, offset_of(an.frontier[0], an.birth_pos[comp]), coloring.color[comp]});
  }

  for (size_t i = 0; i < diagram.slices.size(); ++i) {
    const Slice& s = diagram.slices[i];
    const std::vector<long>& frontier = an.frontier[i];
    long o = offset_of(frontier, s.pos);
    switch (s.kind) {
      case SliceKind::cup: {
        long seg = an.frontier[i + 1][s.pos];
        long c = col(seg);
        for (long u = 0; u < c; ++u) out.tangle.slices.push_back(Slice::Cup(o + u));
        width += 2 * c;
        check_width(width);
        long comp = an.segment_component[seg];
        if (c > 0 && an.birth_slice[comp] == static_cast<long>(i))
          out.sites.push_back({static_cast<long>(out.tangle.slices.size()), o, c});
        break;
      }
      case SliceKind::cap: {
        long c = col(frontier[s.pos]);
        for (long u = c - 1; u >= 0; --u) out.tangle.slices.push_back(Slice::Cap(o + u));
        width -= 2 * c;
        break;
      }
      case SliceKind::cross: {
        long ca = col(frontier[s.pos]);
        long cb = col(frontier[s.pos + 1]);
        for (long t = 0; t < ca; ++t) {
          long start = o + ca - 1 - t;
          for (long u = 0; u < cb; ++u)
            out.tangle.slices.push_back(Slice::Cross(start + u, s.sign));
        }
        break;
      }
    }
  }
  out.tangle.top_arity = width;
  std::sort(out.sites.begin(), out.sites.end(), [](const ProjectorSite& a, const ProjectorSite& b) {
    return a.word_index != b.word_index ? a.word_index < b.word_index : a.offset < b.offset;
  });
  return out;
}

// ---------------------------------------------------------------------------
// State propagation
// ---------------------------------------------------------------------------

namespace {

using Key = std::vector<long>;

void accumulate(std::map<Key, FieldElement>& into, Key key, const FieldElement& val) {
  if (val.is_zero()) return;
  auto it = into.find(key);
  if (it == into.end()) into.emplace(std::move(key), val);
  else {
    it->second = it->second + val;
    if (it->second.is_zero()) into.erase(it);
  }
}

Key key_cup(const Key& m, long q) {
  long w = static_cast<long>(m.size());
  Key r(w + 2);
  auto shift = [&](long v) { return v >= q ? v + 2 : v; };
  for (long i = 0; i < w; ++i) r[shift(i)] = shift(m[i]);
  r[q] = q + 1;
  r[q + 1] = q;
  return r;
}

// cap at q; sets loop when the capped points were partners
Key key_cap(const Key& m, long q, bool& loop) {
  long w = static_cast<long>(m.size());
  Key joined = m;
  loop = m[q] == q + 1;
  if (!loop) {
    long a = m[q], b = m[q + 1];
    joined[a] = b;
    joined[b] = a;
  }
  Key r(w - 2);
  auto shift = [&](long v) { return v > q + 1 ? v - 2 : v; };
  for (long i = 0; i < w; ++i) {
    if (i == q || i == q + 1) continue;
    r[shift(i)] = shift(joined[i]);
  }
  return r;
}

// the Temperley-Lieb generator e_q applied to a single matching
Key key_e(const Key& m, long q, bool& loop) {
  loop = m[q] == q + 1;
  if (loop) return m;
  Key r = m;
  long a = m[q], b = m[q + 1];
  r[a] = b;
  r[b] = a;
  r[q] = q + 1;
  r[q + 1] = q;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

Engine::Engine(category::ModularDatum datum, long width_cap)
    : datum_(std::move(datum)), width_cap_(width_cap) {
  if (width_cap_ < 2)
    throw error(errc::invalid_argument, "skein.engine", "width cap must be at least 2");
  delta_loop_ = datum_loop_value(datum_);
  long max_k = std::min(datum_.r - 2, width_cap_);
  jw_.resize(std::max<long>(max_k + 1, 1));
  jw_words_.resize(jw_.size());
  TLElement f;
  f.emplace(tl_identity(1), FieldElement::one(datum_.field));
  for (long k = 1; k <= max_k; ++k) {
    if (k > 1) f = wenzl_step(f, k, datum_, delta_loop_);
    jw_[k] = f;
    for (const auto& [key, coeff] : f) jw_words_[k].push_back({coeff, diagram_word(k, key)});
  }
}

const TLElement& Engine::jones_wenzl(long k) const {
  if (k < 1 || k >= static_cast<long>(jw_.size()))
    throw error(errc::invalid_argument, "skein.jones_wenzl",
                "no projector table for k = " + std::to_string(k));
  return jw_[k];
}

void Engine::check_colors(const TangleAnalysis& an, const Coloring& coloring) const {
  if (static_cast<long>(coloring.color.size()) != an.num_components)
    throw error(errc::invalid_coloring, "skein.evaluate",
                "coloring has " + std::to_string(coloring.color.size()) + " entries for " +
                    std::to_string(an.num_components) + " components");
  for (long c : coloring.color)
    if (c < 0 || c > datum_.r - 2)
      throw error(errc::color_out_of_range, "skein.evaluate",
                  "color " + std::to_string(c) + " outside 0.." + std::to_string(datum_.r - 2));
}

FieldElement Engine::run(const CabledDiagram& cabled) const {
  std::map<Key, FieldElement> state;
  state.emplace(Key{}, FieldElement::one(datum_.field));

  FieldElement a_pos = datum_.A;
  FieldElement a_neg = datum_.A.pow(-1);

  auto apply_word = [&](std::map<Key, FieldElement>& st, const std::vector<Slice>& word,
                        long offset) {
    for (const Slice& s : word) {
      std::map<Key, FieldElement> next;
      long q = s.pos + offset;
      switch (s.kind) {
        case SliceKind::cup:
          for (const auto& [m, x] : st) accumulate(next, key_cup(m, q), x);
          break;
        case SliceKind::cap:
          for (const auto& [m, x] : st) {
            bool loop = false;
            Key r = key_cap(m, q, loop);
            accumulate(next, std::move(r), loop ? x * delta_loop_ : x);
          }
          break;
        case SliceKind::cross: {
          // Kauffman relation: positive crossing = A * id + A^-1 * e
          const FieldElement& w_id = s.sign > 0 ? a_pos : a_neg;
          const FieldElement& w_e = s.sign > 0 ? a_neg : a_pos;
          for (const auto& [m, x] : st) {
            accumulate(next, m, x * w_id);
            bool loop = false;
            Key r = key_e(m, q, loop);
            accumulate(next, std::move(r), loop ? x * w_e * delta_loop_ : x * w_e);
          }
          break;
        }
      }
      st = std::move(next);
    }
  };

  size_t si = 0;
  for (size_t idx = 0; idx <= cabled.tangle.slices.size(); ++idx) {
    while (si < cabled.sites.size() &&
           cabled.sites[si].word_index == static_cast<long>(idx)) {
      const ProjectorSite& site = cabled.sites[si++];
      std::map<Key, FieldElement> acc;
      for (const JWEntry& ent : jw_words_[site.color]) {
        std::map<Key, FieldElement> tmp = state;
        apply_word(tmp, ent.word, site.offset);
        for (const auto& [m, x] : tmp) accumulate(acc, m, x * ent.coeff);
      }
      state = std::move(acc);
    }
    if (idx < cabled.tangle.slices.size()) {
      std::vector<Slice> one = {cabled.tangle.slices[idx]};
      apply_word(state, one, 0);
    }
  }

  auto it = state.find(Key{});
  return it == state.end() ? FieldElement::zero(datum_.field) : it->second;
}

FieldElement Engine::evaluate(const SlicedTangle& closed, const Coloring& coloring) const {
  if (!closed.closed())
    throw error(errc::malformed_diagram, "skein.evaluate", "diagram has open boundary");
  TangleAnalysis an = analyze(closed);
  check_colors(an, coloring);
  for (long c : coloring.color)
    if (c > std::min(datum_.r - 2, width_cap_))
      throw error(errc::width_overflow, "skein.evaluate",
                  "color " + std::to_string(c) + " exceeds the width cap");
  return run(cable(closed, coloring, width_cap_));
}

FieldElement Engine::quantum_trace(const SlicedTangle& omega, const Coloring& coloring) const {
  TangleAnalysis an_o = analyze(omega);
  if (static_cast<long>(coloring.color.size()) != an_o.num_components)
    throw error(errc::invalid_coloring, "skein.quantum_trace",
                "coloring has " + std::to_string(coloring.color.size()) + " entries for " +
                    std::to_string(an_o.num_components) + " components");

  long l = omega.bottom_arity;
  SlicedTangle closed = closure(omega);

  TangleAnalysis an_c = analyze(closed);
  std::vector<long> closed_colors(an_c.num_components, -1);
  for (long s = 0; s < an_o.num_segments; ++s) {
    long closed_seg = s < l ? 2 * s : s + l;
    long comp_c = an_c.segment_component[closed_seg];
    long colr = coloring.color[an_o.segment_component[s]];
    if (closed_colors[comp_c] < 0) closed_colors[comp_c] = colr;
    else if (closed_colors[comp_c] != colr)
      throw error(errc::invalid_coloring, "skein.quantum_trace",
                  "closure merges components of colors " + std::to_string(closed_colors[comp_c]) +
                      " and " + std::to_string(colr));
  }
  for (long v : closed_colors)
    if (v < 0)
      throw error(errc::invalid_coloring, "skein.quantum_trace",
                  "closure produced an uncolored component");
  return evaluate(closed, {std::move(closed_colors)});
}

}  // namespace qinv::skein
