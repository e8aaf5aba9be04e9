#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "corpus.hpp"
#include "json.hpp"
#include "qinv/category.hpp"
#include "qinv/invariants.hpp"
#include "qinv/topology.hpp"

using namespace qinv;
using namespace qinv::ring;
using namespace qinv::skein;
using namespace qinv::topology;
using namespace qinv::invariants;

namespace {

errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.code();
  }
  throw std::logic_error("expected a qinv::error");
}

const category::ModularDatum& datum_r(long r) {
  static std::map<long, category::ModularDatum> cache;
  auto it = cache.find(r);
  if (it == cache.end()) it = cache.emplace(r, category::make_tl_datum(r)).first;
  return it->second;
}

LinkDiagram link_of(const SlicedTangle& t) { return trace_components(t); }

// Direct coloring sum with an odometer, independent of multi_bracket's
// index arithmetic and worker splitting.
FieldElement bracket_oracle(const LinkDiagram& link, const category::ModularDatum& datum,
                            const std::map<long, long>& fixed = {}) {
  Engine engine(datum, 64);
  long m = link.num_components();
  std::vector<long> free_ids;
  for (long id = 0; id < m; ++id)
    if (!fixed.count(id)) free_ids.push_back(id);
  Coloring colors{std::vector<long>(m, 0)};
  for (auto [id, c] : fixed) colors.color[id] = c;

  FieldElement acc = FieldElement::zero(datum.field);
  while (true) {
    FieldElement weight = FieldElement::one(datum.field);
    for (long id : free_ids) weight = weight * datum.dim[colors.color[id]];
    acc = acc + weight * engine.evaluate(link.diagram, colors);
    size_t j = free_ids.size();
    while (j > 0 && colors.color[free_ids[j - 1]] == datum.r - 2) {
      colors.color[free_ids[j - 1]] = 0;
      --j;
    }
    if (j == 0) break;
    ++colors.color[free_ids[j - 1]];
  }
  return acc;
}

// Membership in J_3 over the r=3 datum from first principles: both quantum
// dimensions are +-1 there, so every generator image d^3 - d vanishes and
// J_3 is plain (3). Membership then means each coefficient, with its unit
// denominator cleared, has numerator divisible by 3.
bool in_J3_r3(const FieldElement& x) {
  for (const Rat& q : x.coeffs()) {
    REQUIRE(q.get_den() % 3 != 0);
    if (q.get_num() % 3 != 0) return false;
  }
  return true;
}

SlicedTangle three_cycle() { return corpus::braid(3, {{0, +1}, {1, +1}}); }
SlicedTangle three_cycle_sq() {
  return corpus::braid(3, {{0, +1}, {1, +1}, {0, +1}, {1, +1}});
}
SlicedTangle five_cycle() {
  return corpus::braid(5, {{0, +1}, {1, +1}, {2, +1}, {3, +1}});
}

}  // namespace

TEST_CASE("bracket of the basic surgeries") {
  for (long r : {3L, 4L, 5L, 6L}) {
    const auto& datum = datum_r(r);
    FieldElement D2 = datum.rank_D * datum.rank_D;
    INFO("r = ", r);

    CHECK(multi_bracket(link_of(make_tangle(0, {})), datum) ==
          FieldElement::one(datum.field));
    CHECK(multi_bracket(link_of(corpus::closed_braid(1, {})), datum) == D2);
    if (r <= 5) {
      auto hopf = link_of(corpus::closed_braid(2, {{0, +1}, {0, +1}}));
      CHECK(multi_bracket(hopf, datum) == D2);
    }
  }
}

TEST_CASE("multi_bracket agrees with a direct coloring sum") {
  for (const auto& entry : corpus::diagrams()) {
    if (entry.components > 3 || entry.crossings > 6) continue;
    auto link = link_of(entry.diagram);
    INFO(entry.name);
    CHECK(multi_bracket(link, datum_r(3)) == bracket_oracle(link, datum_r(3)));
    if (entry.components <= 2 && entry.crossings <= 4)
      CHECK(multi_bracket(link, datum_r(4)) == bracket_oracle(link, datum_r(4)));
    if (entry.crossings <= 2)
      CHECK(multi_bracket(link, datum_r(5)) == bracket_oracle(link, datum_r(5)));
  }

  // a fixed colored part is pinned in both enumerations
  auto hopf = link_of(corpus::closed_braid(2, {{0, +1}, {0, +1}}));
  for (long c = 0; c <= 3; ++c) {
    FixedPart omega{{{1, c}}};
    CHECK(multi_bracket(hopf, datum_r(5), omega) ==
          bracket_oracle(hopf, datum_r(5), {{1, c}}));
  }
}

TEST_CASE("fixed components carry no dimension weight and no surgery data") {
  const auto& datum = datum_r(5);
  // split union of a surgery unknot and a fixed c-colored unknot: the sum
  // over the free component gives D^2 * d_c, and tau's normalization sees
  // only the single free component, leaving exactly d_c.
  auto split = link_of(make_tangle(
      0, {Slice::Cup(0), Slice::Cap(0), Slice::Cup(0), Slice::Cap(0)}));
  for (long c = 0; c <= 3; ++c) {
    FixedPart omega{{{1, c}}};
    FieldElement D2 = datum.rank_D * datum.rank_D;
    CHECK(multi_bracket(split, datum, omega) == D2 * datum.dim[c]);
    CHECK(tau(split, datum, omega) == datum.dim[c]);
  }
}

TEST_CASE("multi_bracket input validation") {
  const auto& datum = datum_r(4);
  auto unknot = link_of(corpus::closed_braid(1, {}));
  CHECK(code_of([&] { multi_bracket(unknot, datum, FixedPart{{{2, 0}}}); }) ==
        errc::invalid_coloring);
  CHECK(code_of([&] { multi_bracket(unknot, datum, FixedPart{{{0, 7}}}); }) ==
        errc::color_out_of_range);
  CHECK(code_of([&] { multi_bracket(unknot, datum, {}, 0); }) == errc::invalid_argument);
}

TEST_CASE("tau and I on the empty link and the framed unknots") {
  for (long r : {3L, 4L, 5L}) {
    const auto& datum = datum_r(r);
    FieldElement one = FieldElement::one(datum.field);
    INFO("r = ", r);

    auto empty = link_of(make_tangle(0, {}));
    CHECK(tau(empty, datum) == datum.rank_D.inverse());
    CHECK(i_invariant(empty, datum) == one);
    CHECK(tau(empty, datum) * datum.rank_D == one);

    auto unknot0 = link_of(corpus::closed_braid(1, {}));
    CHECK(tau(unknot0, datum) == one);
    CHECK(i_invariant(unknot0, datum) == datum.rank_D);

    // blowing up or down lands back on the same manifold
    CHECK(tau(link_of(corpus::kinked_unknot(+1)), datum) == datum.rank_D.inverse());
    CHECK(tau(link_of(corpus::kinked_unknot(-1)), datum) == datum.rank_D.inverse());
  }
}

TEST_CASE("blow-up invariance of tau over the corpus") {
  const auto& d3 = datum_r(3);
  for (const auto& entry : corpus::diagrams()) {
    if (entry.components > 2 || entry.crossings > 4) continue;
    auto base = link_of(entry.diagram);
    FieldElement expected = tau(base, d3);
    for (int sign : {+1, -1}) {
      std::vector<Slice> slices = entry.diagram.slices;
      auto extra = corpus::kinked_unknot(sign);
      slices.insert(slices.end(), extra.slices.begin(), extra.slices.end());
      auto blown = link_of(make_tangle(0, std::move(slices)));
      REQUIRE(blown.num_components() == entry.components + 1);
      INFO(entry.name, " with a ", sign > 0 ? "+1" : "-1", " unknot");
      CHECK(tau(blown, d3) == expected);
    }
  }

  // same property on a bigger datum
  const auto& d5 = datum_r(5);
  auto trefoil = corpus::closed_braid(2, {{0, +1}, {0, +1}, {0, +1}});
  FieldElement expected = tau(link_of(trefoil), d5);
  for (int sign : {+1, -1}) {
    std::vector<Slice> slices = trefoil.slices;
    auto extra = corpus::kinked_unknot(sign);
    slices.insert(slices.end(), extra.slices.begin(), extra.slices.end());
    CHECK(tau(link_of(make_tangle(0, std::move(slices))), d5) == expected);
  }
}

TEST_CASE("a single handle slide preserves the bracket") {
  // Slide a small 0-framed unknot over a +1-framed kinked unknot: the slid
  // curve is the blackboard parallel of the kinked circle, so the result is
  // exactly its 2-cable. Both diagrams must evaluate to Delta+ * D^2.
  for (long r : {3L, 4L}) {
    const auto& datum = datum_r(r);
    INFO("r = ", r);

    auto kinked = corpus::kinked_unknot(+1);
    std::vector<Slice> split = kinked.slices;
    split.push_back(Slice::Cup(0));
    split.push_back(Slice::Cap(0));
    auto before = link_of(make_tangle(0, std::move(split)));
    REQUIRE(before.num_components() == 2);

    CabledDiagram doubled = cable(kinked, Coloring{{2}}, 32);
    auto after = link_of(doubled.tangle);
    REQUIRE(after.num_components() == 2);

    FieldElement expected = datum.delta_plus * datum.rank_D * datum.rank_D;
    CHECK(multi_bracket(before, datum) == expected);
    CHECK(multi_bracket(after, datum) == expected);
  }

  // and the mirror slide over a -1-framed unknot
  const auto& datum = datum_r(4);
  auto kinked = corpus::kinked_unknot(-1);
  std::vector<Slice> split = kinked.slices;
  split.push_back(Slice::Cup(0));
  split.push_back(Slice::Cap(0));
  FieldElement expected = datum.delta_minus * datum.rank_D * datum.rank_D;
  CHECK(multi_bracket(link_of(make_tangle(0, std::move(split))), datum) == expected);
  CHECK(multi_bracket(link_of(cable(kinked, Coloring{{2}}, 32).tangle), datum) == expected);
}

TEST_CASE("worker counts do not change the bracket") {
  const auto& d4 = datum_r(4);
  auto twist = link_of(corpus::closed_braid(
      3, {{0, +1}, {1, +1}, {0, +1}, {1, +1}, {0, +1}, {1, +1}}));
  FieldElement base = multi_bracket(twist, d4, {}, 1);
  for (long workers : {2L, 3L, 5L, 40L}) CHECK(multi_bracket(twist, d4, {}, workers) == base);
  CHECK(base == bracket_oracle(twist, d4));
}

TEST_CASE("periodic bracket congruence certificate") {
  const auto& d3 = datum_r(3);
  auto T = three_cycle();
  auto cert = verify_periodic_bracket(T, 3, d3);

  CHECK(cert.kind == "bracket-lemma");
  CHECK(cert.p == 3);
  CHECK(cert.r == 3);
  CHECK(cert.conductor == 24);
  CHECK(cert.components_total == 3);
  CHECK(cert.components_quotient == 1);
  CHECK(cert.tangle_text == to_text(T));
  CHECK_FALSE(cert.vacuous);
  CHECK(cert.member);
  CHECK_FALSE(cert.negative_control);
  CHECK(cert.difference == cert.lhs - cert.rhs);
  // at r=3 the generator gcd degenerates to the full cyclotomic image
  // x^8 - x^4 + 1 mod 3
  CHECK(cert.ideal_generator == std::vector<long>{1, 0, 0, 0, 2, 0, 0, 0, 1});
  CHECK(in_J3_r3(cert.difference));

  // both sides against the independent coloring sum
  CHECK(cert.lhs == bracket_oracle(link_of(closure(tangle_power(T, 3))), d3));
  CHECK(cert.rhs == bracket_oracle(link_of(closure(T)), d3).pow(3));

  auto control = verify_periodic_bracket(T, 3, d3, 1, true);
  CHECK(control.negative_control);
  CHECK_FALSE(control.member);
  CHECK(control.difference ==
        (control.lhs - control.rhs) + FieldElement::one(d3.field));
  CHECK_FALSE(in_J3_r3(control.difference));
}

TEST_CASE("verifiers reject tangles that fail the freeness gate") {
  const auto& d3 = datum_r(3);
  auto knotted = corpus::braid(2, {{0, +1}});  // closure of the cube is one circle
  auto strand = corpus::braid(1, {});          // identity winds once, not p times

  CHECK(code_of([&] { verify_periodic_bracket(knotted, 3, d3); }) == errc::freeness_failed);
  CHECK(code_of([&] { verify_main_theorem(strand, 3, d3); }) == errc::freeness_failed);
  CHECK(code_of([&] { verify_tau_corollary(knotted, 5, d3); }) == errc::freeness_failed);
  CHECK(code_of([&] { verify_periodic_bracket(three_cycle(), 4, d3); }) ==
        errc::invalid_argument);
}

TEST_CASE("main theorem certificates over the suite instances") {
  const auto& d3 = datum_r(3);
  const auto& d4 = datum_r(4);

  auto c1 = verify_main_theorem(three_cycle(), 3, d3);
  CHECK(c1.kind == "main-theorem");
  CHECK(c1.member);
  CHECK_FALSE(c1.vacuous);
  CHECK(c1.components_total == 3);
  CHECK(c1.components_quotient == 1);
  // full twist linking matrix has eigenvalues {2, -1, -1}; the quotient
  // unknot carries writhe +2
  CHECK(c1.sigma_total == -1);
  CHECK(c1.sigma_quotient == 1);
  CHECK(c1.delta == -4);
  CHECK(c1.member == in_J3_r3(c1.difference));

  auto c2 = verify_main_theorem(three_cycle_sq(), 3, d3);
  CHECK(c2.member);
  CHECK(c2.components_quotient == 1);  // trefoil quotient
  CHECK(c2.sigma_quotient == 1);       // writhe +4 on one circle
  CHECK(c2.sigma_total == -1);
  CHECK(c2.member == in_J3_r3(c2.difference));

  auto c3 = verify_main_theorem(five_cycle(), 5, d3, 4);
  CHECK(c3.member);
  CHECK_FALSE(c3.vacuous);
  CHECK(c3.p == 5);
  CHECK(c3.components_total == 5);
  CHECK(c3.sigma_total == -3);  // all-ones off-diagonal on five components
  CHECK(c3.sigma_quotient == 1);
  CHECK(c3.delta == -8);

  auto c4 = verify_main_theorem(three_cycle(), 3, d4);
  CHECK(c4.member);
  CHECK(c4.vacuous);
  CHECK(c4.conductor == 16);
  CHECK(c4.ideal_generator == std::vector<long>{1});
}

TEST_CASE("tau corollary certificates agree with the main theorem") {
  struct Instance {
    SlicedTangle T;
    long p;
    long r;
  };
  std::vector<Instance> instances = {
      {three_cycle(), 3, 3},
      {three_cycle_sq(), 3, 3},
      {five_cycle(), 5, 3},
      {three_cycle(), 3, 4},
  };

  bool any_nonvacuous = false;
  for (const auto& inst : instances) {
    INFO("p = ", inst.p, ", r = ", inst.r);
    auto mt = verify_main_theorem(inst.T, inst.p, datum_r(inst.r), 2);
    auto tc = verify_tau_corollary(inst.T, inst.p, datum_r(inst.r), 2);
    CHECK(tc.kind == "tau-corollary");
    CHECK(tc.member);
    CHECK(mt.member);
    CHECK(tc.member == mt.member);
    CHECK(tc.delta == mt.delta);
    CHECK(tc.vacuous == mt.vacuous);
    any_nonvacuous = any_nonvacuous || !tc.vacuous;
  }
  // the guard: a suite where every ideal is the whole ring proves nothing
  CHECK(any_nonvacuous);
}

TEST_CASE("negative controls fail exactly when the ideal is proper") {
  const auto& d3 = datum_r(3);
  auto T = three_cycle();

  CHECK_FALSE(verify_periodic_bracket(T, 3, d3, 1, true).member);
  CHECK_FALSE(verify_main_theorem(T, 3, d3, 1, true).member);
  CHECK_FALSE(verify_tau_corollary(T, 3, d3, 1, true).member);

  // on a vacuous pair the perturbed difference still lies in the ideal,
  // which is why the suite only exercises controls on proper ideals
  auto vac = verify_main_theorem(T, 3, datum_r(4), 1, true);
  CHECK(vac.vacuous);
  CHECK(vac.member);
}

TEST_CASE("trace congruence certificates") {
  const auto& d5 = datum_r(5);
  auto strand = make_tangle(1, {});
  for (long c = 0; c <= 3; ++c) {
    auto cert = verify_trace_congruence(strand, Coloring{{c}}, 3, d5);
    INFO("color ", c);
    CHECK(cert.kind == "trace-congruence");
    CHECK(cert.member);
    CHECK(cert.coloring == std::vector<long>{c});
    // the difference is literally an ideal generator: d^3 - d
    CHECK(cert.difference == d5.dim[c].pow(3) - d5.dim[c]);
  }

  // e_1 is idempotent up to a loop factor, so both sides coincide
  auto e1 = make_tangle(2, {Slice::Cap(0), Slice::Cup(0)});
  Engine engine(d5, 16);
  CHECK(engine.quantum_trace(e1, Coloring{{1, 1}}) == d5.dim[1]);
  auto ce = verify_trace_congruence(e1, Coloring{{1, 1}}, 3, d5);
  CHECK(ce.member);
  CHECK(ce.difference == FieldElement::zero(d5.field));

  // a braid generator runs the full stacking pipeline
  auto s1 = corpus::braid(2, {{0, +1}});
  auto c4 = verify_trace_congruence(s1, Coloring{{1, 1}}, 3, datum_r(4));
  CHECK(c4.member);
  CHECK(c4.vacuous);
  auto c3 = verify_trace_congruence(s1, Coloring{{1, 1}}, 3, datum_r(3));
  CHECK(c3.member);
  CHECK_FALSE(c3.vacuous);
  CHECK(c3.member == in_J3_r3(c3.difference));
  CHECK(c3.components_quotient == 2);
  CHECK(c3.components_total == 2);
  CHECK_FALSE(verify_trace_congruence(s1, Coloring{{1, 1}}, 3, datum_r(3), true).member);

  CHECK(code_of([&] { verify_trace_congruence(s1, Coloring{{1, 1}}, 4, d5); }) ==
        errc::invalid_argument);
  CHECK(code_of([&] { verify_trace_congruence(s1, Coloring{{1, 1}}, 2, d5); }) ==
        errc::invalid_argument);
  CHECK(code_of([&] { verify_trace_congruence(e1, Coloring{{1}}, 3, d5); }) ==
        errc::invalid_coloring);
  CHECK(code_of([&] { verify_trace_congruence(e1, Coloring{{9, 9}}, 3, d5); }) ==
        errc::color_out_of_range);
}

TEST_CASE("branched cover exponent report") {
  const auto& d3 = datum_r(3);
  auto cert = verify_main_theorem(three_cycle(), 3, d3);
  REQUIRE(cert.delta == -4);

  // trefoil Seifert matrix: total level signature +4 at p=3
  SeifertMatrix trefoil{{{-1, 1}, {0, -1}}};
  auto rep = check_branched_cover_exponent(cert, trefoil, 3);
  CHECK(rep.delta == -4);
  CHECK(rep.expected == -4);
  CHECK(rep.consistent);

  // empty axis data expects exponent zero
  SeifertMatrix none{};
  auto rep0 = check_branched_cover_exponent(cert, none, 3);
  CHECK(rep0.expected == 0);
  CHECK_FALSE(rep0.consistent);
  Certificate flat = cert;
  flat.delta = 0;
  CHECK(check_branched_cover_exponent(flat, none, 3).consistent);

  // a mismatched matrix reports inequality without erroring
  SeifertMatrix positive{{{1}}};
  auto repm = check_branched_cover_exponent(cert, positive, 3);
  CHECK(repm.expected == 2);
  CHECK_FALSE(repm.consistent);

  auto bracket_cert = verify_periodic_bracket(three_cycle(), 3, d3);
  CHECK(code_of([&] { check_branched_cover_exponent(bracket_cert, trefoil, 3); }) ==
        errc::invalid_argument);
}

TEST_CASE("certificates serialize deterministically and completely") {
  const auto& d4 = datum_r(4);
  auto T = three_cycle();
  std::string a = certificate_json(verify_main_theorem(T, 3, d4, 1));
  std::string b = certificate_json(verify_main_theorem(T, 3, d4, 4));
  CHECK(a == b);  // byte-identical across worker counts
  CHECK(certificate_json(verify_main_theorem(T, 3, d4, 1)) == a);  // and across runs

  auto doc = nlohmann::json::parse(a);
  CHECK(doc["kind"] == "main-theorem");
  CHECK(doc["p"] == 3);
  CHECK(doc["datum"]["r"] == 4);
  CHECK(doc["datum"]["cyclotomic_index"] == 16);
  CHECK(doc["components"]["total"] == 3);
  CHECK(doc["components"]["quotient"] == 1);
  CHECK(doc["signatures"]["total"] == -1);
  CHECK(doc["signatures"]["quotient"] == 1);
  CHECK(doc["signatures"]["delta"] == -4);
  CHECK(doc["member"] == true);
  CHECK(doc["negative_control"] == false);
  CHECK(doc["ideal"]["vacuous"] == true);
  CHECK(doc["ideal"]["p"] == 3);
  // one exact rational coefficient per basis power of the degree-8 field
  CHECK(doc["lhs"].size() == 8);
  CHECK(doc["rhs"].size() == 8);
  CHECK(doc["difference"].size() == 8);
  CHECK(doc["input"]["tangle"] == to_text(T));
  CHECK(doc["conventions"]["framing"] == "blackboard");
  CHECK(doc["conventions"]["orientation"].get<std::string>().find("first-born") !=
        std::string::npos);
  CHECK(doc["summary"].get<std::string>().rfind("main-theorem", 0) == 0);

  // trace certificates carry their coloring
  auto tr = verify_trace_congruence(corpus::braid(2, {{0, +1}}), Coloring{{1, 1}}, 3, d4);
  auto tdoc = nlohmann::json::parse(certificate_json(tr));
  CHECK(tdoc["input"]["coloring"] == std::vector<long>{1, 1});
}
