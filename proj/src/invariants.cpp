#include "qinv/invariants.hpp"

#include <algorithm>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qinv/errors.hpp"

namespace qinv::invariants {

using category::ModularDatum;
using ring::FieldElement;
using skein::SlicedTangle;
using topology::LinkDiagram;

namespace {

const char* kOrientationConvention =
    "first-born segment of each component points up; direction flips at every cup and cap";
const char* kFramingConvention = "blackboard";

void check_fixed(const FixedPart& fixed, long components, long r, const char* where) {
  for (auto [id, color] : fixed.color_of) {
    if (id < 0 || id >= components)
      throw error(errc::invalid_coloring, where,
                  "fixed component " + std::to_string(id) + " outside 0.." +
                      std::to_string(components - 1));
    if (color < 0 || color > r - 2)
      throw error(errc::color_out_of_range, where,
                  "fixed color " + std::to_string(color) + " outside 0.." + std::to_string(r - 2));
  }
}

/// Engine sized for the widest cabled frontier the diagram can produce.
skein::Engine make_engine(const ModularDatum& datum, const skein::TangleAnalysis& analysis) {
  long width = 2;
  for (const auto& f : analysis.frontier)
    width = std::max(width, static_cast<long>(f.size()));
  return skein::Engine(datum, std::max<long>(2, width * std::max<long>(1, datum.r - 2)));
}

}  // namespace

FieldElement multi_bracket(const LinkDiagram& link, const ModularDatum& datum,
                           const FixedPart& fixed, long workers) {
  static const char* where = "invariants.multi_bracket";
  long m = link.num_components();
  check_fixed(fixed, m, datum.r, where);
  if (workers < 1)
    throw error(errc::invalid_argument, where, "worker count must be at least 1");

  std::vector<long> free_ids;
  for (long c = 0; c < m; ++c)
    if (!fixed.color_of.count(c)) free_ids.push_back(c);

  long colors = datum.r - 1;
  unsigned long long total = 1;
  for (size_t i = 0; i < free_ids.size(); ++i) {
    total *= static_cast<unsigned long long>(colors);
    if (total > (1ULL << 22))
      throw error(errc::invalid_argument, where,
                  "coloring sum exceeds 2^22 terms for " + std::to_string(free_ids.size()) +
                      " free components");
  }

  skein::Engine engine = make_engine(datum, link.analysis);

  // colorings in lexicographic order: the first free component varies slowest
  auto sum_range = [&](unsigned long long lo, unsigned long long hi) {
    FieldElement acc = FieldElement::zero(datum.field);
    std::vector<long> assignment(m, 0);
    for (auto [id, color] : fixed.color_of) assignment[id] = color;
    for (unsigned long long idx = lo; idx < hi; ++idx) {
      unsigned long long rest = idx;
      for (size_t j = free_ids.size(); j-- > 0;) {
        assignment[free_ids[j]] = static_cast<long>(rest % colors);
        rest /= colors;
      }
      FieldElement weight = FieldElement::one(datum.field);
      for (long id : free_ids) weight = weight * datum.dim[assignment[id]];
      acc = acc + weight * engine.evaluate(link.diagram, {assignment});
    }
    return acc;
  };

  unsigned long long lanes = std::min<unsigned long long>(static_cast<unsigned long long>(workers),
                                                          std::max<unsigned long long>(total, 1));
  if (lanes <= 1) return sum_range(0, total);

  unsigned long long chunk = (total + lanes - 1) / lanes;
  std::vector<FieldElement> partial(lanes, FieldElement::zero(datum.field));
  std::vector<std::exception_ptr> failure(lanes);
  std::vector<std::thread> pool;
  for (unsigned long long lane = 0; lane < lanes; ++lane) {
    unsigned long long lo = lane * chunk;
    unsigned long long hi = std::min(total, lo + chunk);
    pool.emplace_back([&, lane, lo, hi] {
      try {
        partial[lane] = sum_range(lo, hi);
      } catch (...) {
        failure[lane] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& f : failure)
    if (f) std::rethrow_exception(f);

  FieldElement acc = FieldElement::zero(datum.field);
  for (const auto& part : partial) acc = acc + part;
  return acc;
}

namespace {

/// Signature and size of the linking matrix restricted to free components.
std::pair<long, long> surgery_signature(const LinkDiagram& link, const FixedPart& fixed) {
  topology::LinkingMatrix lk = topology::linking_matrix(link);
  std::vector<long> free_ids;
  for (long c = 0; c < link.num_components(); ++c)
    if (!fixed.color_of.count(c)) free_ids.push_back(c);
  std::vector<std::vector<long>> sub(free_ids.size(), std::vector<long>(free_ids.size(), 0));
  for (size_t i = 0; i < free_ids.size(); ++i)
    for (size_t j = 0; j < free_ids.size(); ++j) sub[i][j] = lk.entry[free_ids[i]][free_ids[j]];
  return {topology::signature(sub), static_cast<long>(free_ids.size())};
}

}  // namespace

FieldElement tau(const LinkDiagram& link, const ModularDatum& datum, const FixedPart& fixed,
                 long workers) {
  check_fixed(fixed, link.num_components(), datum.r, "invariants.tau");
  auto [sigma, m] = surgery_signature(link, fixed);
  FieldElement bracket = multi_bracket(link, datum, fixed, workers);
  return datum.delta_minus.pow(sigma) * datum.rank_D.pow(-sigma - m - 1) * bracket;
}

FieldElement i_invariant(const LinkDiagram& link, const ModularDatum& datum,
                         const FixedPart& fixed, long workers) {
  return datum.rank_D * tau(link, datum, fixed, workers);
}

namespace {

struct PeriodicSetup {
  LinkDiagram total;
  LinkDiagram quotient;
};

PeriodicSetup periodic_setup(const SlicedTangle& T, long p, const char* where) {
  topology::FreenessReport rep = topology::freeness_check(T, p);
  if (!rep.pass)
    throw error(errc::freeness_failed, where,
                "closure of the power has " + std::to_string(rep.total_components) +
                    " components, expected " + std::to_string(p) + " * " +
                    std::to_string(rep.quotient_components));
  PeriodicSetup setup;
  setup.total = topology::trace_components(skein::closure(skein::tangle_power(T, p)));
  setup.quotient = topology::trace_components(skein::closure(T));
  return setup;
}

Certificate periodic_certificate(const std::string& kind, const SlicedTangle& T, long p,
                                 const ModularDatum& datum, const PeriodicSetup& setup) {
  Certificate cert;
  cert.kind = kind;
  cert.p = p;
  cert.r = datum.r;
  cert.conductor = datum.field->n();
  cert.tangle_text = skein::to_text(T);
  cert.components_total = setup.total.num_components();
  cert.components_quotient = setup.quotient.num_components();
  cert.sigma_total = topology::signature(topology::linking_matrix(setup.total));
  cert.sigma_quotient = topology::signature(topology::linking_matrix(setup.quotient));
  cert.delta = cert.sigma_total - p * cert.sigma_quotient;
  cert.orientation_convention = kOrientationConvention;
  cert.framing_convention = kFramingConvention;
  return cert;
}

void seal(Certificate& cert, const ModularDatum& datum, FieldElement lhs, FieldElement rhs,
          bool negative_control) {
  ring::IdealJp J = ring::jp_generator(cert.p, datum.field, datum.dim);
  cert.lhs = std::move(lhs);
  cert.rhs = std::move(rhs);
  cert.difference = cert.lhs - cert.rhs;
  if (negative_control) cert.difference = cert.difference + FieldElement::one(datum.field);
  cert.negative_control = negative_control;
  cert.vacuous = J.vacuous;
  cert.ideal_generator.assign(J.g.c.begin(), J.g.c.end());
  cert.member = ring::in_ideal(cert.difference, J);
}

}  // namespace

Certificate verify_periodic_bracket(const SlicedTangle& T, long p, const ModularDatum& datum,
                                    long workers, bool negative_control) {
  PeriodicSetup setup = periodic_setup(T, p, "invariants.verify_periodic_bracket");
  Certificate cert = periodic_certificate("bracket-lemma", T, p, datum, setup);
  FieldElement lhs = multi_bracket(setup.total, datum, {}, workers);
  FieldElement rhs = multi_bracket(setup.quotient, datum, {}, workers).pow(p);
  seal(cert, datum, std::move(lhs), std::move(rhs), negative_control);
  return cert;
}

Certificate verify_main_theorem(const SlicedTangle& T, long p, const ModularDatum& datum,
                                long workers, bool negative_control) {
  PeriodicSetup setup = periodic_setup(T, p, "invariants.verify_main_theorem");
  Certificate cert = periodic_certificate("main-theorem", T, p, datum, setup);
  FieldElement lhs = i_invariant(setup.total, datum, {}, workers);
  FieldElement rhs =
      datum.kappa.pow(cert.delta) * i_invariant(setup.quotient, datum, {}, workers).pow(p);
  seal(cert, datum, std::move(lhs), std::move(rhs), negative_control);
  return cert;
}

Certificate verify_tau_corollary(const SlicedTangle& T, long p, const ModularDatum& datum,
                                 long workers, bool negative_control) {
  PeriodicSetup setup = periodic_setup(T, p, "invariants.verify_tau_corollary");
  Certificate cert = periodic_certificate("tau-corollary", T, p, datum, setup);
  FieldElement lhs = tau(setup.total, datum, {}, workers);
  FieldElement rhs = datum.kappa.pow(cert.delta) * datum.rank_D.pow(p - 1) *
                     tau(setup.quotient, datum, {}, workers).pow(p);
  seal(cert, datum, std::move(lhs), std::move(rhs), negative_control);
  return cert;
}

Certificate verify_trace_congruence(const SlicedTangle& omega, const skein::Coloring& coloring,
                                    long p, const ModularDatum& datum, bool negative_control) {
  static const char* where = "invariants.verify_trace_congruence";
  if (!ring::is_odd_prime(p))
    throw error(errc::invalid_argument, where,
                "period " + std::to_string(p) + " is not an odd prime");
  SlicedTangle power = skein::tangle_power(omega, p);
  skein::Coloring power_colors = skein::power_coloring(omega, coloring, p);

  Certificate cert;
  cert.kind = "trace-congruence";
  cert.p = p;
  cert.r = datum.r;
  cert.conductor = datum.field->n();
  cert.tangle_text = skein::to_text(omega);
  cert.coloring = coloring.color;
  cert.components_quotient = skein::analyze(omega).num_components;
  cert.components_total = skein::analyze(power).num_components;
  cert.orientation_convention = kOrientationConvention;
  cert.framing_convention = kFramingConvention;

  // quantum_trace evaluates the closure, which doubles the boundary width
  skein::Engine engine = make_engine(datum, skein::analyze(skein::closure(power)));
  FieldElement lhs = engine.quantum_trace(omega, coloring).pow(p);
  FieldElement rhs = engine.quantum_trace(power, power_colors);
  seal(cert, datum, std::move(lhs), std::move(rhs), negative_control);
  return cert;
}

BranchedCoverReport check_branched_cover_exponent(const Certificate& cert,
                                                  const topology::SeifertMatrix& V, long p) {
  if (cert.kind != "main-theorem")
    throw error(errc::invalid_argument, "invariants.check_branched_cover_exponent",
                "certificate kind is '" + cert.kind + "', expected 'main-theorem'");
  BranchedCoverReport report;
  report.delta = cert.delta;
  report.expected = -topology::total_signature(V, p);
  report.consistent = report.delta == report.expected;
  return report;
}

namespace {

std::vector<std::string> coefficient_strings(const FieldElement& x) {
  std::vector<std::string> out;
  out.reserve(x.coeffs().size());
  for (const ring::Rat& q : x.coeffs()) out.push_back(q.get_str());
  return out;
}

}  // namespace

std::string certificate_json(const Certificate& cert) {
  nlohmann::ordered_json doc;
  doc["kind"] = cert.kind;
  doc["p"] = cert.p;
  doc["datum"]["r"] = cert.r;
  doc["datum"]["cyclotomic_index"] = cert.conductor;
  doc["input"]["tangle"] = cert.tangle_text;
  if (!cert.coloring.empty()) doc["input"]["coloring"] = cert.coloring;
  doc["components"]["total"] = cert.components_total;
  doc["components"]["quotient"] = cert.components_quotient;
  doc["signatures"]["total"] = cert.sigma_total;
  doc["signatures"]["quotient"] = cert.sigma_quotient;
  doc["signatures"]["delta"] = cert.delta;
  doc["lhs"] = coefficient_strings(cert.lhs);
  doc["rhs"] = coefficient_strings(cert.rhs);
  doc["difference"] = coefficient_strings(cert.difference);
  doc["ideal"]["p"] = cert.p;
  doc["ideal"]["generator"] = cert.ideal_generator;
  doc["ideal"]["vacuous"] = cert.vacuous;
  doc["member"] = cert.member;
  doc["negative_control"] = cert.negative_control;
  doc["conventions"]["orientation"] = cert.orientation_convention;
  doc["conventions"]["framing"] = cert.framing_convention;

  std::string verdict = cert.member ? "lies in J_p" : "is NOT in J_p";
  doc["summary"] = cert.kind + ": p=" + std::to_string(cert.p) + ", r=" + std::to_string(cert.r) +
                   ", delta=" + std::to_string(cert.delta) +
                   (cert.negative_control ? ", negative control" : "") + ": difference " +
                   verdict + (cert.vacuous ? " (vacuous ideal)" : "");
  return doc.dump(2) + "\n";
}

}  // namespace qinv::invariants
