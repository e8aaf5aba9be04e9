// qinv: batch front end for the surgery-invariant library. Reads a JSON job
// file describing one computation, runs it, prints a plain-text summary to
// stdout, and optionally writes a certificate file. Exit codes are a
// scripting contract:
//   0  success (and member = true for verification tasks)
//   1  a verification ran to completion and member = false
//   2  input error: unreadable/malformed job file, bad diagram, bad matrix
//   3  indeterminate: non-invertible denominator in the membership test,
//      numeric eigenvalue margin too thin, or vacuous ideal with
//      --strict-vacuous

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qinv/category.hpp"
#include "qinv/errors.hpp"
#include "qinv/invariants.hpp"
#include "qinv/ring.hpp"
#include "qinv/skein.hpp"
#include "qinv/topology.hpp"

namespace {

using nlohmann::json;
using qinv::errc;
using qinv::error;
using qinv::ring::FieldElement;
namespace cat = qinv::category;
namespace inv = qinv::invariants;
namespace sk = qinv::skein;
namespace topo = qinv::topology;

constexpr long kJobVersion = 1;

struct Job {
  std::string task;
  long r = 0;
  long field_factor = 1;
  long p = 0;
  std::optional<std::string> tangle;
  std::optional<std::vector<long>> coloring;
  std::map<long, long> fixed;
  std::optional<std::vector<std::vector<long>>> matrix;
  std::optional<long> k;
  std::string kind = "main-theorem";  // verify-periodic certificate kind
};

struct Flags {
  std::string out;
  long workers = 1;
  long p_override = 0;
  long r_override = 0;
  bool strict_vacuous = false;
  bool negative_control = false;
};

// job-file problems are all exit 2; this exception carries the diagnostic
struct job_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

long require_int(const json& doc, const char* field) {
  if (!doc.contains(field))
    throw job_error(std::string("job file: missing required field '") + field + "'");
  if (!doc[field].is_number_integer())
    throw job_error(std::string("job file: field '") + field + "' must be an integer");
  return doc[field].get<long>();
}

Job parse_job(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw job_error("cannot open job file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte offset; recover the line for the diagnostic
    std::ifstream again(path);
    std::string text((std::istreambuf_iterator<char>(again)), std::istreambuf_iterator<char>());
    size_t line = 1;
    for (size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw job_error("job file '" + path + "' line " + std::to_string(line) +
                    ": " + e.what());
  }
  if (!doc.is_object()) throw job_error("job file: top level must be a JSON object");

  long version = require_int(doc, "version");
  if (version != kJobVersion)
    throw job_error("job file: version " + std::to_string(version) + " not recognized (expected " +
                    std::to_string(kJobVersion) + ")");

  Job job;
  if (!doc.contains("task") || !doc["task"].is_string())
    throw job_error("job file: missing string field 'task'");
  job.task = doc["task"].get<std::string>();

  if (doc.contains("r")) job.r = require_int(doc, "r");
  if (doc.contains("p")) job.p = require_int(doc, "p");
  if (doc.contains("field_factor")) job.field_factor = require_int(doc, "field_factor");
  if (doc.contains("kind")) {
    if (!doc["kind"].is_string()) throw job_error("job file: field 'kind' must be a string");
    job.kind = doc["kind"].get<std::string>();
  }
  if (doc.contains("tangle")) {
    if (!doc["tangle"].is_string()) throw job_error("job file: field 'tangle' must be a string");
    job.tangle = doc["tangle"].get<std::string>();
  }
  if (doc.contains("coloring")) {
    if (!doc["coloring"].is_array())
      throw job_error("job file: field 'coloring' must be an array of integers");
    job.coloring = doc["coloring"].get<std::vector<long>>();
  }
  if (doc.contains("fixed")) {
    if (!doc["fixed"].is_object())
      throw job_error("job file: field 'fixed' must map component ids to colors");
    for (auto& [key, value] : doc["fixed"].items()) {
      long id = 0;
      try {
        id = std::stol(key);
      } catch (...) {
        throw job_error("job file: fixed component id '" + key + "' is not an integer");
      }
      if (!value.is_number_integer())
        throw job_error("job file: fixed color for component " + key + " must be an integer");
      job.fixed[id] = value.get<long>();
    }
  }
  if (doc.contains("matrix")) {
    if (!doc["matrix"].is_array())
      throw job_error("job file: field 'matrix' must be an array of integer rows");
    std::vector<std::vector<long>> rows;
    for (const auto& row : doc["matrix"]) {
      if (!row.is_array()) throw job_error("job file: matrix rows must be arrays");
      rows.push_back(row.get<std::vector<long>>());
    }
    job.matrix = std::move(rows);
  }
  if (doc.contains("k")) job.k = require_int(doc, "k");
  return job;
}

sk::SlicedTangle tangle_of(const Job& job) {
  if (!job.tangle) return sk::make_tangle(0, {});
  return sk::parse_tangle(*job.tangle);
}

const cat::ModularDatum& datum_of(const Job& job) {
  static std::map<std::pair<long, long>, cat::ModularDatum> cache;
  if (job.r < 3) throw job_error("task '" + job.task + "' needs r >= 3 (set 'r' or pass --r)");
  auto key = std::make_pair(job.r, job.field_factor);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, cat::make_tl_datum(job.r, job.field_factor)).first;
  return it->second;
}

long prime_of(const Job& job) {
  if (job.p == 0) throw job_error("task '" + job.task + "' needs an odd prime p (set 'p' or pass --p)");
  return job.p;
}

void write_certificate(const inv::Certificate& cert, const Flags& flags) {
  if (flags.out.empty()) return;
  std::ofstream out(flags.out, std::ios::binary);
  if (!out) throw job_error("cannot write certificate to '" + flags.out + "'");
  out << inv::certificate_json(cert);
}

// Exit for a finished verification, honoring --strict-vacuous.
int verdict_exit(const inv::Certificate& cert, const Flags& flags) {
  if (flags.strict_vacuous && cert.vacuous) {
    std::cout << "vacuous ideal under --strict-vacuous: indeterminate" << "\n";
    return 3;
  }
  return cert.member ? 0 : 1;
}

int run_job(const Job& job, const Flags& flags) {
  auto started = std::chrono::steady_clock::now();
  int status = 0;

  if (job.task == "bracket" || job.task == "invariant") {
    const auto& datum = datum_of(job);
    auto link = topo::trace_components(tangle_of(job));
    inv::FixedPart fixed{job.fixed};
    if (job.task == "bracket") {
      FieldElement value = inv::multi_bracket(link, datum, fixed, flags.workers);
      std::cout << "bracket = " << value.to_string() << "\n";
    } else {
      FieldElement t = inv::tau(link, datum, fixed, flags.workers);
      std::cout << "tau = " << t.to_string() << "\n";
      std::cout << "I = " << (datum.rank_D * t).to_string() << "\n";
    }
  } else if (job.task == "verify-periodic") {
    const auto& datum = datum_of(job);
    sk::SlicedTangle T = tangle_of(job);
    long p = prime_of(job);
    inv::Certificate cert;
    if (job.kind == "bracket-lemma")
      cert = inv::verify_periodic_bracket(T, p, datum, flags.workers, flags.negative_control);
    else if (job.kind == "main-theorem")
      cert = inv::verify_main_theorem(T, p, datum, flags.workers, flags.negative_control);
    else if (job.kind == "tau-corollary")
      cert = inv::verify_tau_corollary(T, p, datum, flags.workers, flags.negative_control);
    else
      throw job_error("job file: unknown certificate kind '" + job.kind +
                      "' (bracket-lemma | main-theorem | tau-corollary)");
    write_certificate(cert, flags);
    auto doc = json::parse(inv::certificate_json(cert));
    std::cout << doc["summary"].get<std::string>() << "\n";
    status = verdict_exit(cert, flags);
  } else if (job.task == "verify-trace") {
    const auto& datum = datum_of(job);
    sk::SlicedTangle omega = tangle_of(job);
    if (!job.coloring) throw job_error("task 'verify-trace' needs a 'coloring' array");
    inv::Certificate cert = inv::verify_trace_congruence(omega, sk::Coloring{*job.coloring},
                                                         prime_of(job), datum,
                                                         flags.negative_control);
    write_certificate(cert, flags);
    auto doc = json::parse(inv::certificate_json(cert));
    std::cout << doc["summary"].get<std::string>() << "\n";
    status = verdict_exit(cert, flags);
  } else if (job.task == "signature") {
    if (!job.matrix) throw job_error("task 'signature' needs a 'matrix'");
    std::cout << "signature = " << topo::signature(*job.matrix) << "\n";
  } else if (job.task == "tristram") {
    if (!job.matrix) throw job_error("task 'tristram' needs a 'matrix'");
    topo::SeifertMatrix V{*job.matrix};
    long p = prime_of(job);
    if (job.k) {
      long value = topo::tristram_levine(V, p, *job.k);
      std::cout << "sigma(" << *job.k << "/" << p << ") = " << value << "\n";
    } else {
      for (long k = 1; k < p; ++k) {
        long value = topo::tristram_levine(V, p, k);
        std::cout << "sigma(" << k << "/" << p << ") = " << value << "\n";
      }
      std::cout << "total = " << topo::total_signature(V, p) << "\n";
    }
  } else {
    throw job_error("job file: unknown task '" + job.task +
                    "' (bracket | invariant | verify-periodic | verify-trace | signature | "
                    "tristram)");
  }

  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  std::cout << "wall time: " << elapsed.count() << " ms\n";
  return status;
}

std::string poly_string(const qinv::ring::ModPoly& g) {
  std::ostringstream out;
  bool first = true;
  for (long d = g.degree(); d >= 0; --d) {
    long c = g.c[d];
    if (c == 0 && !(first && d == 0)) continue;
    if (!first) out << " + ";
    if (d == 0 || c != 1) out << c;
    if (d > 0) out << (c != 1 ? "*x" : "x");
    if (d > 1) out << "^" << d;
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

int category_info(long r, long p, long field_factor) {
  cat::ModularDatum datum = cat::make_tl_datum(r, field_factor);
  std::cout << "temperley-lieb datum r=" << r << "\n";
  std::cout << "field: Q(zeta_" << datum.field->n() << "), degree " << datum.field->degree()
            << "\n";
  std::cout << "colors: " << datum.colors() << "\n";
  for (long c = 0; c < datum.colors(); ++c)
    std::cout << "  c=" << c << ": dim " << datum.dim[c].to_string() << ", twist "
              << datum.twist[c].to_string() << "\n";
  std::cout << "D^2 = " << (datum.rank_D * datum.rank_D).to_string() << "\n";
  std::cout << "D = " << datum.rank_D.to_string() << "\n";
  std::cout << "Delta = " << datum.delta_minus.to_string() << "\n";
  std::cout << "Delta+ = " << datum.delta_plus.to_string() << "\n";
  std::cout << "kappa = " << datum.kappa.to_string() << "\n";
  if (p > 0) {
    qinv::ring::IdealJp J = qinv::ring::jp_generator(p, datum.field, datum.dim);
    std::cout << "J_" << p << " generator over F_" << p << ": " << poly_string(J.g)
              << (J.vacuous ? " (vacuous: the whole ring mod p)" : "") << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact quantum invariants of surgery presentations and their congruences"};
  app.require_subcommand(1);

  Flags flags;
  std::string job_path;
  auto* run = app.add_subcommand("run", "execute a job file");
  run->add_option("job", job_path, "path to a JSON job file")->required();
  run->add_option("--out", flags.out, "write the certificate to this path");
  run->add_option("--workers", flags.workers, "threads for the coloring sum (output unchanged)")
      ->check(CLI::PositiveNumber);
  run->add_option("--p", flags.p_override, "override the job's prime p");
  run->add_option("--r", flags.r_override, "override the job's datum parameter r");
  run->add_flag("--strict-vacuous", flags.strict_vacuous,
                "treat a vacuous ideal as indeterminate (exit 3)");
  run->add_flag("--negative-control", flags.negative_control,
                "perturb the congruence difference by +1 to demonstrate failure");

  long info_r = 0, info_p = 0, info_factor = 1;
  auto* info = app.add_subcommand("info", "print a datum summary");
  info->add_option("--r", info_r, "datum parameter r (colors 0..r-2)")->required();
  info->add_option("--p", info_p, "also report the congruence ideal J_p");
  info->add_option("--field-factor", info_factor, "pre-extend the cyclotomic field");

  CLI11_PARSE(app, argc, argv);

  try {
    if (info->parsed()) return category_info(info_r, info_p, info_factor);
    Job job = parse_job(job_path);
    if (flags.p_override > 0) job.p = flags.p_override;
    if (flags.r_override > 0) job.r = flags.r_override;
    return run_job(job, flags);
  } catch (const job_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case errc::non_invertible_denominator:
      case errc::precision_failure:
        return 3;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
