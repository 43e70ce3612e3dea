// Command-line driver: one subcommand per experiment, JSON (default) or TSV on stdout.
// Exit codes: 0 every assertion passed, 1 some assertion failed, 2 usage, domain or budget error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stiefel/error.hpp"
#include "stiefel/experiments.hpp"
#include "stiefel/invariants.hpp"
#include "stiefel/kernels.hpp"
#include "stiefel/stability.hpp"
#include "stiefel/stiefel.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace stiefel;

constexpr const char* kSchema = "stiefel-lab/1";
constexpr const char* kVersion = "0.1.0";

struct Assertion {
  std::string name;
  bool pass = true;
  std::string witness;
};

struct Output {
  Json config = Json::object();
  Json results = Json::object();
  std::vector<Assertion> assertions;

  void check(std::string name, bool pass, std::string witness = {}) {
    assertions.push_back({std::move(name), pass, pass ? std::string() : std::move(witness)});
  }
  void check(std::string name, const CheckResult& r) { check(std::move(name), r.pass, r.failure); }
};

struct Global {
  std::uint64_t seed = 0;
  std::optional<unsigned> threads;
  std::string format = "json";
};

Json profile_json(const HomologyProfile& h) {
  Json t = Json::array(), b = Json::array();
  for (int i = -1; i <= h.max_degree; ++i) {
    b.push_back(h.betti_at(i));
    Json groups = Json::array();
    for (const auto& g : h.torsion_at(i)) groups.push_back(g.get_str());
    t.push_back(groups);
  }
  return Json{{"summary", h.to_string()}, {"betti_from_degree_minus_1", b}, {"torsion", t}};
}

Json invariant_json(const InvariantValue& v) {
  return Json{{"value", v.value}, {"exact", v.is_exact()}, {"certificate", v.certificate}};
}

std::vector<long> parse_longs(const std::string& text) {
  std::vector<long> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    long v = std::stol(item, &used);
    if (used != item.size()) throw DomainError("not an integer: " + item);
    out.push_back(v);
  }
  return out;
}

/// "1,0,0;0,1,0" -> two vectors.
std::vector<std::vector<long>> parse_frame(const std::string& text) {
  std::vector<std::vector<long>> out;
  std::stringstream in(text);
  std::string row;
  while (std::getline(in, row, ';'))
    if (!row.empty()) out.push_back(parse_longs(row));
  return out;
}

RingDescriptor ring_from(const std::optional<std::uint32_t>& field, const std::string& ring) {
  if (field) return RingDescriptor::finite_field(*field);
  if (ring.empty()) throw DomainError("give --field or --ring");
  return RingDescriptor::parse(ring);
}

std::uint32_t field_prime(const RingDescriptor& r) {
  if (r.kind() != RingKind::FiniteField) throw DomainError("this command needs a finite field");
  return static_cast<std::uint32_t>(r.prime());
}

/// TSV cells stay on one line: tabs, newlines and backslashes are escaped.
std::string tsv_cell(const Json& v) {
  std::string raw = v.is_string() ? v.get<std::string>() : v.dump();
  std::string out;
  for (char c : raw) {
    if (c == '\\') out += "\\\\";
    else if (c == '\t') out += "\\t";
    else if (c == '\n') out += "\\n";
    else out += c;
  }
  return out;
}

void emit(const std::string& command, const Global& g, const Output& out, std::ostream& os) {
  if (g.format == "tsv") {
    os << "# " << kSchema << '\t' << command << "\tseed=" << g.seed << "\tversion=" << kVersion << '\n';
    for (const auto& [k, v] : out.config.items()) os << "config\t" << k << '\t' << tsv_cell(v) << '\n';
    for (const auto& [k, v] : out.results.items()) os << "result\t" << k << '\t' << tsv_cell(v) << '\n';
    for (const auto& a : out.assertions)
      os << "assertion\t" << a.name << '\t' << (a.pass ? "pass" : "fail") << '\t' << tsv_cell(a.witness) << '\n';
    return;
  }
  Json doc;
  doc["command"] = command;
  doc["config"] = out.config;
  doc["results"] = out.results;
  Json list = Json::array();
  for (const auto& a : out.assertions) {
    Json j{{"name", a.name}, {"pass", a.pass}};
    if (!a.pass) j["witness"] = a.witness;
    list.push_back(j);
  }
  doc["assertions"] = list;
  doc["seed"] = g.seed;
  doc["version"] = kVersion;
  doc["schema"] = kSchema;
  os << doc.dump(2) << '\n';
}

// ---- subcommands -----------------------------------------------------------

struct InvariantsArgs {
  std::optional<std::uint32_t> field;
  std::string ring;
  long height = 50;
  unsigned max_squares = 6;
  long witness_height = 0;
  std::size_t representation_rank = 0;
};

Output run_invariants(const InvariantsArgs& a) {
  Output out;
  RingDescriptor ring = ring_from(a.field, a.ring);
  out.config = {{"ring", ring.name()}, {"height", a.height}, {"max_squares", a.max_squares},
                {"witness_height", a.witness_height}, {"representation_rank", a.representation_rank}};
  InvariantOptions opts;
  opts.height_bound = a.height;
  opts.max_squares = a.max_squares;
  InvariantReport rep = compute_invariants(ring, opts);
  out.results["P"] = rep.pythagoras.value;
  out.results["s"] = rep.stufe.value;
  out.results["u"] = rep.u_invariant.value;
  out.results["m"] = rep.m_invariant.value;
  out.results["detail"] = Json{{"pythagoras", invariant_json(rep.pythagoras)},
                               {"stufe", invariant_json(rep.stufe)},
                               {"u_invariant", invariant_json(rep.u_invariant)},
                               {"m_invariant", invariant_json(rep.m_invariant)}};
  if (ring.kind() == RingKind::FiniteField) {
    unsigned s = ring.prime() % 4 == 1 ? 1 : 2;
    bool ok = rep.pythagoras.value == 2 && rep.u_invariant.value == 2 && rep.m_invariant.value == 2 &&
              rep.stufe.value == s && rep.pythagoras.is_exact() && rep.m_invariant.is_exact();
    out.check("finite_field_values", ok, rep.to_string());
  }
  if (ring.is_local()) {
    InequalityLedger ledger = check_inequalities(rep, compute_invariants(ring.residue_field(), opts));
    out.results["inequalities"] = ledger.to_string();
    out.check("inequalities", ledger.consistent(), ledger.to_string());
  }
  if (a.witness_height > 0) {
    if (ring.kind() != RingKind::LocalizedAtP) throw DomainError("--witness-height needs a ring Z(p)");
    MzpWitness w = m_zp_witness(ring.prime(), a.witness_height);
    out.results["m_witness"] = Json{{"lagrange", w.lagrange},
                                    {"inverse_is_four_squares", w.inverse_is_four_squares},
                                    {"embedding_verified", w.embedding_verified},
                                    {"no_rational_triple_within_height", w.no_rational_triple_within_height},
                                    {"no_integer_triple", w.no_integer_triple}};
    out.check("m_witness", w.concludes_m_at_least_4(), w.to_string());
  }
  if (a.representation_rank > 0) {
    RepresentationSweep sweep = representation_equivalence(field_prime(ring), a.representation_rank);
    out.results["representation"] =
        Json{{"cases", sweep.cases}, {"represented", sweep.represented}, {"discrepancies", sweep.discrepancies}};
    out.check("representation_equivalence", sweep.result);
  }
  return out;
}

struct StiefelArgs {
  std::optional<std::uint32_t> field;
  std::string ring;
  std::size_t n = 2;
  int k = 2;
  std::size_t budget = kSimplexBudget;
  bool list = false;
};

Output run_stiefel(const StiefelArgs& a) {
  Output out;
  RingDescriptor ring = ring_from(a.field, a.ring);
  out.config = {{"ring", ring.name()}, {"n", a.n}, {"k", a.k}, {"budget", a.budget}};
  if (a.k < 1) throw DomainError("--k must be at least 1");
  QuadraticModule q = QuadraticModule::euclidean(ring, a.n);
  StiefelComplex sc = build_stiefel(q, a.k - 1, a.budget);
  std::vector<std::size_t> counts;
  for (int d = 0; d <= sc.complex.dimension(); ++d) counts.push_back(sc.complex.count(d));
  out.results["unit_vectors"] = sc.vertices.size();
  out.results["simplex_counts"] = counts;
  out.results["complete"] = sc.complete;
  if (a.list) {
    Json vs = Json::array();
    for (const Vector& v : sc.vertices) vs.push_back(to_string(v));
    out.results["vertices"] = vs;
  }
  SkeletonCheck check = skeleton_identification_check(q, a.k);
  out.results["skeleton_profile"] = profile_json(check.skeleton_profile);
  out.results["frame_poset_profile"] = profile_json(check.poset_profile);
  out.check("skeleton_identification", check.pass,
            check.poset_profile.to_string() + " vs " + check.skeleton_profile.to_string());
  if (ring.kind() == RingKind::Integers) {
    // Boundary of the cross-polytope: 2^(d+1) C(n, d+1) faces of dimension d.
    bool ok = sc.vertices.size() == 2 * a.n;
    std::size_t binom = 1;
    for (std::size_t d = 0; d < counts.size(); ++d) {
      binom = binom * (a.n - d) / (d + 1);
      ok = ok && counts[d] == (std::size_t{1} << (d + 1)) * binom;
    }
    out.check("cross_polytope", ok, "simplex counts differ from the cross-polytope");
  }
  return out;
}

struct ConnectivityArgs {
  std::uint32_t field = 3;
  std::size_t n = 5;
  int max_degree = 0;
  std::size_t budget = kSimplexBudget;
};

Output run_connectivity(const ConnectivityArgs& a) {
  Output out;
  out.config = {{"field", a.field}, {"n", a.n}, {"max_degree", a.max_degree}, {"budget", a.budget}};
  ConnectivityReport rep = connectivity_report(a.field, a.n, a.max_degree, a.budget);
  out.results["simplex_counts"] = rep.simplex_counts;
  out.results["profile"] = profile_json(rep.profile);
  out.results["reduced_betti_0"] = rep.profile.betti_at(0);
  out.results["m_invariant"] = rep.m_invariant;
  out.results["predicted_connectivity"] = rep.predicted_connectivity;
  out.results["asserted_through"] = rep.asserted_through;
  out.results["bound_satisfied"] = rep.asserted_through >= -1 && rep.pass;
  if (rep.asserted_through >= -1)
    out.check("connectivity_bound", rep.pass, "profile " + rep.profile.to_string());
  return out;
}

struct MorseArgs {
  std::uint32_t field = 3;
  std::size_t n = 5;
  std::size_t l = 2;
  std::string u, v;
  std::size_t samples = 200;
  std::size_t exhaustive_limit = 20000;
  std::size_t stream_budget = 200'000'000;
  bool force = false;
};

Output run_morse(const MorseArgs& a, std::uint64_t seed) {
  Output out;
  out.config = {{"field", a.field}, {"n", a.n}, {"l", a.l}, {"u", a.u}, {"v", a.v}, {"samples", a.samples},
                {"exhaustive_limit", a.exhaustive_limit}, {"stream_budget", a.stream_budget}, {"force", a.force}};
  MorseReplayOptions opts;
  opts.sample_per_layer = a.samples;
  opts.seed = seed;
  opts.exhaustive_limit = a.exhaustive_limit;
  opts.stream_budget = a.stream_budget;
  opts.force = a.force;
  MorseReplayReport rep = morse_replay(a.field, a.n, a.l, parse_frame(a.u), parse_frame(a.v), opts);
  out.results["conditions_met"] = rep.conditions_met;
  out.results["pivot"] = rep.pivot;
  out.results["unit_vectors_in_complement"] = rep.unit_vectors_in_complement;
  out.results["w_vectors"] = rep.w_vectors;
  out.results["base"] = Json{{"size", rep.base_size}, {"checked", rep.base_checked}};
  Json layers = Json::array();
  for (const auto& l : rep.layers) layers.push_back(Json{{"size", l.size}, {"checked", l.checked}});
  out.results["layers"] = layers;
  out.results["w_profile"] = profile_json(rep.w_profile);
  out.results["joins_checked"] = rep.joins_checked;
  out.results["exhaustive"] = rep.exhaustive;
  if (rep.direct) out.results["direct_profile"] = profile_json(*rep.direct);
  out.check("morse_lemma", rep.result);
  return out;
}

struct ReflectArgs {
  std::optional<std::uint32_t> field;
  std::string ring;
  std::size_t n = 3;
  std::size_t count = 100;
};

Output run_reflect(const ReflectArgs& a, std::uint64_t seed) {
  Output out;
  RingDescriptor ring = ring_from(a.field, a.ring);
  out.config = {{"ring", ring.name()}, {"n", a.n}, {"count", a.count}};
  FactorizationReport rep;
  if (ring.kind() == RingKind::FiniteField)
    rep = factor_orthogonal_group(static_cast<std::uint32_t>(ring.prime()), a.n);
  else if (ring.kind() == RingKind::LocalizedAtP)
    rep = factor_random_isometries(ring.prime(), a.n, a.count, seed);
  else
    throw DomainError("reflect supports F_p (whole group) and Z(p) (random isometries)");
  out.results["isometries"] = rep.isometries;
  out.results["longest_factorization"] = rep.longest;
  out.check("cartan_dieudonne", rep.result);
  return out;
}

struct OrbitArgs {
  std::uint32_t field = 3;
  std::size_t n = 3;
  std::size_t k = 2;
  bool stabilizer = false;
};

Output run_orbit(const OrbitArgs& a) {
  Output out;
  out.config = {{"field", a.field}, {"n", a.n}, {"k", a.k}, {"stabilizer", a.stabilizer}};
  HomogeneityReport rep = homogeneity_check(a.field, a.n, a.k);
  out.results["frames"] = rep.frames;
  out.results["pairs"] = rep.pairs;
  out.check("homogeneity", rep.result);
  if (a.stabilizer) {
    StabilizerReport st = stabilizer_check(a.field, a.n);
    out.results["group_order"] = st.group_order;
    out.results["stabilizer_order"] = st.stabilizer_order;
    out.check("stabilizer_round_trip", st.result);
  }
  return out;
}

struct WnArgs {
  std::uint32_t field = 3;
  std::size_t n = 3;
  std::size_t max_p = 1;
  std::string v;
  std::size_t budget = 2'000'000;
};

Output run_wn(const WnArgs& a) {
  Output out;
  out.config = {{"field", a.field}, {"n", a.n}, {"max_p", a.max_p}, {"v", a.v}, {"budget", a.budget}};
  RingDescriptor ring = RingDescriptor::finite_field(a.field);
  std::vector<long> diag = parse_longs(a.v);
  QuadraticModule v = diag.empty() ? QuadraticModule(Matrix(ring, 0, 0)) : QuadraticModule::diagonal(ring, diag);
  WnCertificate cert = wn_identification_check(v, a.n, a.max_p, a.budget);
  out.results["hom_counts"] = cert.hom_counts;
  out.results["frame_counts"] = cert.frame_counts;
  out.check("bijection", cert.bijection, cert.result.failure);
  out.check("faces_compatible", cert.faces_compatible, cert.result.failure);
  out.check("semi_simplicial_identities", cert.identities_hold, cert.result.failure);
  out.check("ls1", cert.ls1, cert.result.failure);
  out.check("ls2", cert.ls2, cert.result.failure);
  return out;
}

Output run_int_aut(std::size_t n) {
  Output out;
  out.config = {{"n", n}};
  IntegerAutReport rep = integer_aut_check(n);
  out.results["automorphisms"] = rep.automorphisms;
  out.results["group_order"] = rep.group_order;
  out.check("automorphism_count", rep.automorphisms == rep.group_order,
            std::to_string(rep.automorphisms) + " != " + std::to_string(rep.group_order));
  out.check("signed_permutation_lift", rep.all_lift && rep.injective, rep.result.failure);
  out.check("antipodes", rep.antipodes_hold, rep.result.failure);
  return out;
}

struct RangesArgs {
  std::string theorem;
  std::string case_label;
  long n = 0;
  std::optional<long> m, m_quotient, p_residue, p_quotient;
  bool henselian = false, real_ring = false, real_residue = false, real_quotient = false;
  long degree = 0, level = 0;
  std::string reading = "literal";
  unsigned corollary = 0;
  std::string item = "a";
  long d = 1;
  std::string connectivity_case;
  bool grid = false;
};

unsigned parse_case(const std::string& text) {
  static const char* names[] = {"i", "ii", "iii", "iv", "v", "vi", "vii", "viii"};
  std::string t = text;
  if (t.size() >= 2 && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
  for (unsigned i = 0; i < 8; ++i)
    if (t == names[i]) return i + 1;
  try {
    std::size_t used = 0;
    long v = std::stol(t, &used);
    if (used == t.size() && v >= 1 && v <= 8) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  throw DomainError("unknown case label: " + text);
}

Output run_ranges(const RangesArgs& a) {
  Output out;
  if (a.grid) {
    out.config = {{"grid", true}};
    std::string tsv = range_grid_tsv();
    std::stringstream in(tsv);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    {
      std::stringstream h(line);
      std::string cell;
      while (std::getline(h, cell, '\t')) header.push_back(cell);
    }
    Json rows = Json::array();
    while (std::getline(in, line)) {
      std::stringstream r(line);
      std::string cell;
      Json row = Json::object();
      for (std::size_t i = 0; std::getline(r, cell, '\t') && i < header.size(); ++i) row[header[i]] = cell;
      rows.push_back(row);
    }
    out.results["rows"] = rows;
    out.check("grid_size", rows.size() == 200, std::to_string(rows.size()) + " rows");
    return out;
  }
  ArithmeticInputs in;
  in.m_ring = a.m;
  in.m_quotient = a.m_quotient;
  in.pythagoras_residue = a.p_residue;
  in.pythagoras_quotient = a.p_quotient;
  in.henselian = a.henselian;
  in.ring_formally_real = a.real_ring;
  in.residue_formally_real = a.real_residue;
  in.quotient_formally_real = a.real_quotient;
  Reading reading;
  if (a.reading == "literal") reading = Reading::Literal;
  else if (a.reading == "corrected") reading = Reading::Corrected;
  else throw DomainError("--reading must be literal or corrected");
  auto opt = [](const std::optional<long>& v) { return v ? Json(*v) : Json(nullptr); };
  out.config = {{"theorem", a.theorem}, {"case", a.case_label}, {"n", a.n}, {"m", opt(a.m)},
                {"m_quotient", opt(a.m_quotient)}, {"pythagoras_residue", opt(a.p_residue)},
                {"pythagoras_quotient", opt(a.p_quotient)}, {"henselian", a.henselian},
                {"real_ring", a.real_ring}, {"real_residue", a.real_residue}, {"real_quotient", a.real_quotient},
                {"degree", a.degree}, {"level", a.level}, {"reading", a.reading}, {"corollary", a.corollary},
                {"item", a.item}, {"d", a.d}, {"connectivity_case", a.connectivity_case}};
  if (a.corollary != 0) {
    if (a.item.size() != 1) throw DomainError("--item must be one letter");
    CorollaryRange c = intro_corollary_range(a.corollary, a.item[0], a.n, in, a.d);
    out.results["bound"] = c.bound.get_str();
    out.results["up_to"] = c.up_to;
    out.results["formula"] = c.formula;
    return out;
  }
  if (!a.connectivity_case.empty()) {
    ConnectivityRange c = connectivity_range(parse_case(a.connectivity_case), a.n, in, reading);
    out.results["case"] = c.case_label;
    out.results["bound"] = c.bound.get_str();
    out.results["connected_through"] = c.connected_through;
    out.results["formula"] = c.formula;
    out.results["hypotheses"] = c.hypotheses;
    return out;
  }
  StabilityTheorem theorem;
  if (a.theorem == "A" || a.theorem == "constant") theorem = StabilityTheorem::Constant;
  else if (a.theorem == "B" || a.theorem == "abelian") theorem = StabilityTheorem::Abelian;
  else if (a.theorem == "C" || a.theorem == "polynomial") theorem = StabilityTheorem::Polynomial;
  else throw DomainError("--theorem must be A|constant, B|abelian or C|polynomial (or use --corollary/--connectivity-case/--grid)");
  RangeInputs ri;
  ri.n = a.n;
  ri.case_index = parse_case(a.case_label);
  ri.arithmetic = in;
  ri.degree = a.degree;
  ri.level = a.level;
  ri.reading = reading;
  RangeResult r = range_for(theorem, ri);
  out.results["theorem"] = r.theorem;
  out.results["case"] = r.case_label;
  out.results["surjective_bound"] = r.surjective_bound.get_str();
  out.results["isomorphism_bound"] = r.isomorphism_bound.get_str();
  out.results["surjective_up_to"] = r.surjective_up_to;
  out.results["isomorphism_up_to"] = r.isomorphism_up_to;
  out.results["formula"] = r.formula;
  out.results["hypotheses"] = r.hypotheses;
  out.check("isomorphism_within_surjection", r.isomorphism_up_to <= r.surjective_up_to);
  return out;
}

struct HenselArgs {
  std::uint64_t p = 5;
  unsigned precision = 4;
  std::size_t count = 50;
};

Output run_hensel(const HenselArgs& a, std::uint64_t seed) {
  Output out;
  out.config = {{"p", a.p}, {"precision", a.precision}, {"count", a.count}};
  HenselReport rep = hensel_replay(a.p, a.precision, a.count, seed);
  out.results["drawn"] = rep.drawn;
  Json cases = Json::array();
  for (const auto& c : rep.cases) cases.push_back(Json{{"gram", c.gram}, {"witness", c.witness}, {"verified", c.verified}});
  out.results["cases"] = cases;
  out.check("hensel_isotropy", rep.result);
  return out;
}

std::optional<unsigned> threads_from_env() {
  const char* env = std::getenv("STIEFEL_LAB_THREADS");
  if (!env || !*env) return std::nullopt;
  try {
    long v = std::stol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  throw DomainError("STIEFEL_LAB_THREADS must be a positive integer");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic-form, Stiefel-complex and stability-range experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "RNG seed for every sampled step");
  app.add_option("--threads", g.threads, "Worker cap (fallback: STIEFEL_LAB_THREADS)")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "tsv"}));

  InvariantsArgs inv;
  auto* c_inv = app.add_subcommand("invariants", "Pythagoras number, Stufe, u- and m-invariants of a ring");
  c_inv->add_option("--field", inv.field, "Prime p for F_p");
  c_inv->add_option("--ring", inv.ring, "Ring name: F5, Q, Z(5), Z5^3");
  c_inv->add_option("--height", inv.height, "Height bound for searches over Q and Z(p)")->check(CLI::PositiveNumber);
  c_inv->add_option("--max-squares", inv.max_squares, "Largest sum-of-squares length tried")->check(CLI::PositiveNumber);
  c_inv->add_option("--witness-height", inv.witness_height, "Run the m-invariant witness for Z(p) at this height");
  c_inv->add_option("--representation-rank", inv.representation_rank,
                    "Sweep represents vs isotropy over diagonal forms up to this rank");

  StiefelArgs st;
  auto* c_st = app.add_subcommand("stiefel", "Build X(E^n) through dimension k-1 and compare with the frame poset");
  c_st->add_option("--field", st.field, "Prime p for F_p");
  c_st->add_option("--ring", st.ring, "Z for the integers");
  c_st->add_option("--n", st.n, "Rank")->required();
  c_st->add_option("--k", st.k, "Frame length");
  c_st->add_option("--budget", st.budget, "Simplex cap")->check(CLI::PositiveNumber);
  c_st->add_flag("--list", st.list, "List the unit vectors");

  ConnectivityArgs cn;
  auto* c_cn = app.add_subcommand("connectivity", "Reduced homology of X(n<1>) over F_p against the predicted range");
  c_cn->add_option("--field", cn.field, "Prime p")->required();
  c_cn->add_option("--n", cn.n, "Rank")->required();
  c_cn->add_option("--max-degree", cn.max_degree, "Highest homological degree");
  c_cn->add_option("--budget", cn.budget, "Simplex cap")->check(CLI::PositiveNumber);

  MorseArgs mr;
  auto* c_mr = app.add_subcommand("morse-replay", "Check the Morse filtration of X_l(U^perp cap V^perp)");
  c_mr->add_option("--field", mr.field, "Prime p")->required();
  c_mr->add_option("--n", mr.n, "Rank")->required();
  c_mr->add_option("--l", mr.l, "Frame length")->required();
  c_mr->add_option("--u", mr.u, "Frame U as rows: 1,0,0;0,1,0");
  c_mr->add_option("--v", mr.v, "Frame V as rows");
  c_mr->add_option("--samples", mr.samples, "Sampled elements per part")->check(CLI::PositiveNumber);
  c_mr->add_option("--exhaustive-limit", mr.exhaustive_limit, "Check everything below this many frames");
  c_mr->add_option("--stream-budget", mr.stream_budget, "Frame cap for the streaming pass")->check(CLI::PositiveNumber);
  c_mr->add_flag("--force", mr.force, "Run even when no numbered condition holds");

  ReflectArgs rf;
  auto* c_rf = app.add_subcommand("reflect", "Factor isometries into reflections and multiply back");
  c_rf->add_option("--field", rf.field, "Prime p: every element of O_n(F_p)");
  c_rf->add_option("--ring", rf.ring, "Z(p): random products of reflections");
  c_rf->add_option("--n", rf.n, "Rank")->required();
  c_rf->add_option("--count", rf.count, "Random isometries")->check(CLI::PositiveNumber);

  OrbitArgs ob;
  auto* c_ob = app.add_subcommand("orbit-check", "Transport every ordered k-frame to every other");
  c_ob->add_option("--field", ob.field, "Prime p")->required();
  c_ob->add_option("--n", ob.n, "Rank")->required();
  c_ob->add_option("--k", ob.k, "Frame length");
  c_ob->add_flag("--stabilizer", ob.stabilizer, "Also round-trip the stabilizer of e_n");

  WnArgs wn;
  auto* c_wn = app.add_subcommand("wn-check", "Hom-set description of the destabilization space");
  c_wn->add_option("--field", wn.field, "Prime p")->required();
  c_wn->add_option("--n", wn.n, "Copies of E^1")->required();
  c_wn->add_option("--max-p", wn.max_p, "Highest simplicial level");
  c_wn->add_option("--v", wn.v, "Diagonal of the fixed summand, e.g. 1,2 (empty: rank 0)");
  c_wn->add_option("--budget", wn.budget, "Enumeration cap")->check(CLI::PositiveNumber);

  std::size_t aut_n = 3;
  auto* c_aut = app.add_subcommand("int-aut", "Automorphisms of X(E^n_Z)");
  c_aut->add_option("--n", aut_n, "Rank (at most 4)")->required();

  RangesArgs rg;
  auto* c_rg = app.add_subcommand("ranges", "Stability and connectivity ranges");
  c_rg->add_option("--theorem", rg.theorem, "A|constant, B|abelian, C|polynomial");
  c_rg->add_option("--case", rg.case_label, "Case label i..viii or 1..8");
  c_rg->add_option("--n", rg.n, "Rank");
  c_rg->add_option("--m", rg.m, "m-invariant of the ring");
  c_rg->add_option("--m-quotient", rg.m_quotient, "m-invariant of the quotient field");
  c_rg->add_option("--pythagoras-residue", rg.p_residue, "Pythagoras number of the residue field");
  c_rg->add_option("--pythagoras-quotient", rg.p_quotient, "Pythagoras number of the quotient field");
  c_rg->add_flag("--henselian", rg.henselian, "The ring is henselian");
  c_rg->add_flag("--real-ring", rg.real_ring, "The ring is formally real");
  c_rg->add_flag("--real-residue", rg.real_residue, "The residue field is formally real");
  c_rg->add_flag("--real-quotient", rg.real_quotient, "The quotient field is formally real");
  c_rg->add_option("--degree", rg.degree, "Coefficient-system degree r");
  c_rg->add_option("--level", rg.level, "Level N of the degree");
  c_rg->add_option("--reading", rg.reading, "literal or corrected");
  c_rg->add_option("--corollary", rg.corollary, "Headline corollary 1, 2 or 3");
  c_rg->add_option("--item", rg.item, "Corollary item a..d");
  c_rg->add_option("--d", rg.d, "Exterior degree for corollary 1");
  c_rg->add_option("--connectivity-case", rg.connectivity_case, "Connectivity range case");
  c_rg->add_flag("--grid", rg.grid, "Print the fixed 200-point grid");

  HenselArgs hs;
  auto* c_hs = app.add_subcommand("hensel", "Isotropy of random forms over Z/p^N with isotropic reduction");
  c_hs->add_option("--p", hs.p, "Prime");
  c_hs->add_option("--precision", hs.precision, "N")->check(CLI::PositiveNumber);
  c_hs->add_option("--count", hs.count, "Forms")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  std::string command = sub->get_name();
  try {
    unsigned threads = g.threads ? *g.threads : threads_from_env().value_or(1);
    Output out;
    if (sub == c_inv) out = run_invariants(inv);
    else if (sub == c_st) out = run_stiefel(st);
    else if (sub == c_cn) out = run_connectivity(cn);
    else if (sub == c_mr) out = run_morse(mr, g.seed);
    else if (sub == c_rf) out = run_reflect(rf, g.seed);
    else if (sub == c_ob) out = run_orbit(ob);
    else if (sub == c_wn) out = run_wn(wn);
    else if (sub == c_aut) out = run_int_aut(aut_n);
    else if (sub == c_rg) out = run_ranges(rg);
    else out = run_hensel(hs, g.seed);
    out.config["threads"] = threads;
    out.config["kernel"] = kernels::backend_name(kernels::active_backend());
    if (g.format == "tsv" && sub == c_rg && rg.grid) {
      std::cout << range_grid_tsv();
    } else {
      emit(command, g, out, std::cout);
    }
    for (const auto& a : out.assertions)
      if (!a.pass) return 1;
    return 0;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: malformed number: " << e.what() << '\n';
    return 2;
  }
}
