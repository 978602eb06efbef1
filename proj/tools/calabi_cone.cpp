// calabi-cone: command-line front end for the calabi library.
//
// One binary, subcommand style. Machine-readable reports behind --json;
// human output prints the same fields at 9 significant digits. Exit codes:
// 0 success, 1 usage error, 2 domain error (library error name printed).

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "calabi/errors.hpp"
#include "calabi/exactgeom.hpp"
#include "calabi/fan.hpp"
#include "calabi/links.hpp"
#include "calabi/numeric.hpp"
#include "calabi/reeb.hpp"
#include "calabi/resolve.hpp"

using json = nlohmann::json;
using namespace calabi;

namespace {

uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("BadParameters", "cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string g9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

json jint(const Int& v) { return v.str(); }

json jvec(const LatVec& v) {
  json a = json::array();
  for (const Int& c : v) a.push_back(jint(c));
  return a;
}

json jvec(const RatVec& v) {
  json a = json::array();
  for (const Rat& c : v) a.push_back(rat_string(c));
  return a;
}

json jgroup(const AbelianGroup& g) {
  json t = json::array();
  for (const TorsionPart& p : g.torsion) t.push_back({p.modulus, p.multiplicity});
  return {{"rank", g.rank}, {"torsion", t}, {"display", group_string(g)}};
}

// Human rendering: the report flattened to `key: value` lines, scalar arrays
// inline, doubles at 9 significant digits.
void print_human(const json& j, const std::string& prefix) {
  auto scalar = [](const json& v) -> std::string {
    if (v.is_number_float()) return g9(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  auto is_scalar_array = [](const json& v) {
    if (!v.is_array()) return false;
    for (const json& e : v)
      if (e.is_object() || e.is_array()) return false;
    return true;
  };
  if (is_scalar_array(j)) {
    std::string line;
    for (const json& e : j) line += (line.empty() ? "" : ", ") + scalar(e);
    std::cout << prefix << ": [" << line << "]\n";
  } else if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      print_human(value, prefix.empty() ? key : prefix + "." + key);
  } else if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i) print_human(j[i], prefix + "[" + std::to_string(i) + "]");
  } else {
    std::cout << prefix << ": " << scalar(j) << "\n";
  }
}

struct Report {
  std::string command;
  std::string digest_input;
  json results = json::object();
  std::vector<std::string> warnings;

  void warn(const std::string& w) { warnings.push_back(w); }
};

struct Options {
  bool json_out = false;
  bool no_timestamp = false;
};

void emit(const Report& r, const Options& opt) {
  if (opt.json_out) {
    json doc{{"command", r.command},
             {"input_digest", hex64(fnv1a(r.digest_input))},
             {"results", r.results},
             {"warnings", r.warnings}};
    if (!opt.no_timestamp) doc["timestamp"] = utc_now();
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::cout << "command: " << r.command << "\n";
  std::cout << "input_digest: " << hex64(fnv1a(r.digest_input)) << "\n";
  if (!opt.no_timestamp) std::cout << "timestamp: " << utc_now() << "\n";
  print_human(r.results, "");
  for (const std::string& w : r.warnings) std::cout << "warning: " << w << "\n";
}

// shared pieces --------------------------------------------------------------

bool fan_smooth(const Fan& f) {
  for (size_t i = 0; i < f.cones.size(); ++i) {
    std::vector<LatVec> gens = cone_gens(f, i);
    if (gens.size() != f.dim) return false;
    IntMat m(gens.begin(), gens.end());
    Int d = det_int(m);
    if (d < 0) d = -d;
    if (d != 1) return false;
  }
  return true;
}

json check_fields(const Fan& f, Report& rep) {
  fan_validate(f);
  GorensteinCertificate cert = gorenstein_gamma(f);
  json out{{"dim", f.dim}, {"rays", f.rays.size()}, {"cones", f.cones.size()},
           {"gorenstein", cert.holds}, {"smooth", fan_smooth(f)}};
  if (cert.holds) {
    out["gamma"] = jvec(cert.gamma);
    out["terminal"] = is_terminal(f);
  } else {
    rep.warn("no Gorenstein certificate; terminality not defined");
  }
  return out;
}

json resolution_fields(const ResolutionResult& r) {
  ResolutionInvariants inv = resolution_invariants(r);
  json inserted = json::array();
  for (const LatVec& u : r.inserted) inserted.push_back(jvec(u));
  json eps = json::array();
  for (const Rat& e : r.epsilons) eps.push_back(rat_string(e));
  return {{"c_x", jint(r.c_x)},
          {"euler", jint(r.euler)},
          {"rays", r.fan.rays.size()},
          {"cones", r.fan.cones.size()},
          {"inserted", inserted},
          {"epsilons", eps},
          {"smooth", r.smooth},
          {"strictly_convex", r.strictly_convex},
          {"compact", r.compact},
          {"compact_class_exists", r.compact_class_exists},
          {"used_small_fallback", r.used_small_fallback},
          {"invariants",
           {{"b2", jint(inv.b2)}, {"b4", jint(inv.b4)}, {"b2_link", jint(inv.b2_link)}}}};
}

// b2 = b2_link + b4 and b2 = (d - 3) + c_x with d the boundary ray count
bool betti_consistent(const ResolutionResult& r) {
  ResolutionInvariants inv = resolution_invariants(r);
  return inv.b2 == inv.b2_link + inv.b4 && inv.b2 == inv.b2_link + inv.c_x && inv.b4 == inv.c_x;
}

json reeb_fields(const Fan& f, double tol, int threads, Report& rep) {
  MinimizeResult m = minimize_volume(f, tol, threads);
  json out{{"xi", {m.xi[0], m.xi[1], m.xi[2]}},
           {"volume", m.volume},
           {"grad_norm", m.grad_norm},
           {"iterations", m.iterations},
           {"converged", m.converged}};
  if (!m.converged) rep.warn("volume minimization did not reach the requested tolerance");
  // double-precision evaluation bounds the minimizer position near flat
  // minima at about 1e-8 of scale; denominators up to 1000 keep distinct
  // candidates at least 1e-6 apart, so 1e-7 detects without ambiguity
  std::optional<RatVec> qr = quasi_regularity(m.xi, 1000, 1e-7);
  out["quasi_regular"] = qr.has_value();
  if (qr) out["reeb_rational"] = jvec(*qr);
  return out;
}

std::vector<long long> parse_csv(const std::string& text, const char* what) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stoll(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail("BadParameters", std::string(what) + ": '" + item + "' is not an integer");
    }
  }
  if (out.empty()) fail("BadParameters", std::string(what) + ": empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"crepant resolutions, Reeb vectors, and link topology of Gorenstein cones"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", opt.json_out, "machine-readable report");
  app.add_flag("--no-timestamp", opt.no_timestamp, "omit the timestamp field");

  std::string echo;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--json" || a == "--no-timestamp") continue;
    echo += (echo.empty() ? "" : " ") + a;
  }

  auto* cone = app.add_subcommand("cone", "toric cone analysis");
  cone->require_subcommand(1);
  cone->fallthrough();
  auto* link = app.add_subcommand("link", "hypersurface link topology");
  link->require_subcommand(1);
  link->fallthrough();

  // cone check ---------------------------------------------------------------
  static std::string fan_path;
  auto* check = cone->add_subcommand("check", "Gorenstein, smoothness, and terminality flags");
  check->fallthrough();
  check->add_option("fan-file", fan_path, "fan interchange file")->required()->check(CLI::ExistingFile);
  check->callback([&] {
    Report rep;
    rep.command = echo;
    rep.digest_input = read_file(fan_path);
    Fan f = fan_from_json(rep.digest_input);
    rep.results = check_fields(f, rep);
    emit(rep, opt);
  });

  // cone resolve -------------------------------------------------------------
  static std::string out_path;
  static bool allow_small = false;
  auto* resolve = cone->add_subcommand("resolve", "crepant resolution by star subdivision");
  resolve->fallthrough();
  resolve->add_option("fan-file", fan_path, "fan interchange file")->required()->check(CLI::ExistingFile);
  resolve->add_option("--out", out_path, "write the resolved fan to this file");
  resolve->add_flag("--allow-small", allow_small, "permit the non-projective fallback on terminal input");
  resolve->callback([&] {
    Report rep;
    rep.command = echo;
    rep.digest_input = read_file(fan_path);
    Fan f = fan_from_json(rep.digest_input);
    ResolutionResult r = crepant_resolve(f, {.allow_small = allow_small});
    rep.results = resolution_fields(r);
    if (!betti_consistent(r)) rep.warn("betti identity violated");
    if (!out_path.empty()) {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) fail("BadParameters", "cannot write '" + out_path + "'");
      out << fan_to_json(r.fan);
      rep.results["out"] = out_path;
    }
    emit(rep, opt);
  });

  // cone invariants ----------------------------------------------------------
  auto* invariants = cone->add_subcommand("invariants", "Betti data of the crepant resolution");
  invariants->fallthrough();
  invariants->add_option("fan-file", fan_path, "fan interchange file")->required()->check(CLI::ExistingFile);
  invariants->callback([&] {
    Report rep;
    rep.command = echo;
    rep.digest_input = read_file(fan_path);
    Fan f = fan_from_json(rep.digest_input);
    ResolutionResult r = crepant_resolve(f, {});
    ResolutionInvariants inv = resolution_invariants(r);
    rep.results = {{"c_x", jint(inv.c_x)},
                   {"euler", jint(inv.euler)},
                   {"b2", jint(inv.b2)},
                   {"b4", jint(inv.b4)},
                   {"b2_link", jint(inv.b2_link)},
                   {"betti_consistent", betti_consistent(r)}};
    if (!betti_consistent(r)) rep.warn("betti identity violated");
    emit(rep, opt);
  });

  // cone reeb ----------------------------------------------------------------
  static double tol = 1e-10;
  static int threads = 1;
  auto* reeb = cone->add_subcommand("reeb", "Reeb vector by volume minimization");
  reeb->fallthrough();
  reeb->add_option("fan-file", fan_path, "fan interchange file")->required()->check(CLI::ExistingFile);
  reeb->add_option("--tol", tol, "reduced gradient tolerance");
  reeb->add_option("--threads", threads, "parallel multistarts")->envname("CALABI_CONE_THREADS");
  reeb->callback([&] {
    Report rep;
    rep.command = echo;
    rep.digest_input = read_file(fan_path);
    Fan f = fan_from_json(rep.digest_input);
    rep.results = reeb_fields(f, tol, threads, rep);
    emit(rep, opt);
  });

  // cone spq -----------------------------------------------------------------
  static long long spq_p = 0, spq_q = 0;
  auto* spq = cone->add_subcommand("spq", "the S^{p,q} quadrilateral cone family");
  spq->fallthrough();
  spq->add_option("p", spq_p, "p > q >= 1, gcd(p, q) = 1")->required();
  spq->add_option("q", spq_q, "")->required();
  spq->add_option("--tol", tol, "reduced gradient tolerance");
  spq->add_option("--threads", threads, "parallel multistarts")->envname("CALABI_CONE_THREADS");
  spq->callback([&] {
    Report rep;
    rep.command = echo;
    rep.digest_input = "spq " + std::to_string(spq_p) + " " + std::to_string(spq_q);
    Fan f = spq_fan(spq_p, spq_q);
    rep.results = check_fields(f, rep);
    rep.results["p"] = spq_p;
    rep.results["q"] = spq_q;
    ResolutionResult r = crepant_resolve(f, {});
    rep.results["resolution"] = resolution_fields(r);
    rep.results["reeb"] = reeb_fields(f, tol, threads, rep);
    long long disc = 4 * spq_p * spq_p - 3 * spq_q * spq_q;
    rep.results["square_test"] = {{"value", disc}, {"quasi_regular", spq_quasi_regular(spq_p, spq_q)}};
    emit(rep, opt);
  });

  // cone quotient ------------------------------------------------------------
  static long long order = 0;
  static std::string weight_csv;
  auto* quotient = cone->add_subcommand("quotient", "cyclic quotient singularity C^3 / Z_m");
  quotient->fallthrough();
  quotient->add_option("--order", order, "group order m")->required();
  quotient->add_option("--weights", weight_csv, "action weights a,b,c for (1/m)(a,b,c)")->required();
  quotient->callback([&] {
    Report rep;
    rep.command = echo;
    rep.digest_input = "quotient " + std::to_string(order) + " " + weight_csv;
    std::vector<long long> w = parse_csv(weight_csv, "--weights");
    if (order < 1) fail("BadParameters", "--order must be positive");
    QuotientSpec spec;
    spec.n = w.size();
    spec.order = order;
    RatVec gen;
    for (long long c : w) gen.push_back(Rat(Int(c), Int(order)));
    spec.weights = {gen};
    Fan f = quotient_fan(spec);
    ResolutionResult r = crepant_resolve(f, {});
    rep.results = {{"order", order},
                   {"weights", w},
                   {"group_elements", quotient_group_elements(spec).size()},
                   {"resolution", resolution_fields(r)},
                   {"euler_matches_order", r.euler == Int(order)}};
    if (r.euler != Int(order)) rep.warn("resolution Euler characteristic differs from the group order");
    emit(rep, opt);
  });

  // link hodge ---------------------------------------------------------------
  static std::string hs_weights, hs_exponents;
  static long long hs_degree = 0;
  auto* hodge = link->add_subcommand("hodge", "Milnor algebra Poincare series and Hodge numbers");
  hodge->fallthrough();
  hodge->add_option("--weights", hs_weights, "weights w0,w1,...")->required();
  hodge->add_option("--degree", hs_degree, "weighted degree d")->required();
  hodge->add_option("--exponents", hs_exponents, "Brieskorn-Pham exponents a0,a1,...");
  hodge->callback([&] {
    Report rep;
    rep.command = echo;
    rep.digest_input = "hodge " + hs_weights + " " + std::to_string(hs_degree) + " " + hs_exponents;
    WeightedHypersurface hs;
    hs.weights = parse_csv(hs_weights, "--weights");
    hs.degree = hs_degree;
    if (!hs_exponents.empty()) hs.exponents = parse_csv(hs_exponents, "--exponents");
    PoincareSeries p = milnor_poincare(hs);
    rep.results = {{"poincare", p.coeff}, {"milnor_number", p.total()}, {"fano", hypersurface_fano(hs)}};
    if (hs.weights.size() >= 3) {
      int n = static_cast<int>(hs.weights.size()) - 2;
      HodgeNumbers hn = steenbrink_hodge(hs, n);
      rep.results["hodge"] = hn.h;
      if (n == 2) rep.results["s"] = hn.s;
    }
    emit(rep, opt);
  });

  // link seifert -------------------------------------------------------------
  static long long seifert_s = 1, seifert_d = 1;
  static std::string branch_csv;
  auto* seifert = link->add_subcommand("seifert", "cohomology of a 5-dimensional Seifert link");
  seifert->fallthrough();
  seifert->add_option("--s", seifert_s, "rank H^2 of the base orbifold")->required();
  seifert->add_option("--ddiv", seifert_d, "divisibility invariant");
  seifert->add_option("--branch", branch_csv, "branch divisors m:g[,m:g...]");
  seifert->callback([&] {
    Report rep;
    rep.command = echo;
    rep.digest_input =
        "seifert " + std::to_string(seifert_s) + " " + std::to_string(seifert_d) + " " + branch_csv;
    SeifertData sd{seifert_s, seifert_d, {}};
    if (!branch_csv.empty()) {
      std::stringstream ss(branch_csv);
      std::string item;
      while (std::getline(ss, item, ',')) {
        size_t colon = item.find(':');
        if (colon == std::string::npos)
          fail("BadParameters", "--branch: '" + item + "' is not of the form m:g");
        std::vector<long long> m = parse_csv(item.substr(0, colon), "--branch");
        std::vector<long long> g = parse_csv(item.substr(colon + 1), "--branch");
        if (m.size() != 1 || g.size() != 1)
          fail("BadParameters", "--branch: '" + item + "' is not of the form m:g");
        sd.branches.emplace_back(m[0], g[0]);
      }
    }
    SeifertCohomology sc = seifert_cohomology(sd);
    json table = json::object();
    for (int i = 0; i < 6; ++i) table["H" + std::to_string(i)] = jgroup(sc.h[i]);
    rep.results = {{"cohomology", table}, {"h2_lower", jgroup(sc.h2_lower)}};
    emit(rep, opt);
  });

  // link family --------------------------------------------------------------
  static std::string family_name;
  static long long family_k = 0, family_n = 3;
  auto* family = link->add_subcommand("family", "crepant terminalization of the hypersurface families");
  family->fallthrough();
  family->add_option("--name", family_name, "cubic, quartic, sextic, quartic-cubic, or general")->required();
  family->add_option("--k", family_k, "last exponent")->required();
  family->add_option("--n", family_n, "ambient dimension for the general family");
  family->callback([&] {
    Report rep;
    rep.command = echo;
    rep.digest_input =
        "family " + family_name + " " + std::to_string(family_k) + " " + std::to_string(family_n);
    FamilyReport fr = terminalize_family(family_name, family_k, family_n);
    json steps = json::array();
    for (const BlowupStep& s : fr.steps)
      steps.push_back({{"weights", s.weights},
                       {"f_weight", s.f_weight},
                       {"discrepancy", s.discrepancy},
                       {"residual_exponent", s.residual_exponent}});
    rep.results = {{"family", fr.family}, {"k", fr.k}, {"n", fr.n},
                   {"c_x", fr.c_x},      {"steps", steps}, {"smooth", fr.smooth}};
    if (fr.b3) rep.results["b3"] = *fr.b3;
    if (fr.h2) rep.results["h2"] = jgroup(*fr.h2);
    if (fr.euler) rep.results["euler"] = jint(*fr.euler);
    if (fr.link_betti) rep.results["link_betti"] = jint(*fr.link_betti);
    if (fr.torsion_order) rep.results["torsion_order"] = jint(*fr.torsion_order);
    emit(rep, opt);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const DomainError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
