// cdlat: build constructions, compute and verify CD lattices, classify shapes.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "cdlat/cdengine.hpp"
#include "cdlat/scenarios.hpp"

using namespace cdlat;

namespace {

constexpr int kOk = 0;
constexpr int kCounterexample = 2;
constexpr int kBudget = 3;
constexpr int kInputError = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

std::string exponents(const CentralPresentation& pres) {
  std::ostringstream os;
  os << "v_dim=" << pres.v_dim() << " w_dim=" << pres.w_dim() << " |P|=" << pres.p() << '^'
     << pres.v_dim() + pres.w_dim() << " |Z|=" << pres.p() << '^' << pres.w_dim();
  return os.str();
}

std::pair<std::size_t, std::size_t> parse_split(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw DomainError("--split expects n1,n2");
  try {
    return {std::stoul(s.substr(0, comma)), std::stoul(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw DomainError("--split expects n1,n2");
  }
}

// Lattice from a cdl file, with covers recomputed and checked against the file.
CDLattice load_lattice(const std::string& path) {
  auto lat = parse_cdl(read_file(path));
  auto computed = covers(lat.members);
  if (lat.covers.empty()) {
    lat.covers = computed;
  } else {
    std::set<std::pair<std::size_t, std::size_t>> a(lat.covers.begin(), lat.covers.end());
    std::set<std::pair<std::size_t, std::size_t>> b(computed.begin(), computed.end());
    if (a != b) throw DomainError(path + ": cover lines disagree with member containment");
  }
  return lat;
}

Construction lattice_construction(CentralPresentation pres, const CDLattice& lat) {
  if (lat.d != pres.v_dim() || lat.p != pres.p()) throw DomainError("lattice does not match the presentation");
  return from_lattice(std::move(pres), lat.members, lat.names);
}

struct BuildArgs {
  std::string kind;
  std::uint32_t p = 2;
  std::size_t m = 2, n = 2, l = 1, k = 2, d = 1;
  std::string split;
  std::string base = "trivial";
  std::string base_lattice;
  std::string out = "out";
  std::size_t jobs = 1;
};

Construction resolve_base(const BuildArgs& a) {
  if (a.base == "trivial") return trivial_construction(a.p);
  if (a.base == "heisenberg") return heisenberg_construction(a.p);
  auto pres = parse_cgp(read_file(a.base));
  if (pres.p() != a.p) throw DomainError("base file has p=" + std::to_string(pres.p()) + " but --p is " + std::to_string(a.p));
  if (!a.base_lattice.empty()) return lattice_construction(std::move(pres), load_lattice(a.base_lattice));
  SearchOptions so;
  so.jobs = a.jobs;
  auto lat = compute_cd_full(pres, so).first;
  return lattice_construction(std::move(pres), lat);
}

int cmd_build(const BuildArgs& a) {
  checked_prime(a.p);
  Construction c = [&] {
    if (a.kind == "dd") {
      std::optional<std::pair<std::size_t, std::size_t>> split;
      if (!a.split.empty()) split = parse_split(a.split);
      return build_double_diamond(a.p, a.m, split);
    }
    if (a.kind == "le") return iterate(Extension::Diamond, resolve_base(a), a.l, a.m, a.n);
    if (a.kind == "qe") return iterate(Extension::Quasiantichain, resolve_base(a), a.l, a.m, a.n);
    if (a.kind == "power") return direct_power(resolve_base(a), a.k);
    if (a.kind == "abelian") return abelian_construction(a.p, a.d);
    throw DomainError("unknown construction kind " + a.kind);
  }();
  write_file(a.out + ".cgp", serialize_cgp(c.presentation));
  write_file(a.out + ".cdl", write_cdl(predicted_lattice(c.presentation, c.expected)));
  std::cout << exponents(c.presentation) << "\n"
            << "predicted " << c.expected.members.size() << " members, " << c.expected.expected_shape.summary() << "\n"
            << "wrote " << a.out << ".cgp " << a.out << ".cdl\n";
  return kOk;
}

struct CdArgs {
  std::string input;
  std::string mode = "full";
  std::string predicted;
  std::string budget = "500000000";
  std::size_t jobs = 1;
  std::uint64_t seed = 0x5eed;
  std::uint64_t samples = 1'000'000;
  std::string out;
};

int cmd_cd(const CdArgs& a) {
  auto pres = parse_cgp(read_file(a.input));
  std::optional<CDLattice> predicted;
  if (!a.predicted.empty()) predicted = load_lattice(a.predicted);
  CDLattice result;
  int code = kOk;
  if (a.mode == "full") {
    SearchOptions so;
    so.jobs = a.jobs;
    try {
      so.budget = BigCount(a.budget);
    } catch (const std::exception&) {
      throw DomainError("--budget expects an integer");
    }
    auto [lat, stats] = compute_cd_full(pres, so);
    std::cerr << "scanned " << stats.scanned << " subspaces in " << stats.partitions << " partitions, "
              << stats.jobs << " job(s), " << stats.seconds << " s\n";
    if (predicted) {
      ExpectedLattice names;
      for (std::size_t i = 0; i < predicted->members.size(); ++i)
        names.members.push_back({predicted->names[i], predicted->members[i]});
      bind_names(lat, names);
      lat.expect = predicted->expect;
      bool same = lat.members == predicted->members;
      std::cerr << "predicted lattice " << (same ? "matches" : "DIFFERS FROM") << " the full CD\n";
      if (!same) code = kCounterexample;
    }
    result = std::move(lat);
  } else if (a.mode == "verify") {
    if (!predicted) throw DomainError("verify mode needs --predicted");
    VerifyOptions vo;
    vo.jobs = a.jobs;
    vo.seed = a.seed;
    vo.samples = a.samples;
    auto report = verify_predicted(pres, predicted->members, vo);
    std::cerr << "checked " << report.adversarial_checked << " neighbours and " << report.random_checked
              << (report.exhaustive ? " subspaces (exhaustive)" : " random subspaces") << "\n";
    if (!report.pass) {
      const auto& ce = *report.counterexample;
      std::cerr << "COUNTEREXAMPLE (" << ce.reason << "): " << ce.space.to_string() << " measure p^" << ce.measure
                << " vs p^" << report.measure << "; " << ce.detail << "\n";
      return kCounterexample;
    }
    std::cerr << "PASS: predicted lattice verified at measure p^" << report.measure << "\n";
    result = *predicted;
    result.mode = LatticeMode::VerifiedPredicted;
  } else {
    throw DomainError("--mode must be full or verify");
  }
  auto text = write_cdl(result);
  if (a.out.empty()) std::cout << text;
  else write_file(a.out, text);
  std::cerr << result.members.size() << " members, max measure p^" << result.max_measure << "\n";
  return code;
}

// The index suffix may be left off the expectation.
bool shape_matches(const std::string& expect, const std::string& summary) {
  if (expect == summary) return true;
  auto cut = summary.find(" idx=");
  return cut != std::string::npos && expect == summary.substr(0, cut);
}

int cmd_classify(const std::string& input, const std::string& expect) {
  auto lat = load_lattice(input);
  auto shape = classify(lat.poset());
  for (const auto& line : shape.block()) std::cout << line << "\n";
  if (!lat.expect.empty())
    std::cout << "expect " << lat.expect << " (" << (shape_matches(lat.expect, shape.summary()) ? "match" : "mismatch") << ")\n";
  if (!expect.empty() && !shape_matches(expect, shape.summary())) {
    std::cerr << "shape mismatch: expected '" << expect << "', got '" << shape.summary() << "'\n";
    return kCounterexample;
  }
  return kOk;
}

int cmd_export_dot(const std::string& input, bool labels, const std::string& out) {
  auto lat = load_lattice(input);
  std::ostringstream os;
  os << "digraph cd {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < lat.members.size(); ++i) {
    std::string label = labels && !lat.names[i].empty() ? lat.names[i] : "dim " + std::to_string(lat.members[i].dim());
    os << "  n" << i << " [label=\"" << label << "\"];\n";
  }
  std::size_t top = 0;
  for (const auto& s : lat.members) top = std::max(top, s.dim());
  for (std::size_t k = 0; k <= top; ++k) {
    std::vector<std::size_t> level;
    for (std::size_t i = 0; i < lat.members.size(); ++i)
      if (lat.members[i].dim() == k) level.push_back(i);
    if (level.size() < 2) continue;
    os << "  { rank=same;";
    for (auto i : level) os << " n" << i << ";";
    os << " }\n";
  }
  auto edges = lat.covers;
  std::sort(edges.begin(), edges.end(), [](auto x, auto y) { return std::tie(x.second, x.first) < std::tie(y.second, y.first); });
  for (auto [hi, lo] : edges) os << "  n" << lo << " -> n" << hi << ";\n";
  os << "}\n";
  if (out.empty()) std::cout << os.str();
  else write_file(out, os.str());
  return kOk;
}

int cmd_scenario(const std::string& name, bool list, const ScenarioOptions& o) {
  if (list || name.empty()) {
    for (const auto& s : scenario_registry()) std::cout << s.name << " (" << s.alias << "): " << s.summary << "\n";
    return kOk;
  }
  std::vector<std::string> names;
  if (name == "all") {
    for (const auto& s : scenario_registry()) names.push_back(s.name);
  } else {
    if (!resolve_scenario(name)) throw DomainError("unknown scenario '" + name + "' (try --list)");
    names.push_back(name);
  }
  bool ok = true;
  for (const auto& n : names) {
    auto report = run_scenario(n, o);
    std::cout << report.render();
    ok = ok && report.pass();
  }
  return ok ? kOk : kCounterexample;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chermak-Delgado lattices of class-2 p-groups"};
  app.require_subcommand(1);
  const std::size_t default_jobs = jobs_from_env(1);

  BuildArgs build;
  build.jobs = default_jobs;
  auto* b = app.add_subcommand("build", "emit a construction as <out>.cgp and its predicted lattice as <out>.cdl");
  b->add_option("kind", build.kind, "dd | le | qe | power | abelian")->required()
      ->check(CLI::IsMember({"dd", "le", "qe", "power", "abelian"}));
  b->add_option("--p", build.p, "prime");
  b->add_option("--m", build.m, "dd: half the number of a's; le: number of blocks");
  b->add_option("--n", build.n, "le/qe: block width");
  b->add_option("--l", build.l, "le/qe: number of iterations");
  b->add_option("--k", build.k, "power: number of factors");
  b->add_option("--d", build.d, "abelian: rank");
  b->add_option("--split", build.split, "dd: unequal classes n1,n2");
  b->add_option("--base", build.base, "trivial | heisenberg | path to a .cgp file");
  b->add_option("--base-lattice", build.base_lattice, "cdl file with CD of the base (else full search)");
  b->add_option("-o,--out", build.out, "output prefix");
  b->add_option("--jobs", build.jobs, "worker threads");

  CdArgs cd;
  cd.jobs = default_jobs;
  auto* c = app.add_subcommand("cd", "compute (full) or verify a CD lattice");
  c->add_option("input", cd.input, "presentation (.cgp)")->required();
  c->add_option("--mode", cd.mode, "full | verify")->check(CLI::IsMember({"full", "verify"}));
  c->add_option("--predicted", cd.predicted, "predicted lattice (.cdl)");
  c->add_option("--budget", cd.budget, "maximum number of subspaces for full search");
  c->add_option("--jobs", cd.jobs, "worker threads");
  c->add_option("--seed", cd.seed, "root seed for verify sampling");
  c->add_option("--samples", cd.samples, "random samples for verify");
  c->add_option("-o,--out", cd.out, "output lattice file (default stdout)");

  std::string cl_input, cl_expect;
  auto* cl = app.add_subcommand("classify", "print the shape of a lattice file");
  cl->add_option("input", cl_input, "lattice (.cdl)")->required();
  cl->add_option("--expect", cl_expect, "exit 2 unless the summary equals this");

  std::string dot_input, dot_out;
  bool no_labels = false;
  auto* dot = app.add_subcommand("export-dot", "Hasse diagram as Graphviz DOT");
  dot->add_option("input", dot_input, "lattice (.cdl)")->required();
  dot->add_flag("--no-labels", no_labels, "label nodes by dimension only");
  dot->add_option("-o,--out", dot_out, "output file (default stdout)");

  std::string sc_name;
  bool sc_list = false;
  ScenarioOptions sc;
  sc.jobs = default_jobs;
  auto* s = app.add_subcommand("scenario", "run a named reproduction (or 'all')");
  s->add_option("name", sc_name, "scenario name or alias");
  s->add_flag("--list", sc_list, "list scenarios");
  s->add_flag("--heavy", sc.heavy, "include long full scans");
  s->add_option("--jobs", sc.jobs, "worker threads");
  s->add_option("--seed", sc.seed, "root seed for verify sampling");
  s->add_option("--samples", sc.samples, "random samples for verify");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*b) return cmd_build(build);
    if (*c) return cmd_cd(cd);
    if (*cl) return cmd_classify(cl_input, cl_expect);
    if (*dot) return cmd_export_dot(dot_input, !no_labels, dot_out);
    if (*s) return cmd_scenario(sc_name, sc_list, sc);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
