// Command-line front end: parse game files, inspect enabling forms, list
// equilibrium components, and compute component degrees (pf / km / gw).
#include <CLI11.hpp>

#include "polydeg/degree.hpp"
#include "polydeg/fixtures.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace polydeg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitMismatch = 3;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_deg(int d) { return d > 0 ? "+" + std::to_string(d) : std::to_string(d); }

std::string coords(const std::vector<VectorXd>& profile) {
  std::string s;
  for (const auto& p : profile)
    for (int i = 0; i < p.size(); ++i) {
      if (!s.empty()) s += " ";
      s += fmt(p[i]);
    }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("FileNotFound", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Output {
  bool machine = false;
  void line(const std::string& s) { std::cout << s << "\n"; }
  void human(const std::string& s) {
    if (!machine) std::cout << s << "\n";
  }
  void section(const std::string& name) {
    if (!machine) std::cout << "== " << name << " ==\n";
  }
};

struct CommonOpts {
  std::string file;
  std::uint64_t seed = 0;
  bool machine = false;
};

std::uint64_t env_seed() {
  const char* s = std::getenv("POLYDEG_SEED");
  if (!s) return 0;
  return std::strtoull(s, nullptr, 10);
}

void print_game(Output& out, const GameTree& t) {
  out.section("GAME");
  out.line("PLAYERS " + std::to_string(t.num_players()));
  out.line("NODES " + std::to_string(t.num_nodes()));
  out.line("TERMINALS " + std::to_string(t.num_terminals()));
  for (int p = 1; p <= t.num_players(); ++p) {
    auto is = t.infosets(p);
    std::string labels;
    for (const auto& u : is) labels += " " + u.id;
    out.line("INFOSETS " + std::to_string(p) + " " + std::to_string(is.size()) + labels);
  }
}

void print_polytopes(Output& out, const PolytopeGame& g) {
  out.section("POLYTOPES");
  for (int n = 0; n < g.num_players(); ++n) {
    const Polytope& P = g.polytope(n);
    out.line("POLYTOPE " + std::to_string(n + 1) + " dim=" + std::to_string(P.dim()) +
             " vertices=" + std::to_string(P.num_vertices()) +
             " facets=" + std::to_string(P.halfspaces().size()));
    for (const auto& v : P.vertices()) {
      std::string s;
      for (int i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
      out.line("VERTEX " + std::to_string(n + 1) + " " + s);
    }
  }
}

void print_components(Output& out, const std::vector<EquilibriumComponent>& comps) {
  out.section("COMPONENTS");
  for (size_t i = 0; i < comps.size(); ++i) {
    out.line("COMPONENT " + std::to_string(i) + " " + std::to_string(comps[i].points.size()) +
             " " + (comps[i].continuum ? "continuum" : "isolated"));
    for (const auto& p : comps[i].points) out.line("EQ " + std::to_string(i) + " " + coords(p));
  }
}

void print_degree_report(Output& out, const DegreeReport& rep) {
  out.line("DEGREE " + rep.method + " " + rep.component + " " + fmt_deg(rep.degree));
  for (const auto& s : rep.solutions) {
    if (!s.in_region) continue;
    out.line("SOLUTION " + coords(s.profile) + " sign=" + (s.sign > 0 ? "+1" : "-1"));
  }
  for (const auto& [k, sum] : rep.eps_sums)
    out.line("EPS " + std::to_string(k) + " " + std::to_string(sum));
  out.line("CERT det_min=" + fmt(rep.cert_det_min) + " margin_min=" + fmt(rep.cert_margin_min));
}

struct ComponentFile {
  std::string id = "component-0";
  std::vector<std::vector<double>> points;
  double radius = -1;
};

ComponentFile parse_component_file(const std::string& text) {
  ComponentFile cf;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw) || kw[0] == '#') continue;
    if (kw == "component") {
      ls >> cf.id;
    } else if (kw == "point") {
      std::vector<double> pt;
      double v;
      while (ls >> v) pt.push_back(v);
      if (pt.empty())
        throw SyntaxError("component file line " + std::to_string(lineno) +
                          ": point needs coordinates");
      cf.points.push_back(std::move(pt));
    } else if (kw == "radius") {
      ls >> cf.radius;
    } else {
      throw SyntaxError("component file line " + std::to_string(lineno) + ": unknown keyword '" +
                        kw + "'");
    }
  }
  if (cf.points.empty()) throw SyntaxError("component file has no points");
  return cf;
}

EquilibriumComponent component_from_file(const ComponentFile& cf, const std::vector<int>& dims,
                                         double default_rho_u) {
  EquilibriumComponent comp;
  comp.label = cf.id;
  comp.rho_u = cf.radius > 0 ? cf.radius : default_rho_u;
  int total = 0;
  for (int d : dims) total += d;
  for (const auto& pt : cf.points) {
    if (static_cast<int>(pt.size()) != total)
      throw SyntaxError("component point has " + std::to_string(pt.size()) +
                        " coordinates, expected " + std::to_string(total));
    VectorXd v(total);
    for (int i = 0; i < total; ++i) v[i] = pt[i];
    comp.points.push_back(split(v, dims));
  }
  return comp;
}

// Densify the neighborhood cover of a user-supplied component along segments
// between consecutive points.
void densify_component(EquilibriumComponent& comp) {
  comp.region_points = comp.points;
  for (size_t a = 0; a + 1 < comp.points.size(); ++a) {
    double d = profile_distance(comp.points[a], comp.points[a + 1]);
    int steps = static_cast<int>(std::ceil(d / 0.02));
    for (int s = 1; s < steps; ++s) {
      double t = static_cast<double>(s) / steps;
      std::vector<VectorXd> mid;
      for (size_t p = 0; p < comp.points[a].size(); ++p)
        mid.push_back((1 - t) * comp.points[a][p] + t * comp.points[a + 1][p]);
      comp.region_points.push_back(std::move(mid));
    }
  }
}

int cmd_parse(const CommonOpts& c) {
  Output out{c.machine};
  GameTree t = GameTree::parse(read_file(c.file));
  print_game(out, t);
  out.line("RECALL ok");
  return kExitOk;
}

int cmd_enabling(const CommonOpts& c) {
  Output out{c.machine};
  GameTree t = GameTree::parse(read_file(c.file));
  auto eg = build_enabling_game(t);
  for (int n = 0; n < t.num_players(); ++n) {
    const auto& idx = eg.indices[n];
    out.line("SEQUENCES " + std::to_string(n + 1) + " " + std::to_string(idx.num_sequences()));
    std::string labels;
    for (int i = 0; i < idx.num_last(); ++i) labels += (i ? " " : "") + idx.last_label(i);
    out.line("LASTACTIONS " + std::to_string(n + 1) + " " + std::to_string(idx.num_last()) +
             (labels.empty() ? "" : " " + labels));
  }
  print_polytopes(out, eg.game);
  return kExitOk;
}

std::pair<PolytopeGame, std::string> game_for_form(const GameTree& t, const std::string& form) {
  if (form == "normal") return {build_normal_form(t).game, "normal"};
  if (form == "enabling") return {build_enabling_game(t).game, "enabling"};
  if (form == "reduced") return {maximal_reduction(build_normal_form(t).game).reduced, "reduced"};
  throw Error("BadForm", "unknown form '" + form + "'");
}

int cmd_equilibria(const CommonOpts& c, const std::string& form, double rho) {
  Output out{c.machine};
  GameTree t = GameTree::parse(read_file(c.file));
  auto [game, label] = game_for_form(t, form);
  EnumerationOptions eopts;
  eopts.seed = c.seed;
  auto sols = enumerate_equilibria(game, {}, eopts);
  auto comps = cluster_components(sols, rho);
  out.human("form: " + label);
  print_components(out, comps);
  return kExitOk;
}

int cmd_degree(const CommonOpts& c, const std::string& method, const std::string& comp_path,
               DegreeParams prm) {
  Output out{c.machine};
  GameTree t = GameTree::parse(read_file(c.file));
  auto cf = parse_component_file(read_file(comp_path));

  DegreeReport rep;
  if (method == "km") {
    auto nf = build_normal_form(t);
    auto comp = component_from_file(cf, nf.game.ambient_dims(), prm.rho_u);
    densify_component(comp);
    rep = km_degree(nf.game, comp, prm);
  } else if (method == "pf") {
    auto eg = build_enabling_game(t);
    auto comp = component_from_file(cf, eg.game.ambient_dims(), prm.rho_u);
    densify_component(comp);
    rep = pf_degree(eg.game, comp, prm);
  } else if (method == "gw") {
    auto eg = build_enabling_game(t);
    auto comp = component_from_file(cf, eg.game.ambient_dims(), prm.rho_u);
    densify_component(comp);
    rep = gw_degree(eg, comp, prm);
  } else {
    throw Error("BadMethod", "unknown method '" + method + "'");
  }
  out.section("DEGREES");
  print_degree_report(out, rep);
  return kExitOk;
}

int cmd_check_plus_one(const CommonOpts& c, const std::string& method, DegreeParams prm) {
  Output out{c.machine};
  GameTree t = GameTree::parse(read_file(c.file));
  TotalDegreeReport rep;
  if (method == "km") {
    auto nf = build_normal_form(t);
    rep = total_degree_check(nf.game, "km", nullptr, prm);
  } else {
    auto eg = build_enabling_game(t);
    rep = total_degree_check(eg.game, method, &eg, prm);
  }
  out.section("DEGREES");
  for (const auto& r : rep.components) print_degree_report(out, r);
  out.line("TOTAL " + fmt_deg(rep.total));
  if (rep.total != 1) {
    out.line("MISMATCH total degree is not +1");
    return kExitMismatch;
  }
  return kExitOk;
}

// Fixture pipelines with embedded expected values.
int cmd_examples(const CommonOpts& c, const std::string& name) {
  Output out{c.machine};
  int failures = 0;
  auto expect = [&](const std::string& what, bool ok) {
    out.line(std::string(ok ? "PASS " : "FAIL ") + what);
    if (!ok) ++failures;
  };

  if (name == "beerquiche") {
    GameTree t = GameTree::parse(fixtures::kBeerQuiche);
    auto eg = build_enabling_game(t);
    EnumerationOptions eopts;
    eopts.seed = c.seed;
    auto comps = cluster_components(enumerate_equilibria(eg.game, {}, eopts));
    expect("two equilibrium components", comps.size() == 2);
    if (comps.size() != 2) return kExitMismatch;
    int beer = comps[0].points[0][0][0] > 0.5 ? 0 : 1;
    comps[beer].label = "pooling-beer";
    comps[1 - beer].label = "pooling-quiche";
    DegreeParams prm;
    prm.seed = c.seed;
    out.section("DEGREES");
    auto rb = gw_degree(eg, comps[beer], prm);
    auto rq = gw_degree(eg, comps[1 - beer], prm);
    print_degree_report(out, rb);
    print_degree_report(out, rq);
    expect("gw degree of pooling-beer is +1", rb.degree == 1);
    expect("gw degree of pooling-quiche is 0", rq.degree == 0);
    expect("degrees sum to +1", rb.degree + rq.degree == 1);
    auto pb = pf_degree(eg.game, comps[beer], prm);
    auto pq = pf_degree(eg.game, comps[1 - beer], prm);
    expect("pf agrees with gw on both components",
           pb.degree == rb.degree && pq.degree == rq.degree);
  } else if (name == "gw" || name == "gy1") {
    GameTree t = GameTree::parse(fixtures::kGy1);
    auto eg = build_enabling_game(t);
    auto nf = build_normal_form(t);
    EnumerationOptions eopts;
    eopts.seed = c.seed;
    auto comps = cluster_components(enumerate_equilibria(eg.game, {}, eopts));
    expect("two equilibrium components", comps.size() == 2);
    if (comps.size() != 2) return kExitMismatch;
    int bl = comps[0].points[0][0][1] > 0.5 ? 0 : 1;
    comps[bl].label = "BL";
    comps[1 - bl].label = "T";
    DegreeParams prm;
    prm.seed = c.seed;
    out.section("DEGREES");
    auto rbl = gw_degree(eg, comps[bl], prm);
    auto rt = gw_degree(eg, comps[1 - bl], prm);
    print_degree_report(out, rbl);
    print_degree_report(out, rt);
    expect("gw degree of BL is +1", rbl.degree == 1);
    expect("gw degree of T is 0", rt.degree == 0);
    // same integers through the normal form
    auto ncomps = cluster_components(enumerate_equilibria(nf.game, {}, eopts));
    expect("two mixed components", ncomps.size() == 2);
    if (ncomps.size() == 2) {
      int nbl = ncomps[0].points[0][0][1] > 0.5 ? 0 : 1;
      ncomps[nbl].label = "BL";
      ncomps[1 - nbl].label = "T";
      auto kbl = km_degree(nf.game, ncomps[nbl], prm);
      auto kt = km_degree(nf.game, ncomps[1 - nbl], prm);
      print_degree_report(out, kbl);
      print_degree_report(out, kt);
      expect("km matches gw per component", kbl.degree == rbl.degree && kt.degree == rt.degree);
    }
  } else if (name == "fig1") {
    GameTree t = GameTree::parse(fixtures::kFig1);
    auto eg = build_enabling_game(t);
    auto nf = build_normal_form(t);
    EnumerationOptions eopts;
    eopts.seed = c.seed;
    auto ec = cluster_components(enumerate_equilibria(eg.game, {}, eopts));
    auto nc = cluster_components(enumerate_equilibria(nf.game, {}, eopts));
    DegreeParams prm;
    prm.seed = c.seed;
    out.section("DEGREES");
    int total = 0;
    for (size_t i = 0; i < ec.size(); ++i) {
      ec[i].label = "component-" + std::to_string(i);
      auto rpf = pf_degree(eg.game, ec[i], prm);
      auto rgw = gw_degree(eg, ec[i], prm);
      // the mixed-strategy preimage of the component through q^e
      auto X = preimage_component(t, eg.indices, nc, ec, i);
      auto rkm = km_degree(nf.game, X, prm);
      print_degree_report(out, rpf);
      print_degree_report(out, rkm);
      print_degree_report(out, rgw);
      expect("cross-form agreement on " + ec[i].label,
             rpf.degree == rkm.degree && rkm.degree == rgw.degree);
      total += rpf.degree;
    }
    expect("degrees sum to +1", total == 1);
  } else {
    throw Error("BadFixture", "unknown example '" + name + "'");
  }
  return failures == 0 ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polytope-form game degree computations"};
  app.require_subcommand(1);

  CommonOpts common;
  common.seed = env_seed();

  std::string form = "enabling";
  std::string method = "gw";
  std::string comp_path;
  std::string fixture;
  double rho = 1e-3;
  DegreeParams prm;
  bool skewed = false;

  auto add_common = [&](CLI::App* sub, bool needs_file) {
    if (needs_file) sub->add_option("file", common.file, "game file")->required();
    sub->add_flag("--machine", common.machine, "machine-readable output only");
    sub->add_option("--seed", common.seed, "RNG seed (default: POLYDEG_SEED or 0)");
  };

  auto* p_parse = app.add_subcommand("parse", "parse and validate a game file");
  add_common(p_parse, true);

  auto* p_enab = app.add_subcommand("enabling", "sequence and enabling-form summary");
  add_common(p_enab, true);

  auto* p_eq = app.add_subcommand("equilibria", "enumerate equilibria and components");
  add_common(p_eq, true);
  p_eq->add_option("--form", form, "normal|enabling|reduced")->capture_default_str();
  p_eq->add_option("--rho", rho, "component clustering gap")->capture_default_str();

  auto* p_deg = app.add_subcommand("degree", "degree of an equilibrium component");
  add_common(p_deg, true);
  p_deg->add_option("--component", comp_path, "component file")->required();
  p_deg->add_option("--method", method, "pf|km|gw")->capture_default_str();
  p_deg->add_option("--delta", prm.delta, "perturbation magnitude");
  p_deg->add_option("--eps0", prm.eps0, "initial epsilon (gw)");
  p_deg->add_option("--rho-u", prm.rho_u, "component neighborhood radius")->capture_default_str();
  p_deg->add_flag("--skewed-shrink", skewed, "use the alternate interior approximation family");
  p_deg->add_option("--max-resamples", prm.max_resamples, "perturbation resample budget");

  auto* p_one = app.add_subcommand("check-plus-one", "verify component degrees sum to +1");
  add_common(p_one, true);
  p_one->add_option("--method", method, "pf|km|gw")->capture_default_str();
  p_one->add_option("--rho-u", prm.rho_u, "component neighborhood radius");

  auto* p_ex = app.add_subcommand("examples", "run a built-in worked example");
  p_ex->add_option("name", fixture, "fig1|gw|beerquiche")->required();
  p_ex->add_flag("--machine", common.machine, "machine-readable output only");
  p_ex->add_option("--seed", common.seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  prm.seed = common.seed;
  prm.skewed_shrink = skewed;

  try {
    if (p_parse->parsed()) return cmd_parse(common);
    if (p_enab->parsed()) return cmd_enabling(common);
    if (p_eq->parsed()) return cmd_equilibria(common, form, rho);
    if (p_deg->parsed()) return cmd_degree(common, method, comp_path, prm);
    if (p_one->parsed()) return cmd_check_plus_one(common, method, prm);
    if (p_ex->parsed()) return cmd_examples(common, fixture);
  } catch (const Inconclusive& e) {
    std::cout << "ERROR Inconclusive: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const Error& e) {
    std::cout << "ERROR " << e.error_class() << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cout << "ERROR Internal: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
