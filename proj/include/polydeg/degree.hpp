#pragma once

#include "polydeg/common.hpp"
#include "polydeg/equilibrium.hpp"
#include "polydeg/game_tree.hpp"
#include "polydeg/normal_form.hpp"
#include "polydeg/polygame.hpp"
#include "polydeg/sequence_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace polydeg {

struct DegreeParams {
  double delta = -1;        // perturbation magnitude; <0 means the default
  double eps0 = -1;         // first epsilon of the GW schedule; <0 means default
  double rho_u = 0.05;      // component neighborhood radius
  double rho_cluster = 1e-3;
  std::uint64_t seed = 0;
  int max_resamples = 20;
  int max_eps_levels = 20;
  bool skewed_shrink = false;  // alternate interior approximation family
  double det_margin = 1e-8;
  double face_margin = 1e-8;
  double boundary_margin = 1e-6;  // ambiguity band around the region boundary
};

struct SolutionRecord {
  std::vector<VectorXd> profile;
  int sign = 0;
  double det = 0;
  double margin = 0;
  bool in_region = false;
};

struct DegreeReport {
  std::string method;
  std::string component;
  int degree = 0;
  std::vector<SolutionRecord> solutions;   // accepted attempt, whole polytope
  VectorXd perturbation;                    // the sampled bonus, concatenated
  double delta_used = 0;
  std::uint64_t seed = 0;
  int resamples = 0;
  double cert_det_min = std::numeric_limits<double>::infinity();
  double cert_margin_min = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, int>> eps_sums;  // (level, sign sum) for GW
  int region_count = 0;
};

namespace detail {

inline double default_delta(const PolytopeGame& g) {
  double mx = 0;
  std::vector<int> counts;
  for (int n = 0; n < g.num_players(); ++n) counts.push_back(g.polytope(n).num_vertices());
  std::vector<int> idx(g.num_players(), 0);
  while (true) {
    std::vector<VectorXd> prof;
    for (int n = 0; n < g.num_players(); ++n) prof.push_back(g.polytope(n).vertex(idx[n]));
    VectorXd pay = g.payoff_unchecked(prof);
    mx = std::max(mx, pay.lpNorm<Eigen::Infinity>());
    int pos = g.num_players() - 1;
    while (pos >= 0 && ++idx[pos] == counts[pos]) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return 1e-4 * (1.0 + mx);
}

// Verifies that the closure of the rho_u-neighborhood of the component meets
// no other equilibrium component of the unperturbed game: re-enumerate,
// cluster, exempt the nearest cluster (the component itself), and require
// every other cluster to stay clear of the neighborhood.  Returns the
// clusters (the unperturbed equilibrium landscape).
inline std::vector<EquilibriumComponent> check_neighborhood(const PolytopeGame& game,
                                                            const EquilibriumComponent& comp,
                                                            const DegreeParams& prm,
                                                            EnumerationOptions eopts) {
  auto sols = enumerate_equilibria(game, {}, eopts);
  auto clusters = cluster_components(sols, prm.rho_cluster);
  int own = -1;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> dmin(clusters.size(), std::numeric_limits<double>::infinity());
  std::vector<double> dmax(clusters.size(), 0.0);
  for (size_t i = 0; i < clusters.size(); ++i) {
    for (const auto& p : clusters[i].points) {
      double d = comp.distance_to(p);
      dmin[i] = std::min(dmin[i], d);
      dmax[i] = std::max(dmax[i], d);
    }
    if (dmin[i] < best) {
      best = dmin[i];
      own = static_cast<int>(i);
    }
  }
  // Clusters lying entirely on the component's cover are re-sampled pieces of
  // the component itself (the cover is densified at a 0.02 step).
  double same_tol = 0.02 + 2 * prm.rho_cluster;
  for (size_t i = 0; i < clusters.size(); ++i) {
    if (static_cast<int>(i) == own) continue;
    if (dmax[i] <= same_tol) continue;
    if (dmin[i] <= comp.rho_u + prm.boundary_margin)
      throw NeighborhoodInvalid("another equilibrium component at distance " +
                                std::to_string(dmin[i]) + " meets the component neighborhood");
  }
  return clusters;
}

struct AttemptOutcome {
  bool ok = false;
  bool boundary_ambiguous = false;  // region-boundary hit, not a bonus problem
  int degree = 0;
  std::vector<SolutionRecord> records;
  double det_min = std::numeric_limits<double>::infinity();
  double margin_min = std::numeric_limits<double>::infinity();
  int region_count = 0;
  bool all_assigned = true;  // every solution near some unperturbed component
  std::string reject_reason;
};

// One generic perturbation attempt over a fixed polytope product: enumerate
// the perturbed equilibria, form z = sigma + grad + bonus, take Jacobian
// signs, and apply the regularity certificates.  When `landscape` is given,
// solutions are additionally checked for being within rho_u of some
// unperturbed component (convergence of the epsilon approximation).
inline AttemptOutcome degree_attempt(const PolytopeGame& game, const std::vector<VectorXd>& bonus,
                                     const EquilibriumComponent& comp, const DegreeParams& prm,
                                     EnumerationOptions eopts,
                                     const std::vector<EquilibriumComponent>* landscape = nullptr) {
  AttemptOutcome out;
  BonusGame bg{&game, bonus};
  auto sols = EquilibriumEnumerator(bg, eopts).run();
  for (const auto& s : sols) {
    if (s.continuum) {
      out.reject_reason = "perturbed game has a solution continuum";
      return out;
    }
  }
  for (const auto& s : sols) {
    SolutionRecord rec;
    rec.profile = s.profile;
    std::vector<VectorXd> z;
    for (int n = 0; n < game.num_players(); ++n)
      z.push_back(s.profile[n] + bg.gradient(n, s.profile));
    double margin = 0;
    MatrixXd J;
    try {
      J = displacement_jacobian(bg, z, prm.face_margin, &margin);
    } catch (const OnCellBoundary& e) {
      out.reject_reason = e.what();
      return out;
    }
    rec.det = J.determinant();
    rec.margin = margin;
    if (std::abs(rec.det) < prm.det_margin) {
      out.reject_reason = "determinant " + std::to_string(rec.det) + " below margin";
      return out;
    }
    rec.sign = rec.det > 0 ? 1 : -1;
    double d = comp.distance_to(s.profile);
    if (std::abs(d - comp.rho_u) <= prm.boundary_margin) {
      out.reject_reason = "solution ambiguous at the region boundary";
      out.boundary_ambiguous = true;
      return out;
    }
    rec.in_region = d < comp.rho_u;
    out.det_min = std::min(out.det_min, std::abs(rec.det));
    out.margin_min = std::min(out.margin_min, margin);
    if (rec.in_region) {
      out.degree += rec.sign;
      ++out.region_count;
    } else if (landscape) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& cl : *landscape)
        nearest = std::min(nearest, cl.distance_to(s.profile));
      if (nearest > comp.rho_u) out.all_assigned = false;
    }
    out.records.push_back(std::move(rec));
  }
  out.ok = true;
  return out;
}

}  // namespace detail

// Polytope-form degree of an equilibrium component: standardize, perturb the
// bonus part generically, and sum Jacobian signs of the GPS displacement over
// the perturbed equilibria falling in the component neighborhood.
inline DegreeReport pf_degree(const PolytopeGame& game, const EquilibriumComponent& comp,
                              DegreeParams prm = {}) {
  auto sg = standardize_game(game);

  EquilibriumComponent scomp = comp;
  scomp.map_points([&](const std::vector<VectorXd>& p) {
    std::vector<VectorXd> sp;
    for (int n = 0; n < game.num_players(); ++n) sp.push_back(sg.to_std[n](p[n]));
    return sp;
  });

  if (prm.delta < 0) prm.delta = detail::default_delta(sg.game);
  EnumerationOptions eopts;
  eopts.seed = prm.seed;
  detail::check_neighborhood(sg.game, scomp, prm, eopts);

  std::vector<int> dims = sg.game.ambient_dims();
  int total = 0;
  for (int d : dims) total += d;

  DegreeReport rep;
  rep.method = "pf";
  rep.component = comp.label;
  rep.seed = prm.seed;

  double delta = prm.delta;
  Rng rng(prm.seed * 0x9e3779b97f4a7c15ULL + 1);
  for (int attempt = 0; attempt < prm.max_resamples; ++attempt) {
    if (attempt > 0 && attempt % 5 == 0) delta /= 2;
    VectorXd b = rng.ball(total, delta);
    auto bonus = split(b, dims);
    auto res = detail::degree_attempt(sg.game, bonus, scomp, prm, eopts);
    rep.resamples = attempt;
    if (!res.ok) continue;
    rep.degree = res.degree;
    rep.solutions = std::move(res.records);
    rep.perturbation = b;
    rep.delta_used = delta;
    rep.cert_det_min = res.det_min;
    rep.cert_margin_min = res.margin_min;
    rep.region_count = res.region_count;
    // report solutions in original coordinates
    for (auto& r : rep.solutions) {
      for (int n = 0; n < game.num_players(); ++n) r.profile[n] = sg.from_std[n](r.profile[n]);
    }
    return rep;
  }
  throw Inconclusive("pf_degree: no accepted perturbation within the resample budget");
}

// Normal-form degree: the same pipeline run on the mixed-strategy simplices.
inline DegreeReport km_degree(const PolytopeGame& normal_form_game,
                              const EquilibriumComponent& comp, DegreeParams prm = {}) {
  DegreeReport rep = pf_degree(normal_form_game, comp, prm);
  rep.method = "km";
  return rep;
}

// Terminal-payoff decomposition G = Gtilde + g(l_n(z)) with conditional means
// under the uniform terminal distribution.
struct TerminalDecomposition {
  std::vector<VectorXd> bonus;       // g_n over last actions
  MatrixXd tilde;                    // rows: players, cols: terminals
};

inline TerminalDecomposition terminal_decompose(const GameTree& tree,
                                                const std::vector<SequenceIndex>& indices) {
  int N = tree.num_players();
  TerminalDecomposition td;
  td.tilde = MatrixXd::Zero(N, tree.num_terminals());
  for (int n = 0; n < N; ++n) {
    const auto& idx = indices[n];
    VectorXd g = VectorXd::Zero(std::max(1, idx.num_last()));
    for (int i = 0; i < idx.num_last(); ++i) {
      double s = 0;
      for (int z : idx.terminal_fibers[i]) s += tree.terminal(z).payoffs[n];
      g[i] = s / static_cast<double>(idx.terminal_fibers[i].size());
    }
    td.bonus.push_back(g);
    for (int z = 0; z < tree.num_terminals(); ++z) {
      double base = tree.terminal(z).payoffs[n];
      int li = idx.terminal_last[z];
      td.tilde(n, z) = li >= 0 ? base - g[li] : base;
    }
  }
  return td;
}

// GW epsilon-restricted degree: restrict the enabling game to an interior
// polytope C^eps, perturb with last-action bonuses, and sum the Jacobian
// signs of f^eps = id - w^eps . r^eps at t = p + nu(p_{-n}) + bonus; the
// epsilon schedule halves until two consecutive sums agree.
inline DegreeReport gw_degree(const EnablingGame& eg, const EquilibriumComponent& comp,
                              DegreeParams prm = {}) {
  const PolytopeGame& C_game = eg.game;
  int N = C_game.num_players();

  if (prm.delta < 0) prm.delta = detail::default_delta(C_game);
  if (prm.eps0 < 0) {
    double r = std::numeric_limits<double>::infinity();
    for (int n = 0; n < N; ++n) {
      double p = C_game.polytope(n).inradius_proxy();
      if (p > 0) r = std::min(r, p);
    }
    prm.eps0 = std::isfinite(r) ? 0.1 * r : 0.1;
  }

  EnumerationOptions eopts;
  eopts.seed = prm.seed;
  auto landscape = detail::check_neighborhood(C_game, comp, prm, eopts);
  for (auto& cl : landscape) cl.rho_u = comp.rho_u;

  std::vector<int> dims = C_game.ambient_dims();
  int total = 0;
  for (int d : dims) total += d;

  DegreeReport rep;
  rep.method = "gw";
  rep.component = comp.label;
  rep.seed = prm.seed;

  double delta = prm.delta;
  Rng rng(prm.seed * 0x9e3779b97f4a7c15ULL + 2);
  for (int attempt = 0; attempt < prm.max_resamples; ++attempt) {
    if (attempt > 0 && attempt % 5 == 0) delta /= 2;
    VectorXd b = rng.ball(total, delta);
    auto bonus = split(b, dims);

    rep.eps_sums.clear();
    bool attempt_failed = false;
    int last_sum = 0;
    int last_k = -10;
    double det_min = std::numeric_limits<double>::infinity();
    double margin_min = std::numeric_limits<double>::infinity();

    for (int k = 0; k <= prm.max_eps_levels; ++k) {
      double eps = prm.eps0 * std::pow(0.5, k);
      std::vector<Polytope> shrunk;
      for (int n = 0; n < N; ++n)
        shrunk.push_back(prm.skewed_shrink ? C_game.polytope(n).shrink_skewed(eps)
                                           : C_game.polytope(n).shrink(eps));
      PolytopeGame eps_game = PolytopeGame::from_sparse(shrunk, C_game.sparse_terms());

      auto res = detail::degree_attempt(eps_game, bonus, comp, prm, eopts, &landscape);
      // A region-boundary hit comes from the epsilon geometry, not from the
      // bonus draw: skip the level and keep halving.
      if (!res.ok && res.boundary_ambiguous) continue;
      if (!res.ok) { attempt_failed = true; break; }
      // Epsilon is not yet below the stabilization threshold while some
      // solution has not converged into the neighborhood of an unperturbed
      // component; such levels cannot certify the limit sum.
      if (!res.all_assigned) continue;
      rep.eps_sums.emplace_back(k, res.degree);
      det_min = std::min(det_min, res.det_min);
      margin_min = std::min(margin_min, res.margin_min);
      // Solution branches can materialize only once the polytope distortion
      // drops below the game's local margins; the stabilization pair must
      // therefore sit below the bonus magnitude.
      bool deep = eps <= delta;
      if (deep && k == last_k + 1 && res.degree == last_sum) {
        rep.degree = res.degree;
        rep.solutions = std::move(res.records);
        rep.perturbation = b;
        rep.delta_used = delta;
        rep.resamples = attempt;
        rep.cert_det_min = det_min;
        rep.cert_margin_min = margin_min;
        rep.region_count = res.region_count;
        return rep;
      }
      if (deep) {
        last_sum = res.degree;
        last_k = k;
      }
    }
    if (!attempt_failed)
      throw Inconclusive("gw_degree: epsilon schedule did not stabilize");
  }
  throw Inconclusive("gw_degree: no accepted perturbation within the resample budget");
}

// The mixed-strategy preimage X = (q^e)^{-1}(Q) of an enabling component:
// every mixed-strategy cluster is assigned to the enabling component nearest
// to its image, and the clusters assigned to the target merge into X with a
// pairwise densified neighborhood cover (the preimage picks up the
// payoff-irrelevant fiber directions, which fragment a metric clustering).
inline EquilibriumComponent preimage_component(
    const GameTree& tree, const std::vector<SequenceIndex>& indices,
    const std::vector<EquilibriumComponent>& mixed_clusters,
    const std::vector<EquilibriumComponent>& enabling_comps, size_t target) {
  const EquilibriumComponent& enabling_comp = enabling_comps[target];
  EquilibriumComponent X;
  X.label = enabling_comp.label;
  X.rho_u = enabling_comp.rho_u;
  for (const auto& cl : mixed_clusters) {
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < enabling_comps.size(); ++c) {
      double worst = 0;
      for (const auto& pt : cl.points) {
        std::vector<VectorXd> img;
        for (size_t n = 0; n < pt.size(); ++n)
          img.push_back(mixed_to_enabling(tree, indices[n], pt[n]));
        worst = std::max(worst, enabling_comps[c].distance_to(img));
      }
      if (worst < best_d) {
        best_d = worst;
        best = c;
      }
    }
    if (best != target) continue;
    X.continuum = X.continuum || cl.continuum || cl.points.size() > 1;
    for (const auto& pt : cl.points) X.points.push_back(pt);
  }
  if (X.points.empty())
    throw Error("PreimageEmpty", "no mixed-strategy cluster maps onto the component");
  X.region_points = X.points;
  for (size_t a = 0; a < X.points.size(); ++a)
    for (size_t b = a + 1; b < X.points.size(); ++b) {
      double d = profile_distance(X.points[a], X.points[b]);
      int steps = static_cast<int>(std::ceil(d / 0.02));
      for (int s = 1; s < steps; ++s) {
        double t = static_cast<double>(s) / steps;
        std::vector<VectorXd> mid;
        for (size_t p = 0; p < X.points[a].size(); ++p)
          mid.push_back((1 - t) * X.points[a][p] + t * X.points[b][p]);
        X.region_points.push_back(std::move(mid));
      }
    }
  return X;
}

// Per-component degrees and their sum; the structure theorems make the sum +1.
struct TotalDegreeReport {
  std::vector<DegreeReport> components;
  int total = 0;
};

inline TotalDegreeReport total_degree_check(const PolytopeGame& game,
                                            const std::string& method,
                                            const EnablingGame* eg, DegreeParams prm = {}) {
  EnumerationOptions eopts;
  eopts.seed = prm.seed;
  auto sols = enumerate_equilibria(game, {}, eopts);
  auto comps = cluster_components(sols, prm.rho_cluster);
  for (auto& c : comps) c.rho_u = prm.rho_u;

  TotalDegreeReport out;
  for (const auto& c : comps) {
    DegreeReport r;
    if (method == "gw") {
      if (!eg) throw Error("BadMethod", "gw total degree needs the enabling game");
      r = gw_degree(*eg, c, prm);
    } else if (method == "km") {
      r = km_degree(game, c, prm);
    } else {
      r = pf_degree(game, c, prm);
    }
    out.total += r.degree;
    out.components.push_back(std::move(r));
  }
  return out;
}

}  // namespace polydeg
