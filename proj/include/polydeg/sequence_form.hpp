#pragma once

#include "polydeg/game_tree.hpp"
#include "polydeg/normal_form.hpp"
#include "polydeg/polygame.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace polydeg {

// One sequence of a player: the own (infoset, action) path from the root.
// The empty sequence has index 0.
struct Sequence {
  std::vector<std::pair<std::string, std::string>> path;
  std::string label;  // last action label, qualified by infoset
};

// Per-player sequence bookkeeping: sequences, the last-action subset L_n,
// the terminal fibers Z_n(i) and the pure-strategy fibers s_n(i).
struct SequenceIndex {
  int player = 0;                  // 1-based; 0 is Nature
  bool dummy = false;              // no information sets
  std::vector<Sequence> sequences; // [0] = empty sequence
  std::vector<int> last_actions;   // sequence indices that are last actions, sorted
  std::vector<int> terminal_last;  // per terminal z: index into last_actions, or -1
  std::vector<std::vector<int>> terminal_fibers;  // Z_n(i) per last action
  std::vector<std::string> infoset_ids;           // infoset order used throughout
  std::vector<std::vector<int>> infoset_children; // per infoset: sequence index per action

  int num_sequences() const { return static_cast<int>(sequences.size()); }
  int num_last() const { return static_cast<int>(last_actions.size()); }
  std::string last_label(int i) const { return sequences[last_actions[i]].label; }
};

inline SequenceIndex build_sequences(const GameTree& tree, int player) {
  tree.require_perfect_recall();
  SequenceIndex idx;
  idx.player = player;
  auto isets = tree.infosets(player);
  idx.dummy = isets.empty();

  idx.sequences.push_back(Sequence{{}, "-"});
  std::map<std::vector<std::pair<std::string, std::string>>, int> seq_of_path;
  seq_of_path[{}] = 0;

  for (const auto& is : isets) {
    idx.infoset_ids.push_back(is.id);
    std::vector<int> children;
    auto base = tree.own_sequence(is.nodes[0], player);
    for (const auto& a : is.actions) {
      auto path = base;
      path.emplace_back(is.id, a);
      Sequence s{path, a + "@" + is.id};
      seq_of_path[path] = static_cast<int>(idx.sequences.size());
      children.push_back(static_cast<int>(idx.sequences.size()));
      idx.sequences.push_back(std::move(s));
    }
    idx.infoset_children.push_back(std::move(children));
  }

  // Last actions: sequences defined by terminal nodes.
  std::vector<bool> is_last(idx.sequences.size(), false);
  std::vector<int> term_seq(tree.num_terminals(), 0);
  for (int z = 0; z < tree.num_terminals(); ++z) {
    auto path = tree.own_sequence_terminal(z, player);
    auto it = seq_of_path.find(path);
    if (it == seq_of_path.end())
      throw Error("SequenceIndex", "terminal path not among sequences");
    term_seq[z] = it->second;
    if (it->second != 0) is_last[it->second] = true;
  }
  for (int s = 0; s < static_cast<int>(idx.sequences.size()); ++s)
    if (is_last[s]) idx.last_actions.push_back(s);

  idx.terminal_last.assign(tree.num_terminals(), -1);
  idx.terminal_fibers.assign(idx.last_actions.size(), {});
  for (int z = 0; z < tree.num_terminals(); ++z) {
    if (term_seq[z] == 0) continue;
    auto it = std::lower_bound(idx.last_actions.begin(), idx.last_actions.end(), term_seq[z]);
    int li = static_cast<int>(it - idx.last_actions.begin());
    idx.terminal_last[z] = li;
    idx.terminal_fibers[li].push_back(z);
  }
  return idx;
}

inline std::vector<SequenceIndex> build_all_sequences(const GameTree& tree) {
  std::vector<SequenceIndex> out;
  for (int p = 1; p <= tree.num_players(); ++p) out.push_back(build_sequences(tree, p));
  return out;
}

// Realization-plan constraints E r = e, r >= 0 over R^{sequences}:
// r_empty = 1 and flow conservation at each information set.
struct RealizationPolytope {
  MatrixXd E;
  VectorXd e;
  std::vector<VectorXd> vertices;  // distinct pure-strategy images
};

// 0/1 realization vector of a pure strategy: product of indicator behavior.
inline VectorXd pure_realization(const GameTree& tree, const SequenceIndex& idx,
                                 const GameTree::PureStrategy& s) {
  auto isets = tree.infosets(idx.player);
  VectorXd r = VectorXd::Zero(idx.num_sequences());
  r[0] = 1.0;
  for (int q = 1; q < idx.num_sequences(); ++q) {
    const auto& path = idx.sequences[q].path;
    double v = 1.0;
    for (const auto& [iset, act] : path) {
      int ii = -1;
      for (size_t k = 0; k < isets.size(); ++k)
        if (isets[k].id == iset) { ii = static_cast<int>(k); break; }
      const auto& labels = isets[ii].actions;
      int ai = static_cast<int>(std::find(labels.begin(), labels.end(), act) - labels.begin());
      if (s[ii] != ai) { v = 0.0; break; }
    }
    r[q] = v;
  }
  return r;
}

inline RealizationPolytope realization_polytope(const GameTree& tree, const SequenceIndex& idx) {
  RealizationPolytope rp;
  int S = idx.num_sequences();
  int rows = 1 + static_cast<int>(idx.infoset_ids.size());
  rp.E = MatrixXd::Zero(rows, S);
  rp.e = VectorXd::Zero(rows);
  rp.E(0, 0) = 1.0;
  rp.e[0] = 1.0;
  auto isets = tree.infosets(idx.player);
  for (size_t u = 0; u < idx.infoset_ids.size(); ++u) {
    // parent sequence of infoset u
    auto parent_path = tree.own_sequence(isets[u].nodes[0], idx.player);
    int parent = 0;
    for (int q = 0; q < S; ++q)
      if (idx.sequences[q].path == parent_path) { parent = q; break; }
    rp.E(static_cast<int>(u) + 1, parent) = -1.0;
    for (int c : idx.infoset_children[u]) rp.E(static_cast<int>(u) + 1, c) = 1.0;
    rp.e[static_cast<int>(u) + 1] = 0.0;
  }
  for (const auto& s : tree.pure_strategies(idx.player)) {
    VectorXd r = pure_realization(tree, idx, s);
    bool dup = false;
    for (const auto& v : rp.vertices)
      if ((v - r).norm() < 1e-12) { dup = true; break; }
    if (!dup) rp.vertices.push_back(std::move(r));
  }
  return rp;
}

// Enabling strategy set: projection of the realization polytope onto the
// last-action coordinates.
inline Polytope enabling_polytope(const SequenceIndex& idx, const RealizationPolytope& rp) {
  std::vector<VectorXd> pts;
  for (const auto& r : rp.vertices) {
    VectorXd p(idx.num_last());
    for (int i = 0; i < idx.num_last(); ++i) p[i] = r[idx.last_actions[i]];
    pts.push_back(std::move(p));
  }
  if (pts.empty()) pts.push_back(VectorXd::Zero(std::max(1, idx.num_last())));
  return Polytope::from_vertices(pts);
}

// Enabling form of the tree: sparse payoffs over last-action profiles.  Each
// terminal z contributes G_n(z) * F_*(z) at the profile (l_m(z))_m, with
// absent players marked -1.
struct EnablingGame {
  PolytopeGame game;  // sparse representation over the enabling polytopes
  std::vector<SequenceIndex> indices;
};

inline EnablingGame build_enabling_game(const GameTree& tree) {
  int N = tree.num_players();
  EnablingGame eg;
  eg.indices = build_all_sequences(tree);

  std::vector<Polytope> polys;
  for (int n = 0; n < N; ++n) {
    auto rp = realization_polytope(tree, eg.indices[n]);
    if (eg.indices[n].dummy || eg.indices[n].num_last() == 0) {
      // dummy players carry a single point so downstream maps stay total
      polys.push_back(Polytope::from_vertices({VectorXd::Ones(1)}));
    } else {
      polys.push_back(enabling_polytope(eg.indices[n], rp));
    }
  }

  // One term per occurring last-action profile; terminals sharing a profile
  // accumulate.
  std::vector<std::vector<SparseTerm>> terms(N);
  for (int z = 0; z < tree.num_terminals(); ++z) {
    double w = tree.nature_weight(z);
    std::vector<int> coord(N, -1);
    for (int n = 0; n < N; ++n) coord[n] = eg.indices[n].terminal_last[z];
    for (int n = 0; n < N; ++n) {
      double c = tree.terminal(z).payoffs[n] * w;
      bool merged = false;
      for (auto& prev : terms[n])
        if (prev.coord == coord) { prev.coeff += c; merged = true; break; }
      if (!merged) terms[n].push_back(SparseTerm{c, coord});
    }
  }
  eg.game = PolytopeGame::from_sparse(polys, terms);
  return eg;
}

// nu_n(i, p_{-n}): the linear coefficient of p_n in V^e_n, and nu_n(empty).
inline VectorXd enabling_nu(const EnablingGame& eg, int n, const std::vector<VectorXd>& profile) {
  return eg.game.gradient(n, profile);
}
inline double enabling_nu_empty(const EnablingGame& eg, int n,
                                const std::vector<VectorXd>& profile) {
  double s = 0;
  for (const auto& t : eg.game.sparse_terms()[n]) {
    if (t.coord[n] >= 0) continue;
    double term = t.coeff;
    for (int m = 0; m < eg.game.num_players(); ++m)
      if (m != n && t.coord[m] >= 0) term *= profile[m][t.coord[m]];
    s += term;
  }
  return s;
}

// Map a mixed strategy to its enabling image: p_n(i) = sum of sigma over the
// pure strategies enabling i.
inline VectorXd mixed_to_enabling(const GameTree& tree, const SequenceIndex& idx,
                                  const VectorXd& sigma) {
  auto pures = tree.pure_strategies(idx.player);
  if (static_cast<int>(pures.size()) != sigma.size())
    throw Error("Dimension", "mixed strategy length mismatch");
  VectorXd p = VectorXd::Zero(std::max(1, idx.num_last()));
  if (idx.num_last() == 0) { p[0] = 1.0; return p; }
  for (size_t s = 0; s < pures.size(); ++s) {
    VectorXd r = pure_realization(tree, idx, pures[s]);
    for (int i = 0; i < idx.num_last(); ++i) p[i] += sigma[static_cast<int>(s)] * r[idx.last_actions[i]];
  }
  return p;
}

// The mixed-to-enabling reduction map q^e as a ReductionMap of the normal form.
inline ReductionMap enabling_reduction_map(const GameTree& tree,
                                           const std::vector<SequenceIndex>& indices,
                                           const NormalForm& nf,
                                           const std::vector<Polytope>& enabling_polys) {
  ReductionMap rm;
  for (int n = 0; n < tree.num_players(); ++n) {
    const auto& idx = indices[n];
    const auto& pures = nf.strategies[n];
    int L = std::max(1, idx.num_last());
    MatrixXd Q = MatrixXd::Zero(L, static_cast<int>(pures.size()));
    if (idx.num_last() == 0) {
      Q.row(0).setOnes();
    } else {
      for (size_t s = 0; s < pures.size(); ++s) {
        VectorXd r = pure_realization(tree, idx, pures[s]);
        for (int i = 0; i < idx.num_last(); ++i) Q(i, static_cast<int>(s)) = r[idx.last_actions[i]];
      }
    }
    rm.q.push_back(AffineMap{Q, VectorXd::Zero(L)});
    rm.j.push_back(detail::least_squares_section(Q, /*unit_sum_slice=*/true));
    rm.targets.push_back(enabling_polys[n]);
  }
  return rm;
}

// Behavior profile: one distribution per information set, infoset order.
using Behavior = std::vector<VectorXd>;

inline VectorXd behavior_to_enabling(const GameTree& tree, const SequenceIndex& idx,
                                     const Behavior& b) {
  auto isets = tree.infosets(idx.player);
  if (idx.num_last() == 0) return VectorXd::Ones(1);
  VectorXd p(idx.num_last());
  for (int i = 0; i < idx.num_last(); ++i) {
    const auto& path = idx.sequences[idx.last_actions[i]].path;
    double v = 1.0;
    for (const auto& [iset, act] : path) {
      for (size_t k = 0; k < isets.size(); ++k) {
        if (isets[k].id != iset) continue;
        const auto& labels = isets[k].actions;
        int ai = static_cast<int>(std::find(labels.begin(), labels.end(), act) - labels.begin());
        v *= b[k][ai];
      }
    }
    p[i] = v;
  }
  return p;
}

// Inverse of behavior_to_enabling on the relative interior: bottom-up flow
// aggregation, then conditional ratios.
inline Behavior enabling_to_behavior(const GameTree& tree, const SequenceIndex& idx,
                                     const VectorXd& p, double margin = 1e-10) {
  auto isets = tree.infosets(idx.player);
  int S = idx.num_sequences();
  VectorXd beta = VectorXd::Constant(S, -1.0);
  beta[0] = 1.0;
  for (int i = 0; i < idx.num_last(); ++i) beta[idx.last_actions[i]] = p[i];

  // sequence -> infosets whose parent sequence it is
  std::vector<std::vector<int>> followers(S);
  for (size_t u = 0; u < idx.infoset_ids.size(); ++u) {
    auto parent_path = tree.own_sequence(isets[u].nodes[0], idx.player);
    for (int q = 0; q < S; ++q)
      if (idx.sequences[q].path == parent_path) { followers[q].push_back(static_cast<int>(u)); break; }
  }

  // process infosets deepest-first (paths only extend, so sort by path length)
  std::vector<int> order(idx.infoset_ids.size());
  for (size_t u = 0; u < order.size(); ++u) order[u] = static_cast<int>(u);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return tree.own_sequence(isets[a].nodes[0], idx.player).size() >
           tree.own_sequence(isets[b].nodes[0], idx.player).size();
  });
  for (int u : order) {
    for (int c : idx.infoset_children[u]) {
      if (beta[c] >= 0) continue;  // last action: already set from p
      if (followers[c].empty())
        throw Error("SequenceIndex", "non-last sequence without followers");
      int fu = followers[c][0];
      double s = 0;
      for (int cc : idx.infoset_children[fu]) {
        if (beta[cc] < 0) throw Error("SequenceIndex", "flow ordering violated");
        s += beta[cc];
      }
      beta[c] = s;
    }
  }

  Behavior b;
  for (size_t u = 0; u < idx.infoset_ids.size(); ++u) {
    auto parent_path = tree.own_sequence(isets[u].nodes[0], idx.player);
    double parent_flow = 1.0;
    for (int q = 0; q < S; ++q)
      if (idx.sequences[q].path == parent_path) { parent_flow = beta[q]; break; }
    if (parent_flow <= margin)
      throw NotInterior("aggregate flow " + std::to_string(parent_flow) + " at infoset " +
                        idx.infoset_ids[u]);
    VectorXd dist(idx.infoset_children[u].size());
    for (size_t a = 0; a < idx.infoset_children[u].size(); ++a)
      dist[static_cast<int>(a)] = beta[idx.infoset_children[u][a]] / parent_flow;
    if (dist.minCoeff() < -1e-9)
      throw NotInterior("negative conditional at infoset " + idx.infoset_ids[u]);
    b.push_back(std::move(dist));
  }
  return b;
}

// F(z) = F_*(z) * prod_j p_j(l_j(z)), with factor 1 for players that do not
// act on the path to z.
inline VectorXd outcome_distribution(const GameTree& tree,
                                     const std::vector<SequenceIndex>& indices,
                                     const std::vector<VectorXd>& profile) {
  VectorXd F(tree.num_terminals());
  for (int z = 0; z < tree.num_terminals(); ++z) {
    double v = tree.nature_weight(z);
    for (int n = 0; n < tree.num_players(); ++n) {
      int li = indices[n].terminal_last[z];
      if (li >= 0) v *= profile[n][li];
    }
    F[z] = v;
  }
  return F;
}

}  // namespace polydeg
