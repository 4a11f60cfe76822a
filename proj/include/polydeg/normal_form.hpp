#pragma once

#include "polydeg/game_tree.hpp"
#include "polydeg/polygame.hpp"

#include <string>
#include <vector>

namespace polydeg {

inline Polytope unit_simplex(int d) {
  std::vector<VectorXd> verts;
  for (int i = 0; i < d; ++i) {
    VectorXd e = VectorXd::Zero(d);
    e[i] = 1.0;
    verts.push_back(e);
  }
  return Polytope::from_vertices(verts);
}

struct NormalForm {
  PolytopeGame game;  // simplices with the pure-profile payoff tensor
  std::vector<std::vector<GameTree::PureStrategy>> strategies;  // per player
  std::vector<std::vector<std::string>> labels;
};

// Pure-profile payoff tensor with Nature marginalized out.
inline NormalForm build_normal_form(const GameTree& tree, int cap = 4096) {
  int N = tree.num_players();
  NormalForm nf;
  std::vector<std::vector<InfoSet>> isets;
  for (int p = 1; p <= N; ++p) isets.push_back(tree.infosets(p));

  std::vector<int> dims;
  for (int p = 1; p <= N; ++p) {
    nf.strategies.push_back(tree.pure_strategies(p, cap));
    dims.push_back(static_cast<int>(nf.strategies.back().size()));
    std::vector<std::string> labs;
    for (const auto& s : nf.strategies.back()) labs.push_back(tree.strategy_label(p, s));
    nf.labels.push_back(std::move(labs));
  }

  std::vector<MultiTensor> tensors(N, MultiTensor(dims));
  std::vector<int> idx(N, 0);
  MultiTensor& t0 = tensors[0];
  for (long long f = 0; f < t0.size(); ++f) {
    t0.unflatten(f, idx);
    std::vector<GameTree::PureStrategy> profile;
    for (int p = 0; p < N; ++p) profile.push_back(nf.strategies[p][idx[p]]);
    VectorXd pay = tree.pure_profile_payoff(profile, isets);
    for (int n = 0; n < N; ++n) tensors[n].flat_at(f) = pay[n];
  }

  std::vector<Polytope> polys;
  for (int d : dims) polys.push_back(unit_simplex(d));
  nf.game = PolytopeGame::from_tensor(polys, tensors);
  return nf;
}

}  // namespace polydeg
