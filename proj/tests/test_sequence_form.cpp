#include <catch2/catch_amalgamated.hpp>

#include "polydeg/fixtures.hpp"
#include "polydeg/game_tree.hpp"
#include "polydeg/normal_form.hpp"
#include "polydeg/sequence_form.hpp"

#include <cmath>
#include <set>

using namespace polydeg;

namespace {

VectorXd simplex_point(Rng& rng, int d) {
  VectorXd w(d);
  for (int i = 0; i < d; ++i) w[i] = -std::log(rng.uniform(1e-12, 1.0));
  return w / w.sum();
}

Behavior random_behavior(const GameTree& t, int player, Rng& rng) {
  Behavior b;
  for (const auto& is : t.infosets(player))
    b.push_back(simplex_point(rng, static_cast<int>(is.actions.size())));
  return b;
}

// Kuhn mixture: each pure strategy gets the product of its behavior probs.
VectorXd kuhn_mixture(const GameTree& t, int player, const Behavior& b) {
  auto isets = t.infosets(player);
  auto pures = t.pure_strategies(player);
  VectorXd sigma(pures.size());
  for (size_t s = 0; s < pures.size(); ++s) {
    double v = 1;
    for (size_t u = 0; u < isets.size(); ++u) v *= b[u][pures[s][u]];
    sigma[static_cast<int>(s)] = v;
  }
  return sigma;
}

}  // namespace

TEST_CASE("fig1 sequences and last actions") {
  GameTree t = GameTree::parse(fixtures::kFig1);
  auto i1 = build_sequences(t, 1);
  auto i2 = build_sequences(t, 2);
  CHECK(i1.num_sequences() == 5);  // empty + L,R + RL1,RR1
  CHECK(i1.num_last() == 3);       // L, L1, R1
  CHECK(i2.num_sequences() == 5);
  CHECK(i2.num_last() == 4);       // l1, r1, l, r
  CHECK(i1.last_label(0) == "L@1");
  CHECK(i1.last_label(1) == "L1@2");
  CHECK(i1.last_label(2) == "R1@2");
}

TEST_CASE("dummy player flagged") {
  std::string text =
      "players 2\nnode a player 1 infoset u\n  action x -> z1\n  action y -> z2\n"
      "terminal z1 payoffs 1 0\nterminal z2 payoffs 0 1\nroot a\n";
  GameTree t = GameTree::parse(text);
  auto i2 = build_sequences(t, 2);
  CHECK(i2.dummy);
  CHECK(i2.num_last() == 0);
}

TEST_CASE("terminal fibers partition the terminals with last actions") {
  for (const char* fx : {fixtures::kFig1, fixtures::kBeerQuiche, fixtures::kGy1}) {
    GameTree t = GameTree::parse(fx);
    for (int p = 1; p <= 2; ++p) {
      auto idx = build_sequences(t, p);
      std::set<int> seen;
      for (int i = 0; i < idx.num_last(); ++i)
        for (int z : idx.terminal_fibers[i]) {
          CHECK(!seen.count(z));
          seen.insert(z);
          CHECK(idx.terminal_last[z] == i);
        }
      for (int z = 0; z < t.num_terminals(); ++z)
        if (idx.terminal_last[z] < 0) CHECK(!seen.count(z));
    }
  }
}

TEST_CASE("realization polytope: single infoset is a segment") {
  std::string text =
      "players 1\nnode a player 1 infoset u\n  action x -> z1\n  action y -> z2\n"
      "terminal z1 payoffs 1\nterminal z2 payoffs 0\nroot a\n";
  GameTree t = GameTree::parse(text);
  auto idx = build_sequences(t, 1);
  auto rp = realization_polytope(t, idx);
  CHECK(rp.vertices.size() == 2);
  for (const auto& v : rp.vertices) {
    CHECK(v[0] == 1.0);
    CHECK((rp.E * v - rp.e).norm() == 0.0);
  }
}

TEST_CASE("fig1 realization constraints hold at every pure image") {
  GameTree t = GameTree::parse(fixtures::kFig1);
  for (int p = 1; p <= 2; ++p) {
    auto idx = build_sequences(t, p);
    auto rp = realization_polytope(t, idx);
    for (const auto& s : t.pure_strategies(p)) {
      VectorXd r = pure_realization(t, idx, s);
      CHECK((rp.E * r - rp.e).norm() == 0.0);
    }
    Eigen::FullPivLU<MatrixXd> lu(rp.E);
    CHECK(lu.rank() == 1 + static_cast<int>(idx.infoset_ids.size()));
  }
}

TEST_CASE("fig1 enabling polytopes: simplex and parallelogram") {
  GameTree t = GameTree::parse(fixtures::kFig1);
  auto i1 = build_sequences(t, 1);
  auto i2 = build_sequences(t, 2);
  Polytope c1 = enabling_polytope(i1, realization_polytope(t, i1));
  Polytope c2 = enabling_polytope(i2, realization_polytope(t, i2));
  CHECK(c1.dim() == 2);
  CHECK(c1.num_vertices() == 3);  // the 2-simplex conv{e_L, e_L1, e_R1}
  for (const auto& v : c1.vertices()) CHECK(std::abs(v.sum() - 1.0) < 1e-12);
  CHECK(c2.dim() == 2);
  CHECK(c2.num_vertices() == 4);  // the parallelogram
  CHECK(c2.ambient_dim() == 4);
}

TEST_CASE("single-infoset player: enabling set is the action simplex") {
  std::string text =
      "players 1\nnode a player 1 infoset u\n  action x -> z1\n  action y -> z2\n  action w -> "
      "z3\nterminal z1 payoffs 1\nterminal z2 payoffs 0\nterminal z3 payoffs 2\nroot a\n";
  GameTree t = GameTree::parse(text);
  auto idx = build_sequences(t, 1);
  Polytope c = enabling_polytope(idx, realization_polytope(t, idx));
  CHECK(c.dim() == 2);
  CHECK(c.num_vertices() == 3);
}

TEST_CASE("fig1 enabling payoffs have the published coefficients") {
  GameTree t = GameTree::parse(fixtures::kFig1);
  auto eg = build_enabling_game(t);
  const auto& terms = eg.game.sparse_terms();
  CHECK(terms[0].size() == 6);
  // coefficient at (L1, l) for player 1 is G_1(z3) = 10; L1 is last action 1
  // of player 1, l is last action 2 of player 2
  bool found = false;
  for (const auto& tm : terms[0])
    if (tm.coord == std::vector<int>{1, 2}) {
      found = true;
      CHECK(tm.coeff == Catch::Approx(10).margin(1e-12));
    }
  CHECK(found);
}

TEST_CASE("beer-quiche enabling coefficients carry Nature weights") {
  GameTree t = GameTree::parse(fixtures::kBeerQuiche);
  auto eg = build_enabling_game(t);
  // sender coefficient at (B_s, NF_B): 0.9 * 3 = 2.7
  bool found = false;
  for (const auto& tm : eg.game.sparse_terms()[0])
    if (tm.coord == std::vector<int>{0, 0}) {
      found = true;
      CHECK(tm.coeff == Catch::Approx(2.7).margin(1e-12));
    }
  CHECK(found);
}

TEST_CASE("all-zero payoffs give the zero enabling game") {
  std::string text =
      "players 2\nnode a player 1 infoset u\n  action x -> b\n  action y -> c\n"
      "node b player 2 infoset v\n  action l -> z1\n  action r -> z2\n"
      "node c player 2 infoset v\n  action l -> z3\n  action r -> z4\n"
      "terminal z1 payoffs 0 0\nterminal z2 payoffs 0 0\nterminal z3 payoffs 0 0\nterminal z4 "
      "payoffs 0 0\nroot a\n";
  auto eg = build_enabling_game(GameTree::parse(text));
  Rng rng(1);
  for (int it = 0; it < 10; ++it) {
    auto prof = detail::random_profile(eg.game, rng);
    CHECK(eg.game.payoff_unchecked(prof).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(eg.game.gradient(0, prof).norm() == 0.0);
    CHECK(eg.game.gradient(1, prof).norm() == 0.0);
  }
}

TEST_CASE("mixed_to_enabling identifies the paper's equivalent mixtures") {
  GameTree t = GameTree::parse(fixtures::kFig1);
  auto i2 = build_sequences(t, 2);
  // equal mixture of l1r and r1l vs equal mixture of l1l and r1r
  VectorXd a = VectorXd::Zero(4), b = VectorXd::Zero(4);
  a[1] = 0.5;  // l1r
  a[2] = 0.5;  // r1l
  b[0] = 0.5;  // l1l
  b[3] = 0.5;  // r1r
  CHECK((mixed_to_enabling(t, i2, a) - mixed_to_enabling(t, i2, b)).norm() < 1e-12);

  // pure strategies map to 0/1 vectors
  VectorXd e = VectorXd::Zero(4);
  e[0] = 1;
  VectorXd img = mixed_to_enabling(t, i2, e);
  for (int i = 0; i < img.size(); ++i) CHECK((img[i] == 0.0 || img[i] == 1.0));

  // linearity: uniform mixture equals the average of pure images
  VectorXd u = VectorXd::Constant(4, 0.25);
  VectorXd avg = VectorXd::Zero(i2.num_last());
  for (int s = 0; s < 4; ++s) {
    VectorXd es = VectorXd::Zero(4);
    es[s] = 1;
    avg += 0.25 * mixed_to_enabling(t, i2, es);
  }
  CHECK((mixed_to_enabling(t, i2, u) - avg).norm() < 1e-12);
}

TEST_CASE("behavior_to_enabling: product formula") {
  GameTree t = GameTree::parse(fixtures::kFig1);
  auto i2 = build_sequences(t, 2);
  Behavior b;
  VectorXd h(2);
  h << 0.5, 0.5;
  b.push_back(h);
  b.push_back(h);
  VectorXd p = behavior_to_enabling(t, i2, b);
  CHECK((p - VectorXd::Constant(4, 0.5)).norm() < 1e-12);

  // deterministic behavior = pure image
  Behavior pure;
  VectorXd e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  pure.push_back(e1);
  pure.push_back(e2);
  VectorXd pp = behavior_to_enabling(t, i2, pure);
  VectorXd sig = VectorXd::Zero(4);
  sig[1] = 1;  // l1/r
  CHECK((pp - mixed_to_enabling(t, i2, sig)).norm() < 1e-12);
}

TEST_CASE("kuhn consistency: mixed and behavior routes agree") {
  Rng rng(77);
  for (const char* fx : {fixtures::kFig1, fixtures::kBeerQuiche, fixtures::kGy1}) {
    GameTree t = GameTree::parse(fx);
    for (int p = 1; p <= 2; ++p) {
      auto idx = build_sequences(t, p);
      for (int it = 0; it < 30; ++it) {
        Behavior b = random_behavior(t, p, rng);
        VectorXd via_mix = mixed_to_enabling(t, idx, kuhn_mixture(t, p, b));
        VectorXd via_beh = behavior_to_enabling(t, idx, b);
        CHECK((via_mix - via_beh).lpNorm<Eigen::Infinity>() < 1e-9);
      }
    }
  }
}

TEST_CASE("enabling_to_behavior round trips interior points") {
  Rng rng(99);
  for (const char* fx : {fixtures::kFig1, fixtures::kBeerQuiche, fixtures::kGy1}) {
    GameTree t = GameTree::parse(fx);
    for (int p = 1; p <= 2; ++p) {
      auto idx = build_sequences(t, p);
      for (int it = 0; it < 30; ++it) {
        Behavior b = random_behavior(t, p, rng);
        VectorXd pe = behavior_to_enabling(t, idx, b);
        Behavior back = enabling_to_behavior(t, idx, pe);
        REQUIRE(back.size() == b.size());
        for (size_t u = 0; u < b.size(); ++u)
          CHECK((back[u] - b[u]).lpNorm<Eigen::Infinity>() < 1e-10);
        CHECK((behavior_to_enabling(t, idx, back) - pe).lpNorm<Eigen::Infinity>() < 1e-9);
      }
    }
  }
}

TEST_CASE("center of the fig1 parallelogram maps to half-half behavior") {
  GameTree t = GameTree::parse(fixtures::kFig1);
  auto i2 = build_sequences(t, 2);
  Behavior b = enabling_to_behavior(t, i2, VectorXd::Constant(4, 0.5));
  for (const auto& d : b) CHECK((d - VectorXd::Constant(2, 0.5)).norm() < 1e-12);
}

TEST_CASE("boundary enabling points are rejected") {
  GameTree t = GameTree::parse(fixtures::kFig1);
  auto i1 = build_sequences(t, 1);
  VectorXd p(3);
  p << 1, 0, 0;  // pure L: the second infoset never gets mass
  CHECK_THROWS_AS(enabling_to_behavior(t, i1, p), NotInterior);
}

TEST_CASE("outcome distributions") {
  GameTree t = GameTree::parse(fixtures::kBeerQuiche);
  auto indices = build_all_sequences(t);
  // sender: beer if strong, quiche if weak; receiver: never fight
  VectorXd ps(4), pr(4);
  ps << 1, 0, 0, 1;  // B_s, Q_s, B_w, Q_w
  pr << 0, 1, 0, 1;  // F_B, NF_B, F_Q, NF_Q
  VectorXd F = outcome_distribution(t, indices, {ps, pr});
  CHECK(F.sum() == Catch::Approx(1.0).margin(1e-12));
  int nonzero = 0;
  for (int z = 0; z < F.size(); ++z)
    if (F[z] > 0) ++nonzero;
  CHECK(nonzero == 2);
  CHECK(F.maxCoeff() == Catch::Approx(0.9).margin(1e-12));

  // payoff identity against the enabling game
  auto eg = build_enabling_game(t);
  VectorXd via_game(2);
  via_game << eg.game.payoff_one(0, {ps, pr}), eg.game.payoff_one(1, {ps, pr});
  VectorXd via_outcome = VectorXd::Zero(2);
  for (int z = 0; z < t.num_terminals(); ++z) via_outcome += F[z] * t.terminal(z).payoffs;
  CHECK((via_game - via_outcome).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("pure profile without Nature is a point mass") {
  GameTree t = GameTree::parse(fixtures::kFig1);
  auto indices = build_all_sequences(t);
  VectorXd p1(3), p2(4);
  p1 << 0, 1, 0;  // play R then L1
  p2 << 1, 0, 1, 0;  // l1 and l
  VectorXd F = outcome_distribution(t, indices, {p1, p2});
  CHECK(F.sum() == Catch::Approx(1.0).margin(1e-12));
  CHECK(F.maxCoeff() == Catch::Approx(1.0).margin(1e-12));
  CHECK(F[2] == Catch::Approx(1.0).margin(1e-12));  // z3 = (10,15)
}

TEST_CASE("random enabling profiles induce distributions") {
  GameTree t = GameTree::parse(fixtures::kFig1);
  auto indices = build_all_sequences(t);
  Rng rng(123);
  for (int it = 0; it < 50; ++it) {
    std::vector<VectorXd> prof;
    for (int n = 0; n < 2; ++n) {
      Behavior b = random_behavior(t, n + 1, rng);
      prof.push_back(behavior_to_enabling(t, indices[n], b));
    }
    VectorXd F = outcome_distribution(t, indices, prof);
    CHECK(F.sum() == Catch::Approx(1.0).margin(1e-10));
    CHECK(F.minCoeff() >= 0);
  }
}

TEST_CASE("reduction identity: enabling payoffs match normal-form payoffs") {
  Rng rng(321);
  for (const char* fx : {fixtures::kFig1, fixtures::kBeerQuiche, fixtures::kGy1, fixtures::kGy3}) {
    GameTree t = GameTree::parse(fx);
    auto nf = build_normal_form(t);
    auto eg = build_enabling_game(t);
    for (int it = 0; it < 100; ++it) {
      std::vector<VectorXd> sigma, image;
      for (int n = 0; n < 2; ++n) {
        VectorXd s = simplex_point(rng, static_cast<int>(nf.strategies[n].size()));
        sigma.push_back(s);
        image.push_back(mixed_to_enabling(t, eg.indices[n], s));
        CHECK(eg.game.polytope(n).contains(image.back(), 1e-10));
      }
      VectorXd a = nf.game.payoff_unchecked(sigma);
      VectorXd b = eg.game.payoff_unchecked(image);
      CHECK((a - b).lpNorm<Eigen::Infinity>() < 1e-9);
    }
  }
}

TEST_CASE("affine decomposition: nu is the linear part") {
  GameTree t = GameTree::parse(fixtures::kBeerQuiche);
  auto eg = build_enabling_game(t);
  Rng rng(55);
  for (int it = 0; it < 30; ++it) {
    std::vector<VectorXd> prof;
    for (int n = 0; n < 2; ++n) {
      Behavior b = random_behavior(t, n + 1, rng);
      prof.push_back(behavior_to_enabling(t, eg.indices[n], b));
    }
    for (int n = 0; n < 2; ++n) {
      VectorXd nu = enabling_nu(eg, n, prof);
      double nu0 = enabling_nu_empty(eg, n, prof);
      double direct = eg.game.payoff_one(n, prof);
      CHECK(std::abs(prof[n].dot(nu) + nu0 - direct) < 1e-10);
    }
  }
}

TEST_CASE("enabling dimension dominates the reduced dimension") {
  for (const char* fx : {fixtures::kFig1, fixtures::kBeerQuiche, fixtures::kGy1}) {
    GameTree t = GameTree::parse(fx);
    auto nf = build_normal_form(t);
    auto eg = build_enabling_game(t);
    auto mr = maximal_reduction(nf.game);
    for (int n = 0; n < 2; ++n)
      CHECK(eg.game.polytope(n).dim() >= mr.reduced.polytope(n).dim());
  }
}

TEST_CASE("equivalent games have matching reduced dimensions") {
  for (const char* fx : {fixtures::kFig1, fixtures::kBeerQuiche}) {
    GameTree t = GameTree::parse(fx);
    auto nf = build_normal_form(t);
    auto eg = build_enabling_game(t);
    auto mr_nf = maximal_reduction(nf.game);
    auto mr_eg = maximal_reduction(eg.game);
    for (int n = 0; n < 2; ++n)
      CHECK(mr_nf.reduced.polytope(n).dim() == mr_eg.reduced.polytope(n).dim());
  }
}

TEST_CASE("reduced forms from the two routes are affinely isomorphic") {
  // g^r: P^r -> Pbar^r through the enabling quotient and back; composing the
  // two directions round-trips the vertices.
  for (const char* fx : {fixtures::kFig1, fixtures::kBeerQuiche}) {
    GameTree t = GameTree::parse(fx);
    auto nf = build_normal_form(t);
    auto eg = build_enabling_game(t);
    auto qe = enabling_reduction_map(t, eg.indices, nf, eg.game.polytopes());
    auto mr_nf = maximal_reduction(nf.game);   // pi^r on the mixed simplices
    auto mr_eg = maximal_reduction(eg.game);   // pibar^r on the enabling polytopes

    for (int n = 0; n < 2; ++n) {
      // forward: P^r -> Sigma -> C -> Pbar^r; back: Pbar^r -> C -> Sigma -> P^r
      auto fwd = [&](const VectorXd& v) {
        return mr_eg.map.q[n](qe.q[n](mr_nf.map.j[n](v)));
      };
      auto bwd = [&](const VectorXd& w) {
        return mr_nf.map.q[n](qe.j[n](mr_eg.map.j[n](w)));
      };
      for (const auto& v : mr_nf.reduced.polytope(n).vertices())
        CHECK((bwd(fwd(v)) - v).norm() < 1e-8);
      for (const auto& w : mr_eg.reduced.polytope(n).vertices())
        CHECK((fwd(bwd(w)) - w).norm() < 1e-8);
    }
  }
}

TEST_CASE("reduction preserves equilibria") {
  GameTree t = GameTree::parse(fixtures::kFig1);
  auto nf = build_normal_form(t);
  auto eg = build_enabling_game(t);
  auto sols = enumerate_equilibria(nf.game);
  REQUIRE(!sols.empty());
  for (const auto& s : sols) {
    std::vector<VectorXd> image;
    for (int n = 0; n < 2; ++n) image.push_back(mixed_to_enabling(t, eg.indices[n], s.profile[n]));
    CHECK(eg.game.is_equilibrium(image, 1e-7).is_equilibrium);
  }
}

TEST_CASE("enabling reduction map is a valid reduction of the normal form") {
  GameTree t = GameTree::parse(fixtures::kFig1);
  auto nf = build_normal_form(t);
  auto eg = build_enabling_game(t);
  auto rm = enabling_reduction_map(t, eg.indices, nf, eg.game.polytopes());
  PolytopeGame reduced = apply_reduction(nf.game, rm);  // validates fibers
  Rng rng(9);
  for (int it = 0; it < 30; ++it) {
    auto sigma = detail::random_profile(nf.game, rng);
    std::vector<VectorXd> image;
    for (int n = 0; n < 2; ++n) image.push_back(rm.q[n](sigma[n]));
    CHECK((reduced.payoff_unchecked(image) - nf.game.payoff_unchecked(sigma))
              .lpNorm<Eigen::Infinity>() < 1e-9);
  }
}
