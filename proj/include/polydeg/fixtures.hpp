#pragma once

#include <string>

namespace polydeg::fixtures {

// Two-player tree: player 1 moves first (L/R); after L player 2 picks a
// terminal; after R player 2 routes into player 1's second information set,
// which spans both branches.
inline const char* kFig1 = R"(players 2
node n0 player 1 infoset 1
  action L -> n1
  action R -> n2
node n1 player 2 infoset a
  action l1 -> z1
  action r1 -> z2
node n2 player 2 infoset b
  action l -> n3
  action r -> n4
node n3 player 1 infoset 2
  action L1 -> z3
  action R1 -> z4
node n4 player 1 infoset 2
  action L1 -> z5
  action R1 -> z6
terminal z1 payoffs 7 11
terminal z2 payoffs 0 3
terminal z3 payoffs 10 15
terminal z4 payoffs 2 1
terminal z5 payoffs 1 2
terminal z6 payoffs 8 6
root n0
)";

// Same tree, node ids renamed and blocks reordered; infoset ids and action
// labels unchanged so the strategy order is identical.
inline const char* kFig1Permuted = R"(players 2
root x0
terminal t6 payoffs 8 6
node x4 player 1 infoset 2
  action L1 -> t5
  action R1 -> t6
node x0 player 1 infoset 1
  action L -> x1
  action R -> x2
terminal t1 payoffs 7 11
terminal t2 payoffs 0 3
node x2 player 2 infoset b
  action l -> x3
  action r -> x4
node x1 player 2 infoset a
  action l1 -> t1
  action r1 -> t2
terminal t3 payoffs 10 15
terminal t4 payoffs 2 1
terminal t5 payoffs 1 2
node x3 player 1 infoset 2
  action L1 -> t3
  action R1 -> t4
)";

// Outside option game: player 1 takes T or hands over to player 2; the R
// payoff to player 1 is the y parameter.
inline const char* kGy1 = R"(players 2
node n0 player 1 infoset 1
  action T -> zT
  action B -> n1
node n1 player 2 infoset 1
  action L -> zL
  action R -> zR
terminal zT payoffs 2 2
terminal zL payoffs 3 3
terminal zR payoffs 1 1
root n0
)";

inline const char* kGy3 = R"(players 2
node n0 player 1 infoset 1
  action T -> zT
  action B -> n1
node n1 player 2 infoset 1
  action L -> zL
  action R -> zR
terminal zT payoffs 2 2
terminal zL payoffs 3 3
terminal zR payoffs 3 1
root n0
)";

// Signaling game: Nature draws the sender's type (strong 0.9 / weak 0.1),
// the sender picks beer or quiche, the receiver observes only the breakfast
// and picks fight / not fight.
inline const char* kBeerQuiche = R"(players 2
node n0 player 0 infoset nat
  action s prob 0.9 -> ns
  action w prob 0.1 -> nw
node ns player 1 infoset s
  action B -> nsb
  action Q -> nsq
node nw player 1 infoset w
  action B -> nwb
  action Q -> nwq
node nsb player 2 infoset beer
  action NF -> z1
  action F -> z2
node nwb player 2 infoset beer
  action NF -> z3
  action F -> z4
node nsq player 2 infoset quiche
  action NF -> z5
  action F -> z6
node nwq player 2 infoset quiche
  action NF -> z7
  action F -> z8
terminal z1 payoffs 3 1
terminal z2 payoffs 1 0
terminal z3 payoffs 2 0
terminal z4 payoffs 0 1
terminal z5 payoffs 2 1
terminal z6 payoffs 0 0
terminal z7 payoffs 3 0
terminal z8 payoffs 1 1
root n0
)";

// One information set holding a node and its own successor: not perfect
// recall.
inline const char* kAbsentMinded = R"(players 1
node a player 1 infoset u
  action c -> b
  action e -> z1
node b player 1 infoset u
  action c -> z2
  action e -> z3
terminal z1 payoffs 0
terminal z2 payoffs 1
terminal z3 payoffs 0
root a
)";

inline std::string get(const std::string& name) {
  if (name == "fig1") return kFig1;
  if (name == "fig1-permuted") return kFig1Permuted;
  if (name == "gw" || name == "gy1") return kGy1;
  if (name == "gy3") return kGy3;
  if (name == "beerquiche") return kBeerQuiche;
  return "";
}

}  // namespace polydeg::fixtures
