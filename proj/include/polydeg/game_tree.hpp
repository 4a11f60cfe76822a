#pragma once

#include "polydeg/common.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace polydeg {

// Extensive-form game tree with perfect recall.  Nature is player 0 and plays
// the fixed behavior strategy given by the per-edge probabilities.
//
// File grammar (line oriented, '#' starts a comment):
//   players <N>
//   node <id> player <0..N> infoset <iset-id>
//     action <label> [prob <p>] -> <id>     (prob required iff player 0)
//   terminal <id> payoffs <f1> ... <fN>
//   root <id>
struct TreeAction {
  std::string label;
  double prob = -1.0;  // Nature only
  int child = -1;      // index into nodes_ or terminals_ (see child_terminal)
  bool child_terminal = false;
};

struct TreeNode {
  std::string id;
  int player = -1;  // 0 = Nature
  std::string infoset;
  std::vector<TreeAction> actions;
  int parent = -1;
};

struct Terminal {
  std::string id;
  VectorXd payoffs;  // one per real player
  int parent = -1;
};

struct InfoSet {
  int player = -1;
  std::string id;                // scoped per player
  std::vector<int> nodes;        // node indices
  std::vector<std::string> actions;  // shared action label set
};

class GameTree {
 public:
  // Parsing validates structure; perfect recall is checked unless the caller
  // opts out (so non-recall trees can still be built and inspected through
  // validate_perfect_recall).
  static GameTree parse(const std::string& text, bool check_recall = true) {
    GameTree t;
    t.parse_lines(text);
    t.link_and_validate(check_recall);
    return t;
  }

  int num_players() const { return players_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_terminals() const { return static_cast<int>(terminals_.size()); }
  int root() const { return root_; }
  const TreeNode& node(int i) const { return nodes_[i]; }
  const Terminal& terminal(int i) const { return terminals_[i]; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<Terminal>& terminals() const { return terminals_; }

  // Information sets of one player, ordered by infoset id.
  std::vector<InfoSet> infosets(int player) const {
    std::map<std::string, InfoSet> by_id;
    for (int i = 0; i < num_nodes(); ++i) {
      const TreeNode& n = nodes_[i];
      if (n.player != player) continue;
      auto& is = by_id[n.infoset];
      is.player = player;
      is.id = n.infoset;
      is.nodes.push_back(i);
      if (is.actions.empty())
        for (const auto& a : n.actions) is.actions.push_back(a.label);
    }
    std::vector<InfoSet> out;
    for (auto& [id, is] : by_id) out.push_back(std::move(is));
    return out;
  }

  // Own-player action sequence from the root to the given node (exclusive):
  // the (infoset id, action label) pairs at the player's ancestor moves.
  std::vector<std::pair<std::string, std::string>> own_sequence(int node_index,
                                                                int player) const {
    std::vector<std::pair<std::string, std::string>> seq;
    int cur = node_index;
    while (true) {
      int par = nodes_[cur].parent;
      if (par < 0) break;
      const TreeNode& pn = nodes_[par];
      if (pn.player == player) {
        for (const auto& a : pn.actions)
          if (!a.child_terminal && a.child == cur)
            seq.emplace_back(pn.infoset, a.label);
      }
      cur = par;
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
  }

  std::vector<std::pair<std::string, std::string>> own_sequence_terminal(
      int terminal_index, int player) const {
    std::vector<std::pair<std::string, std::string>> seq;
    int par = terminals_[terminal_index].parent;
    if (par < 0) return seq;
    const TreeNode& pn = nodes_[par];
    seq = own_sequence(par, player);
    if (pn.player == player) {
      for (const auto& a : pn.actions)
        if (a.child_terminal && a.child == terminal_index)
          seq.emplace_back(pn.infoset, a.label);
    }
    return seq;
  }

  struct RecallReport {
    bool ok = true;
    std::string infoset;
    std::string detail;
  };

  RecallReport validate_perfect_recall() const {
    for (int p = 1; p <= players_; ++p) {
      for (const auto& is : infosets(p)) {
        auto ref = own_sequence(is.nodes[0], p);
        for (size_t i = 1; i < is.nodes.size(); ++i) {
          if (own_sequence(is.nodes[i], p) != ref) {
            RecallReport r;
            r.ok = false;
            r.infoset = is.id;
            r.detail = "player " + std::to_string(p) + " infoset " + is.id +
                       " nodes define different own action sequences";
            return r;
          }
        }
      }
    }
    return {};
  }

  void require_perfect_recall() const {
    auto r = validate_perfect_recall();
    if (!r.ok) throw PerfectRecallViolation(r.detail);
  }

  // A pure strategy: one action index per information set, in infoset order.
  using PureStrategy = std::vector<int>;

  std::vector<PureStrategy> pure_strategies(int player, int cap = 4096) const {
    auto isets = infosets(player);
    long long count = 1;
    for (const auto& is : isets) {
      count *= static_cast<long long>(is.actions.size());
      if (count > cap)
        throw SizeGuardExceeded("player " + std::to_string(player) + " has more than " +
                                std::to_string(cap) + " pure strategies");
    }
    std::vector<PureStrategy> out;
    PureStrategy cur(isets.size(), 0);
    while (true) {
      out.push_back(cur);
      int pos = static_cast<int>(isets.size()) - 1;
      while (pos >= 0) {
        if (++cur[pos] < static_cast<int>(isets[pos].actions.size())) break;
        cur[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
    return out;
  }

  // Probability that Nature's moves allow each terminal; 1 when Nature never
  // moves on the path.
  double nature_weight(int terminal_index) const {
    double w = 1.0;
    int cur_t = terminal_index;
    int par = terminals_[cur_t].parent;
    int prev_terminal = cur_t;
    bool prev_is_terminal = true;
    while (par >= 0) {
      const TreeNode& pn = nodes_[par];
      if (pn.player == 0) {
        for (const auto& a : pn.actions) {
          bool match = prev_is_terminal ? (a.child_terminal && a.child == prev_terminal)
                                        : (!a.child_terminal && a.child == prev_terminal);
          if (match) w *= a.prob;
        }
      }
      prev_terminal = par;
      prev_is_terminal = false;
      par = pn.parent;
    }
    return w;
  }

  // Whether pure profile s (one strategy per real player) reaches a terminal,
  // ignoring Nature (Nature contributes via nature_weight).
  bool profile_reaches(const std::vector<PureStrategy>& profile,
                       const std::vector<std::vector<InfoSet>>& isets,
                       int terminal_index) const {
    int cur = terminal_index;
    bool is_terminal = true;
    int par = terminals_[terminal_index].parent;
    while (par >= 0) {
      const TreeNode& pn = nodes_[par];
      if (pn.player > 0) {
        int p = pn.player - 1;
        int iset_idx = -1;
        for (size_t k = 0; k < isets[p].size(); ++k)
          if (isets[p][k].id == pn.infoset) { iset_idx = static_cast<int>(k); break; }
        int chosen = profile[p][iset_idx];
        const TreeAction& a = pn.actions[chosen];
        bool match = is_terminal ? (a.child_terminal && a.child == cur)
                                 : (!a.child_terminal && a.child == cur);
        if (!match) return false;
      }
      cur = par;
      is_terminal = false;
      par = pn.parent;
    }
    return true;
  }

  // Expected payoff vector at a pure profile, Nature marginalized out.
  VectorXd pure_profile_payoff(const std::vector<PureStrategy>& profile,
                               const std::vector<std::vector<InfoSet>>& isets) const {
    VectorXd out = VectorXd::Zero(players_);
    for (int z = 0; z < num_terminals(); ++z)
      if (profile_reaches(profile, isets, z))
        out += nature_weight(z) * terminals_[z].payoffs;
    return out;
  }

  std::string strategy_label(int player, const PureStrategy& s) const {
    auto isets = infosets(player);
    std::string out;
    for (size_t i = 0; i < isets.size(); ++i) {
      if (i) out += "/";
      out += isets[i].actions[s[i]];
    }
    if (out.empty()) out = "-";
    return out;
  }

 private:
  void parse_lines(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int current_node = -1;
    std::map<std::string, int> node_ids, terminal_ids;

    auto tokens_of = [](const std::string& s) {
      std::istringstream ls(s);
      std::vector<std::string> toks;
      std::string t;
      while (ls >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
      }
      return toks;
    };

    while (std::getline(in, line)) {
      ++lineno;
      auto toks = tokens_of(line);
      if (toks.empty()) continue;
      auto fail = [&](const std::string& msg) -> void {
        throw SyntaxError("line " + std::to_string(lineno) + ": " + msg);
      };
      const std::string& kw = toks[0];
      if (kw == "players") {
        if (toks.size() != 2) fail("expected: players <N>");
        players_ = std::stoi(toks[1]);
        if (players_ < 1) fail("need at least one player");
      } else if (kw == "node") {
        if (toks.size() != 6 || toks[2] != "player" || toks[4] != "infoset")
          fail("expected: node <id> player <p> infoset <iset>");
        if (node_ids.count(toks[1]) || terminal_ids.count(toks[1]))
          throw DuplicateId("node id '" + toks[1] + "' on line " + std::to_string(lineno));
        TreeNode n;
        n.id = toks[1];
        n.player = std::stoi(toks[3]);
        if (n.player < 0 || n.player > players_) fail("player index out of range");
        n.infoset = toks[5];
        node_ids[n.id] = static_cast<int>(nodes_.size());
        current_node = static_cast<int>(nodes_.size());
        nodes_.push_back(std::move(n));
      } else if (kw == "action") {
        if (current_node < 0) fail("action outside a node block");
        TreeAction a;
        size_t i = 1;
        if (i >= toks.size()) fail("expected action label");
        a.label = toks[i++];
        if (i < toks.size() && toks[i] == "prob") {
          ++i;
          if (i >= toks.size()) fail("expected probability value");
          a.prob = std::stod(toks[i++]);
        }
        if (i >= toks.size() || toks[i] != "->") fail("expected '-> <id>'");
        ++i;
        if (i >= toks.size()) fail("expected target id");
        pending_targets_.push_back({current_node,
                                    static_cast<int>(nodes_[current_node].actions.size()),
                                    toks[i], lineno});
        if (nodes_[current_node].player == 0 && a.prob < 0)
          fail("Nature action requires prob");
        if (nodes_[current_node].player != 0 && a.prob >= 0)
          fail("prob only allowed on Nature actions");
        nodes_[current_node].actions.push_back(std::move(a));
      } else if (kw == "terminal") {
        if (toks.size() < 3 || toks[2] != "payoffs")
          fail("expected: terminal <id> payoffs <f1> ... <fN>");
        if (node_ids.count(toks[1]) || terminal_ids.count(toks[1]))
          throw DuplicateId("terminal id '" + toks[1] + "' on line " + std::to_string(lineno));
        if (static_cast<int>(toks.size()) - 3 != players_)
          fail("expected " + std::to_string(players_) + " payoffs");
        Terminal t;
        t.id = toks[1];
        t.payoffs = VectorXd(players_);
        for (int p = 0; p < players_; ++p) t.payoffs[p] = std::stod(toks[3 + p]);
        terminal_ids[t.id] = static_cast<int>(terminals_.size());
        terminals_.push_back(std::move(t));
      } else if (kw == "root") {
        if (toks.size() != 2) fail("expected: root <id>");
        root_id_ = toks[1];
      } else {
        fail("unknown keyword '" + kw + "'");
      }
    }
    node_index_ = std::move(node_ids);
    terminal_index_ = std::move(terminal_ids);
  }

  void link_and_validate(bool check_recall) {
    if (players_ <= 0) throw SyntaxError("missing players declaration");
    if (root_id_.empty()) throw SyntaxError("missing root declaration");
    if (terminal_index_.count(root_id_))
      throw SyntaxError("root must be a decision node, not a terminal");
    auto rit = node_index_.find(root_id_);
    if (rit == node_index_.end()) throw DanglingReference("root id '" + root_id_ + "'");
    root_ = rit->second;

    for (const auto& pt : pending_targets_) {
      auto nit = node_index_.find(pt.target);
      TreeAction& a = nodes_[pt.node].actions[pt.action];
      if (nit != node_index_.end()) {
        a.child = nit->second;
        a.child_terminal = false;
        if (nodes_[nit->second].parent >= 0 || nit->second == root_)
          throw SyntaxError("node '" + pt.target + "' would have two parents or be the root (line " +
                            std::to_string(pt.lineno) + ")");
        nodes_[nit->second].parent = pt.node;
      } else {
        auto tit = terminal_index_.find(pt.target);
        if (tit == terminal_index_.end())
          throw DanglingReference("'" + pt.target + "' on line " + std::to_string(pt.lineno));
        a.child = tit->second;
        a.child_terminal = true;
        if (terminals_[tit->second].parent >= 0)
          throw SyntaxError("terminal '" + pt.target + "' referenced more than once");
        terminals_[tit->second].parent = pt.node;
      }
    }

    for (int i = 0; i < num_nodes(); ++i) {
      if (i != root_ && nodes_[i].parent < 0)
        throw DanglingReference("node '" + nodes_[i].id + "' unreachable from the root");
      if (nodes_[i].actions.empty())
        throw SyntaxError("decision node '" + nodes_[i].id + "' has no actions");
    }
    for (int i = 0; i < num_terminals(); ++i)
      if (terminals_[i].parent < 0)
        throw DanglingReference("terminal '" + terminals_[i].id + "' unreachable");

    // Nature edge probabilities form a distribution at each Nature node.
    for (const auto& n : nodes_) {
      if (n.player != 0) continue;
      double s = 0;
      for (const auto& a : n.actions) {
        if (a.prob < -1e-15) throw NatureProbabilityError("negative probability at " + n.id);
        s += a.prob;
      }
      if (std::abs(s - 1.0) > 1e-12)
        throw NatureProbabilityError("probabilities at node '" + n.id + "' sum to " +
                                     std::to_string(s));
    }

    // Infoset consistency: same player and identical action label sets.
    for (int p = 0; p <= players_; ++p) {
      std::map<std::string, std::vector<std::string>> label_sets;
      for (const auto& n : nodes_) {
        if (n.player != p) continue;
        std::vector<std::string> labels;
        for (const auto& a : n.actions) labels.push_back(a.label);
        auto it = label_sets.find(n.infoset);
        if (it == label_sets.end()) label_sets[n.infoset] = labels;
        else if (it->second != labels)
          throw SyntaxError("infoset '" + n.infoset + "' of player " + std::to_string(p) +
                            " has inconsistent action labels");
      }
    }
    if (check_recall) require_perfect_recall();
  }

  struct PendingTarget {
    int node;
    int action;
    std::string target;
    int lineno;
  };

  int players_ = 0;
  std::vector<TreeNode> nodes_;
  std::vector<Terminal> terminals_;
  int root_ = -1;
  std::string root_id_;
  std::map<std::string, int> node_index_, terminal_index_;
  std::vector<PendingTarget> pending_targets_;
};

}  // namespace polydeg
