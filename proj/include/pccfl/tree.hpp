#pragma once

// Colored derivation trees and polynomially-checkable membership certificates.
//
// Every derivation induces a tree: the node that fires a production becomes
// the parent of the fresh colors its right-hand side mints. A certificate is
// a tree plus a total firing order; checking it replays the order against a
// live configuration of colors and enforces the minimality condition.

#include <map>

#include "engine.hpp"
#include "grammar.hpp"

#include <json.hpp>

namespace pccfl {

struct TreeNode {
  int id;                     // color; unique, positive
  std::string label;          // non-terminal
  int production;             // index into Grammar::productions
  std::vector<int> children;  // fresh colors minted by the production, in order
  bool operator==(const TreeNode&) const = default;
};

class DerivationTree {
 public:
  // Validates shape: ids unique, children resolvable and used exactly once,
  // each node's production has the node's label on the left and the children
  // labels as its right-hand side, in order.
  static DerivationTree make(const Grammar& g, std::vector<TreeNode> nodes,
                             int root) {
    DerivationTree t;
    for (auto& n : nodes) {
      if (n.id <= 0) throw std::invalid_argument("node ids must be positive");
      if (!t.nodes_.emplace(n.id, n).second)
        throw std::invalid_argument("duplicate node id " + std::to_string(n.id));
    }
    if (!t.nodes_.count(root))
      throw std::invalid_argument("root id not among nodes");
    t.root_ = root;
    std::map<int, int> referenced;
    for (const auto& [id, n] : t.nodes_) {
      if (n.production < 0 ||
          n.production >= static_cast<int>(g.productions.size()))
        throw std::invalid_argument("node " + std::to_string(id) +
                                    ": unknown production index");
      const Production& p = g.productions[n.production];
      if (p.lhs != n.label)
        throw std::invalid_argument("node " + std::to_string(id) +
                                    ": label does not match its production");
      if (n.children.size() != p.rhs.size())
        throw std::invalid_argument("node " + std::to_string(id) +
                                    ": child count does not match production");
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        auto it = t.nodes_.find(n.children[i]);
        if (it == t.nodes_.end())
          throw std::invalid_argument("node " + std::to_string(id) +
                                      ": unknown child id");
        if (it->second.label != p.rhs[i])
          throw std::invalid_argument("node " + std::to_string(id) +
                                      ": child label does not match production");
        referenced[n.children[i]]++;
      }
    }
    for (const auto& [id, n] : t.nodes_) {
      int refs = referenced.count(id) ? referenced[id] : 0;
      if (id == root ? refs != 0 : refs != 1)
        throw std::invalid_argument("node " + std::to_string(id) +
                                    ": not a tree");
    }
    return t;
  }

  const TreeNode& node(int id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end())
      throw std::invalid_argument("unknown node " + std::to_string(id));
    return it->second;
  }
  bool has_node(int id) const { return nodes_.count(id) > 0; }
  int root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  std::vector<int> ids() const {
    std::vector<int> out;
    for (const auto& [id, n] : nodes_) out.push_back(id);
    return out;
  }
  std::set<int> subtree_ids(int id) const {
    std::set<int> out;
    std::vector<int> stack{node(id).id};
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      out.insert(cur);
      for (int c : node(cur).children) stack.push_back(c);
    }
    return out;
  }
  int max_id() const { return nodes_.empty() ? 0 : nodes_.rbegin()->first; }
  bool operator==(const DerivationTree&) const = default;

  // Shape-only construction for tree surgery whose node data comes from
  // already-validated trees of the same grammar.
  static DerivationTree from_checked(const std::vector<TreeNode>& nodes,
                                     int root) {
    DerivationTree t;
    for (const auto& n : nodes) {
      if (n.id <= 0) throw std::invalid_argument("node ids must be positive");
      if (!t.nodes_.emplace(n.id, n).second)
        throw std::invalid_argument("duplicate node id " + std::to_string(n.id));
    }
    if (!t.nodes_.count(root))
      throw std::invalid_argument("root id not among nodes");
    t.root_ = root;
    std::map<int, int> referenced;
    for (const auto& [id, n] : t.nodes_)
      for (int c : n.children) {
        if (!t.nodes_.count(c))
          throw std::invalid_argument("node " + std::to_string(id) +
                                      ": unknown child id");
        referenced[c]++;
      }
    for (const auto& [id, n] : t.nodes_) {
      int refs = referenced.count(id) ? referenced[id] : 0;
      if (id == root ? refs != 0 : refs != 1)
        throw std::invalid_argument("node " + std::to_string(id) +
                                    ": not a tree");
    }
    return t;
  }

 private:
  std::map<int, TreeNode> nodes_;
  int root_ = 0;
};

struct Certificate {
  DerivationTree tree;
  std::vector<int> order;  // order[i] = color fired at word position i
  bool operator==(const Certificate&) const = default;
};

// ---------------------------------------------------------------------------
// Tree from a derivation

// Replays the derivation with the coloring discipline: swaps carry colors
// along, a production step retires the head color and mints fresh colors for
// the right-hand side. The derivation must start from a single non-terminal.
inline std::pair<DerivationTree, std::vector<int>> tree_from_derivation(
    const Grammar& g, const Derivation& d) {
  if (d.start.symbols.size() != 1)
    throw std::invalid_argument("derivation must start from one non-terminal");
  Engine eng(g);
  struct Occ { int color; std::string label; };
  std::vector<Occ> cfg{{1, d.start.symbols[0]}};
  int next_color = 2;
  std::map<int, TreeNode> pending;  // color -> node filled when it retires
  std::vector<int> order;
  pending[1] = TreeNode{1, d.start.symbols[0], -1, {}};
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const auto& st = d.steps[i];
    if (st.kind == DerivationStep::Kind::swap) {
      if (st.swap_index < 0 ||
          static_cast<std::size_t>(st.swap_index) + 1 >= cfg.size())
        throw std::invalid_argument("step " + std::to_string(i) +
                                    ": swap index out of range");
      const auto& a = cfg[st.swap_index];
      const auto& b = cfg[st.swap_index + 1];
      if (!g.independent(a.label, b.label))
        throw std::invalid_argument("step " + std::to_string(i) +
                                    ": swapped symbols are dependent");
      std::swap(cfg[st.swap_index], cfg[st.swap_index + 1]);
    } else {
      if (st.production < 0 ||
          st.production >= static_cast<int>(g.productions.size()))
        throw std::invalid_argument("step " + std::to_string(i) +
                                    ": unknown production");
      const Production& p = g.productions[st.production];
      if (cfg.empty() || cfg.front().label != p.lhs)
        throw std::invalid_argument("step " + std::to_string(i) +
                                    ": head does not match production");
      Occ head = cfg.front();
      cfg.erase(cfg.begin());
      TreeNode& n = pending[head.color];
      n.label = head.label;
      n.production = st.production;
      std::vector<Occ> fresh;
      for (const auto& s : p.rhs) {
        int c = next_color++;
        n.children.push_back(c);
        pending[c] = TreeNode{c, s, -1, {}};
        fresh.push_back({c, s});
      }
      cfg.insert(cfg.begin(), fresh.begin(), fresh.end());
      order.push_back(head.color);
    }
  }
  if (!cfg.empty())
    throw std::invalid_argument("derivation does not end at the empty configuration");
  std::vector<TreeNode> nodes;
  for (auto& [c, n] : pending) nodes.push_back(n);
  return {DerivationTree::make(g, std::move(nodes), 1), order};
}

// ---------------------------------------------------------------------------
// Certificate verification

// Polynomial check: process colors in the given order against a live
// configuration; a color may fire only while every live color to its left is
// independent of its label, must emit the next word letter, and is replaced
// by its children at the head.
inline bool verify_certificate(const Grammar& g, const Word& w,
                               const Certificate& cert) {
  if (w.size() != cert.tree.size() || w.size() != cert.order.size())
    throw std::invalid_argument("word length, node count and order length must agree");
  {
    std::set<int> ids(cert.order.begin(), cert.order.end());
    if (ids.size() != cert.order.size())
      throw std::invalid_argument("order is not a permutation of the nodes");
    for (int id : ids)
      if (!cert.tree.has_node(id))
        throw std::invalid_argument("order mentions unknown node " + std::to_string(id));
  }
  if (cert.tree.node(cert.tree.root()).label != g.start) return false;
  std::vector<int> live{cert.tree.root()};
  for (std::size_t i = 0; i < cert.order.size(); ++i) {
    int color = cert.order[i];
    auto it = std::find(live.begin(), live.end(), color);
    if (it == live.end()) return false;
    std::size_t p = static_cast<std::size_t>(it - live.begin());
    const TreeNode& n = cert.tree.node(color);
    for (std::size_t q = 0; q < p; ++q)
      if (!g.independent(cert.tree.node(live[q]).label, n.label)) return false;
    if (g.productions[n.production].letter != w[i]) return false;
    live.erase(live.begin() + p);
    live.insert(live.begin(), n.children.begin(), n.children.end());
  }
  return live.empty();
}

// ---------------------------------------------------------------------------
// Words of a tree

struct TreeWords {
  std::vector<Word> words;  // sorted length-then-lexicographically
  bool limit_exhausted = false;
};

// All words certified by some firing order of the tree, up to `limit` words.
inline TreeWords words_of_tree(const Grammar& g, const DerivationTree& tree,
                               std::size_t limit) {
  if (limit == 0) throw std::invalid_argument("limit must be positive");
  TreeWords out;
  std::set<Word> words;
  // Memoize suffix word sets on a canonical representative of the live trace.
  std::map<std::vector<int>, std::set<Word>> memo;
  bool exhausted = false;
  auto canonical_live = [&](std::vector<int> live) {
    std::vector<int> key;
    while (!live.empty()) {
      int best = -1;
      for (std::size_t p = 0; p < live.size(); ++p) {
        bool minimal = true;
        for (std::size_t q = 0; q < p; ++q)
          if (!g.independent(tree.node(live[q]).label,
                             tree.node(live[p]).label)) {
            minimal = false;
            break;
          }
        if (minimal &&
            (best < 0 ||
             std::pair(tree.node(live[p]).label, live[p]) <
                 std::pair(tree.node(live[best]).label, live[best])))
          best = static_cast<int>(p);
      }
      key.push_back(live[best]);
      live.erase(live.begin() + best);
    }
    return key;
  };
  std::function<std::set<Word>(const std::vector<int>&)> suffixes =
      [&](const std::vector<int>& live) -> std::set<Word> {
    if (live.empty()) return {Word{}};
    auto key = canonical_live(live);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::set<Word> result;
    for (std::size_t p = 0; p < live.size() && !exhausted; ++p) {
      bool minimal = true;
      for (std::size_t q = 0; q < p; ++q)
        if (!g.independent(tree.node(live[q]).label, tree.node(live[p]).label)) {
          minimal = false;
          break;
        }
      if (!minimal) continue;
      const TreeNode& n = tree.node(live[p]);
      std::vector<int> next(n.children.begin(), n.children.end());
      for (std::size_t q = 0; q < live.size(); ++q)
        if (q != p) next.push_back(live[q]);
      for (const auto& suffix : suffixes(next)) {
        Word w{g.productions[n.production].letter};
        w.insert(w.end(), suffix.begin(), suffix.end());
        result.insert(std::move(w));
        if (result.size() > limit) { exhausted = true; break; }
      }
    }
    memo[key] = result;
    return result;
  };
  words = suffixes({tree.root()});
  out.limit_exhausted = exhausted || words.size() > limit;
  out.words.assign(words.begin(), words.end());
  std::sort(out.words.begin(), out.words.end(), length_lex_less);
  if (out.words.size() > limit) out.words.resize(limit);
  return out;
}

// ---------------------------------------------------------------------------
// Structural properties

// Letters of the word whose firing color lies in the subtree rooted at node.
inline Word induced_subword(const Word& w, const Certificate& cert, int node) {
  auto sub = cert.tree.subtree_ids(node);
  Word out;
  for (std::size_t i = 0; i < cert.order.size() && i < w.size(); ++i)
    if (sub.count(cert.order[i])) out.push_back(w[i]);
  return out;
}

struct InfixSplit {
  Word prefix, infix, suffix;
  bool operator==(const InfixSplit&) const = default;
};

// Rearranges the subword induced by `node` into an infix: prefix is the part
// of the word before the subword's first letter, suffix is the remaining
// complement. prefix + infix + suffix is again in the language.
inline InfixSplit rearrange_to_infix(const Grammar&, const Word& w,
                                     const Certificate& cert, int node) {
  auto sub = cert.tree.subtree_ids(node);
  InfixSplit out;
  std::size_t first = w.size();
  for (std::size_t i = 0; i < w.size(); ++i)
    if (sub.count(cert.order[i])) { first = i; break; }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (sub.count(cert.order[i])) out.infix.push_back(w[i]);
    else if (i < first) out.prefix.push_back(w[i]);
    else out.suffix.push_back(w[i]);
  }
  return out;
}

// Replaces the subtree rooted at `node` by `replacement` (same label at the
// root); replacement colors are shifted into a fresh range.
inline DerivationTree substitute(const DerivationTree& tree, int node,
                                 const DerivationTree& replacement) {
  const TreeNode& target = tree.node(node);
  const TreeNode& rep_root = replacement.node(replacement.root());
  if (target.label != rep_root.label)
    throw std::invalid_argument("replacement root label " + rep_root.label +
                                " does not match node label " + target.label);
  int shift = tree.max_id();
  auto removed = tree.subtree_ids(node);
  std::vector<TreeNode> nodes;
  for (int id : tree.ids()) {
    if (removed.count(id)) continue;
    TreeNode n = tree.node(id);
    for (int& c : n.children)
      if (c == node) c = replacement.root() + shift;
    nodes.push_back(std::move(n));
  }
  for (int id : replacement.ids()) {
    TreeNode n = replacement.node(id);
    n.id += shift;
    for (int& c : n.children) c += shift;
    nodes.push_back(std::move(n));
  }
  int new_root = tree.root() == node ? replacement.root() + shift : tree.root();
  return DerivationTree::from_checked(nodes, new_root);
}

// ---------------------------------------------------------------------------
// JSON exchange format

inline nlohmann::ordered_json certificate_json(const Certificate& cert) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (int id : cert.tree.ids()) {
    const TreeNode& n = cert.tree.node(id);
    nlohmann::ordered_json jn;
    jn["id"] = n.id;
    jn["label"] = n.label;
    jn["production"] = n.production;
    jn["children"] = n.children;
    j["nodes"].push_back(std::move(jn));
  }
  j["root"] = cert.tree.root();
  j["order"] = cert.order;
  return j;
}

inline std::string certificate_to_json(const Certificate& cert) {
  return certificate_json(cert).dump();
}

inline Certificate certificate_from_json(const Grammar& g,
                                         const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<TreeNode> nodes;
  for (const auto& jn : j.at("nodes")) {
    TreeNode n;
    n.id = jn.at("id").get<int>();
    n.label = jn.at("label").get<std::string>();
    n.production = jn.at("production").get<int>();
    n.children = jn.at("children").get<std::vector<int>>();
    nodes.push_back(std::move(n));
  }
  Certificate cert{DerivationTree::make(g, std::move(nodes), j.at("root").get<int>()),
                   j.at("order").get<std::vector<int>>()};
  return cert;
}

}  // namespace pccfl
