#pragma once

// Operational semantics: configurations as traces, production and swap steps,
// bounded membership, enumeration and witness derivations.
//
// Configurations are explored as canonical trace representatives. An
// occurrence is minimal when every earlier occurrence is independent of it;
// firing a production at a minimal occurrence prepends the right-hand side to
// the configuration with that occurrence removed. Equivalence with the raw
// word semantics (explicit swap steps) is covered by the self-test suite.

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "grammar.hpp"
#include "word.hpp"

namespace pccfl {

struct Configuration {
  std::vector<std::string> symbols;
  bool operator==(const Configuration&) const = default;
  bool operator<(const Configuration& o) const { return symbols < o.symbols; }
};

enum class Verdict { yes, no, budget_exhausted };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "true";
    case Verdict::no: return "false";
    case Verdict::budget_exhausted: return "budget exhausted";
  }
  return "?";
}

struct SearchLimits {
  std::uint64_t max_states = 10'000'000;
};

struct DerivationStep {
  enum class Kind { production, swap };
  Kind kind;
  int production = -1;  // index into Grammar::productions; fires at the head
  int swap_index = -1;  // exchanges positions i and i+1
  bool operator==(const DerivationStep&) const = default;
};

struct Derivation {
  Configuration start;
  std::vector<DerivationStep> steps;
  Word word;  // the defined word; one letter per production step
  bool operator==(const Derivation&) const = default;
};

namespace detail {
struct BudgetHit {};
}  // namespace detail

class Engine {
 public:
  explicit Engine(Grammar g) : g_(std::move(g)) {
    auto diags = validate(g_);
    if (!diags.empty())
      throw std::invalid_argument("invalid grammar: " + to_string(diags.front()));
    nts_.assign(g_.nonterminals.begin(), g_.nonterminals.end());
    for (int i = 0; i < static_cast<int>(nts_.size()); ++i) nt_id_[nts_[i]] = i;
    letters_.assign(g_.alphabet.begin(), g_.alphabet.end());
    for (int i = 0; i < static_cast<int>(letters_.size()); ++i)
      letter_id_[letters_[i]] = i;
    const int n = static_cast<int>(nts_.size());
    indep_.assign(static_cast<std::size_t>(n) * n, 0);
    for (const auto& p : g_.independence) {
      int a = nt_id_.at(p.first), b = nt_id_.at(p.second);
      indep_[a * n + b] = indep_[b * n + a] = 1;
    }
    prods_of_.assign(n, {});
    for (int i = 0; i < static_cast<int>(g_.productions.size()); ++i) {
      const auto& p = g_.productions[i];
      CProd cp;
      cp.index = i;
      cp.lhs = nt_id_.at(p.lhs);
      cp.letter = letter_id_.at(p.letter);
      for (const auto& s : p.rhs) cp.rhs.push_back(nt_id_.at(s));
      prods_of_[cp.lhs].push_back(static_cast<int>(prods_.size()));
      prods_.push_back(std::move(cp));
    }
    start_ = nt_id_.at(g_.start);
  }

  const Grammar& grammar() const { return g_; }
  const std::vector<std::string>& letter_names() const { return letters_; }
  const std::vector<std::string>& nonterminal_names() const { return nts_; }

  bool independent_ids(int a, int b) const {
    return indep_[a * nts_.size() + b] != 0;
  }

  std::vector<int> to_ids(const Configuration& c) const {
    std::vector<int> ids;
    ids.reserve(c.symbols.size());
    for (const auto& s : c.symbols) {
      auto it = nt_id_.find(s);
      if (it == nt_id_.end())
        throw std::invalid_argument("unknown non-terminal: " + s);
      ids.push_back(it->second);
    }
    return ids;
  }
  Configuration from_ids(const std::vector<int>& ids) const {
    Configuration c;
    c.symbols.reserve(ids.size());
    for (int i : ids) c.symbols.push_back(nts_[i]);
    return c;
  }
  std::vector<int> word_ids(const Word& w) const {
    std::vector<int> ids;
    ids.reserve(w.size());
    for (const auto& t : w) {
      auto it = letter_id_.find(t);
      if (it == letter_id_.end())
        throw std::invalid_argument("letter outside the alphabet: " + t);
      ids.push_back(it->second);
    }
    return ids;
  }

  // Greedy normal form: repeatedly take the least symbol among minimal
  // occurrences. Yields the lexicographically least member of the trace class.
  std::vector<int> canonical_ids(std::vector<int> cfg) const {
    std::vector<int> out;
    out.reserve(cfg.size());
    while (!cfg.empty()) {
      int best = -1;
      for (std::size_t p = 0; p < cfg.size(); ++p) {
        bool minimal = true;
        for (std::size_t q = 0; q < p; ++q)
          if (!independent_ids(cfg[q], cfg[p])) { minimal = false; break; }
        if (minimal && (best < 0 || cfg[p] < cfg[best]))
          best = static_cast<int>(p);
      }
      out.push_back(cfg[best]);
      cfg.erase(cfg.begin() + best);
    }
    return out;
  }

  Configuration canonical(const Configuration& c) const {
    return from_ids(canonical_ids(to_ids(c)));
  }

  bool swap_reachable(const Configuration& a, const Configuration& b) const {
    return canonical_ids(to_ids(a)) == canonical_ids(to_ids(b));
  }

  std::vector<std::size_t> minimal_positions(const std::vector<int>& cfg) const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < cfg.size(); ++p) {
      bool minimal = true;
      for (std::size_t q = 0; q < p; ++q)
        if (!independent_ids(cfg[q], cfg[p])) { minimal = false; break; }
      if (minimal) out.push_back(p);
    }
    return out;
  }

  // All (letter, canonical successor) pairs, duplicates collapsed, sorted.
  std::vector<std::pair<std::string, Configuration>> successors(
      const Configuration& c) const {
    auto cfg = to_ids(c);
    std::set<std::pair<int, std::vector<int>>> seen;
    for (std::size_t p : minimal_positions(cfg)) {
      std::vector<int> rest = cfg;
      rest.erase(rest.begin() + p);
      for (int pi : prods_of_[cfg[p]]) {
        const CProd& pr = prods_[pi];
        std::vector<int> next = pr.rhs;
        next.insert(next.end(), rest.begin(), rest.end());
        seen.insert({pr.letter, canonical_ids(std::move(next))});
      }
    }
    std::vector<std::pair<std::string, Configuration>> out;
    for (const auto& [l, cfg2] : seen) out.push_back({letters_[l], from_ids(cfg2)});
    return out;
  }

  Verdict member(const Word& w, const SearchLimits& lim = {}) const {
    return member_from(Configuration{{g_.start}}, w, lim);
  }

  Verdict member_from(const Configuration& from, const Word& w,
                      const SearchLimits& lim = {}) const {
    if (w.empty())
      throw std::invalid_argument("the empty word is never generated");
    auto word = word_ids(w);
    auto cfg0 = canonical_ids(to_ids(from));
    std::unordered_map<std::vector<int>, bool, detail::IntVecHash> memo;
    std::uint64_t visited = 0;
    std::function<bool(std::size_t, const std::vector<int>&)> rec =
        [&](std::size_t pos, const std::vector<int>& cfg) -> bool {
      if (++visited > lim.max_states) throw detail::BudgetHit{};
      if (pos == word.size()) return cfg.empty();
      if (cfg.empty() || cfg.size() > word.size() - pos) return false;
      std::vector<int> key = cfg;
      key.push_back(static_cast<int>(pos) | (1 << 28));
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      bool ok = false;
      for (std::size_t p : minimal_positions(cfg)) {
        std::vector<int> rest = cfg;
        rest.erase(rest.begin() + p);
        for (int pi : prods_of_[cfg[p]]) {
          const CProd& pr = prods_[pi];
          if (pr.letter != word[pos]) continue;
          std::vector<int> next = pr.rhs;
          next.insert(next.end(), rest.begin(), rest.end());
          if (rec(pos + 1, canonical_ids(std::move(next)))) { ok = true; break; }
        }
        if (ok) break;
      }
      memo.emplace(std::move(key), ok);
      return ok;
    };
    try {
      return rec(0, cfg0) ? Verdict::yes : Verdict::no;
    } catch (const detail::BudgetHit&) {
      return Verdict::budget_exhausted;
    }
  }

  struct Enumeration {
    std::vector<Word> words;  // sorted length-then-lexicographically
    bool budget_exhausted = false;
  };

  Enumeration enumerate(int max_len, const SearchLimits& lim = {}) const {
    if (max_len < 0) throw std::invalid_argument("max_len must be >= 0");
    Enumeration result;
    std::set<std::vector<int>> found;
    // BFS over (emitted word, canonical configuration).
    using State = std::pair<std::vector<int>, std::vector<int>>;
    std::vector<State> frontier{{{}, canonical_ids({start_})}};
    std::unordered_set<std::vector<int>, detail::IntVecHash> seen;
    std::uint64_t visited = 0;
    auto key_of = [](const State& st) {
      std::vector<int> k = st.first;
      k.push_back(-1);
      k.insert(k.end(), st.second.begin(), st.second.end());
      return k;
    };
    seen.insert(key_of(frontier[0]));
    while (!frontier.empty()) {
      std::vector<State> next_frontier;
      for (const auto& [w, cfg] : frontier) {
        if (cfg.empty()) {
          found.insert(w);
          continue;
        }
        if (w.size() + cfg.size() > static_cast<std::size_t>(max_len)) continue;
        for (std::size_t p : minimal_positions(cfg)) {
          std::vector<int> rest = cfg;
          rest.erase(rest.begin() + p);
          for (int pi : prods_of_[cfg[p]]) {
            const CProd& pr = prods_[pi];
            std::vector<int> ncfg = pr.rhs;
            ncfg.insert(ncfg.end(), rest.begin(), rest.end());
            State st{w, canonical_ids(std::move(ncfg))};
            st.first.push_back(pr.letter);
            if (st.first.size() + st.second.size() >
                static_cast<std::size_t>(max_len))
              continue;
            auto k = key_of(st);
            if (seen.insert(std::move(k)).second) {
              if (++visited > lim.max_states) {
                result.budget_exhausted = true;
                goto done;
              }
              next_frontier.push_back(std::move(st));
            }
          }
        }
      }
      frontier = std::move(next_frontier);
    }
  done:
    for (const auto& ids : found) {
      Word w;
      w.reserve(ids.size());
      for (int l : ids) w.push_back(letters_[l]);
      result.words.push_back(std::move(w));
    }
    std::sort(result.words.begin(), result.words.end(), length_lex_less);
    return result;
  }

  struct WitnessResult {
    std::optional<Derivation> derivation;
    bool budget_exhausted = false;
  };

  WitnessResult witness(const Word& w, const SearchLimits& lim = {}) const {
    return witness_from(Configuration{{g_.start}}, w, lim);
  }

  // Searches raw configurations so the returned derivation carries explicit
  // swap steps; failure states are memoized on the canonical form.
  WitnessResult witness_from(const Configuration& from, const Word& w,
                             const SearchLimits& lim = {}) const {
    if (w.empty())
      throw std::invalid_argument("the empty word is never generated");
    auto word = word_ids(w);
    auto raw0 = to_ids(from);
    std::unordered_set<std::vector<int>, detail::IntVecHash> failed;
    std::uint64_t visited = 0;
    std::vector<DerivationStep> steps;
    std::function<bool(std::size_t, const std::vector<int>&)> rec =
        [&](std::size_t pos, const std::vector<int>& raw) -> bool {
      if (++visited > lim.max_states) throw detail::BudgetHit{};
      if (pos == word.size()) return raw.empty();
      if (raw.empty() || raw.size() > word.size() - pos) return false;
      std::vector<int> key = canonical_ids(raw);
      key.push_back(static_cast<int>(pos) | (1 << 28));
      if (failed.count(key)) return false;
      for (std::size_t p : minimal_positions(raw)) {
        for (int pi : prods_of_[raw[p]]) {
          const CProd& pr = prods_[pi];
          if (pr.letter != word[pos]) continue;
          std::size_t mark = steps.size();
          // Bring the occurrence to the head with explicit swaps, then fire.
          for (std::size_t i = p; i-- > 0;)
            steps.push_back({DerivationStep::Kind::swap, -1,
                             static_cast<int>(i)});
          steps.push_back({DerivationStep::Kind::production, pr.index, -1});
          std::vector<int> next = pr.rhs;
          for (std::size_t q = 0; q < raw.size(); ++q)
            if (q != p) next.push_back(raw[q]);
          if (rec(pos + 1, next)) return true;
          steps.resize(mark);
        }
      }
      failed.insert(std::move(key));
      return false;
    };
    WitnessResult out;
    try {
      if (rec(0, raw0)) {
        Derivation d;
        d.start = from;
        d.steps = steps;
        d.word = w;
        out.derivation = std::move(d);
      }
    } catch (const detail::BudgetHit&) {
      out.budget_exhausted = true;
    }
    return out;
  }

  // Replays a derivation from its start configuration; throws on an illegal
  // step, naming its index. Returns the final configuration.
  Configuration replay(const Derivation& d) const {
    std::vector<int> cfg = to_ids(d.start);
    Word emitted;
    for (std::size_t i = 0; i < d.steps.size(); ++i) {
      const auto& st = d.steps[i];
      if (st.kind == DerivationStep::Kind::swap) {
        if (st.swap_index < 0 ||
            static_cast<std::size_t>(st.swap_index) + 1 >= cfg.size())
          throw std::invalid_argument("step " + std::to_string(i) +
                                      ": swap index out of range");
        int a = cfg[st.swap_index], b = cfg[st.swap_index + 1];
        if (!independent_ids(a, b))
          throw std::invalid_argument("step " + std::to_string(i) +
                                      ": swapped symbols are dependent");
        std::swap(cfg[st.swap_index], cfg[st.swap_index + 1]);
      } else {
        if (st.production < 0 ||
            st.production >= static_cast<int>(g_.productions.size()))
          throw std::invalid_argument("step " + std::to_string(i) +
                                      ": unknown production");
        const CProd& pr = prods_[st.production];
        if (cfg.empty() || cfg.front() != pr.lhs)
          throw std::invalid_argument("step " + std::to_string(i) +
                                      ": head does not match production");
        cfg.erase(cfg.begin());
        cfg.insert(cfg.begin(), pr.rhs.begin(), pr.rhs.end());
        emitted.push_back(letters_[pr.letter]);
      }
    }
    if (!d.word.empty() && emitted != d.word)
      throw std::invalid_argument("derivation word does not match its steps");
    return from_ids(cfg);
  }

  struct CProd {
    int index;
    int lhs;
    int letter;
    std::vector<int> rhs;
  };
  const std::vector<CProd>& compiled_productions() const { return prods_; }

 private:
  Grammar g_;
  std::vector<std::string> nts_;
  std::map<std::string, int> nt_id_;
  std::vector<std::string> letters_;
  std::map<std::string, int> letter_id_;
  std::vector<char> indep_;
  std::vector<CProd> prods_;
  std::vector<std::vector<int>> prods_of_;
  int start_ = 0;
};

// Free-function forms; each compiles the grammar on entry.
inline Configuration canonical(const Grammar& g, const Configuration& c) {
  return Engine(g).canonical(c);
}
inline bool swap_reachable(const Grammar& g, const Configuration& a,
                           const Configuration& b) {
  return Engine(g).swap_reachable(a, b);
}
inline std::vector<std::pair<std::string, Configuration>> successors(
    const Grammar& g, const Configuration& c) {
  return Engine(g).successors(c);
}
inline Verdict member(const Grammar& g, const Word& w,
                      const SearchLimits& lim = {}) {
  return Engine(g).member(w, lim);
}
inline Engine::Enumeration enumerate_words(const Grammar& g, int max_len,
                                           const SearchLimits& lim = {}) {
  return Engine(g).enumerate(max_len, lim);
}
inline Engine::WitnessResult derive_witness(const Grammar& g, const Word& w,
                                            const SearchLimits& lim = {}) {
  return Engine(g).witness(w, lim);
}

}  // namespace pccfl
