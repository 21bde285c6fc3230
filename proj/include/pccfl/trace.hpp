#pragma once

// Trace equivalence over alphabet letters and trace closures of context-free
// languages: words are equivalent when adjacent independent letters may be
// swapped into one another.

#include <deque>

#include "engine.hpp"
#include "grammar.hpp"

namespace pccfl {

// Greedy normal form on letters; same construction as for configurations.
inline Word trace_canonical(const Word& w, const LetterIndependence& indep) {
  Word rest = w;
  Word out;
  out.reserve(w.size());
  while (!rest.empty()) {
    int best = -1;
    for (std::size_t p = 0; p < rest.size(); ++p) {
      bool minimal = true;
      for (std::size_t q = 0; q < p; ++q)
        if (!indep.independent(rest[q], rest[p])) { minimal = false; break; }
      if (minimal && (best < 0 || rest[p] < rest[best]))
        best = static_cast<int>(p);
    }
    out.push_back(rest[best]);
    rest.erase(rest.begin() + best);
  }
  return out;
}

inline bool word_trace_equivalent(const Word& u, const Word& v,
                                  const LetterIndependence& indep) {
  if (u.size() != v.size()) return false;
  return trace_canonical(u, indep) == trace_canonical(v, indep);
}

struct TraceClassLimits {
  std::size_t max_word_len = 14;
  std::uint64_t max_class_size = 1'000'000;
};

struct TraceClassResult {
  std::vector<Word> words;  // sorted
  bool budget_exhausted = false;
};

// The full finite equivalence class, via the fixpoint of adjacent swaps.
inline TraceClassResult trace_class(const Word& w,
                                    const LetterIndependence& indep,
                                    const TraceClassLimits& lim = {}) {
  TraceClassResult out;
  if (w.size() > lim.max_word_len) {
    out.budget_exhausted = true;
    return out;
  }
  std::set<Word> seen{w};
  std::deque<Word> queue{w};
  while (!queue.empty()) {
    Word cur = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (!indep.independent(cur[i], cur[i + 1])) continue;
      Word next = cur;
      std::swap(next[i], next[i + 1]);
      if (seen.insert(next).second) {
        if (seen.size() > lim.max_class_size) {
          out.budget_exhausted = true;
          out.words.assign(seen.begin(), seen.end());
          return out;
        }
        queue.push_back(std::move(next));
      }
    }
  }
  out.words.assign(seen.begin(), seen.end());
  return out;
}

// Membership in the trace closure of a plain context-free language: some
// member of the trace class must be accepted by the grammar. The grammar must
// carry no non-terminal independence.
inline Verdict closure_member(const Grammar& cfg, const LetterIndependence& indep,
                              const Word& w, const TraceClassLimits& class_lim = {},
                              const SearchLimits& lim = {}) {
  if (!cfg.independence.empty())
    throw std::invalid_argument(
        "trace closure expects a plain context-free grammar "
        "(empty non-terminal independence)");
  if (w.size() > class_lim.max_word_len) return Verdict::budget_exhausted;
  Engine eng(cfg);
  for (const auto& t : w)
    if (!cfg.alphabet.count(t)) return Verdict::no;
  // Explore the class incrementally and stop at the first accepted member.
  std::set<Word> seen{w};
  std::deque<Word> queue{w};
  bool budget = false;
  while (!queue.empty()) {
    Word cur = queue.front();
    queue.pop_front();
    Verdict v = eng.member(cur, lim);
    if (v == Verdict::yes) return Verdict::yes;
    if (v == Verdict::budget_exhausted) budget = true;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (!indep.independent(cur[i], cur[i + 1])) continue;
      Word next = cur;
      std::swap(next[i], next[i + 1]);
      if (seen.insert(next).second) {
        if (seen.size() > class_lim.max_class_size) return Verdict::budget_exhausted;
        queue.push_back(std::move(next));
      }
    }
  }
  return budget ? Verdict::budget_exhausted : Verdict::no;
}

// Parses "b c,a d" style pair lists from the command line.
inline LetterIndependence parse_letter_independence(const std::string& text) {
  LetterIndependence out;
  out.pairs = detail::parse_pair_list(text, 0);
  return out;
}

}  // namespace pccfl
