#pragma once

// Executable pumping checks. A decomposition (x, y, z, s, t) is verified
// against a structural condition that anchors it inside the witness word and
// against the pumped family x s^m y t^m z for every m up to M. The search is
// exhaustive over all decompositions consistent with the structure, so a
// "none" outcome is a genuine finite-scale refutation up to M.
//
// Modes:
//   shuffle      w in x((s(y||t))||z),  1 <= |s|, |syt| <= N,  pump x s^m y t^m z
//   shuffle-alt  like shuffle but a fixed subword y' with w in x(y'||z),
//                y' in s(y||t); pumps x s^m y' t^m z
//   concat       w = xyz, 1 <= |st| <= N, s and t arbitrary alphabet words
//   ccfl         w in x(s||y), 1 <= |s| <= N, one pumping position: x s^m y

#include <functional>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "engine.hpp"
#include "mpda.hpp"
#include "pa.hpp"
#include "word.hpp"

#include <json.hpp>

namespace pccfl {

// True iff w is an interleaving of u and v. Dynamic programming over prefix
// pairs, O(|u| * |v|).
inline bool interleaving_member(const Word& w, const Word& u, const Word& v) {
  if (w.size() != u.size() + v.size()) return false;
  std::vector<char> reach((u.size() + 1) * (v.size() + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> char& {
    return reach[i * (v.size() + 1) + j];
  };
  at(0, 0) = 1;
  for (std::size_t i = 0; i <= u.size(); ++i)
    for (std::size_t j = 0; j <= v.size(); ++j) {
      if (!at(i, j)) continue;
      if (i < u.size() && w[i + j] == u[i]) at(i + 1, j) = 1;
      if (j < v.size() && w[i + j] == v[j]) at(i, j + 1) = 1;
    }
  return at(u.size(), v.size()) != 0;
}

// The full interleaving set u || v.
inline std::vector<Word> interleavings(const Word& u, const Word& v) {
  std::set<Word> out;
  std::function<void(std::size_t, std::size_t, Word&)> rec =
      [&](std::size_t i, std::size_t j, Word& acc) {
        if (i == u.size() && j == v.size()) {
          out.insert(acc);
          return;
        }
        if (i < u.size()) {
          acc.push_back(u[i]);
          rec(i + 1, j, acc);
          acc.pop_back();
        }
        if (j < v.size()) {
          acc.push_back(v[j]);
          rec(i, j + 1, acc);
          acc.pop_back();
        }
      };
  Word acc;
  rec(0, 0, acc);
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Language oracles

class LanguageOracle {
 public:
  // `fn` is only consulted for non-empty words over the alphabet; anything
  // else is rejected outright (the backed language classes never contain the
  // empty word).
  static LanguageOracle from_function(std::string name,
                                      std::vector<std::string> alphabet,
                                      std::function<Verdict(const Word&)> fn) {
    LanguageOracle o;
    o.name_ = std::move(name);
    o.alphabet_ = std::move(alphabet);
    std::sort(o.alphabet_.begin(), o.alphabet_.end());
    o.fn_ = std::move(fn);
    return o;
  }
  static LanguageOracle from_grammar(Grammar g) {
    auto eng = std::make_shared<Engine>(std::move(g));
    return from_function("grammar", eng->letter_names(),
                         [eng](const Word& w) { return eng->member(w); });
  }
  static LanguageOracle from_mpda(Mpda m) {
    auto shared = std::make_shared<Mpda>(std::move(m));
    std::set<std::string> letters;
    for (const auto& t : shared->transitions) letters.insert(t.letter);
    return from_function("mpda", {letters.begin(), letters.end()},
                         [shared](const Word& w) { return accepts(*shared, w); });
  }
  static LanguageOracle from_pa(PaGrammar g) {
    auto shared = std::make_shared<PaGrammar>(std::move(g));
    return from_function(
        "pa-grammar", {shared->alphabet.begin(), shared->alphabet.end()},
        [shared](const Word& w) { return pa_member(*shared, w); });
  }
  static LanguageOracle from_predicate(std::string name,
                                       std::vector<std::string> alphabet,
                                       std::function<bool(const Word&)> fn) {
    return from_function(std::move(name), std::move(alphabet),
                         [f = std::move(fn)](const Word& w) {
                           return f(w) ? Verdict::yes : Verdict::no;
                         });
  }

  Verdict contains(const Word& w) const {
    if (w.empty()) return Verdict::no;
    for (const auto& t : w)
      if (!std::binary_search(alphabet_.begin(), alphabet_.end(), t))
        return Verdict::no;
    return fn_(w);
  }

  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::vector<std::string> alphabet_;  // sorted
  std::function<Verdict(const Word&)> fn_;
};

// ---------------------------------------------------------------------------
// Decompositions

enum class PumpMode { shuffle, shuffle_alt, concat, ccfl };

inline std::string to_string(PumpMode m) {
  switch (m) {
    case PumpMode::shuffle: return "shuffle";
    case PumpMode::shuffle_alt: return "shuffle-alt";
    case PumpMode::concat: return "concat";
    case PumpMode::ccfl: return "ccfl";
  }
  return "?";
}

inline PumpMode pump_mode_from_string(const std::string& s) {
  if (s == "shuffle") return PumpMode::shuffle;
  if (s == "shuffle-alt" || s == "shuffle_alt") return PumpMode::shuffle_alt;
  if (s == "concat") return PumpMode::concat;
  if (s == "ccfl") return PumpMode::ccfl;
  throw std::invalid_argument("unknown pump mode: " + s);
}

struct PumpDecomposition {
  Word x, y, z, s, t;
  std::optional<Word> y_alt;  // the fixed subword y' of shuffle-alt mode
  PumpMode mode = PumpMode::shuffle;
  bool operator==(const PumpDecomposition&) const = default;
};

inline Word pumped_word(const PumpDecomposition& d, int m) {
  Word out = d.x;
  Word sm = repeat_word(d.s, m);
  out.insert(out.end(), sm.begin(), sm.end());
  const Word& middle = d.mode == PumpMode::shuffle_alt && d.y_alt ? *d.y_alt : d.y;
  out.insert(out.end(), middle.begin(), middle.end());
  if (d.mode != PumpMode::ccfl) {
    Word tm = repeat_word(d.t, m);
    out.insert(out.end(), tm.begin(), tm.end());
    out.insert(out.end(), d.z.begin(), d.z.end());
  }
  return out;
}

struct PumpCheck {
  int m;
  Word word;
  Verdict verdict;
  bool operator==(const PumpCheck&) const = default;
};

struct DecompositionCheck {
  bool structure_ok = false;
  std::string reason;  // set when the structural condition fails
  std::vector<PumpCheck> pump;
  bool budget_exhausted = false;
  bool ok = false;
};

namespace detail {

inline bool is_prefix(const Word& p, const Word& w) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

inline Word word_suffix(const Word& w, std::size_t from) {
  return Word(w.begin() + from, w.end());
}

// r in (s . (y || t)) || z ?
inline bool shuffle_structure(const Word& r, const Word& s, const Word& y,
                              const Word& t, const Word& z) {
  if (r.size() != s.size() + y.size() + t.size() + z.size()) return false;
  for (const auto& q : interleavings(y, t))
    if (interleaving_member(r, concat_words(s, q), z)) return true;
  return false;
}

}  // namespace detail

inline DecompositionCheck check_decomposition(const LanguageOracle& oracle,
                                              const Word& w,
                                              const PumpDecomposition& d, int N,
                                              int M) {
  DecompositionCheck out;
  auto fail = [&](const std::string& why) {
    out.structure_ok = false;
    out.reason = why;
    return out;
  };
  std::size_t syt = d.s.size() + d.y.size() + d.t.size();
  switch (d.mode) {
    case PumpMode::shuffle: {
      if (d.s.empty()) return fail("|s| must be at least 1");
      if (syt > static_cast<std::size_t>(N)) return fail("|s y t| exceeds N");
      if (!detail::is_prefix(d.x, w)) return fail("x is not a prefix of w");
      Word r = detail::word_suffix(w, d.x.size());
      if (!detail::shuffle_structure(r, d.s, d.y, d.t, d.z))
        return fail("w is not in x((s(y||t))||z)");
      break;
    }
    case PumpMode::shuffle_alt: {
      if (!d.y_alt) return fail("shuffle-alt needs the fixed subword y'");
      if (d.s.empty()) return fail("|s| must be at least 1");
      if (syt > static_cast<std::size_t>(N)) return fail("|s y t| exceeds N");
      if (!detail::is_prefix(d.x, w)) return fail("x is not a prefix of w");
      Word r = detail::word_suffix(w, d.x.size());
      if (!interleaving_member(r, *d.y_alt, d.z))
        return fail("w is not in x(y'||z)");
      if (!detail::is_prefix(d.s, *d.y_alt))
        return fail("y' does not start with s");
      Word q = detail::word_suffix(*d.y_alt, d.s.size());
      if (!interleaving_member(q, d.y, d.t))
        return fail("y' is not in s(y||t)");
      break;
    }
    case PumpMode::concat: {
      if (d.s.size() + d.t.size() == 0) return fail("|s t| must be at least 1");
      if (d.s.size() + d.t.size() > static_cast<std::size_t>(N))
        return fail("|s t| exceeds N");
      Word xyz = concat_words(concat_words(d.x, d.y), d.z);
      if (xyz != w) return fail("w is not the concatenation x y z");
      break;
    }
    case PumpMode::ccfl: {
      if (d.s.empty()) return fail("|s| must be at least 1");
      if (d.s.size() > static_cast<std::size_t>(N)) return fail("|s| exceeds N");
      if (!detail::is_prefix(d.x, w)) return fail("x is not a prefix of w");
      Word r = detail::word_suffix(w, d.x.size());
      if (!interleaving_member(r, d.s, d.y)) return fail("w is not in x(s||y)");
      break;
    }
  }
  out.structure_ok = true;
  out.ok = true;
  for (int m = 0; m <= M; ++m) {
    Word pw = pumped_word(d, m);
    Verdict v = oracle.contains(pw);
    out.pump.push_back({m, pw, v});
    if (v == Verdict::budget_exhausted) out.budget_exhausted = true;
    if (v != Verdict::yes) { out.ok = false; break; }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive search

enum class PumpOutcome { found, none, budget_exhausted };

inline std::string to_string(PumpOutcome o) {
  switch (o) {
    case PumpOutcome::found: return "found";
    case PumpOutcome::none: return "none";
    case PumpOutcome::budget_exhausted: return "budget exhausted";
  }
  return "?";
}

struct PumpReport {
  Word word;
  int N = 0;
  int M = 0;
  PumpMode mode = PumpMode::shuffle;
  PumpOutcome outcome = PumpOutcome::none;
  std::optional<PumpDecomposition> decomposition;
  std::vector<PumpCheck> checks;  // per-m record of the found decomposition
  std::uint64_t candidates_tried = 0;
  // A "none" outcome is a necessary-condition violation up to M only; finite
  // search cannot certify the universally quantified statement.
  std::string note;
};

struct PumpLimits {
  std::uint64_t max_candidates = 50'000'000;
};

namespace detail {

struct PumpSearch {
  const LanguageOracle& oracle;
  const Word& w;
  int N, M;
  const PumpLimits& lim;
  PumpReport& report;
  std::unordered_map<std::string, Verdict> cache;
  std::unordered_set<std::string> tried;
  bool oracle_budget = false;

  struct Found {};
  struct CandidateBudget {};

  Verdict oracle_contains(const Word& word) {
    std::string key = word_key(word);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    Verdict v = oracle.contains(word);
    if (v != Verdict::budget_exhausted) cache.emplace(std::move(key), v);
    return v;
  }

  void try_candidate(PumpDecomposition d) {
    std::string key = word_key(d.x) + "|" + word_key(d.s) + "|" + word_key(d.y) +
                      "|" + word_key(d.t) + "|" + word_key(d.z) + "|" +
                      (d.y_alt ? word_key(*d.y_alt) : std::string());
    if (!tried.insert(std::move(key)).second) return;
    if (++report.candidates_tried > lim.max_candidates) throw CandidateBudget{};
    std::vector<PumpCheck> checks;
    for (int m = 0; m <= M; ++m) {
      Word pw = pumped_word(d, m);
      Verdict v = oracle_contains(pw);
      checks.push_back({m, pw, v});
      if (v == Verdict::budget_exhausted) { oracle_budget = true; return; }
      if (v == Verdict::no) return;
    }
    report.outcome = PumpOutcome::found;
    report.decomposition = std::move(d);
    report.checks = std::move(checks);
    throw Found{};
  }

  // Enumerates k-subsets of {0..n-1} in lexicographic order.
  template <typename Fn>
  static void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
    if (k > n || k == 0) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      fn(idx);
      std::size_t i = k;
      bool advanced = false;
      while (i-- > 0) {
        if (idx[i] != n - k + i) {
          ++idx[i];
          for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
          advanced = true;
          break;
        }
      }
      if (!advanced) return;
    }
  }

  void run_shuffle(bool alt) {
    for (std::size_t xlen = 0; xlen <= w.size(); ++xlen) {
      Word x(w.begin(), w.begin() + xlen);
      Word r = word_suffix(w, xlen);
      std::size_t maxk = std::min<std::size_t>(N, r.size());
      for (std::size_t k = 1; k <= maxk; ++k) {
        for_each_subset(r.size(), k, [&](const std::vector<std::size_t>& idx) {
          Word yprime, z;
          std::size_t next = 0;
          for (std::size_t p = 0; p < r.size(); ++p) {
            if (next < idx.size() && idx[next] == p) {
              yprime.push_back(r[p]);
              ++next;
            } else {
              z.push_back(r[p]);
            }
          }
          for (std::size_t slen = 1; slen <= yprime.size(); ++slen) {
            Word s(yprime.begin(), yprime.begin() + slen);
            Word q = word_suffix(yprime, slen);
            for (std::uint64_t mask = 0; mask < (1ull << q.size()); ++mask) {
              PumpDecomposition d;
              d.mode = alt ? PumpMode::shuffle_alt : PumpMode::shuffle;
              d.x = x;
              d.s = s;
              d.z = z;
              for (std::size_t b = 0; b < q.size(); ++b)
                (mask & (1ull << b) ? d.y : d.t).push_back(q[b]);
              if (alt) d.y_alt = yprime;
              try_candidate(std::move(d));
            }
          }
        });
      }
    }
  }

  void run_ccfl() {
    for (std::size_t xlen = 0; xlen <= w.size(); ++xlen) {
      Word x(w.begin(), w.begin() + xlen);
      Word r = word_suffix(w, xlen);
      std::size_t maxk = std::min<std::size_t>(N, r.size());
      for (std::size_t k = 1; k <= maxk; ++k) {
        for_each_subset(r.size(), k, [&](const std::vector<std::size_t>& idx) {
          PumpDecomposition d;
          d.mode = PumpMode::ccfl;
          d.x = x;
          std::size_t next = 0;
          for (std::size_t p = 0; p < r.size(); ++p) {
            if (next < idx.size() && idx[next] == p) {
              d.s.push_back(r[p]);
              ++next;
            } else {
              d.y.push_back(r[p]);
            }
          }
          try_candidate(std::move(d));
        });
      }
    }
  }

  void words_of_length(std::size_t len, std::vector<Word>& out) const {
    const auto& sigma = oracle.alphabet();
    Word cur;
    std::function<void()> rec = [&]() {
      if (cur.size() == len) {
        out.push_back(cur);
        return;
      }
      for (const auto& a : sigma) {
        cur.push_back(a);
        rec();
        cur.pop_back();
      }
    };
    rec();
  }

  void run_concat() {
    // Repeatable words s, t range over arbitrary alphabet words with
    // 1 <= |st| <= N; shorter joint length first.
    for (int total = 1; total <= N; ++total) {
      for (int slen = 0; slen <= total; ++slen) {
        int tlen = total - slen;
        std::vector<Word> ss, ts;
        words_of_length(slen, ss);
        words_of_length(tlen, ts);
        for (std::size_t i = 0; i <= w.size(); ++i)
          for (std::size_t j = i; j <= w.size(); ++j)
            for (const auto& s : ss)
              for (const auto& t : ts) {
                PumpDecomposition d;
                d.mode = PumpMode::concat;
                d.x = Word(w.begin(), w.begin() + i);
                d.y = Word(w.begin() + i, w.begin() + j);
                d.z = word_suffix(w, j);
                d.s = s;
                d.t = t;
                try_candidate(std::move(d));
              }
      }
    }
  }
};

}  // namespace detail

inline PumpReport find_decomposition(const LanguageOracle& oracle, const Word& w,
                                     int N, PumpMode mode, int M,
                                     const PumpLimits& lim = {}) {
  if (N < 1) throw std::invalid_argument("N must be positive");
  if (M < 0) throw std::invalid_argument("M must be non-negative");
  if (w.size() > 32)
    throw std::invalid_argument(
        "decomposition search is exhaustive and works on words of at most "
        "32 letters (16 or fewer recommended)");
  PumpReport report;
  report.word = w;
  report.N = N;
  report.M = M;
  report.mode = mode;
  report.outcome = PumpOutcome::none;
  detail::PumpSearch search{oracle, w, N, M, lim, report, {}, {}, false};
  try {
    switch (mode) {
      case PumpMode::shuffle: search.run_shuffle(false); break;
      case PumpMode::shuffle_alt: search.run_shuffle(true); break;
      case PumpMode::concat: search.run_concat(); break;
      case PumpMode::ccfl: search.run_ccfl(); break;
    }
    report.outcome =
        search.oracle_budget ? PumpOutcome::budget_exhausted : PumpOutcome::none;
    if (report.outcome == PumpOutcome::none)
      report.note =
          "exhaustive up to M=" + std::to_string(M) +
          "; a finite search refutes the condition only up to this bound";
  } catch (const detail::PumpSearch::Found&) {
    // report already filled
  } catch (const detail::PumpSearch::CandidateBudget&) {
    report.outcome = PumpOutcome::budget_exhausted;
  }
  return report;
}

// ---------------------------------------------------------------------------
// JSON report

inline nlohmann::ordered_json pump_report_json(const PumpReport& r) {
  nlohmann::ordered_json j;
  j["word"] = format_word(r.word);
  j["mode"] = to_string(r.mode);
  j["N"] = r.N;
  j["M"] = r.M;
  j["outcome"] = to_string(r.outcome);
  j["candidates_tried"] = r.candidates_tried;
  if (r.decomposition) {
    const auto& d = *r.decomposition;
    nlohmann::ordered_json jd;
    jd["x"] = format_word(d.x);
    jd["s"] = format_word(d.s);
    jd["y"] = format_word(d.y);
    jd["t"] = format_word(d.t);
    jd["z"] = format_word(d.z);
    if (d.y_alt) jd["y_prime"] = format_word(*d.y_alt);
    j["decomposition"] = std::move(jd);
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
      nlohmann::ordered_json jc;
      jc["m"] = c.m;
      jc["word"] = format_word(c.word);
      jc["verdict"] = to_string(c.verdict);
      j["checks"].push_back(std::move(jc));
    }
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace pccfl
