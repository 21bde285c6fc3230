#pragma once

// Stateless multi-pushdown automata: k stacks with pairwise disjoint
// alphabets, one symbol popped per step, one push sequence per stack,
// acceptance by empty stacks. Equivalent to grammars with transitive
// dependence: stacks are the threads, a production pushes the per-thread
// projections of its right-hand side.
//
// Text format (.mpda):
//
//   stacks: 3
//   stack 1: A B S
//   stack 2: A'
//   stack 3: B'
//   initial: S
//   S -a-> S A ; eps ; eps

#include <functional>
#include <unordered_map>

#include "engine.hpp"
#include "grammar.hpp"

namespace pccfl {

struct MpdaTransition {
  std::string pop;
  std::string letter;
  std::vector<std::vector<std::string>> push;  // one sequence per stack
  bool operator==(const MpdaTransition&) const = default;
};

struct Mpda {
  std::vector<std::vector<std::string>> stack_alphabets;  // disjoint
  std::string initial;
  std::vector<MpdaTransition> transitions;
  int stacks() const { return static_cast<int>(stack_alphabets.size()); }
  bool operator==(const Mpda&) const = default;
};

struct NotTransitiveError : std::runtime_error {
  std::array<std::string, 3> triple;
  explicit NotTransitiveError(std::array<std::string, 3> t)
      : std::runtime_error("dependence is not transitive: (" + t[0] + "," +
                           t[1] + "," + t[2] + ")"),
        triple(std::move(t)) {}
};

namespace detail {

inline void check_mpda(const Mpda& m) {
  std::map<std::string, int> home;
  for (int i = 0; i < m.stacks(); ++i)
    for (const auto& s : m.stack_alphabets[i]) {
      if (home.count(s))
        throw std::invalid_argument("stack alphabets overlap on " + s);
      home[s] = i;
    }
  if (!home.count(m.initial))
    throw std::invalid_argument("initial symbol " + m.initial +
                                " not on any stack");
  for (const auto& t : m.transitions) {
    if (!home.count(t.pop))
      throw std::invalid_argument("transition pops undeclared symbol " + t.pop);
    if (t.letter.empty())
      throw std::invalid_argument("transitions must read a letter");
    if (static_cast<int>(t.push.size()) != m.stacks())
      throw std::invalid_argument("transition must push to every stack");
    for (int i = 0; i < m.stacks(); ++i)
      for (const auto& s : t.push[i]) {
        auto it = home.find(s);
        if (it == home.end() || it->second != i)
          throw std::invalid_argument("symbol " + s +
                                      " pushed on the wrong stack");
      }
  }
}

}  // namespace detail

// One stack per thread; a production becomes a transition pushing the
// per-thread projections of its right-hand side.
inline Mpda from_transitive_grammar(const Grammar& g) {
  auto diags = validate(g);
  if (!diags.empty())
    throw std::invalid_argument("invalid grammar: " + to_string(diags.front()));
  auto res = threads(g);
  if (std::holds_alternative<NotTransitive>(res))
    throw NotTransitiveError(std::get<NotTransitive>(res).triple);
  const auto& blocks = std::get<ThreadPartition>(res).blocks;
  std::map<std::string, int> thread_of;
  for (int i = 0; i < static_cast<int>(blocks.size()); ++i)
    for (const auto& nt : blocks[i]) thread_of[nt] = i;
  Mpda m;
  m.stack_alphabets = blocks;
  m.initial = g.start;
  for (const auto& p : g.productions) {
    MpdaTransition t;
    t.pop = p.lhs;
    t.letter = p.letter;
    t.push.assign(blocks.size(), {});
    for (const auto& s : p.rhs) t.push[thread_of.at(s)].push_back(s);
    m.transitions.push_back(std::move(t));
  }
  return m;
}

// Non-terminals are the stack symbols, same-stack pairs are dependent, and a
// transition becomes the production X -a-> alpha_1 ... alpha_k.
inline Grammar to_grammar(const Mpda& m) {
  detail::check_mpda(m);
  Grammar g;
  for (const auto& alpha : m.stack_alphabets)
    g.nonterminals.insert(alpha.begin(), alpha.end());
  g.start = m.initial;
  for (int i = 0; i < m.stacks(); ++i)
    for (int j = i + 1; j < m.stacks(); ++j)
      for (const auto& x : m.stack_alphabets[i])
        for (const auto& y : m.stack_alphabets[j])
          g.independence.insert(SymbolPair(x, y));
  for (const auto& t : m.transitions) {
    Production p;
    p.lhs = t.pop;
    p.letter = t.letter;
    for (const auto& seq : t.push)
      p.rhs.insert(p.rhs.end(), seq.begin(), seq.end());
    g.productions.push_back(std::move(p));
    g.alphabet.insert(t.letter);
  }
  return g;
}

namespace detail {

// Interned simulator. Configurations are tuples of stacks (top at the front),
// which are already canonical, so memoization works on the tuple directly.
class MpdaSim {
 public:
  explicit MpdaSim(const Mpda& m) : m_(m) {
    check_mpda(m);
    for (int i = 0; i < m.stacks(); ++i)
      for (const auto& s : m.stack_alphabets[i]) {
        sym_id_[s] = static_cast<int>(sym_names_.size());
        sym_names_.push_back(s);
        sym_stack_.push_back(i);
      }
    std::set<std::string> letters;
    for (const auto& t : m.transitions) letters.insert(t.letter);
    letters_.assign(letters.begin(), letters.end());
    for (int i = 0; i < static_cast<int>(letters_.size()); ++i)
      letter_id_[letters_[i]] = i;
    trans_of_.assign(sym_names_.size(), {});
    for (int i = 0; i < static_cast<int>(m.transitions.size()); ++i) {
      const auto& t = m.transitions[i];
      CTrans ct;
      ct.letter = letter_id_.at(t.letter);
      ct.push.assign(m.stacks(), {});
      for (int s = 0; s < m.stacks(); ++s)
        for (const auto& sym : t.push[s]) ct.push[s].push_back(sym_id_.at(sym));
      trans_of_[sym_id_.at(t.pop)].push_back(std::move(ct));
    }
  }

  using State = std::vector<std::vector<int>>;

  State initial_state() const {
    State st(m_.stacks());
    int id = sym_id_.at(m_.initial);
    st[sym_stack_[id]].push_back(id);
    return st;
  }

  std::vector<int> key_of(const State& st, int pos) const {
    std::vector<int> k;
    for (const auto& s : st) {
      k.insert(k.end(), s.begin(), s.end());
      k.push_back(-1);
    }
    k.push_back(pos);
    return k;
  }

  std::size_t total_size(const State& st) const {
    std::size_t n = 0;
    for (const auto& s : st) n += s.size();
    return n;
  }

  // Tops scanned stack by stack, transitions in file order.
  template <typename Fn>
  void for_each_step(const State& st, Fn&& fn) const {
    for (int i = 0; i < static_cast<int>(st.size()); ++i) {
      if (st[i].empty()) continue;
      int top = st[i][0];
      for (const auto& t : trans_of_[top]) {
        State next = st;
        next[i].erase(next[i].begin());
        for (int s = 0; s < static_cast<int>(next.size()); ++s)
          next[s].insert(next[s].begin(), t.push[s].begin(), t.push[s].end());
        fn(t.letter, std::move(next));
      }
    }
  }

  std::vector<int> word_ids(const Word& w) const {
    std::vector<int> ids;
    for (const auto& t : w) {
      auto it = letter_id_.find(t);
      if (it == letter_id_.end())
        throw std::invalid_argument("letter outside the alphabet: " + t);
      ids.push_back(it->second);
    }
    return ids;
  }

  const std::vector<std::string>& letters() const { return letters_; }

 private:
  struct CTrans {
    int letter;
    std::vector<std::vector<int>> push;
  };
  Mpda m_;
  std::vector<std::string> sym_names_;
  std::map<std::string, int> sym_id_;
  std::vector<int> sym_stack_;
  std::vector<std::string> letters_;
  std::map<std::string, int> letter_id_;
  std::vector<std::vector<CTrans>> trans_of_;
};

}  // namespace detail

inline Verdict accepts(const Mpda& m, const Word& w,
                       const SearchLimits& lim = {}) {
  detail::MpdaSim sim(m);
  if (w.empty()) return Verdict::no;  // the initial symbol must be popped
  auto word = sim.word_ids(w);
  std::unordered_map<std::vector<int>, bool, detail::IntVecHash> memo;
  std::uint64_t visited = 0;
  std::function<bool(std::size_t, const detail::MpdaSim::State&)> rec =
      [&](std::size_t pos, const detail::MpdaSim::State& st) -> bool {
    if (++visited > lim.max_states) throw detail::BudgetHit{};
    std::size_t size = sim.total_size(st);
    if (pos == word.size()) return size == 0;
    if (size == 0 || size > word.size() - pos) return false;
    auto key = sim.key_of(st, static_cast<int>(pos));
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool ok = false;
    sim.for_each_step(st, [&](int letter, detail::MpdaSim::State next) {
      if (ok || letter != word[pos]) return;
      if (rec(pos + 1, next)) ok = true;
    });
    memo.emplace(std::move(key), ok);
    return ok;
  };
  try {
    return rec(0, sim.initial_state()) ? Verdict::yes : Verdict::no;
  } catch (const detail::BudgetHit&) {
    return Verdict::budget_exhausted;
  }
}

inline Engine::Enumeration enumerate_mpda(const Mpda& m, int max_len,
                                          const SearchLimits& lim = {}) {
  if (max_len < 0) throw std::invalid_argument("max_len must be >= 0");
  detail::MpdaSim sim(m);
  Engine::Enumeration result;
  std::set<std::vector<int>> found;
  using QState = std::pair<std::vector<int>, detail::MpdaSim::State>;
  std::vector<QState> frontier{{{}, sim.initial_state()}};
  std::unordered_set<std::vector<int>, detail::IntVecHash> seen;
  auto key_of = [&](const QState& q) {
    std::vector<int> k = q.first;
    k.push_back(-2);
    auto sk = sim.key_of(q.second, 0);
    k.insert(k.end(), sk.begin(), sk.end());
    return k;
  };
  seen.insert(key_of(frontier[0]));
  std::uint64_t visited = 0;
  bool budget = false;
  while (!frontier.empty() && !budget) {
    std::vector<QState> next_frontier;
    for (const auto& [w, st] : frontier) {
      if (budget) break;
      std::size_t size = sim.total_size(st);
      if (size == 0) {
        found.insert(w);
        continue;
      }
      if (w.size() + size > static_cast<std::size_t>(max_len)) continue;
      sim.for_each_step(st, [&](int letter, detail::MpdaSim::State next) {
        if (budget) return;
        QState q{w, std::move(next)};
        q.first.push_back(letter);
        if (q.first.size() + sim.total_size(q.second) >
            static_cast<std::size_t>(max_len))
          return;
        if (seen.insert(key_of(q)).second) {
          if (++visited > lim.max_states) { budget = true; return; }
          next_frontier.push_back(std::move(q));
        }
      });
    }
    frontier = std::move(next_frontier);
  }
  result.budget_exhausted = budget;
  for (const auto& ids : found) {
    Word w;
    for (int l : ids) w.push_back(sim.letters()[l]);
    result.words.push_back(std::move(w));
  }
  std::sort(result.words.begin(), result.words.end(), length_lex_less);
  return result;
}

// ---------------------------------------------------------------------------
// .mpda text format

inline Mpda parse_mpda(const std::string& text) {
  Mpda m;
  int declared_stacks = -1;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "stacks:") {
      if (toks.size() != 2) throw ParseError(line_no, "stacks: needs a count");
      declared_stacks = std::stoi(toks[1]);
      if (declared_stacks <= 0) throw ParseError(line_no, "stack count must be positive");
      m.stack_alphabets.assign(declared_stacks, {});
      continue;
    }
    if (toks[0] == "stack") {
      if (declared_stacks < 0) throw ParseError(line_no, "'stacks:' must come first");
      if (toks.size() < 2 || toks[1].back() != ':')
        throw ParseError(line_no, "expected 'stack i:'");
      int idx = std::stoi(toks[1].substr(0, toks[1].size() - 1));
      if (idx < 1 || idx > declared_stacks)
        throw ParseError(line_no, "stack index out of range");
      for (std::size_t i = 2; i < toks.size(); ++i)
        m.stack_alphabets[idx - 1].push_back(toks[i]);
      continue;
    }
    if (toks[0] == "initial:") {
      if (toks.size() != 2) throw ParseError(line_no, "initial: needs one symbol");
      m.initial = toks[1];
      continue;
    }
    // Transition: X -a-> alpha1 ; alpha2 ; ... ; alphak
    if (toks.size() < 2)
      throw ParseError(line_no, "expected a transition, got '" + line + "'");
    const std::string& arrow = toks[1];
    if (arrow.size() < 4 || arrow.front() != '-' ||
        arrow.compare(arrow.size() - 2, 2, "->") != 0)
      throw ParseError(line_no, "expected '-letter->' arrow, got '" + arrow + "'");
    MpdaTransition t;
    t.pop = toks[0];
    t.letter = detail::strip_quotes(arrow.substr(1, arrow.size() - 3));
    t.push.assign(declared_stacks > 0 ? declared_stacks : 0, {});
    int cur = 0;
    for (std::size_t i = 2; i < toks.size(); ++i) {
      if (toks[i] == ";") { ++cur; continue; }
      if (cur >= static_cast<int>(t.push.size()))
        throw ParseError(line_no, "more push sequences than stacks");
      if (toks[i] != "eps") t.push[cur].push_back(toks[i]);
    }
    if (cur + 1 != declared_stacks)
      throw ParseError(line_no, "transition must list one push sequence per stack");
    m.transitions.push_back(std::move(t));
  }
  detail::check_mpda(m);
  return m;
}

inline Mpda parse_mpda_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mpda(ss.str());
}

inline std::string to_mpda_text(const Mpda& m) {
  std::ostringstream out;
  out << "stacks: " << m.stacks() << "\n";
  for (int i = 0; i < m.stacks(); ++i) {
    out << "stack " << (i + 1) << ":";
    for (const auto& s : m.stack_alphabets[i]) out << " " << s;
    out << "\n";
  }
  out << "initial: " << m.initial << "\n";
  for (const auto& t : m.transitions) {
    out << t.pop << " -" << format_letter_token(t.letter) << "->";
    for (int i = 0; i < m.stacks(); ++i) {
      if (i) out << " ;";
      if (t.push[i].empty()) out << " eps";
      else
        for (const auto& s : t.push[i]) out << " " << s;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace pccfl
