#pragma once

// PA grammars: productions rewrite a non-terminal into a term built from
// sequential (';') and parallel ('||') composition. Terms are kept up to the
// structural equivalence (associativity of both operations, commutativity of
// '||', neutrality of the empty term) via an explicit normal form.
//
// Text format (.pag):
//
//   start: S
//   S -a-> (A ; B) || C
//   A -b-> eps
//
// ';' binds tighter than '||'; parentheses disambiguate.

#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "engine.hpp"
#include "grammar.hpp"

namespace pccfl {

class PaTerm {
 public:
  enum class Kind { empty, atom, seq, par };

  PaTerm() : kind_(Kind::empty) {}
  static PaTerm empty() { return PaTerm(); }
  static PaTerm atom(std::string name) {
    PaTerm t;
    t.kind_ = Kind::atom;
    t.atom_ = std::move(name);
    return t;
  }
  static PaTerm seq(std::vector<PaTerm> children) {
    PaTerm t;
    t.kind_ = Kind::seq;
    t.children_ = std::move(children);
    return t;
  }
  static PaTerm par(std::vector<PaTerm> children) {
    PaTerm t;
    t.kind_ = Kind::par;
    t.children_ = std::move(children);
    return t;
  }

  Kind kind() const { return kind_; }
  const std::string& atom_name() const { return atom_; }
  const std::vector<PaTerm>& children() const { return children_; }

  int compare(const PaTerm& o) const {
    if (kind_ != o.kind_) return kind_ < o.kind_ ? -1 : 1;
    if (atom_ != o.atom_) return atom_ < o.atom_ ? -1 : 1;
    std::size_t n = std::min(children_.size(), o.children_.size());
    for (std::size_t i = 0; i < n; ++i)
      if (int c = children_[i].compare(o.children_[i]); c != 0) return c;
    if (children_.size() != o.children_.size())
      return children_.size() < o.children_.size() ? -1 : 1;
    return 0;
  }
  bool operator==(const PaTerm& o) const { return compare(o) == 0; }
  bool operator<(const PaTerm& o) const { return compare(o) < 0; }

  int atom_count() const {
    switch (kind_) {
      case Kind::empty: return 0;
      case Kind::atom: return 1;
      default: {
        int n = 0;
        for (const auto& c : children_) n += c.atom_count();
        return n;
      }
    }
  }

  std::string to_text() const {
    switch (kind_) {
      case Kind::empty: return "eps";
      case Kind::atom: return atom_;
      case Kind::seq:
      case Kind::par: {
        std::string sep = kind_ == Kind::seq ? " ; " : " || ";
        std::string out;
        for (std::size_t i = 0; i < children_.size(); ++i) {
          if (i) out += sep;
          const PaTerm& c = children_[i];
          bool paren = c.kind_ == Kind::seq || c.kind_ == Kind::par;
          out += paren ? "(" + c.to_text() + ")" : c.to_text();
        }
        return out;
      }
    }
    return "eps";
  }

 private:
  Kind kind_;
  std::string atom_;
  std::vector<PaTerm> children_;
};

// Flattens nested Seq/Seq and Par/Par, drops empty terms, unwraps singletons
// and sorts Par children; idempotent.
inline PaTerm normalize(const PaTerm& t) {
  switch (t.kind()) {
    case PaTerm::Kind::empty:
    case PaTerm::Kind::atom:
      return t;
    case PaTerm::Kind::seq: {
      std::vector<PaTerm> flat;
      for (const auto& c : t.children()) {
        PaTerm n = normalize(c);
        if (n.kind() == PaTerm::Kind::empty) continue;
        if (n.kind() == PaTerm::Kind::seq)
          for (const auto& gc : n.children()) flat.push_back(gc);
        else
          flat.push_back(std::move(n));
      }
      if (flat.empty()) return PaTerm::empty();
      if (flat.size() == 1) return flat[0];
      return PaTerm::seq(std::move(flat));
    }
    case PaTerm::Kind::par: {
      std::vector<PaTerm> flat;
      for (const auto& c : t.children()) {
        PaTerm n = normalize(c);
        if (n.kind() == PaTerm::Kind::empty) continue;
        if (n.kind() == PaTerm::Kind::par)
          for (const auto& gc : n.children()) flat.push_back(gc);
        else
          flat.push_back(std::move(n));
      }
      if (flat.empty()) return PaTerm::empty();
      if (flat.size() == 1) return flat[0];
      std::sort(flat.begin(), flat.end());
      return PaTerm::par(std::move(flat));
    }
  }
  return PaTerm::empty();
}

struct PaProduction {
  std::string lhs;
  std::string letter;
  PaTerm term;  // stored normalized
  bool operator==(const PaProduction&) const = default;
};

struct PaGrammar {
  std::set<std::string> alphabet;
  std::set<std::string> nonterminals;
  std::string start;
  std::vector<PaProduction> productions;
  bool operator==(const PaGrammar&) const = default;
};

namespace detail {
inline void collect_atoms(const PaTerm& t, std::set<std::string>& out) {
  if (t.kind() == PaTerm::Kind::atom) out.insert(t.atom_name());
  for (const auto& c : t.children()) collect_atoms(c, out);
}
}  // namespace detail

inline std::vector<Diagnostic> validate_pa(const PaGrammar& g) {
  std::vector<Diagnostic> out;
  if (g.start.empty() || !g.nonterminals.count(g.start))
    out.push_back({DiagnosticKind::missing_start,
                   g.start.empty() ? "(none)" : g.start});
  std::set<std::string> undeclared;
  for (const auto& p : g.productions) {
    if (!g.nonterminals.count(p.lhs)) undeclared.insert(p.lhs);
    std::set<std::string> atoms;
    detail::collect_atoms(p.term, atoms);
    for (const auto& a : atoms)
      if (!g.nonterminals.count(a)) undeclared.insert(a);
    if (p.letter.empty())
      out.push_back({DiagnosticKind::non_greibach_production,
                     p.lhs + " -> " + p.term.to_text()});
  }
  for (const auto& s : undeclared)
    out.push_back({DiagnosticKind::undeclared_symbol, s});
  // Productive: some production whose term only uses productive atoms.
  std::set<std::string> productive;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g.productions) {
      if (productive.count(p.lhs)) continue;
      std::set<std::string> atoms;
      detail::collect_atoms(p.term, atoms);
      bool ok = true;
      for (const auto& a : atoms)
        if (!productive.count(a)) { ok = false; break; }
      if (ok) { productive.insert(p.lhs); changed = true; }
    }
  }
  for (const auto& nt : g.nonterminals)
    if (!productive.count(nt))
      out.push_back({DiagnosticKind::unproductive_nonterminal, nt});
  return out;
}

inline bool is_valid(const PaGrammar& g) { return validate_pa(g).empty(); }

// ---------------------------------------------------------------------------
// Step semantics

// An atom is enabled when it is the head of every enclosing Seq; all branches
// of a Par are enabled. Firing replaces the occurrence and renormalizes.
inline std::vector<std::pair<std::string, PaTerm>> pa_successors(
    const PaGrammar& g, const PaTerm& term) {
  std::set<std::pair<std::string, PaTerm>> seen;
  std::function<void(const PaTerm&, const std::function<PaTerm(PaTerm)>&)> walk =
      [&](const PaTerm& t, const std::function<PaTerm(PaTerm)>& rebuild) {
        switch (t.kind()) {
          case PaTerm::Kind::empty:
            return;
          case PaTerm::Kind::atom:
            for (const auto& p : g.productions)
              if (p.lhs == t.atom_name())
                seen.insert({p.letter, normalize(rebuild(p.term))});
            return;
          case PaTerm::Kind::seq: {
            const auto& kids = t.children();
            walk(kids[0], [&](PaTerm fired) {
              std::vector<PaTerm> next{std::move(fired)};
              next.insert(next.end(), kids.begin() + 1, kids.end());
              return rebuild(PaTerm::seq(std::move(next)));
            });
            return;
          }
          case PaTerm::Kind::par: {
            const auto& kids = t.children();
            for (std::size_t i = 0; i < kids.size(); ++i)
              walk(kids[i], [&, i](PaTerm fired) {
                std::vector<PaTerm> next = kids;
                next[i] = std::move(fired);
                return rebuild(PaTerm::par(std::move(next)));
              });
            return;
          }
        }
      };
  walk(normalize(term), [](PaTerm t) { return t; });
  return {seen.begin(), seen.end()};
}

inline Verdict pa_member(const PaGrammar& g, const Word& w,
                         const SearchLimits& lim = {}) {
  if (!is_valid(g)) throw std::invalid_argument("invalid PA grammar");
  if (w.empty()) throw std::invalid_argument("the empty word is never generated");
  for (const auto& t : w)
    if (!g.alphabet.count(t))
      throw std::invalid_argument("letter outside the alphabet: " + t);
  std::map<std::pair<std::string, std::size_t>, bool> memo;
  std::uint64_t visited = 0;
  std::function<bool(std::size_t, const PaTerm&)> rec =
      [&](std::size_t pos, const PaTerm& term) -> bool {
    if (++visited > lim.max_states) throw detail::BudgetHit{};
    if (pos == w.size()) return term.kind() == PaTerm::Kind::empty;
    int min_yield = term.atom_count();
    if (min_yield == 0 ||
        static_cast<std::size_t>(min_yield) > w.size() - pos)
      return false;
    auto key = std::make_pair(term.to_text(), pos);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool ok = false;
    for (const auto& [letter, next] : pa_successors(g, term)) {
      if (letter != w[pos]) continue;
      if (rec(pos + 1, next)) { ok = true; break; }
    }
    memo.emplace(std::move(key), ok);
    return ok;
  };
  try {
    return rec(0, PaTerm::atom(g.start)) ? Verdict::yes : Verdict::no;
  } catch (const detail::BudgetHit&) {
    return Verdict::budget_exhausted;
  }
}

inline Engine::Enumeration pa_enumerate(const PaGrammar& g, int max_len,
                                        const SearchLimits& lim = {}) {
  if (!is_valid(g)) throw std::invalid_argument("invalid PA grammar");
  if (max_len < 0) throw std::invalid_argument("max_len must be >= 0");
  Engine::Enumeration result;
  std::set<Word> found;
  using State = std::pair<Word, PaTerm>;
  std::vector<State> frontier{{{}, PaTerm::atom(g.start)}};
  std::set<std::pair<std::string, Word>> seen{
      {frontier[0].second.to_text(), {}}};
  std::uint64_t visited = 0;
  bool budget = false;
  while (!frontier.empty() && !budget) {
    std::vector<State> next_frontier;
    for (const auto& [w, term] : frontier) {
      if (budget) break;
      if (term.kind() == PaTerm::Kind::empty) {
        found.insert(w);
        continue;
      }
      if (w.size() + term.atom_count() > static_cast<std::size_t>(max_len))
        continue;
      for (const auto& [letter, next] : pa_successors(g, term)) {
        Word nw = w;
        nw.push_back(letter);
        if (nw.size() + next.atom_count() > static_cast<std::size_t>(max_len))
          continue;
        if (seen.insert({next.to_text(), nw}).second) {
          if (++visited > lim.max_states) { budget = true; break; }
          next_frontier.push_back({std::move(nw), next});
        }
      }
    }
    frontier = std::move(next_frontier);
  }
  result.budget_exhausted = budget;
  result.words.assign(found.begin(), found.end());
  std::sort(result.words.begin(), result.words.end(), length_lex_less);
  return result;
}

// ---------------------------------------------------------------------------
// .pag text format

namespace detail {

class PaTermParser {
 public:
  PaTermParser(std::vector<std::string> toks, int line)
      : toks_(std::move(toks)), line_(line) {}

  PaTerm parse() {
    PaTerm t = parse_par();
    if (pos_ != toks_.size())
      throw ParseError(line_, "unexpected token '" + toks_[pos_] + "'");
    return t;
  }

 private:
  PaTerm parse_par() {
    std::vector<PaTerm> kids{parse_seq()};
    while (peek() == "||") { ++pos_; kids.push_back(parse_seq()); }
    return kids.size() == 1 ? kids[0] : PaTerm::par(std::move(kids));
  }
  PaTerm parse_seq() {
    std::vector<PaTerm> kids{parse_primary()};
    while (peek() == ";") { ++pos_; kids.push_back(parse_primary()); }
    return kids.size() == 1 ? kids[0] : PaTerm::seq(std::move(kids));
  }
  PaTerm parse_primary() {
    std::string t = peek();
    if (t.empty()) throw ParseError(line_, "unexpected end of term");
    if (t == "(") {
      ++pos_;
      PaTerm inner = parse_par();
      if (peek() != ")") throw ParseError(line_, "expected ')'");
      ++pos_;
      return inner;
    }
    if (t == "eps") { ++pos_; return PaTerm::empty(); }
    if (!is_nonterminal_name(t))
      throw ParseError(line_, "expected a non-terminal, got '" + t + "'");
    ++pos_;
    return PaTerm::atom(t);
  }
  std::string peek() const { return pos_ < toks_.size() ? toks_[pos_] : ""; }

  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
  int line_;
};

inline std::vector<std::string> tokenize_term(const std::string& s) {
  std::string massaged;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == ')' || c == ';') {
      massaged += ' ';
      massaged += c;
      massaged += ' ';
    } else if (c == '|' && i + 1 < s.size() && s[i + 1] == '|') {
      massaged += " || ";
      ++i;
    } else {
      massaged += c;
    }
  }
  return split_ws(massaged);
}

}  // namespace detail

inline PaGrammar parse_pag(const std::string& text) {
  PaGrammar g;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "start:") {
      if (toks.size() != 2) throw ParseError(line_no, "start: needs one symbol");
      g.start = toks[1];
      continue;
    }
    if (toks.size() < 2)
      throw ParseError(line_no, "expected a production, got '" + line + "'");
    const std::string& arrow = toks[1];
    if (arrow.size() < 4 || arrow.front() != '-' ||
        arrow.compare(arrow.size() - 2, 2, "->") != 0)
      throw ParseError(line_no, "expected '-letter->' arrow, got '" + arrow + "'");
    PaProduction p;
    p.lhs = toks[0];
    if (!detail::is_nonterminal_name(p.lhs))
      throw ParseError(line_no, "non-terminal must start uppercase: " + p.lhs);
    p.letter = detail::strip_quotes(arrow.substr(1, arrow.size() - 3));
    if (p.letter.empty()) throw ParseError(line_no, "production needs a letter");
    auto arrow_pos = line.find("->");
    std::string term_text = line.substr(arrow_pos + 2);
    auto term_toks = detail::tokenize_term(term_text);
    p.term = term_toks.empty()
                 ? PaTerm::empty()
                 : normalize(detail::PaTermParser(term_toks, line_no).parse());
    g.productions.push_back(std::move(p));
  }
  for (const auto& p : g.productions) {
    g.nonterminals.insert(p.lhs);
    detail::collect_atoms(p.term, g.nonterminals);
    g.alphabet.insert(p.letter);
  }
  if (!g.start.empty()) g.nonterminals.insert(g.start);
  return g;
}

inline PaGrammar parse_pag_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pag(ss.str());
}

inline std::string to_pag_text(const PaGrammar& g) {
  std::ostringstream out;
  out << "start: " << g.start << "\n";
  for (const auto& p : g.productions)
    out << p.lhs << " -" << format_letter_token(p.letter) << "-> "
        << p.term.to_text() << "\n";
  return out.str();
}

// Convenience for tests and the gallery.
class PaGrammarBuilder {
 public:
  PaGrammarBuilder& start(std::string s) {
    g_.start = std::move(s);
    return *this;
  }
  PaGrammarBuilder& prod(std::string lhs, std::string letter, const std::string& term) {
    PaProduction p;
    p.lhs = std::move(lhs);
    p.letter = std::move(letter);
    auto toks = detail::tokenize_term(term);
    p.term = toks.empty() ? PaTerm::empty()
                          : normalize(detail::PaTermParser(toks, 0).parse());
    g_.productions.push_back(std::move(p));
    return *this;
  }
  PaGrammar build() const {
    PaGrammar g = g_;
    for (const auto& p : g.productions) {
      g.nonterminals.insert(p.lhs);
      detail::collect_atoms(p.term, g.nonterminals);
      g.alphabet.insert(p.letter);
    }
    if (!g.start.empty()) g.nonterminals.insert(g.start);
    return g;
  }

 private:
  PaGrammar g_;
};

}  // namespace pccfl
