#pragma once

// Greibach grammars with an independence relation over non-terminals.
//
// Text format (.pcg), line oriented, '#' starts a comment:
//
//   start: S
//   independence: A B, C D        # unordered pairs; also "all" / "none"
//   threads: {S A B} {A'} {B'}    # optional, checked against computed threads
//   letter-independence: b c      # optional sidecar for trace-closure work
//   S -a-> A B
//   A -b->                        # empty right-hand side
//
// Non-terminals begin with an uppercase character; letters begin with a
// lowercase character or are written quoted ("A"). Prime marks and bar
// suffixes are plain name characters (A', Bbar). The alphabet is inferred
// from production labels.

#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "word.hpp"

namespace pccfl {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_no, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + msg),
        line(line_no) {}
};

// Unordered pair of symbol names, stored normalized.
struct SymbolPair {
  std::string first, second;
  SymbolPair(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    first = std::move(a);
    second = std::move(b);
  }
  auto operator<=>(const SymbolPair&) const = default;
};

struct Production {
  std::string lhs;
  std::string letter;  // empty label is representable and flagged by validate()
  std::vector<std::string> rhs;
  bool operator==(const Production&) const = default;
};

struct Grammar {
  std::set<std::string> alphabet;
  std::set<std::string> nonterminals;
  std::string start;
  std::vector<Production> productions;  // order is meaningful: certificates
                                        // index into this list
  std::set<SymbolPair> independence;

  bool independent(const std::string& x, const std::string& y) const {
    return x != y && independence.count(SymbolPair(x, y)) > 0;
  }
  bool operator==(const Grammar&) const = default;
};

struct LetterIndependence {
  std::set<SymbolPair> pairs;
  bool independent(const std::string& a, const std::string& b) const {
    return a != b && pairs.count(SymbolPair(a, b)) > 0;
  }
  bool operator==(const LetterIndependence&) const = default;
};

// ---------------------------------------------------------------------------
// Validation

enum class DiagnosticKind {
  missing_start,
  undeclared_symbol,
  reflexive_independence,
  non_greibach_production,
  unproductive_nonterminal,
  symbol_clash,
};

struct Diagnostic {
  DiagnosticKind kind;
  std::string detail;
  bool operator==(const Diagnostic&) const = default;
};

inline std::string to_string(const Diagnostic& d) {
  switch (d.kind) {
    case DiagnosticKind::missing_start: return "missing start: " + d.detail;
    case DiagnosticKind::undeclared_symbol: return "undeclared symbol: " + d.detail;
    case DiagnosticKind::reflexive_independence: return "reflexive pair: " + d.detail;
    case DiagnosticKind::non_greibach_production: return "non-Greibach production: " + d.detail;
    case DiagnosticKind::unproductive_nonterminal: return "unproductive: " + d.detail;
    case DiagnosticKind::symbol_clash: return "symbol clash: " + d.detail;
  }
  return d.detail;
}

inline std::string production_text(const Production& p) {
  std::string out = p.lhs + " -" + p.letter + "->";
  for (const auto& s : p.rhs) out += " " + s;
  return out;
}

inline std::vector<Diagnostic> validate(const Grammar& g) {
  std::vector<Diagnostic> out;
  if (g.start.empty() || !g.nonterminals.count(g.start))
    out.push_back({DiagnosticKind::missing_start,
                   g.start.empty() ? "(none)" : g.start});
  std::set<std::string> undeclared;
  for (const auto& p : g.productions) {
    if (!g.nonterminals.count(p.lhs)) undeclared.insert(p.lhs);
    for (const auto& s : p.rhs)
      if (!g.nonterminals.count(s)) undeclared.insert(s);
    if (!p.letter.empty() && !g.alphabet.count(p.letter))
      undeclared.insert(p.letter);
  }
  for (const auto& pr : g.independence) {
    if (!g.nonterminals.count(pr.first)) undeclared.insert(pr.first);
    if (!g.nonterminals.count(pr.second)) undeclared.insert(pr.second);
  }
  for (const auto& s : undeclared)
    out.push_back({DiagnosticKind::undeclared_symbol, s});
  for (const auto& pr : g.independence)
    if (pr.first == pr.second)
      out.push_back({DiagnosticKind::reflexive_independence,
                     "{" + pr.first + "," + pr.second + "}"});
  for (const auto& p : g.productions)
    if (p.letter.empty())
      out.push_back(
          {DiagnosticKind::non_greibach_production, production_text(p)});
  for (const auto& nt : g.nonterminals)
    if (g.alphabet.count(nt))
      out.push_back({DiagnosticKind::symbol_clash,
                     nt + " is both a letter and a non-terminal"});
  // Least fixpoint: X is productive iff some production X -a-> alpha has an
  // all-productive right-hand side.
  std::set<std::string> productive;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g.productions) {
      if (productive.count(p.lhs)) continue;
      bool ok = true;
      for (const auto& s : p.rhs)
        if (!productive.count(s)) { ok = false; break; }
      if (ok) {
        productive.insert(p.lhs);
        changed = true;
      }
    }
  }
  for (const auto& nt : g.nonterminals)
    if (!productive.count(nt))
      out.push_back({DiagnosticKind::unproductive_nonterminal, nt});
  return out;
}

inline bool is_valid(const Grammar& g) { return validate(g).empty(); }

// ---------------------------------------------------------------------------
// Dependence and threads

// All unordered pairs over V (singletons included) minus the independence.
inline std::set<SymbolPair> dependence(const Grammar& g) {
  std::set<SymbolPair> out;
  for (auto i = g.nonterminals.begin(); i != g.nonterminals.end(); ++i)
    for (auto j = i; j != g.nonterminals.end(); ++j) {
      SymbolPair p(*i, *j);
      if (!g.independence.count(p)) out.insert(p);
    }
  return out;
}

struct ThreadPartition {
  std::vector<std::vector<std::string>> blocks;  // members sorted, blocks
                                                 // sorted by least member
  bool operator==(const ThreadPartition&) const = default;
};

struct NotTransitive {
  // {X,Y} and {Y,Z} dependent while {X,Z} independent.
  std::array<std::string, 3> triple;
  bool operator==(const NotTransitive&) const = default;
};

using ThreadsResult = std::variant<ThreadPartition, NotTransitive>;

inline ThreadsResult threads(const Grammar& g) {
  std::vector<std::string> nts(g.nonterminals.begin(), g.nonterminals.end());
  auto dep = [&](const std::string& a, const std::string& b) {
    return !g.independent(a, b);
  };
  for (const auto& x : nts)
    for (const auto& z : nts) {
      if (!(x < z) || !g.independent(x, z)) continue;
      for (const auto& y : nts) {
        if (y == x || y == z) continue;
        if (dep(x, y) && dep(y, z)) return ThreadsResult(NotTransitive{{x, y, z}});
      }
    }
  ThreadPartition part;
  std::set<std::string> seen;
  for (const auto& x : nts) {
    if (seen.count(x)) continue;
    std::vector<std::string> block;
    for (const auto& y : nts)
      if (dep(x, y)) { block.push_back(y); seen.insert(y); }
    part.blocks.push_back(std::move(block));
  }
  return ThreadsResult(std::move(part));
}

// ---------------------------------------------------------------------------
// Programmatic construction

class GrammarBuilder {
 public:
  GrammarBuilder& start(std::string s) {
    g_.start = std::move(s);
    return *this;
  }
  GrammarBuilder& prod(std::string lhs, std::string letter,
                       std::vector<std::string> rhs = {}) {
    g_.productions.push_back({std::move(lhs), std::move(letter), std::move(rhs)});
    return *this;
  }
  GrammarBuilder& indep(std::string a, std::string b) {
    g_.independence.insert(SymbolPair(std::move(a), std::move(b)));
    return *this;
  }
  GrammarBuilder& indep_all() {
    all_independent_ = true;
    return *this;
  }
  GrammarBuilder& declare(std::string nt) {
    extra_.insert(std::move(nt));
    return *this;
  }
  Grammar build() const {
    Grammar g = g_;
    g.nonterminals = extra_;
    if (!g.start.empty()) g.nonterminals.insert(g.start);
    for (const auto& p : g.productions) {
      g.nonterminals.insert(p.lhs);
      for (const auto& s : p.rhs) g.nonterminals.insert(s);
      if (!p.letter.empty()) g.alphabet.insert(p.letter);
    }
    for (const auto& pr : g.independence) {
      g.nonterminals.insert(pr.first);
      g.nonterminals.insert(pr.second);
    }
    if (all_independent_) {
      for (auto i = g.nonterminals.begin(); i != g.nonterminals.end(); ++i)
        for (auto j = std::next(i); j != g.nonterminals.end(); ++j)
          g.independence.insert(SymbolPair(*i, *j));
    }
    return g;
  }

 private:
  Grammar g_;
  std::set<std::string> extra_;
  bool all_independent_ = false;
};

// ---------------------------------------------------------------------------
// .pcg text format

namespace detail {

inline bool is_nonterminal_name(const std::string& s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

inline std::string strip_quotes(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

inline std::set<SymbolPair> parse_pair_list(const std::string& text, int line) {
  std::set<SymbolPair> out;
  std::stringstream ss(text);
  std::string chunk;
  while (std::getline(ss, chunk, ',')) {
    auto toks = split_ws(chunk);
    if (toks.empty()) continue;
    if (toks.size() != 2)
      throw ParseError(line, "expected a pair of symbols, got '" + chunk + "'");
    out.insert(SymbolPair(strip_quotes(toks[0]), strip_quotes(toks[1])));
  }
  return out;
}

}  // namespace detail

struct PcgFile {
  Grammar grammar;
  std::optional<LetterIndependence> letter_independence;
};

inline PcgFile parse_pcg(const std::string& text) {
  PcgFile out;
  Grammar& g = out.grammar;
  bool indep_all = false;
  std::optional<std::vector<std::vector<std::string>>> declared_threads;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;

    auto rest_after = [&](const std::string& head) {
      auto pos = line.find(head);
      return line.substr(pos + head.size());
    };

    if (toks[0] == "start:") {
      if (toks.size() != 2) throw ParseError(line_no, "start: needs one symbol");
      g.start = toks[1];
      continue;
    }
    if (toks[0] == "independence:") {
      std::string rest = rest_after("independence:");
      auto val = detail::split_ws(rest);
      if (val.size() == 1 && val[0] == "all") { indep_all = true; continue; }
      if (val.size() == 1 && val[0] == "none") continue;
      auto pairs = detail::parse_pair_list(rest, line_no);
      g.independence.insert(pairs.begin(), pairs.end());
      continue;
    }
    if (toks[0] == "letter-independence:") {
      auto pairs = detail::parse_pair_list(rest_after("letter-independence:"), line_no);
      if (!out.letter_independence) out.letter_independence = LetterIndependence{};
      out.letter_independence->pairs.insert(pairs.begin(), pairs.end());
      continue;
    }
    if (toks[0] == "threads:") {
      std::vector<std::vector<std::string>> blocks;
      std::vector<std::string> cur;
      bool open = false;
      std::string rest = rest_after("threads:");
      std::string massaged;
      for (char c : rest) {
        if (c == '{' || c == '}') { massaged += ' '; massaged += c; massaged += ' '; }
        else massaged += c;
      }
      for (const auto& t : detail::split_ws(massaged)) {
        if (t == "{") { if (open) throw ParseError(line_no, "nested '{'"); open = true; cur.clear(); }
        else if (t == "}") {
          if (!open || cur.empty()) throw ParseError(line_no, "bad thread block");
          std::sort(cur.begin(), cur.end());
          blocks.push_back(cur);
          open = false;
        } else {
          if (!open) throw ParseError(line_no, "thread members must be braced");
          cur.push_back(t);
        }
      }
      if (open) throw ParseError(line_no, "unterminated thread block");
      std::sort(blocks.begin(), blocks.end());
      declared_threads = std::move(blocks);
      continue;
    }

    // Production: LHS -letter-> RHS...
    if (toks.size() < 2)
      throw ParseError(line_no, "expected a production, got '" + line + "'");
    const std::string& arrow = toks[1];
    if (arrow.size() < 3 || arrow.front() != '-' ||
        arrow.compare(arrow.size() - 2, 2, "->") != 0)
      throw ParseError(line_no, "expected '-letter->' arrow, got '" + arrow + "'");
    Production p;
    p.lhs = toks[0];
    if (!detail::is_nonterminal_name(p.lhs))
      throw ParseError(line_no, "non-terminal must start uppercase: " + p.lhs);
    p.letter = detail::strip_quotes(arrow.substr(1, arrow.size() - 3));
    for (std::size_t i = 2; i < toks.size(); ++i) {
      if (!detail::is_nonterminal_name(toks[i]))
        throw ParseError(line_no, "right-hand symbols must be non-terminals: " + toks[i]);
      p.rhs.push_back(toks[i]);
    }
    g.productions.push_back(std::move(p));
  }

  for (const auto& p : g.productions) {
    g.nonterminals.insert(p.lhs);
    for (const auto& s : p.rhs) g.nonterminals.insert(s);
    if (!p.letter.empty()) g.alphabet.insert(p.letter);
  }
  for (const auto& pr : g.independence) {
    g.nonterminals.insert(pr.first);
    g.nonterminals.insert(pr.second);
  }
  if (!g.start.empty()) g.nonterminals.insert(g.start);
  if (indep_all) {
    for (auto i = g.nonterminals.begin(); i != g.nonterminals.end(); ++i)
      for (auto j = std::next(i); j != g.nonterminals.end(); ++j)
        g.independence.insert(SymbolPair(*i, *j));
  }
  if (declared_threads) {
    auto res = threads(g);
    if (std::holds_alternative<NotTransitive>(res)) {
      const auto& t = std::get<NotTransitive>(res).triple;
      throw ParseError(0, "threads declared but dependence is not transitive: (" +
                              t[0] + "," + t[1] + "," + t[2] + ")");
    }
    auto blocks = std::get<ThreadPartition>(res).blocks;
    std::sort(blocks.begin(), blocks.end());
    if (blocks != *declared_threads)
      throw ParseError(0, "declared threads do not match computed threads");
  }
  return out;
}

inline PcgFile parse_pcg_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pcg(ss.str());
}

inline std::string format_letter_token(const std::string& letter) {
  bool plain = !letter.empty() &&
               std::islower(static_cast<unsigned char>(letter[0]));
  for (char c : letter)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '-' || c == '>')
      plain = false;
  return plain ? letter : "\"" + letter + "\"";
}

inline std::string to_pcg(const Grammar& g,
                          const LetterIndependence* letters = nullptr) {
  std::ostringstream out;
  out << "start: " << g.start << "\n";
  if (g.independence.empty()) {
    out << "independence: none\n";
  } else {
    out << "independence: ";
    bool first = true;
    for (const auto& p : g.independence) {
      if (!first) out << ", ";
      out << p.first << " " << p.second;
      first = false;
    }
    out << "\n";
  }
  if (letters && !letters->pairs.empty()) {
    out << "letter-independence: ";
    bool first = true;
    for (const auto& p : letters->pairs) {
      if (!first) out << ", ";
      out << p.first << " " << p.second;
      first = false;
    }
    out << "\n";
  }
  for (const auto& p : g.productions) {
    out << p.lhs << " -" << format_letter_token(p.letter) << "->";
    for (const auto& s : p.rhs) out << " " << s;
    out << "\n";
  }
  return out.str();
}

}  // namespace pccfl
