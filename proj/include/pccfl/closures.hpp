#pragma once

// Grammar constructions: union, shuffle, concatenation, letter substitution
// and homomorphic image. All constructions return fresh grammars; input
// non-terminals are renamed apart automatically so a grammar may be combined
// with itself.

#include <map>

#include "grammar.hpp"

namespace pccfl {

namespace detail {

// Renames every non-terminal of g by one uniform "_k" suffix chosen so that
// no renamed name collides with `taken`.
inline Grammar rename_apart(const Grammar& g, const std::set<std::string>& taken,
                            int first_tag = 2) {
  for (int k = first_tag;; ++k) {
    std::string suffix = "_" + std::to_string(k);
    bool ok = true;
    for (const auto& nt : g.nonterminals)
      if (taken.count(nt + suffix)) { ok = false; break; }
    if (!ok) continue;
    Grammar out;
    out.alphabet = g.alphabet;
    auto ren = [&](const std::string& s) { return s + suffix; };
    out.start = ren(g.start);
    for (const auto& nt : g.nonterminals) out.nonterminals.insert(ren(nt));
    for (const auto& p : g.productions) {
      Production q;
      q.lhs = ren(p.lhs);
      q.letter = p.letter;
      for (const auto& s : p.rhs) q.rhs.push_back(ren(s));
      out.productions.push_back(std::move(q));
    }
    for (const auto& pr : g.independence)
      out.independence.insert(SymbolPair(ren(pr.first), ren(pr.second)));
    return out;
  }
}

inline std::string fresh_name(std::string base, const std::set<std::string>& taken) {
  while (taken.count(base)) base += "'";
  return base;
}

// Renames g1 and g2 apart and picks a fresh start symbol.
struct CombinedParts {
  Grammar g1, g2;
  std::string start;
};

inline CombinedParts rename_pair(const Grammar& a, const Grammar& b) {
  CombinedParts out;
  out.g1 = a;
  std::set<std::string> taken = a.nonterminals;
  bool collides = false;
  for (const auto& nt : b.nonterminals)
    if (taken.count(nt)) { collides = true; break; }
  out.g2 = collides ? rename_apart(b, taken) : b;
  taken.insert(out.g2.nonterminals.begin(), out.g2.nonterminals.end());
  // The fresh start may not collide with letters either.
  taken.insert(a.alphabet.begin(), a.alphabet.end());
  taken.insert(b.alphabet.begin(), b.alphabet.end());
  out.start = fresh_name("S", taken);
  return out;
}

inline void merge_symbols(Grammar& out, const Grammar& g) {
  out.alphabet.insert(g.alphabet.begin(), g.alphabet.end());
  out.nonterminals.insert(g.nonterminals.begin(), g.nonterminals.end());
  out.productions.insert(out.productions.end(), g.productions.begin(),
                         g.productions.end());
  out.independence.insert(g.independence.begin(), g.independence.end());
}

inline void cross_independent(Grammar& out, const Grammar& a, const Grammar& b) {
  for (const auto& x : a.nonterminals)
    for (const auto& y : b.nonterminals)
      out.independence.insert(SymbolPair(x, y));
}

inline void isolate(Grammar& out, const std::string& nt) {
  for (const auto& other : out.nonterminals)
    if (other != nt) out.independence.insert(SymbolPair(nt, other));
}

}  // namespace detail

// Fresh start with the start productions of both sides. The fresh start is
// independent of everything else, so transitivity of dependence survives.
inline Grammar union_of(const Grammar& a, const Grammar& b) {
  auto parts = detail::rename_pair(a, b);
  Grammar out;
  detail::merge_symbols(out, parts.g1);
  detail::merge_symbols(out, parts.g2);
  detail::cross_independent(out, parts.g1, parts.g2);
  out.start = parts.start;
  out.nonterminals.insert(out.start);
  for (const auto& g : {parts.g1, parts.g2})
    for (const auto& p : g.productions)
      if (p.lhs == g.start)
        out.productions.push_back({out.start, p.letter, p.rhs});
  detail::isolate(out, out.start);
  return out;
}

// S -a1-> alpha1 S2 and S -a2-> alpha2 S1 for the start productions of either
// side; symbols of different sides are independent.
inline Grammar shuffle(const Grammar& a, const Grammar& b) {
  auto parts = detail::rename_pair(a, b);
  Grammar out;
  detail::merge_symbols(out, parts.g1);
  detail::merge_symbols(out, parts.g2);
  detail::cross_independent(out, parts.g1, parts.g2);
  out.start = parts.start;
  out.nonterminals.insert(out.start);
  for (const auto& p : parts.g1.productions)
    if (p.lhs == parts.g1.start) {
      Production q{out.start, p.letter, p.rhs};
      q.rhs.push_back(parts.g2.start);
      out.productions.push_back(std::move(q));
    }
  for (const auto& p : parts.g2.productions)
    if (p.lhs == parts.g2.start) {
      Production q{out.start, p.letter, p.rhs};
      q.rhs.push_back(parts.g1.start);
      out.productions.push_back(std::move(q));
    }
  detail::isolate(out, out.start);
  return out;
}

// Like shuffle but only the left-hand start productions are added and symbols
// of different sides are dependent, which serializes the two halves. The
// result's dependence is generally not transitive.
inline Grammar concat(const Grammar& a, const Grammar& b) {
  auto parts = detail::rename_pair(a, b);
  Grammar out;
  detail::merge_symbols(out, parts.g1);
  detail::merge_symbols(out, parts.g2);
  out.start = parts.start;
  out.nonterminals.insert(out.start);
  for (const auto& p : parts.g1.productions)
    if (p.lhs == parts.g1.start) {
      Production q{out.start, p.letter, p.rhs};
      q.rhs.push_back(parts.g2.start);
      out.productions.push_back(std::move(q));
    }
  return out;
}

struct LetterSubstitution {
  std::map<std::string, Grammar> mapping;  // letter -> image grammar
};

// For each production X -a-> alpha and each image start production
// S_a -b-> beta, adds X -b-> beta alpha. Image copies are dependent on
// everything outside themselves, so an image word is generated contiguously.
inline Grammar substitute_letters(const Grammar& g, const LetterSubstitution& s) {
  for (const auto& a : g.alphabet)
    if (!s.mapping.count(a))
      throw std::invalid_argument("substitution has no image for letter " + a);
  Grammar out;
  out.nonterminals = g.nonterminals;
  out.start = g.start;
  out.independence = g.independence;
  std::set<std::string> taken = g.nonterminals;
  std::map<std::string, Grammar> images;
  int tag = 2;
  for (const auto& a : g.alphabet) {  // sorted, so renaming is deterministic
    Grammar img = detail::rename_apart(s.mapping.at(a), taken, tag++);
    taken.insert(img.nonterminals.begin(), img.nonterminals.end());
    out.alphabet.insert(img.alphabet.begin(), img.alphabet.end());
    out.nonterminals.insert(img.nonterminals.begin(), img.nonterminals.end());
    out.independence.insert(img.independence.begin(), img.independence.end());
    images[a] = std::move(img);
  }
  for (const auto& p : g.productions) {
    const Grammar& img = images.at(p.letter);
    for (const auto& ip : img.productions)
      if (ip.lhs == img.start) {
        Production q{p.lhs, ip.letter, ip.rhs};
        q.rhs.insert(q.rhs.end(), p.rhs.begin(), p.rhs.end());
        out.productions.push_back(std::move(q));
      }
  }
  for (const auto& [a, img] : images)
    out.productions.insert(out.productions.end(), img.productions.begin(),
                           img.productions.end());
  return out;
}

struct Homomorphism {
  std::map<std::string, Word> mapping;  // letter -> non-empty word
};

// Chain grammar for a single word; used to express a homomorphism as a
// substitution.
inline Grammar single_word_grammar(const Word& w, const std::string& stem) {
  if (w.empty()) throw std::invalid_argument("homomorphism image must be non-empty");
  GrammarBuilder b;
  std::vector<std::string> chain;
  for (std::size_t i = 0; i < w.size(); ++i)
    chain.push_back(stem + std::to_string(i + 1));
  b.start(chain[0]);
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::vector<std::string> rhs;
    if (i + 1 < w.size()) rhs.push_back(chain[i + 1]);
    b.prod(chain[i], w[i], rhs);
  }
  return b.build();
}

inline Grammar hom_image(const Grammar& g, const Homomorphism& h) {
  LetterSubstitution s;
  for (const auto& [a, image] : h.mapping) {
    if (image.empty())
      throw std::invalid_argument("homomorphism image of " + a + " is empty");
    s.mapping[a] = single_word_grammar(image, "H");
  }
  for (const auto& a : g.alphabet)
    if (!s.mapping.count(a))
      throw std::invalid_argument("homomorphism has no image for letter " + a);
  return substitute_letters(g, s);
}

}  // namespace pccfl
