#pragma once

// Built-in corpus of languages used by the tests and the CLI. Every entry
// carries a characteristic predicate describing its documented bounded
// language; the test suite certifies payload and predicate against each other
// up to the entry's check length.

#include <variant>

#include "closures.hpp"
#include "engine.hpp"
#include "grammar.hpp"
#include "pa.hpp"
#include "pump.hpp"
#include "trace.hpp"

namespace pccfl {

struct GalleryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CfgWithLetterIndependence {
  Grammar grammar;
  LetterIndependence independence;
};

struct PredicateLanguage {
  std::vector<std::string> alphabet;
};

struct WitnessPair {
  Grammar first, second;
  std::optional<Homomorphism> hom;
};

struct GalleryEntry {
  std::string name;
  std::string kind;  // grammar | pa-grammar | cfg+letter-independence |
                     // predicate | grammar-pair
  std::string description;
  std::variant<Grammar, PaGrammar, CfgWithLetterIndependence, PredicateLanguage,
               WitnessPair>
      payload;
  std::function<bool(const Word&)> characteristic;
  int check_length = 0;  // bound at which the tests certify the entry
};

// ---------------------------------------------------------------------------
// Characteristic predicates (counting helpers first)

namespace gallery_detail {

inline int count(const Word& w, const std::string& letter) {
  return static_cast<int>(std::count(w.begin(), w.end(), letter));
}

inline bool over_alphabet(const Word& w, const std::set<std::string>& sigma) {
  return std::all_of(w.begin(), w.end(),
                     [&](const std::string& t) { return sigma.count(t) > 0; });
}

inline Word restrict_to(const Word& w, const std::set<std::string>& keep) {
  Word out;
  for (const auto& t : w)
    if (keep.count(t)) out.push_back(t);
  return out;
}

inline Word block(const std::string& letter, int n) {
  return Word(static_cast<std::size_t>(n), letter);
}

}  // namespace gallery_detail

// U_{n>=1} a^n abar (b^n bbar || cbar c^n).
inline bool ex1_characteristic(const Word& w) {
  using namespace gallery_detail;
  if (!over_alphabet(w, {"a", "abar", "b", "bbar", "c", "cbar"})) return false;
  std::size_t n = 0;
  while (n < w.size() && w[n] == "a") ++n;
  if (n < 1 || n >= w.size() || w[n] != "abar") return false;
  Word rest(w.begin() + n + 1, w.end());
  Word left = block("b", static_cast<int>(n));
  left.push_back("bbar");
  Word right{"cbar"};
  Word cs = block("c", static_cast<int>(n));
  right.insert(right.end(), cs.begin(), cs.end());
  return interleaving_member(rest, left, right);
}

// Words w s v: w over {a,b}, v over {a,b,c}, matching a/b counts, one c per
// produced symbol, and the last-in-first-out discipline between the two
// halves: a prefix of v with k letters c may use at most the a's and b's of
// the length-k suffix of w.
inline bool ex2_characteristic(const Word& word) {
  std::ptrdiff_t split = -1;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const std::string& t = word[i];
    if (t == "s") {
      if (split >= 0) return false;
      split = static_cast<std::ptrdiff_t>(i);
    } else if (t != "a" && t != "b" && t != "c") {
      return false;
    } else if (split < 0 && t == "c") {
      return false;  // the first half uses only a and b
    }
  }
  if (split < 0) return false;
  std::size_t wlen = static_cast<std::size_t>(split);
  int wa = 0, wb = 0, va = 0, vb = 0, vc = 0;
  for (std::size_t i = 0; i < wlen; ++i) (word[i] == "a" ? wa : wb)++;
  for (std::size_t i = wlen + 1; i < word.size(); ++i) {
    if (word[i] == "a") ++va;
    else if (word[i] == "b") ++vb;
    else ++vc;
  }
  if (wa != va || wb != vb || vc != va + vb) return false;
  // Suffix counts of the first half: sa[k] = number of a among its last k.
  std::vector<int> sa(wlen + 1, 0), sb(wlen + 1, 0);
  for (std::size_t k = 1; k <= wlen; ++k) {
    sa[k] = sa[k - 1] + (word[wlen - k] == "a" ? 1 : 0);
    sb[k] = sb[k - 1] + (word[wlen - k] == "b" ? 1 : 0);
  }
  // A prefix of the second half with k letters c may use at most the a's and
  // b's of the length-k suffix of the first half.
  int pa = 0, pb = 0, pc = 0;
  for (std::size_t i = wlen + 1; i < word.size(); ++i) {
    if (word[i] == "a") ++pa;
    else if (word[i] == "b") ++pb;
    else ++pc;
    if (sa[pc] < pa || sb[pc] < pb) return false;
  }
  return true;
}

// U_{n>=0} a^n s (b^n || c^n).
inline bool l3_characteristic(const Word& w) {
  using namespace gallery_detail;
  if (!over_alphabet(w, {"a", "b", "c", "s"})) return false;
  std::size_t n = 0;
  while (n < w.size() && w[n] == "a") ++n;
  if (n >= w.size() || w[n] != "s") return false;
  Word rest(w.begin() + n + 1, w.end());
  if (!over_alphabet(rest, {"b", "c"})) return false;
  return count(rest, "b") == static_cast<int>(n) &&
         count(rest, "c") == static_cast<int>(n);
}

// U_{n>=0} (a^n abar dbar d^n || b^n c^n) restricted to words where every b
// precedes every d and dbar.
inline bool l6_characteristic(const Word& w) {
  using namespace gallery_detail;
  if (!over_alphabet(w, {"a", "abar", "b", "c", "d", "dbar"})) return false;
  int n = count(w, "a");
  if (count(w, "b") != n || count(w, "c") != n || count(w, "d") != n)
    return false;
  if (count(w, "abar") != 1 || count(w, "dbar") != 1) return false;
  Word chain = restrict_to(w, {"a", "abar", "d", "dbar"});
  Word expected = block("a", n);
  expected.push_back("abar");
  expected.push_back("dbar");
  Word ds = block("d", n);
  expected.insert(expected.end(), ds.begin(), ds.end());
  if (chain != expected) return false;
  Word bc = restrict_to(w, {"b", "c"});
  Word bc_expected = block("b", n);
  Word cs = block("c", n);
  bc_expected.insert(bc_expected.end(), cs.begin(), cs.end());
  if (bc != bc_expected) return false;
  std::ptrdiff_t last_b = -1, first_d = static_cast<std::ptrdiff_t>(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == "b") last_b = static_cast<std::ptrdiff_t>(i);
    if ((w[i] == "d" || w[i] == "dbar") &&
        static_cast<std::ptrdiff_t>(i) < first_d)
      first_d = static_cast<std::ptrdiff_t>(i);
  }
  return last_b < first_d;
}

inline bool anbncn_characteristic(const Word& w) {
  using namespace gallery_detail;
  int n = static_cast<int>(w.size()) / 3;
  if (n < 1 || static_cast<int>(w.size()) != 3 * n) return false;
  Word expected = block("a", n);
  Word bs = block("b", n), cs = block("c", n);
  expected.insert(expected.end(), bs.begin(), bs.end());
  expected.insert(expected.end(), cs.begin(), cs.end());
  return w == expected;
}

inline bool equal_abc_characteristic(const Word& w) {
  using namespace gallery_detail;
  if (!over_alphabet(w, {"a", "b", "c"})) return false;
  int n = count(w, "a");
  return n >= 1 && count(w, "b") == n && count(w, "c") == n;
}

// ---------------------------------------------------------------------------
// Grammars

namespace gallery_detail {

inline Grammar ex1_grammar() {
  return GrammarBuilder()
      .start("P")
      .prod("P", "a", {"W", "B", "C", "Bbar"})
      .prod("W", "a", {"W", "B", "C"})
      .prod("W", "abar", {"Cbar"})
      .prod("B", "b")
      .prod("Bbar", "bbar")
      .prod("C", "c")
      .prod("Cbar", "cbar")
      .indep("B", "C")
      .indep("B", "Cbar")
      .indep("Bbar", "C")
      .indep("Bbar", "Cbar")
      .build();
}

inline Grammar ex2_grammar() {
  return GrammarBuilder()
      .start("S")
      .prod("S", "s")
      .prod("S", "a", {"S", "A"})
      .prod("S", "b", {"S", "B"})
      .prod("A", "c", {"A'"})
      .prod("A'", "a")
      .prod("B", "c", {"B'"})
      .prod("B'", "b")
      .indep("S", "A'")
      .indep("A", "A'")
      .indep("B", "A'")
      .indep("S", "B'")
      .indep("A", "B'")
      .indep("B", "B'")
      .indep("A'", "B'")
      .build();
}

inline Grammar l3_grammar() {
  return GrammarBuilder()
      .start("S")
      .prod("S", "a", {"S", "P"})
      .prod("S", "s")
      .prod("P", "b", {"C"})
      .prod("P", "c", {"B"})
      .prod("C", "c")
      .prod("B", "b")
      .indep("S", "B")
      .indep("P", "B")
      .indep("S", "C")
      .indep("P", "C")
      .indep("B", "C")
      .build();
}

inline Grammar l3_cfg() {
  return GrammarBuilder()
      .start("S")
      .prod("S", "a", {"S", "P"})
      .prod("S", "s")
      .prod("P", "b", {"C"})
      .prod("C", "c")
      .build();
}

inline Grammar l6_cfg() {
  return GrammarBuilder()
      .start("S")
      .prod("S", "a", {"B", "S", "C", "D"})
      .prod("S", "abar", {"Dbar"})
      .prod("B", "b")
      .prod("C", "c")
      .prod("D", "d")
      .prod("Dbar", "dbar")
      .build();
}

inline LetterIndependence l3_letter_independence() {
  LetterIndependence li;
  li.pairs.insert(SymbolPair("b", "c"));
  return li;
}

inline LetterIndependence l6_letter_independence() {
  LetterIndependence li;
  for (const auto& left : {"a", "abar"})
    for (const auto& right : {"b", "c"}) li.pairs.insert(SymbolPair(left, right));
  li.pairs.insert(SymbolPair("dbar", "c"));
  li.pairs.insert(SymbolPair("d", "c"));
  return li;
}

inline Grammar equal_abc_grammar() {
  return GrammarBuilder()
      .start("S")
      .prod("S", "a", {"S", "B", "C"})
      .prod("S", "b", {"S", "A", "C"})
      .prod("S", "c", {"S", "A", "B"})
      .prod("S", "a", {"B", "C"})
      .prod("S", "b", {"A", "C"})
      .prod("S", "c", {"A", "B"})
      .prod("A", "a")
      .prod("B", "b")
      .prod("C", "c")
      .indep_all()
      .build();
}

inline Grammar single_d_grammar() {
  return GrammarBuilder().start("D").prod("D", "d").build();
}

inline Grammar invhom_l1_grammar() {
  // A^{n+1} S B^n T for n >= 1, over upper-case letters.
  return GrammarBuilder()
      .start("R")
      .prod("R", "A", {"Q", "Tend"})
      .prod("Q", "A", {"Q", "Bend"})
      .prod("Q", "A", {"Send", "Bend"})
      .prod("Send", "S")
      .prod("Bend", "B")
      .prod("Tend", "T")
      .build();
}

inline Grammar invhom_l2_grammar() {
  // S B^n T C^n for n >= 1.
  return GrammarBuilder()
      .start("Z")
      .prod("Z", "S", {"P"})
      .prod("P", "B", {"P", "Cend"})
      .prod("P", "B", {"Tend", "Cend"})
      .prod("Tend", "T")
      .prod("Cend", "C")
      .build();
}

inline Homomorphism invhom_h() {
  Homomorphism h;
  h.mapping["a"] = {"A"};
  h.mapping["s"] = {"S", "S"};
  h.mapping["b"] = {"B", "B"};
  h.mapping["t"] = {"T", "T"};
  h.mapping["c"] = {"C"};
  return h;
}

inline PaGrammar pa_worked_grammar() {
  return PaGrammarBuilder()
      .start("S")
      .prod("S", "a", "(A ; B) || C")
      .prod("A", "b", "eps")
      .prod("B", "c", "eps")
      .prod("C", "d", "eps")
      .build();
}

inline PaGrammar pa_anbn_cm_grammar() {
  // (a^n b^n || c^m) for n, m >= 1.
  return PaGrammarBuilder()
      .start("S")
      .prod("S", "a", "A2 || Cs")
      .prod("S", "c", "Z || Cs")
      .prod("S", "c", "Z")
      .prod("Z", "a", "A2")
      .prod("A2", "a", "A2 ; B")
      .prod("A2", "b", "eps")
      .prod("B", "b", "eps")
      .prod("Cs", "c", "Cs")
      .prod("Cs", "c", "eps")
      .build();
}

inline bool concat_witness_characteristic(const Word& w) {
  if (w.empty() || w.back() != "d") return false;
  Word u(w.begin(), w.end() - 1);
  return equal_abc_characteristic(u);
}

inline bool invhom_witness_characteristic(const Word& w) {
  // Shuffle of A^{n1+1} S B^{n1} T and S B^{n2} T C^{n2}, n1, n2 >= 1.
  for (int n1 = 1; 2 * n1 + 3 <= static_cast<int>(w.size()); ++n1) {
    int rest = static_cast<int>(w.size()) - (2 * n1 + 3);
    if (rest < 4 || rest % 2 != 0) continue;
    int n2 = (rest - 2) / 2;
    if (n2 < 1) continue;
    Word u = block("A", n1 + 1);
    u.push_back("S");
    Word bs = block("B", n1);
    u.insert(u.end(), bs.begin(), bs.end());
    u.push_back("T");
    Word v{"S"};
    Word b2 = block("B", n2);
    v.insert(v.end(), b2.begin(), b2.end());
    v.push_back("T");
    Word cs = block("C", n2);
    v.insert(v.end(), cs.begin(), cs.end());
    if (interleaving_member(w, u, v)) return true;
  }
  return false;
}

inline bool pa_worked_characteristic(const Word& w) {
  static const std::set<Word> words{
      {"a", "b", "c", "d"}, {"a", "b", "d", "c"}, {"a", "d", "b", "c"}};
  return words.count(w) > 0;
}

inline bool pa_anbn_cm_characteristic(const Word& w) {
  if (!over_alphabet(w, {"a", "b", "c"})) return false;
  if (count(w, "c") < 1) return false;
  Word rest = restrict_to(w, {"a", "b"});
  int n = static_cast<int>(rest.size()) / 2;
  if (n < 1 || static_cast<int>(rest.size()) != 2 * n) return false;
  Word expected = block("a", n);
  Word bs = block("b", n);
  expected.insert(expected.end(), bs.begin(), bs.end());
  return rest == expected;
}

inline std::vector<GalleryEntry> build_entries() {
  std::vector<GalleryEntry> entries;
  entries.push_back(
      {"ex1", "grammar",
       "U_{n>=1} a^n abar (b^n bbar || cbar c^n); its dependence is not "
       "transitive (witness (B,P,C))",
       ex1_grammar(), ex1_characteristic, 9});
  entries.push_back(
      {"ex2", "grammar",
       "words w s v with w over {a,b}, matching a/b counts in v, one c per "
       "produced symbol and a LIFO discipline; threads {S,A,B},{A'},{B'}",
       ex2_grammar(), ex2_characteristic, 10});
  entries.push_back({"l3-grammar", "grammar",
                     "U_{n>=0} a^n s (b^n || c^n); threads {S,P},{B},{C}",
                     l3_grammar(), l3_characteristic, 9});
  entries.push_back(
      {"l3-cfg+indep", "cfg+letter-independence",
       "plain CFG for a^n s (bc)^n whose trace closure under {(b,c)} is "
       "U_{n>=0} a^n s (b^n || c^n)",
       CfgWithLetterIndependence{l3_cfg(), l3_letter_independence()},
       l3_characteristic, 9});
  entries.push_back(
      {"l6-cfg+indep", "cfg+letter-independence",
       "plain CFG for (ab)^n abar dbar (cd)^n; its trace closure is the set "
       "of shuffles of a^n abar dbar d^n with b^n c^n in which every b "
       "precedes every d and dbar",
       CfgWithLetterIndependence{l6_cfg(), l6_letter_independence()},
       l6_characteristic, 12});
  entries.push_back({"anbncn", "predicate",
                     "a^n b^n c^n for n >= 1; outside both the "
                     "partially-commutative and the shuffle classes",
                     PredicateLanguage{{"a", "b", "c"}}, anbncn_characteristic,
                     12});
  entries.push_back({"equal-abc", "grammar",
                     "words over {a,b,c} with equally many of each letter "
                     "(at least one); fully commutative grammar",
                     equal_abc_grammar(), equal_abc_characteristic, 9});
  entries.push_back(
      {"concat-witness", "grammar-pair",
       "pair (equal-abc, {d}); concatenating them leaves the class with "
       "transitive dependence",
       WitnessPair{equal_abc_grammar(), single_d_grammar(), std::nullopt},
       concat_witness_characteristic, 7});
  entries.push_back(
      {"invhom-witness", "grammar-pair",
       "pair A^{n+1} S B^n T and S B^n T C^n with the homomorphism a->A, "
       "s->SS, b->BB, t->TT, c->C; the preimage of their shuffle is "
       "a^{n+1} s b^n t c^n",
       WitnessPair{invhom_l1_grammar(), invhom_l2_grammar(), invhom_h()},
       invhom_witness_characteristic, 11});
  entries.push_back({"pa-worked", "pa-grammar",
                     "a ((b c) || d) = {abcd, abdc, adbc}",
                     pa_worked_grammar(), pa_worked_characteristic, 4});
  entries.push_back({"pa-anbn-cm", "pa-grammar",
                     "(a^n b^n || c^m) for n, m >= 1",
                     pa_anbn_cm_grammar(), pa_anbn_cm_characteristic, 8});
  return entries;
}

}  // namespace gallery_detail

inline const std::vector<GalleryEntry>& gallery_entries() {
  static const std::vector<GalleryEntry> entries =
      gallery_detail::build_entries();
  return entries;
}

inline std::vector<std::string> gallery_list() {
  std::vector<std::string> names;
  for (const auto& e : gallery_entries()) names.push_back(e.name);
  std::sort(names.begin(), names.end());
  return names;
}

inline const GalleryEntry& gallery_get(const std::string& name) {
  for (const auto& e : gallery_entries())
    if (e.name == name) return e;
  std::string msg = "unknown gallery entry '" + name + "'; available:";
  for (const auto& n : gallery_list()) msg += " " + n;
  throw GalleryError(msg);
}

// A membership oracle for any entry: grammars and pa-grammars answer through
// their engines, cfg+letter-independence entries through trace-closure
// membership, predicates and pairs through the characteristic.
inline LanguageOracle gallery_oracle(const std::string& name) {
  const GalleryEntry& e = gallery_get(name);
  if (std::holds_alternative<Grammar>(e.payload))
    return LanguageOracle::from_grammar(std::get<Grammar>(e.payload));
  if (std::holds_alternative<PaGrammar>(e.payload))
    return LanguageOracle::from_pa(std::get<PaGrammar>(e.payload));
  if (std::holds_alternative<CfgWithLetterIndependence>(e.payload)) {
    auto shared = std::make_shared<CfgWithLetterIndependence>(
        std::get<CfgWithLetterIndependence>(e.payload));
    std::vector<std::string> sigma(shared->grammar.alphabet.begin(),
                                   shared->grammar.alphabet.end());
    return LanguageOracle::from_function(
        e.name, std::move(sigma), [shared](const Word& w) {
          return closure_member(shared->grammar, shared->independence, w);
        });
  }
  if (std::holds_alternative<PredicateLanguage>(e.payload))
    return LanguageOracle::from_predicate(
        e.name, std::get<PredicateLanguage>(e.payload).alphabet,
        e.characteristic);
  // grammar-pair: the combined witness language via its characteristic
  std::set<std::string> sigma;
  const auto& pair = std::get<WitnessPair>(e.payload);
  sigma.insert(pair.first.alphabet.begin(), pair.first.alphabet.end());
  sigma.insert(pair.second.alphabet.begin(), pair.second.alphabet.end());
  return LanguageOracle::from_predicate(
      e.name, {sigma.begin(), sigma.end()}, e.characteristic);
}

// Exported file name + content per entry; predicates are not exportable.
inline std::vector<std::pair<std::string, std::string>> gallery_export(
    const std::string& name) {
  const GalleryEntry& e = gallery_get(name);
  if (std::holds_alternative<Grammar>(e.payload))
    return {{e.name + ".pcg", to_pcg(std::get<Grammar>(e.payload))}};
  if (std::holds_alternative<PaGrammar>(e.payload))
    return {{e.name + ".pag", to_pag_text(std::get<PaGrammar>(e.payload))}};
  if (std::holds_alternative<CfgWithLetterIndependence>(e.payload)) {
    const auto& c = std::get<CfgWithLetterIndependence>(e.payload);
    return {{e.name + ".pcg", to_pcg(c.grammar, &c.independence)}};
  }
  if (std::holds_alternative<WitnessPair>(e.payload)) {
    const auto& p = std::get<WitnessPair>(e.payload);
    std::vector<std::pair<std::string, std::string>> out{
        {e.name + ".l1.pcg", to_pcg(p.first)},
        {e.name + ".l2.pcg", to_pcg(p.second)}};
    return out;
  }
  throw GalleryError("entry '" + name + "' is predicate-backed and has no file form");
}

}  // namespace pccfl
