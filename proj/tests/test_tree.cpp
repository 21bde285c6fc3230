#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

#include "pccfl/gallery.hpp"
#include "pccfl/tree.hpp"

using namespace pccfl;

namespace {

const Grammar& ex2() { return std::get<Grammar>(gallery_get("ex2").payload); }

// The seven-node tree induced by the worked derivation of "absccab":
// 1: S-a->SA with children 2: S-b->SB and 3: A-c->A'; 2 has 4: S-s-> and
// 5: B-c->B'; 5 has 6: B'-b->; 3 has 7: A'-a->.
int prod_index(const Grammar& g, const std::string& lhs, const std::string& letter) {
  for (int i = 0; i < static_cast<int>(g.productions.size()); ++i)
    if (g.productions[i].lhs == lhs && g.productions[i].letter == letter) return i;
  FAIL("no production " + lhs + " -" + letter + "->");
  return -1;
}

DerivationTree worked_tree() {
  const Grammar& g = ex2();
  std::vector<TreeNode> nodes{
      {1, "S", prod_index(g, "S", "a"), {2, 3}},
      {2, "S", prod_index(g, "S", "b"), {4, 5}},
      {3, "A", prod_index(g, "A", "c"), {7}},
      {4, "S", prod_index(g, "S", "s"), {}},
      {5, "B", prod_index(g, "B", "c"), {6}},
      {6, "B'", prod_index(g, "B'", "b"), {}},
      {7, "A'", prod_index(g, "A'", "a"), {}},
  };
  return DerivationTree::make(g, nodes, 1);
}

Certificate worked_cert(std::vector<int> order) {
  return Certificate{worked_tree(), std::move(order)};
}

}  // namespace

TEST_CASE("the worked derivation induces the worked tree and firing order") {
  Engine eng(ex2());
  Word w = parse_word("absccab", eng.letter_names());
  auto wit = eng.witness(w);
  REQUIRE(wit.derivation.has_value());
  auto [tree, order] = tree_from_derivation(ex2(), *wit.derivation);
  CHECK(tree == worked_tree());
  CHECK(order == std::vector<int>{1, 2, 4, 5, 3, 7, 6});
}

TEST_CASE("one production gives a one-node tree") {
  Grammar g = GrammarBuilder().start("S").prod("S", "a").build();
  Engine eng(g);
  auto wit = eng.witness({"a"});
  REQUIRE(wit.derivation.has_value());
  auto [tree, order] = tree_from_derivation(g, *wit.derivation);
  CHECK(tree.size() == 1);
  CHECK(order == std::vector<int>{1});
  auto tw = words_of_tree(g, tree, 10);
  CHECK(tw.words == std::vector<Word>{{"a"}});
}

TEST_CASE("different derivations may induce the same tree") {
  Engine eng(ex2());
  Word w2 = parse_word("abscbca", eng.letter_names());
  auto wit = eng.witness(w2);
  REQUIRE(wit.derivation.has_value());
  auto [tree, order] = tree_from_derivation(ex2(), *wit.derivation);
  CHECK(tree == worked_tree());
  CHECK(order != std::vector<int>{1, 2, 4, 5, 3, 7, 6});
}

TEST_CASE("certificate verification") {
  const Grammar& g = ex2();
  SECTION("the worked order certifies the worked word") {
    CHECK(verify_certificate(g, pccfl_test::w("absccab"),
                             worked_cert({1, 2, 4, 5, 3, 7, 6})));
  }
  SECTION("a different feasible order certifies a different word") {
    CHECK(verify_certificate(g, pccfl_test::w("absccba"),
                             worked_cert({1, 2, 4, 5, 3, 6, 7})));
  }
  SECTION("orders blocked by the same-thread discipline are rejected") {
    CHECK_FALSE(verify_certificate(g, pccfl_test::w("abcscab"),
                                   worked_cert({1, 2, 4, 3, 5, 7, 6})));
    // After 1 and 2 the live configuration is S4 B5 A3; A3 sits behind the
    // dependent S4, so it may not fire third.
    CHECK_FALSE(verify_certificate(g, pccfl_test::w("abcscab"),
                                   worked_cert({1, 2, 3, 4, 5, 7, 6})));
  }
  SECTION("mismatched word length is an error") {
    CHECK_THROWS_AS(
        verify_certificate(g, pccfl_test::w("abs"), worked_cert({1, 2, 4, 5, 3, 7, 6})),
        std::invalid_argument);
  }
  SECTION("order must be a permutation of the nodes") {
    CHECK_THROWS_AS(verify_certificate(g, pccfl_test::w("absccab"),
                                       worked_cert({1, 2, 4, 5, 3, 7, 7})),
                    std::invalid_argument);
  }
}

TEST_CASE("ill-formed trees are rejected at construction") {
  const Grammar& g = ex2();
  std::vector<TreeNode> nodes{
      {1, "S", prod_index(g, "S", "a"), {2, 3}},
      {2, "S", prod_index(g, "S", "s"), {}},
      {3, "B", prod_index(g, "B", "c"), {4}},  // label B under an S A production
      {4, "B'", prod_index(g, "B'", "b"), {}},
  };
  CHECK_THROWS_AS(DerivationTree::make(g, nodes, 1), std::invalid_argument);
}

TEST_CASE("words of a tree") {
  auto tw = words_of_tree(ex2(), worked_tree(), 100);
  std::vector<Word> expected{pccfl_test::w("abscbca"),
                             pccfl_test::w("absccab"),
                             pccfl_test::w("absccba")};
  std::sort(expected.begin(), expected.end(), length_lex_less);
  CHECK(tw.words == expected);
  CHECK_FALSE(tw.limit_exhausted);

  SECTION("the limit truncates and is flagged") {
    auto small = words_of_tree(ex2(), worked_tree(), 1);
    CHECK(small.limit_exhausted);
    CHECK(small.words.size() <= 1);
  }
}

TEST_CASE("induced subword") {
  Word w1 = pccfl_test::w("absccab");
  Word w2 = pccfl_test::w("abscbca");
  Engine eng(ex2());
  auto c1 = worked_cert({1, 2, 4, 5, 3, 7, 6});
  auto wit2 = eng.witness(w2);
  REQUIRE(wit2.derivation.has_value());
  auto [t2, o2] = tree_from_derivation(ex2(), *wit2.derivation);
  Certificate c2{t2, o2};
  SECTION("node 2 induces the same subword for both words") {
    CHECK(induced_subword(w1, c1, 2) == pccfl_test::w("bscb"));
    CHECK(induced_subword(w2, c2, 2) == pccfl_test::w("bscb"));
  }
  SECTION("the root induces the whole word") {
    CHECK(induced_subword(w1, c1, 1) == w1);
  }
  SECTION("unknown nodes are an error") {
    CHECK_THROWS_AS(induced_subword(w1, c1, 99), std::invalid_argument);
  }
}

TEST_CASE("infix rearrangement") {
  Engine eng(ex2());
  SECTION("scattered subword becomes an infix of a language word") {
    Word w = pccfl_test::w("absccba");
    Certificate cert = worked_cert({1, 2, 4, 5, 3, 6, 7});
    REQUIRE(verify_certificate(ex2(), w, cert));
    auto split = rearrange_to_infix(ex2(), w, cert, 3);
    CHECK(split.prefix == pccfl_test::w("absc"));
    CHECK(split.infix == pccfl_test::w("ca"));
    CHECK(split.suffix == pccfl_test::w("b"));
    Word rearranged = concat_words(concat_words(split.prefix, split.infix),
                                   split.suffix);
    CHECK(rearranged == pccfl_test::w("absccab"));
    CHECK(eng.member(rearranged) == Verdict::yes);
  }
  SECTION("already an infix") {
    Word w = pccfl_test::w("absccab");
    auto split = rearrange_to_infix(ex2(), w, worked_cert({1, 2, 4, 5, 3, 7, 6}), 3);
    CHECK(split.prefix == pccfl_test::w("absc"));
    CHECK(split.infix == pccfl_test::w("ca"));
    CHECK(split.suffix == pccfl_test::w("b"));
  }
  SECTION("the root rearranges to the word itself") {
    Word w = pccfl_test::w("absccab");
    auto split = rearrange_to_infix(ex2(), w, worked_cert({1, 2, 4, 5, 3, 7, 6}), 1);
    CHECK(split.prefix.empty());
    CHECK(split.infix == w);
    CHECK(split.suffix.empty());
  }
}

TEST_CASE("substitutivity") {
  const Grammar& g = ex2();
  Engine eng(g);
  SECTION("replacing a subtree by itself gives back the tree") {
    auto tree = worked_tree();
    auto sub_ids = tree.subtree_ids(5);
    std::vector<TreeNode> sub_nodes;
    for (int id : sub_ids) sub_nodes.push_back(tree.node(id));
    DerivationTree replacement = DerivationTree::make(g, sub_nodes, 5);
    DerivationTree out = substitute(tree, 5, replacement);
    auto before = words_of_tree(g, tree, 100);
    auto after = words_of_tree(g, out, 100);
    CHECK(before.words == after.words);
  }
  SECTION("grafting a larger S-subtree keeps every emitted word in the language") {
    Word longer = parse_word("babscccabb", eng.letter_names());
    REQUIRE(eng.member(longer) == Verdict::yes);
    auto wit = eng.witness(longer);
    REQUIRE(wit.derivation.has_value());
    auto [big_tree, big_order] = tree_from_derivation(g, *wit.derivation);
    REQUIRE(big_tree.node(big_tree.root()).label == "S");
    DerivationTree out = substitute(worked_tree(), 2, big_tree);
    CHECK(out.size() == worked_tree().size() - worked_tree().subtree_ids(2).size() +
                            big_tree.size());
    auto tw = words_of_tree(g, out, 400);
    REQUIRE_FALSE(tw.words.empty());
    for (const auto& w : tw.words) CHECK(eng.member(w) == Verdict::yes);
  }
  SECTION("label mismatch is an error") {
    auto tree = worked_tree();
    auto sub_ids = tree.subtree_ids(3);  // A-rooted
    std::vector<TreeNode> sub_nodes;
    for (int id : sub_ids) sub_nodes.push_back(tree.node(id));
    DerivationTree a_tree = DerivationTree::make(g, sub_nodes, 3);
    CHECK_THROWS_AS(substitute(tree, 5, a_tree), std::invalid_argument);
  }
}

TEST_CASE("certificate JSON round trip is bit exact") {
  Certificate cert = worked_cert({1, 2, 4, 5, 3, 7, 6});
  std::string text = certificate_to_json(cert);
  Certificate parsed = certificate_from_json(ex2(), text);
  CHECK(parsed == cert);
  CHECK(certificate_to_json(parsed) == text);
}

TEST_CASE("round trip: witness -> tree -> certificate verifies") {
  for (const char* name : {"ex1", "ex2", "l3-grammar"}) {
    const Grammar& g = std::get<Grammar>(gallery_get(name).payload);
    Engine eng(g);
    for (const auto& w : eng.enumerate(6).words) {
      auto wit = eng.witness(w);
      REQUIRE(wit.derivation.has_value());
      auto [tree, order] = tree_from_derivation(g, *wit.derivation);
      CHECK(verify_certificate(g, w, Certificate{tree, order}));
      CHECK(tree.size() == w.size());
    }
  }
}

TEST_CASE("words of a tree agree with brute force over all firing orders") {
  // Independent route: try every permutation of the node ids as an order and
  // collect the words that verify.
  for (const char* name : {"ex2", "l3-grammar", "equal-abc"}) {
    const Grammar& g = std::get<Grammar>(gallery_get(name).payload);
    Engine eng(g);
    for (const auto& w : eng.enumerate(5).words) {
      auto wit = eng.witness(w);
      REQUIRE(wit.derivation.has_value());
      auto [tree, order] = tree_from_derivation(g, *wit.derivation);
      std::vector<int> ids = tree.ids();
      std::sort(ids.begin(), ids.end());
      std::set<Word> brute;
      do {
        Word candidate(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i)
          candidate[i] = g.productions[tree.node(ids[i]).production].letter;
        if (verify_certificate(g, candidate, Certificate{tree, ids}))
          brute.insert(candidate);
      } while (std::next_permutation(ids.begin(), ids.end()));
      auto tw = words_of_tree(g, tree, 10000);
      REQUIRE_FALSE(tw.limit_exhausted);
      std::set<Word> got(tw.words.begin(), tw.words.end());
      INFO(name << " word " << format_word(w));
      CHECK(got == brute);
    }
  }
}
