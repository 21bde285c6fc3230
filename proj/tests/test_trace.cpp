#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

#include <random>

#include "pccfl/gallery.hpp"
#include "pccfl/trace.hpp"

using namespace pccfl;

namespace {
LetterIndependence indep(std::initializer_list<std::pair<std::string, std::string>> ps) {
  LetterIndependence li;
  for (const auto& [a, b] : ps) li.pairs.insert(SymbolPair(a, b));
  return li;
}
}  // namespace

TEST_CASE("word trace equivalence") {
  auto bc = indep({{"b", "c"}});
  CHECK(word_trace_equivalent({"a", "b", "c"}, {"a", "c", "b"}, bc));
  CHECK_FALSE(word_trace_equivalent({"a", "b", "c"}, {"b", "a", "c"}, bc));
  CHECK(word_trace_equivalent({"a", "b"}, {"a", "b"}, bc));
  CHECK_FALSE(word_trace_equivalent({"a"}, {"a", "a"}, bc));
}

TEST_CASE("trace classes") {
  SECTION("one swap") {
    auto cls = trace_class({"a", "b", "c"}, indep({{"b", "c"}}));
    CHECK(cls.words == std::vector<Word>{{"a", "b", "c"}, {"a", "c", "b"}});
  }
  SECTION("identity relation keeps the class a singleton") {
    auto cls = trace_class({"a", "b", "a", "b"}, indep({}));
    CHECK(cls.words == std::vector<Word>{{"a", "b", "a", "b"}});
  }
  SECTION("the length cap is a budget error") {
    Word long_word(20, "a");
    auto cls = trace_class(long_word, indep({}));
    CHECK(cls.budget_exhausted);
  }
  SECTION("fully independent letters give all permutations") {
    auto cls = trace_class({"a", "b", "c"},
                           indep({{"a", "b"}, {"a", "c"}, {"b", "c"}}));
    CHECK(cls.words.size() == 6);
  }
}

TEST_CASE("trace equivalence is an equivalence relation") {
  std::mt19937 rng(5);
  auto li = indep({{"a", "b"}, {"c", "d"}, {"b", "d"}});
  std::vector<std::string> sigma{"a", "b", "c", "d"};
  auto random_word = [&](std::size_t len) {
    Word w;
    for (std::size_t i = 0; i < len; ++i) w.push_back(sigma[rng() % sigma.size()]);
    return w;
  };
  for (int i = 0; i < 50; ++i) {
    Word u = random_word(1 + rng() % 6);
    CHECK(word_trace_equivalent(u, u, li));  // reflexive
    auto cls = trace_class(u, li);
    for (const auto& v : cls.words) {
      CHECK(word_trace_equivalent(u, v, li));
      CHECK(word_trace_equivalent(v, u, li));  // symmetric
      // transitive: everything in the class of v is in the class of u
      auto cls_v = trace_class(v, li);
      CHECK(cls_v.words == cls.words);
    }
  }
}

TEST_CASE("closure membership of the a^n s (bc)^n witness") {
  const auto& entry =
      std::get<CfgWithLetterIndependence>(gallery_get("l3-cfg+indep").payload);
  SECTION("a swap of a language word is in the closure") {
    CHECK(closure_member(entry.grammar, entry.independence,
                         pccfl_test::w("ascb")) == Verdict::yes);
  }
  SECTION("wrong letter counts are rejected") {
    CHECK(closure_member(entry.grammar, entry.independence,
                         pccfl_test::w("asbb")) == Verdict::no);
  }
  SECTION("the empty letter-independence degenerates to plain membership") {
    Engine eng(entry.grammar);
    for (const auto& w : {pccfl_test::w("asbc"), pccfl_test::w("ascb")})
      CHECK(closure_member(entry.grammar, LetterIndependence{}, w) ==
            eng.member(w));
  }
  SECTION("non-empty non-terminal independence is rejected") {
    const Grammar& ex2 = std::get<Grammar>(gallery_get("ex2").payload);
    CHECK_THROWS_AS(closure_member(ex2, entry.independence, {"s"}),
                    std::invalid_argument);
  }
}

TEST_CASE("closure membership of the constrained-shuffle witness") {
  const auto& entry =
      std::get<CfgWithLetterIndependence>(gallery_get("l6-cfg+indep").payload);
  CHECK(closure_member(entry.grammar, entry.independence,
                       {"a", "b", "abar", "dbar", "c", "d"}) == Verdict::yes);
  CHECK(closure_member(entry.grammar, entry.independence,
                       {"a", "abar", "b", "dbar", "c", "d"}) == Verdict::yes);
  CHECK(closure_member(entry.grammar, entry.independence,
                       {"abar", "dbar"}) == Verdict::yes);
  // b may not move past dbar.
  CHECK(closure_member(entry.grammar, entry.independence,
                       {"a", "abar", "dbar", "b", "c", "d"}) == Verdict::no);
}

TEST_CASE("parsing letter independence from the command-line form") {
  auto li = parse_letter_independence("b c,a d");
  CHECK(li.independent("b", "c"));
  CHECK(li.independent("a", "d"));
  CHECK_FALSE(li.independent("a", "b"));
}
