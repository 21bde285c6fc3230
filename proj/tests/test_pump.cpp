#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

#include "pccfl/gallery.hpp"
#include "pccfl/pump.hpp"

using namespace pccfl;

namespace {

Word w_of(const std::string& s) { return pccfl_test::w(s); }

LanguageOracle anbn_oracle() {
  return LanguageOracle::from_predicate("anbn", {"a", "b"}, [](const Word& w) {
    std::size_t n = w.size() / 2;
    if (n < 1 || w.size() != 2 * n) return false;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] != (i < n ? "a" : "b")) return false;
    return true;
  });
}

Word ex1_word(int n) {
  Word w(static_cast<std::size_t>(n), "a");
  w.push_back("abar");
  for (int i = 0; i < n; ++i) w.push_back("b");
  w.push_back("bbar");
  w.push_back("cbar");
  for (int i = 0; i < n; ++i) w.push_back("c");
  return w;
}

}  // namespace

TEST_CASE("interleaving membership") {
  CHECK(interleaving_member(w_of("abc"), w_of("ab"), w_of("c")));
  CHECK(interleaving_member(w_of("abc"), w_of("ac"), w_of("b")));
  CHECK_FALSE(interleaving_member(w_of("abc"), w_of("ba"), w_of("c")));
  CHECK(interleaving_member({}, {}, {}));
  CHECK_FALSE(interleaving_member(w_of("ab"), w_of("ab"), w_of("ab")));
}

TEST_CASE("interleaving sets") {
  auto set = interleavings(w_of("ab"), w_of("c"));
  CHECK(set == std::vector<Word>{w_of("abc"), w_of("acb"), w_of("cab")});
  CHECK(interleavings({}, {}).size() == 1);
}

TEST_CASE("checking a given decomposition") {
  auto oracle = anbn_oracle();
  SECTION("a valid shuffle decomposition of a^4 b^4") {
    PumpDecomposition d;
    d.mode = PumpMode::shuffle;
    d.x = w_of("aaa");
    d.s = w_of("a");
    d.t = w_of("b");
    d.z = w_of("bbb");
    auto res = check_decomposition(oracle, w_of("aaaabbbb"), d, 2, 2);
    CHECK(res.structure_ok);
    CHECK(res.ok);
    REQUIRE(res.pump.size() == 3);
    CHECK(res.pump[2].word == w_of("aaaaabbbbb"));
  }
  SECTION("a repeatable word with two distinct letters fails when pumped twice") {
    auto abc = gallery_oracle("anbncn");
    PumpDecomposition d;
    d.mode = PumpMode::shuffle;
    d.x = w_of("aaaa");
    d.s = w_of("ab");
    d.y = w_of("bbb");
    d.t = w_of("c");
    d.z = w_of("bcccc");
    Word w;
    for (int i = 0; i < 5; ++i) w.push_back("a");
    for (int i = 0; i < 5; ++i) w.push_back("b");
    for (int i = 0; i < 5; ++i) w.push_back("c");
    auto res = check_decomposition(abc, w, d, 6, 2);
    CHECK_FALSE(res.ok);
  }
  SECTION("concat mode requires a non-empty repeatable pair") {
    PumpDecomposition d;
    d.mode = PumpMode::concat;
    d.x = w_of("aa");
    d.y = w_of("ab");
    d.z = w_of("bb");
    auto res = check_decomposition(oracle, w_of("aaabbb"), d, 2, 2);
    CHECK_FALSE(res.structure_ok);
    CHECK(res.reason == "|s t| must be at least 1");
  }
  SECTION("monotone in the pumping bound") {
    PumpDecomposition d;
    d.mode = PumpMode::shuffle;
    d.x = w_of("aaa");
    d.s = w_of("a");
    d.t = w_of("b");
    d.z = w_of("bbb");
    for (int big = 0; big <= 4; ++big) {
      bool ok_big = check_decomposition(oracle, w_of("aaaabbbb"), d, 2, big).ok;
      for (int small = 0; small <= big; ++small)
        if (ok_big)
          CHECK(check_decomposition(oracle, w_of("aaaabbbb"), d, 2, small).ok);
    }
  }
}

TEST_CASE("searching for decompositions") {
  SECTION("a^4 b^4 pumps in shuffle mode at N=2") {
    auto rep = find_decomposition(anbn_oracle(), w_of("aaaabbbb"), 2,
                                  PumpMode::shuffle, 2);
    REQUIRE(rep.outcome == PumpOutcome::found);
    CHECK(check_decomposition(anbn_oracle(), w_of("aaaabbbb"),
                              *rep.decomposition, 2, 2)
              .ok);
  }
  SECTION("a^5 b^5 c^5 has no shuffle decomposition at N=4") {
    Word w;
    for (const char* l : {"a", "b", "c"})
      for (int i = 0; i < 5; ++i) w.push_back(l);
    auto rep = find_decomposition(gallery_oracle("anbncn"), w, 4,
                                  PumpMode::shuffle, 2);
    CHECK(rep.outcome == PumpOutcome::none);
  }
  SECTION("the interleaving witness has no concat decomposition at N=3") {
    // Same search as the acceptance suite but against the characteristic
    // predicate, which is much cheaper than the grammar engine.
    const auto& e = gallery_get("ex1");
    auto oracle = LanguageOracle::from_predicate(
        "ex1-formula", {"a", "abar", "b", "bbar", "c", "cbar"}, e.characteristic);
    auto rep = find_decomposition(oracle, ex1_word(4), 3, PumpMode::concat, 2);
    CHECK(rep.outcome == PumpOutcome::none);
  }
  SECTION("the interleaving witness needs |s y t| of 5 in shuffle mode") {
    const auto& e = gallery_get("ex1");
    auto oracle = LanguageOracle::from_predicate(
        "ex1-formula", {"a", "abar", "b", "bbar", "c", "cbar"}, e.characteristic);
    auto none = find_decomposition(oracle, ex1_word(2), 4, PumpMode::shuffle, 2);
    CHECK(none.outcome == PumpOutcome::none);
    auto found = find_decomposition(oracle, ex1_word(2), 5, PumpMode::shuffle, 2);
    REQUIRE(found.outcome == PumpOutcome::found);
    const auto& d = *found.decomposition;
    CHECK(d.s.size() + d.y.size() + d.t.size() == 5);
    // Its shortest words cannot be pumped down at all: removing the matched
    // letters would empty the leading block.
    auto short_word = find_decomposition(oracle, ex1_word(1), 6,
                                         PumpMode::shuffle, 2);
    CHECK(short_word.outcome == PumpOutcome::none);
  }
  SECTION("over-long words are rejected up front") {
    Word w(40, "a");
    CHECK_THROWS_AS(
        find_decomposition(anbn_oracle(), w, 2, PumpMode::shuffle, 2),
        std::invalid_argument);
  }
  SECTION("budget exhaustion is an explicit outcome") {
    PumpLimits lim;
    lim.max_candidates = 3;
    auto rep = find_decomposition(anbn_oracle(), w_of("aaaabbbb"), 2,
                                  PumpMode::shuffle, 2, lim);
    CHECK(rep.outcome == PumpOutcome::budget_exhausted);
  }
}

TEST_CASE("alternative shuffle scheme") {
  SECTION("simple language") {
    auto rep = find_decomposition(anbn_oracle(), w_of("aaaabbbb"), 2,
                                  PumpMode::shuffle_alt, 2);
    REQUIRE(rep.outcome == PumpOutcome::found);
    REQUIRE(rep.decomposition->y_alt.has_value());
    CHECK(check_decomposition(anbn_oracle(), w_of("aaaabbbb"), *rep.decomposition,
                              2, 2)
              .ok);
  }
  SECTION("a grammar-backed language keeps the fixed subword in the pump") {
    auto oracle = gallery_oracle("ex2");
    Word w = w_of("absccab");
    auto rep = find_decomposition(oracle, w, 4, PumpMode::shuffle_alt, 2);
    REQUIRE(rep.outcome == PumpOutcome::found);
    const auto& d = *rep.decomposition;
    REQUIRE(d.y_alt.has_value());
    // The pumped word repeats s and t around the whole fixed subword y'.
    Word expected = d.x;
    for (int i = 0; i < 2; ++i) expected.insert(expected.end(), d.s.begin(), d.s.end());
    expected.insert(expected.end(), d.y_alt->begin(), d.y_alt->end());
    for (int i = 0; i < 2; ++i) expected.insert(expected.end(), d.t.begin(), d.t.end());
    expected.insert(expected.end(), d.z.begin(), d.z.end());
    CHECK(pumped_word(d, 2) == expected);
    CHECK(oracle.contains(expected) == Verdict::yes);
  }
}

TEST_CASE("single-position scheme") {
  auto eq = gallery_oracle("equal-abc");
  auto rep = find_decomposition(eq, w_of("abcabc"), 3, PumpMode::ccfl, 2);
  REQUIRE(rep.outcome == PumpOutcome::found);
  const auto& d = *rep.decomposition;
  CHECK(d.t.empty());
  CHECK(d.z.empty());
  for (int m = 0; m <= 2; ++m)
    CHECK(eq.contains(pumped_word(d, m)) == Verdict::yes);
}

TEST_CASE("pa-gallery languages satisfy both pumping conditions") {
  auto oracle = gallery_oracle("pa-anbn-cm");
  for (const char* s : {"aabbc", "abccc", "cabcb"}) {
    Word w = w_of(s);
    if (oracle.contains(w) != Verdict::yes) continue;
    CHECK(find_decomposition(oracle, w, 4, PumpMode::shuffle, 2).outcome ==
          PumpOutcome::found);
    CHECK(find_decomposition(oracle, w, 4, PumpMode::concat, 2).outcome ==
          PumpOutcome::found);
  }
}

TEST_CASE("reports are deterministic and JSON-serializable") {
  auto rep1 = find_decomposition(anbn_oracle(), w_of("aaaabbbb"), 2,
                                 PumpMode::shuffle, 2);
  auto rep2 = find_decomposition(anbn_oracle(), w_of("aaaabbbb"), 2,
                                 PumpMode::shuffle, 2);
  REQUIRE(rep1.decomposition.has_value());
  CHECK(*rep1.decomposition == *rep2.decomposition);
  auto j = pump_report_json(rep1);
  CHECK(j["outcome"] == "found");
  CHECK(j["word"] == "aaaabbbb");
}
