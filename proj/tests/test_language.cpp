#include "oracles.hpp"

#include "symdim/symdim.hpp"

#include <catch_amalgamated.hpp>

using namespace symdim;

namespace {

std::set<std::string> spelled(Language& lang, std::size_t n) {
  std::set<std::string> out;
  for (const auto& w : lang.words(n)) out.insert(lang.alphabet().spell(w));
  return out;
}

}  // namespace

TEST_CASE("alphabet spells and parses single and multi-character symbols") {
  Alphabet a({"0", "1"});
  CHECK(a.spell(a.parse("0110")) == "0110");
  Alphabet b({"ab", "c"});
  auto w = b.parse("ab.c.ab");
  REQUIRE(w.size() == 3);
  CHECK(b.spell(w) == "ab.c.ab");
  CHECK_THROWS_AS(a.parse("012"), Error);
}

TEST_CASE("fibonacci factors match a sliding window over a long prefix") {
  Language lang(fibonacci());
  auto text = oracle::fibonacci_word(20000);
  for (std::size_t n = 1; n <= 60; ++n) {
    auto expect = oracle::factors(text, n);
    CHECK(spelled(lang, n) == expect);
    CHECK(lang.complexity(n) == n + 1);
  }
}

TEST_CASE("thue-morse factors match the popcount sequence") {
  Language lang(thue_morse());
  auto text = oracle::thue_morse_word(1 << 16);
  for (std::size_t n = 1; n <= 30; ++n) CHECK(spelled(lang, n) == oracle::factors(text, n));
}

TEST_CASE("sft language equals brute-force avoidance when every allowed word extends") {
  Language gm(golden_mean_sft());
  for (std::size_t n = 1; n <= 14; ++n) CHECK(spelled(gm, n) == oracle::binary_avoiding(n, {"11"}));
  Language other(sft({"0", "1"}, {"111", "000"}));
  for (std::size_t n = 1; n <= 12; ++n) CHECK(spelled(other, n) == oracle::binary_avoiding(n, {"111", "000"}));
}

TEST_CASE("sft words that cannot continue to the right are dropped") {
  // after "10" the only continuation is "0" and "00" is forbidden, so "10" dies
  Language lang(sft({"0", "1"}, {"00", "101"}));
  CHECK(spelled(lang, 3) == std::set<std::string>{"011", "111"});
}

TEST_CASE("full shift counts are powers of the alphabet size") {
  Language lang(full_shift({"a", "b", "c"}));
  CHECK(lang.complexity(5) == 243);
  CHECK(lang.words(3).size() == 27);
}

TEST_CASE("language tables are factorial and extendable") {
  for (auto spec : {fibonacci(), thue_morse(), golden_mean_sft()}) {
    Language lang(spec);
    CHECK(check_extendability(lang, 12));
    for (std::size_t n = 1; n < 12; ++n) {
      std::set<std::string> pre;
      for (const auto& w : lang.words(n + 1)) pre.insert(lang.alphabet().spell(w.substr(0, n)));
      CHECK(pre == spelled(lang, n));
    }
  }
}

TEST_CASE("references into the word table survive deeper requests") {
  Language lang(golden_mean_sft());
  const auto& w5 = lang.words(5);
  auto copy = w5;
  lang.words(20);
  CHECK(w5 == copy);
}

TEST_CASE("non-primitive substitutions are rejected") {
  CHECK(is_primitive(fibonacci()));
  CHECK_FALSE(is_primitive(substitution({"0", "1"}, {{"0", "00"}, {"1", "11"}})));
}

TEST_CASE("growth report flags superlinear complexity") {
  CHECK(growth_report(full_shift({"0", "1"}), 12).superlinear_flag);
  CHECK_FALSE(growth_report(fibonacci(), 40).superlinear_flag);
}
