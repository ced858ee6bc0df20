#include "oracles.hpp"

#include "symdim/symdim.hpp"

#include <catch_amalgamated.hpp>

using namespace symdim;

TEST_CASE("full shift cover at (3,3) is the de Bruijn graph on 3-blocks") {
  Language lang(full_shift({"0", "1"}));
  auto g = build_cover_graph(lang, 3, 3, 6);
  REQUIRE(g.size() == 8);
  std::set<std::string> prefixes;
  for (State s = 0; s < g.size(); ++s) {
    std::string u = lang.alphabet().spell(g.pi(s));
    prefixes.insert(u);
    CHECK(g.states[s].past.size() == 8);
    std::set<std::string> got, want{u.substr(1) + "0", u.substr(1) + "1"};
    for (State t : g.succ[s]) got.insert(lang.alphabet().spell(g.pi(t)));
    CHECK(got == want);
    CHECK(g.succ[s].size() == 2);
  }
  CHECK(prefixes.size() == 8);
  CHECK(cover_is_onto(g));
  CHECK(check_intertwining(lang, g).ok);
}

TEST_CASE("fibonacci cover at (6,6) has one special state over the special prefix") {
  Language lang(fibonacci());
  auto g = build_cover_graph(lang, 6, 6, 12);
  auto sp = cover_special_states(g);
  REQUIRE(sp.size() == 1);
  CHECK(lang.alphabet().spell(g.pi(sp[0])) == oracle::fibonacci_word(6));
  auto sc = check_special_correspondence(lang, g);
  CHECK(sc.counts_match);
  CHECK(sc.prefixes_left_special);
  auto it = check_intertwining(lang, g);
  CHECK(it.ok);
  CHECK(it.words_checked == lang.complexity(19));
  CHECK(cover_is_onto(g));
}

TEST_CASE("preimage classes count states with two or more incoming classes") {
  Language lang(fibonacci());
  auto g = build_cover_graph(lang, 6, 6, 12);
  std::vector<std::size_t> indeg(g.size(), 0);
  for (const auto& s : g.succ)
    for (State t : s) ++indeg[t];
  for (State s = 0; s < g.size(); ++s) CHECK((g.preimage_classes[s] >= 2) == (indeg[s] >= 2));
}

TEST_CASE("single orbit has no special states") {
  Language lang(single_orbit());
  auto g = build_cover_graph(lang, 2, 2, 4);
  CHECK(g.size() == 1);
  CHECK(cover_special_states(g).empty());
}

TEST_CASE("fibonacci special state stays isolated under refinement; others split") {
  Language lang(fibonacci());
  auto g = build_cover_graph(lang, 6, 6, 12);
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> levels{{10, 10, 20}, {14, 14, 28}};
  auto sp = cover_special_states(g);
  REQUIRE(sp.size() == 1);
  auto rep = isolated_state_check(lang, g, sp[0], levels);
  CHECK(rep.isolated);
  CHECK(rep.special_refinements == std::vector<std::size_t>{1, 1});
  for (State s = 0; s < g.size(); ++s) {
    if (s == sp[0]) continue;
    auto r = isolated_state_check(lang, g, s, levels);
    CHECK_FALSE(r.isolated);
  }
}

TEST_CASE("cover parameters are validated") {
  Language lang(fibonacci());
  CHECK_THROWS_AS(build_cover_graph(lang, 0, 3, 6), Error);
  CHECK_THROWS_AS(build_cover_graph(lang, 3, 3, 5), Error);
}

TEST_CASE("a corrupted cover edge is caught by the intertwining check") {
  Language lang(fibonacci());
  auto g = build_cover_graph(lang, 4, 4, 8);
  auto bad = g;
  bad.succ[0].clear();
  CHECK_FALSE(check_intertwining(lang, bad).ok);
  bad = g;
  bad.succ[0].push_back(static_cast<State>(bad.size() - 1));
  bad.succ[0] = normalized(bad.succ[0]);
  if (bad.succ[0] != g.succ[0]) CHECK_FALSE(check_intertwining(lang, bad).ok);
}
