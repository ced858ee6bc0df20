#include "exact_oracles.hpp"
#include "oracles.hpp"

#include "symdim/symdim.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace symdim;

namespace {

AmenStage fib_stage() {
  Language lang(fibonacci());
  RunConfig cfg;
  cfg.spec = fibonacci();
  return amen_stage(lang, cfg);
}

}  // namespace

TEST_CASE("B partition for E = {-1,0,1}, S = 0..9, N = 2") {
  std::vector<std::size_t> S{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  auto b = build_B_partition(S, IntSet{-1, 0, 1}, 2, 12);
  CHECK(b.members(2) == std::vector<long>{2, 3, 4, 5, 6, 7});
  CHECK(b.members(1) == std::vector<long>{1, 8});
  CHECK(b.block_of(0) == 0);
  CHECK(b.block_of(9) == 0);
  CHECK(b.block_of(-100) == 0);
}

TEST_CASE("E = {0} puts all of S in the top block") {
  std::vector<std::size_t> S{3, 4, 7};
  auto b = build_B_partition(S, IntSet{0}, 4, 11);
  CHECK(b.members(4) == std::vector<long>{3, 4, 7});
  for (std::size_t k = 1; k < 4; ++k) CHECK(b.members(k).empty());
}

TEST_CASE("too small a window is refused") {
  std::vector<std::size_t> S{0, 1, 2, 3};
  CHECK_THROWS_AS(build_B_partition(S, IntSet{-1, 0, 1}, 3, 5), Error);
  try {
    build_B_partition(S, IntSet{-1, 0, 1}, 3, 5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WindowTooSmall);
  }
}

TEST_CASE("B partition matches set arithmetic on random inputs and shifts move one block at most") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::size_t> S;
    std::size_t span = 1 + rng() % 25;
    for (std::size_t s = 0; s <= span; ++s)
      if (rng() % 5 != 0) S.push_back(s);
    if (S.empty()) S.push_back(0);
    std::set<long> Eset{0};
    std::size_t ne = rng() % 3;
    for (std::size_t i = 0; i < ne; ++i) {
      long e = 1 + static_cast<long>(rng() % 4);
      Eset.insert(e);
      Eset.insert(-e);
    }
    std::vector<long> E(Eset.begin(), Eset.end());
    std::size_t N = 1 + rng() % 6;
    long W = static_cast<long>(N) * E.back() + static_cast<long>(S.back()) + static_cast<long>(rng() % 4);
    auto b = build_B_partition(S, E, N, W);
    auto want = oracle::b_blocks(S, E, N, -W, W);
    for (long m = -W; m <= W; ++m) REQUIRE(b.block_of(m) == want[m]);
    for (long e : E)
      for (long m = -W; m <= W; ++m) {
        long k = static_cast<long>(want[m]);
        long t = m + e;
        long kt = (t < -W || t > W) ? 0 : static_cast<long>(want[t]);
        CHECK(std::labs(kt - k) <= 1);
      }
  }
}

TEST_CASE("equivariant map on the fibonacci pipeline at epsilon = 1/10") {
  auto st = fib_stage();
  const auto& sys = st.towers.model.sys;
  const auto& map = st.map;
  std::size_t d = map.d;
  Rational eps(1, 10);
  CHECK(Rational(BigInt((d + 1) * (d + 2)), BigInt(st.N)) < eps);
  REQUIRE(map.phi.size() == sys.size());
  for (const auto& p : map.phi) {
    CHECK(p.total() == 1);
    CHECK(p.size() <= d + 1);
  }
  Rational dev = oracle::deviation(sys, map.phi, st.E);
  CHECK(dev == map.epsilon_achieved);
  CHECK(dev <= Rational(BigInt((d + 1) * (d + 2)), BigInt(st.N)));
  CHECK(dev < eps);
  CHECK(check_equivariance(sys, map, st.E, eps).all_pass());

  SECTION("a corrupted state is caught") {
    auto bad = map;
    bad.terms[0].push_back(MapTerm{0, map.S_hi + 5, map.N});
    bad.phi[0] = detail::point_from_terms(bad.terms[0]);
    CHECK_FALSE(check_equivariance(sys, bad, st.E, eps).all_pass());
    bad = map;
    bad.phi[0] = dirac(map.S_hi + 1);
    CHECK_FALSE(check_equivariance(sys, bad, st.E, eps).all_pass());
  }
}

TEST_CASE("constant map has deviation zero on a lollipop") {
  FiniteSymbolicSystem sys({1, 2, 3, 0, 0, 4}, {}, true);
  EquivariantMap map;
  map.d = 0;
  map.S_lo = 0;
  map.S_hi = 0;
  map.phi.assign(sys.size(), dirac(0));
  CHECK(measure_deviation(sys, map, IntSet{0}) == 0);
  CHECK(measure_deviation(sys, map, IntSet{-1, 0, 1}) == 2);
}

TEST_CASE("N below (d+1)(d+2)/eps is refused") {
  auto st = fib_stage();
  std::size_t d = st.towers.tps.d_claimed;
  try {
    build_equivariant_map(st.towers.model.sys, st.towers.tps, st.E, (d + 1) * (d + 2) - 1, Rational(1));
    FAIL("expected NTooSmall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NTooSmall);
  }
}

TEST_CASE("projection to a finite window: distance is 2(1 - kept) and equivariance degrades additively") {
  std::mt19937_64 rng(23);
  FiniteSymbolicSystem sys({1, 2, 3, 4, 0, 0, 5, 2}, {}, true);
  IntSet E{-1, 0, 1};
  for (int trial = 0; trial < 1000; ++trial) {
    EquivariantMap map;
    map.d = 3;
    map.S_lo = -6;
    map.S_hi = 6;
    for (State x = 0; x < sys.size(); ++x) {
      std::map<long, Rational> w;
      std::size_t atoms = 1 + rng() % 4;
      BigInt total = 0;
      std::vector<std::pair<long, BigInt>> raw;
      for (std::size_t a = 0; a < atoms; ++a) {
        long pos = static_cast<long>(rng() % 13) - 6;
        // outside [-3, 3] gets small weight
        BigInt wt = (pos < -3 || pos > 3) ? BigInt(1) : BigInt(20 + rng() % 80);
        raw.emplace_back(pos, wt);
        total += wt;
      }
      for (const auto& [pos, wt] : raw) w[pos] += Rational(wt, total);
      map.phi.push_back(make_point(w));
    }
    map.epsilon_achieved = measure_deviation(sys, map, E);
    IntSet S{-3, -2, -1, 0, 1, 2, 3};
    Rational delta(1, 5);
    Rational worst_tail = 0;
    for (const auto& p : map.phi) {
      Rational kept = 0;
      for (const auto& [m, w] : p.atoms)
        if (m >= -3 && m <= 3) kept += w;
      worst_tail = std::max(worst_tail, Rational(1 - kept));
    }
    if (!(worst_tail < delta / 2)) {
      CHECK_THROWS_AS(project_finite_support(map, S, delta), Error);
      continue;
    }
    auto pr = project_finite_support(map, S, delta);
    CHECK(pr.max_distance == 2 * worst_tail);
    for (State x = 0; x < sys.size(); ++x) {
      CHECK(oracle::l1(map.phi[x], pr.map.phi[x]) <= pr.max_distance);
      CHECK(pr.map.phi[x].total() == 1);
      for (const auto& a : pr.map.phi[x].atoms) CHECK((a.first >= -3 && a.first <= 3));
    }
    CHECK(pr.adjusted_epsilon == map.epsilon_achieved + 2 * pr.max_distance);
    CHECK(oracle::deviation(sys, pr.map.phi, E) <= pr.adjusted_epsilon);
    CHECK(check_equivariance(sys, pr.map, E, pr.adjusted_epsilon, false).all_pass());
  }
}

TEST_CASE("sumset of {-1,0,1}") {
  CHECK(sumset(IntSet{-1, 0, 1}, 2) == IntSet{-2, -1, 0, 1, 2});
  CHECK(sumset(IntSet{0, 3}, 2) == IntSet{0, 3, 6});
}
