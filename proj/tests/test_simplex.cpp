#include "exact_oracles.hpp"

#include "symdim/symdim.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace symdim;

namespace {

SimplexPoint uniform(std::vector<long> at) {
  std::map<long, Rational> w;
  for (long a : at) w[a] += Rational(1, static_cast<long>(at.size()));
  return make_point(w);
}

SimplexPoint random_point(std::mt19937_64& rng, std::size_t atoms, long range) {
  std::map<long, BigInt> raw;
  BigInt total = 0;
  for (std::size_t a = 0; a < atoms; ++a) {
    BigInt w = 1 + rng() % 1000;
    raw[static_cast<long>(rng() % static_cast<std::uint64_t>(range))] += w;
    total += w;
  }
  std::map<long, Rational> w;
  for (const auto& [k, v] : raw) w[k] = Rational(v, total);
  return make_point(w);
}

}  // namespace

TEST_CASE("skeleton distance examples") {
  CHECK(*skeleton_distance(uniform({0, 1}), 1) == 1);
  CHECK(*skeleton_distance(uniform({0, 1, 2}), 2) == Rational(2, 3));
  CHECK(*skeleton_distance(uniform({0, 1, 2}), 3) == 0);
  CHECK_FALSE(skeleton_distance(uniform({0}), 0));
}

TEST_CASE("skeleton distance equals the minimum over all carriers") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 400; ++trial) {
    auto mu = random_point(rng, 1 + rng() % 7, 12);
    for (std::size_t i = 1; i <= mu.size(); ++i) REQUIRE(*skeleton_distance(mu, i) == oracle::skeleton(mu, i));
  }
}

TEST_CASE("membership examples on the uniform point of {0,1}") {
  auto mu = uniform({0, 1});
  CHECK_FALSE(simplicial_cover_membership(mu, 0, 1));
  auto m1 = simplicial_cover_membership(mu, 1, 1);
  REQUIRE(m1);
  CHECK(*m1 == std::vector<long>{0, 1});
  CHECK_FALSE(simplicial_cover_membership(mu, 2, 1));
  auto m0 = simplicial_cover_membership(dirac(4), 0, 0);
  REQUIRE(m0);
  CHECK(*m0 == std::vector<long>{4});
}

TEST_CASE("every point with at most d+1 atoms lies in some V_i") {
  std::mt19937_64 rng(31);
  for (std::size_t d = 0; d <= 4; ++d)
    for (int trial = 0; trial < 300; ++trial) {
      // mix generic points with points close to lower skeleta
      SimplexPoint mu = random_point(rng, 1 + rng() % (d + 1), 20);
      if (trial % 2 == 1 && mu.size() > 1) {
        BigInt scale = BigInt(1) << (rng() % 40);
        std::map<long, Rational> w;
        for (std::size_t a = 0; a < mu.size(); ++a) w[mu.atoms[a].first] = a == 0 ? Rational(1) : mu.atoms[a].second / scale;
        Rational t = 0;
        for (const auto& [k, v] : w) t += v;
        for (auto& [k, v] : w) v /= t;
        mu = make_point(w);
      }
      auto idx = cover_index(mu, d);
      REQUIRE(idx);
      CHECK(idx->second.size() == idx->first + 1);
    }
}

TEST_CASE("points of V_1 with different vertex sets are at least 1/30 apart") {
  std::mt19937_64 rng(37);
  std::vector<std::pair<std::vector<long>, SimplexPoint>> pts;
  while (pts.size() < 120) {
    long a = static_cast<long>(rng() % 4), b = static_cast<long>(rng() % 4);
    if (a == b) continue;
    std::map<long, Rational> w;
    Rational wa(50 + static_cast<long>(rng() % 40), 100);
    Rational tail(static_cast<long>(rng() % 16), 1000);
    w[a] += wa - tail;
    w[b] += 1 - wa;
    if (tail > 0) w[static_cast<long>(4 + rng() % 3)] += tail;
    auto mu = make_point(w);
    if (auto m = simplicial_cover_membership(mu, 1, 2)) pts.emplace_back(*m, mu);
  }
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (pts[i].first != pts[j].first) {
        ++distinct;
        CHECK(oracle::l1(pts[i].second, pts[j].second) >= Rational(1, 30));
      }
  CHECK(distinct > 1000);
}

TEST_CASE("shift moves atoms by -n and preserves rho") {
  auto mu = uniform({0, 3});
  auto nu = dirac(3);
  CHECK(shift_point(mu, 2).support() == std::vector<long>{-2, 1});
  CHECK(rho(shift_point(mu, 5), shift_point(nu, 5)) == rho(mu, nu));
  CHECK(rho(mu, nu) == 1);
}
