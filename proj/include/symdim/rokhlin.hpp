#pragma once

#include "symdim/certificate.hpp"
#include "symdim/system.hpp"

#include <string>
#include <vector>

namespace symdim {

struct RokhlinTower {
  ClopenSet base;
  std::size_t height = 0;
  std::vector<ClopenSet> levels;
  std::string origin;
};

struct RokhlinCover {
  std::size_t N = 0;
  std::size_t q = 0;
  std::vector<RokhlinTower> towers;
  std::vector<std::string> trace;
};

inline RokhlinTower make_tower(const FiniteSymbolicSystem& sys, ClopenSet base, std::size_t N, std::string origin) {
  RokhlinTower t;
  t.base = std::move(base);
  t.height = N;
  t.origin = std::move(origin);
  t.levels.push_back(t.base);
  for (std::size_t j = 1; j < N; ++j) t.levels.push_back(preimage_once(sys, t.levels.back()));
  return t;
}

namespace detail {

// Are T^{-lo}(A), ..., T^{-(hi-1)}(A) pairwise disjoint? Returns the first
// offending offset, or hi when disjoint.
inline std::size_t first_overlap(const FiniteSymbolicSystem& sys, const ClopenSet& a, std::size_t lo, std::size_t hi) {
  std::vector<char> mark(sys.size(), 0);
  ClopenSet cur = preimage(sys, a, lo);
  for (std::size_t i = lo; i < hi; ++i) {
    for (State s : cur) {
      if (mark[s]) return i;
      mark[s] = 1;
    }
    cur = preimage_once(sys, cur);
  }
  return hi;
}

inline ClopenSet union_of_preimages(const FiniteSymbolicSystem& sys, const ClopenSet& a, std::size_t count) {
  ClopenSet out, cur = a;
  for (std::size_t i = 0; i < count && !cur.empty(); ++i) {
    out = set_union(out, cur);
    cur = preimage_once(sys, cur);
  }
  return out;
}

// T^{-i}(T^i(A)) grows with i, so checking i = N-1 settles every i < N.
inline bool saturated_below(const FiniteSymbolicSystem& sys, const ClopenSet& a, std::size_t N) {
  if (N <= 1) return true;
  return preimage(sys, image(sys, a, N - 1), N - 1) == a;
}

}  // namespace detail

// W with U in W, V covered by T^{-i}(W) for i < 2N, W saturated below N and
// T^{-N}(W)..T^{-(2N-1)}(W) pairwise disjoint.
inline ClopenSet extend_tower_base(const FiniteSymbolicSystem& sys, const ClopenSet& U, const ClopenSet& V, std::size_t N) {
  if (N == 0) throw Error(ErrorKind::HypothesisViolated, "N must be >= 1");
  if (std::size_t i = detail::first_overlap(sys, U, N, 2 * N); i != 2 * N)
    throw Error(ErrorKind::HypothesisViolated, "preimages of U overlap at offset " + std::to_string(i));
  if (!detail::saturated_below(sys, U, N))
    throw Error(ErrorKind::HypothesisViolated, "T^{-i}(T^i(U)) != U for some i < N");
  if (std::size_t i = detail::first_overlap(sys, image(sys, V, N), N, 2 * N); i != 2 * N)
    throw Error(ErrorKind::HypothesisViolated, "pushed preimages of V overlap at offset " + std::to_string(i));

  ClopenSet R = set_difference(V, detail::union_of_preimages(sys, U, 2 * N));
  if (R.empty()) return U;
  ClopenSet W = set_union(U, image(sys, R, N));

  if (!std::includes(W.begin(), W.end(), U.begin(), U.end()))
    throw Error(ErrorKind::ConstructionFailed, "U not contained in W");
  auto reach = detail::union_of_preimages(sys, W, 2 * N);
  if (!std::includes(reach.begin(), reach.end(), V.begin(), V.end()))
    throw Error(ErrorKind::ConstructionFailed, "V not covered by the preimages of W");
  if (!detail::saturated_below(sys, W, N))
    throw Error(ErrorKind::ConstructionFailed, "W is not saturated below N");
  if (std::size_t i = detail::first_overlap(sys, W, N, 2 * N); i != 2 * N)
    throw Error(ErrorKind::ConstructionFailed, "preimages of W overlap at offset " + std::to_string(i));
  return W;
}

inline Certificate verify_rokhlin_cover(const FiniteSymbolicSystem& sys, const RokhlinCover& cover);

inline RokhlinCover build_rokhlin_cover(const FiniteSymbolicSystem& sys, std::size_t N, const ClopenSet& special) {
  if (N == 0) throw Error(ErrorKind::InvalidSpec, "N must be >= 1");
  if (!sys.resolution_surjective()) throw Error(ErrorKind::NotSurjective, "system is not surjective");
  RokhlinCover cover;
  cover.N = N;
  cover.q = special.size();
  if (N == 1) {
    cover.towers.push_back(make_tower(sys, sys.all_states(), 1, "all"));
    cover.trace.push_back("N=1: single tower of all states");
    return cover;
  }
  std::size_t cyc = min_cycle_length(sys);
  if (cyc < 3 * N)
    throw Error(ErrorKind::PeriodicWitness, "cycle of length " + std::to_string(cyc) + " < 3N = " + std::to_string(3 * N));

  for (std::size_t k = 0; k < special.size(); ++k) {
    ClopenSet om{special[k]};
    cover.towers.push_back(make_tower(sys, om, N, "special " + std::to_string(special[k]) + " upper"));
    cover.towers.push_back(make_tower(sys, preimage(sys, om, N), N, "special " + std::to_string(special[k]) + " lower"));
    cover.trace.push_back("special state " + std::to_string(special[k]) + ": towers over T^i(V_k), i < 2N");
  }

  ClopenSet C = detail::union_of_preimages(sys, special, 2 * N);
  auto hit = first_hit_times(sys, C);
  std::vector<State> order;
  for (State s = 0; s < sys.size(); ++s)
    if (!contains(C, s)) order.push_back(s);
  std::stable_sort(order.begin(), order.end(), [&](State a, State b) { return hit[a] < hit[b]; });

  std::vector<char> covered(sys.size(), 0);
  for (const auto& t : cover.towers)
    for (const auto& lv : t.levels)
      for (State s : lv) covered[s] = 1;

  ClopenSet W;
  std::size_t steps = 0;
  auto absorb = [&](const ClopenSet& V) {
    ClopenSet next;
    try {
      next = extend_tower_base(sys, W, V, N);
    } catch (const Error& e) {
      throw Error(ErrorKind::DepthInsufficient, std::string("retry with deeper graph: ") + e.what());
    }
    ClopenSet fresh = set_difference(next, W);
    for (State s : detail::union_of_preimages(sys, fresh, 2 * N)) covered[s] = 1;
    W = std::move(next);
    ++steps;
  };
  for (State x : order)
    if (!covered[x]) absorb(ClopenSet{x});
  ClopenSet leftover;
  for (State s = 0; s < sys.size(); ++s)
    if (!covered[s]) leftover.push_back(s);
  for (State x : leftover)
    if (!covered[x]) absorb(ClopenSet{x});
  cover.trace.push_back("W chain: " + std::to_string(steps) + " extensions, |W| = " + std::to_string(W.size()));

  if (!W.empty()) {
    if (std::size_t i = detail::first_overlap(sys, W, 0, N); i != N)
      throw Error(ErrorKind::DepthInsufficient, "W tower levels overlap at offset " + std::to_string(i));
    cover.towers.push_back(make_tower(sys, W, N, "W upper"));
    cover.towers.push_back(make_tower(sys, preimage(sys, W, N), N, "W lower"));
  }

  auto cert = verify_rokhlin_cover(sys, cover);
  if (const Clause* f = cert.first_failure())
    throw Error(ErrorKind::DepthInsufficient, "constructed cover fails clause " + f->name);
  return cover;
}

inline Certificate verify_rokhlin_cover(const FiniteSymbolicSystem& sys, const RokhlinCover& cover) {
  Certificate c;
  c.kind = "rokhlin";
  c.params = json{{"N", cover.N}, {"q", cover.q}};
  json towers = json::array();
  for (const auto& t : cover.towers)
    towers.push_back(json{{"base", t.base}, {"height", t.height}, {"origin", t.origin}, {"levels", t.levels}});
  c.data = json{{"system", system_json(sys)}, {"towers", towers}, {"trace", cover.trace}};

  bool rec = true, nonempty = true, disjoint = true, heights = true;
  json rec_w, ne_w, dj_w, h_w;
  for (std::size_t i = 0; i < cover.towers.size(); ++i) {
    const auto& t = cover.towers[i];
    if (t.height != cover.N || t.levels.size() != cover.N) {
      if (heights) h_w = json{{"tower", i}};
      heights = false;
    }
    if (t.levels.empty() || t.levels[0] != t.base) {
      if (rec) rec_w = json{{"tower", i}, {"level", 0}};
      rec = false;
    }
    for (std::size_t j = 1; j < t.levels.size(); ++j)
      if (t.levels[j] != preimage_once(sys, t.levels[j - 1])) {
        if (rec) rec_w = json{{"tower", i}, {"level", j}};
        rec = false;
        break;
      }
    for (std::size_t j = 0; j < t.levels.size(); ++j)
      if (t.levels[j].empty()) {
        if (nonempty) ne_w = json{{"tower", i}, {"level", j}};
        nonempty = false;
        break;
      }
    std::vector<int> owner(sys.size(), -1);
    for (std::size_t j = 0; j < t.levels.size() && disjoint; ++j)
      for (State s : t.levels[j]) {
        if (owner[s] >= 0) {
          dj_w = json{{"tower", i}, {"state", s}, {"levels", {owner[s], j}}};
          disjoint = false;
          break;
        }
        owner[s] = static_cast<int>(j);
      }
  }
  std::vector<char> seen(sys.size(), 0);
  for (const auto& t : cover.towers)
    for (const auto& lv : t.levels)
      for (State s : lv)
        if (s < sys.size()) seen[s] = 1;
  json hole;
  for (State s = 0; s < sys.size(); ++s)
    if (!seen[s]) {
      hole = json{{"state", s}};
      break;
    }
  c.add("heights", heights, h_w);
  c.add("level_recurrence", rec, rec_w);
  c.add("levels_nonempty", nonempty, ne_w);
  c.add("levels_disjoint", disjoint, dj_w);
  c.add("covering", hole.is_null(), hole);
  c.add("tower_bound", cover.towers.size() <= 2 * cover.q + 2,
        json{{"towers", cover.towers.size()}, {"bound", 2 * cover.q + 2}});
  return c;
}

inline RokhlinCover rokhlin_from_json(const FiniteSymbolicSystem& sys, const json& params, const json& data) {
  RokhlinCover cover;
  cover.N = params.at("N").get<std::size_t>();
  cover.q = params.at("q").get<std::size_t>();
  (void)sys;
  for (const auto& t : data.at("towers")) {
    RokhlinTower tw;
    tw.base = t.at("base").get<ClopenSet>();
    tw.height = t.at("height").get<std::size_t>();
    tw.origin = t.value("origin", "");
    tw.levels = t.at("levels").get<std::vector<ClopenSet>>();
    cover.towers.push_back(std::move(tw));
  }
  return cover;
}

}  // namespace symdim
