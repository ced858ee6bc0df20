#pragma once

#include "symdim/certificate.hpp"
#include "symdim/rokhlin.hpp"
#include "symdim/system.hpp"

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace symdim {

using IntSet = std::vector<long>;  // sorted, duplicate-free

struct TowerPair {
  ClopenSet V;
  std::vector<std::size_t> S;
  bool shifted = false;  // pushed down by M
  std::string origin;
};

struct TowerPairSystem {
  std::vector<TowerPair> pairs;
  IntSet E;
  std::size_t d_claimed = 0;
  std::size_t M = 0, N = 0;
};

// E = -E and 0 in E.
inline IntSet normalize_E(const IntSet& E) {
  std::set<long> s{0};
  for (long e : E) {
    s.insert(e);
    s.insert(-e);
  }
  return {s.begin(), s.end()};
}

inline std::size_t max_abs(const IntSet& E) {
  std::size_t e = 0;
  for (long v : E) e = std::max<std::size_t>(e, static_cast<std::size_t>(std::labs(v)));
  return e;
}

struct TowerHeights {
  std::size_t M, N;
};

// M = 1+2e and N = max(2+3e, 4e+1); the second term keeps the shifted pair
// useful when E reaches into negative exponents.
inline TowerHeights tower_heights(const IntSet& E) {
  std::size_t e = max_abs(E);
  return {1 + 2 * e, std::max(2 + 3 * e, 4 * e + 1)};
}

inline TowerPairSystem pairs_from_rokhlin(const FiniteSymbolicSystem& sys, const RokhlinCover& cover, const IntSet& E_in) {
  if (E_in.empty()) throw Error(ErrorKind::InvalidSpec, "E must be nonempty");
  TowerPairSystem t;
  t.E = normalize_E(E_in);
  auto [M, N] = tower_heights(t.E);
  if (cover.N != N)
    throw Error(ErrorKind::HeightMismatch,
                "cover height " + std::to_string(cover.N) + " but E needs N = " + std::to_string(N));
  t.M = M;
  t.N = N;
  std::vector<std::size_t> S(N);
  std::iota(S.begin(), S.end(), std::size_t{0});
  for (std::size_t i = 0; i < cover.towers.size(); ++i) {
    const auto& base = cover.towers[i].base;
    t.pairs.push_back(TowerPair{base, S, false, "tower " + std::to_string(i)});
    t.pairs.push_back(TowerPair{preimage(sys, base, M), S, true, "tower " + std::to_string(i) + " shifted"});
  }
  t.d_claimed = t.pairs.empty() ? 0 : t.pairs.size() - 1;
  return t;
}

struct ChromaticResult {
  std::size_t colors = 0;
  bool exact = false;
  std::vector<std::size_t> coloring;  // per vertex
};

namespace detail {

inline bool color_backtrack(const std::vector<std::vector<std::size_t>>& adj, std::size_t k, std::size_t v,
                            std::vector<std::size_t>& col) {
  if (v == adj.size()) return true;
  // symmetry: vertex v may only open one new color
  std::size_t used = 0;
  for (std::size_t u = 0; u < v; ++u) used = std::max(used, col[u] + 1);
  for (std::size_t c = 0; c < std::min(k, used + 1); ++c) {
    bool ok = true;
    for (std::size_t u : adj[v])
      if (u < v && col[u] == c) {
        ok = false;
        break;
      }
    if (!ok) continue;
    col[v] = c;
    if (color_backtrack(adj, k, v + 1, col)) return true;
  }
  return false;
}

}  // namespace detail

inline std::vector<std::vector<std::size_t>> intersection_graph(const std::vector<ClopenSet>& family) {
  std::size_t top = 0;
  for (const auto& c : family)
    if (!c.empty()) top = std::max<std::size_t>(top, c.back() + 1);
  std::vector<std::vector<std::size_t>> members(top);
  for (std::size_t i = 0; i < family.size(); ++i)
    for (State s : family[i]) members[s].push_back(i);
  std::vector<std::set<std::size_t>> adj(family.size());
  for (const auto& m : members)
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = a + 1; b < m.size(); ++b) {
        adj[m[a]].insert(m[b]);
        adj[m[b]].insert(m[a]);
      }
  std::vector<std::vector<std::size_t>> out;
  for (auto& s : adj) out.emplace_back(s.begin(), s.end());
  return out;
}

inline bool is_proper_coloring(const std::vector<std::vector<std::size_t>>& adj, const std::vector<std::size_t>& col) {
  if (col.size() != adj.size()) return false;
  for (std::size_t v = 0; v < adj.size(); ++v)
    for (std::size_t u : adj[v])
      if (col[u] == col[v]) return false;
  return true;
}

inline ChromaticResult chromatic_number(const std::vector<ClopenSet>& family, std::size_t exact_limit = 20) {
  auto adj = intersection_graph(family);
  ChromaticResult r;
  r.coloring.assign(adj.size(), 0);
  if (adj.empty()) {
    r.exact = true;
    return r;
  }
  if (adj.size() <= exact_limit) {
    for (std::size_t k = 1;; ++k)
      if (detail::color_backtrack(adj, k, 0, r.coloring)) {
        r.colors = k;
        r.exact = true;
        return r;
      }
  }
  for (std::size_t v = 0; v < adj.size(); ++v) {
    std::vector<char> taken(adj.size() + 1, 0);
    for (std::size_t u : adj[v])
      if (u < v) taken[r.coloring[u]] = 1;
    std::size_t c = 0;
    while (taken[c]) ++c;
    r.coloring[v] = c;
    r.colors = std::max(r.colors, c + 1);
  }
  return r;
}

inline json tower_pairs_json(const TowerPairSystem& t) {
  json pairs = json::array();
  for (const auto& p : t.pairs)
    pairs.push_back(json{{"V", p.V}, {"S", p.S}, {"shifted", p.shifted}, {"origin", p.origin}});
  return json{{"pairs", pairs}, {"E", t.E}, {"d_claimed", t.d_claimed}, {"M", t.M}, {"N", t.N}};
}

inline TowerPairSystem tower_pairs_from_json(const json& j) {
  TowerPairSystem t;
  for (const auto& p : j.at("pairs"))
    t.pairs.push_back(TowerPair{p.at("V").get<ClopenSet>(), p.at("S").get<std::vector<std::size_t>>(),
                                p.value("shifted", false), p.value("origin", "")});
  t.E = j.at("E").get<IntSet>();
  t.d_claimed = j.at("d_claimed").get<std::size_t>();
  t.M = j.value("M", std::size_t{0});
  t.N = j.value("N", std::size_t{0});
  return t;
}

inline Certificate verify_tower_pairs(const FiniteSymbolicSystem& sys, const TowerPairSystem& t) {
  Certificate c;
  c.kind = "towerdim";
  c.params = json{{"E", t.E}, {"d_claimed", t.d_claimed}, {"M", t.M}, {"N", t.N}};
  c.data = json{{"system", system_json(sys)}, {"tower_pairs", tower_pairs_json(t)}};

  // (1) every V_i is a set of states
  bool open = true;
  json open_w;
  for (std::size_t i = 0; i < t.pairs.size() && open; ++i) {
    const auto& V = t.pairs[i].V;
    bool sorted = std::adjacent_find(V.begin(), V.end(), std::greater_equal<State>()) == V.end();
    if (!sorted || (!V.empty() && V.back() >= sys.size()) || t.pairs[i].S.empty()) {
      open = false;
      open_w = json{{"pair", i}};
    }
  }
  c.add("open", open, open_w);
  if (!open) return c;

  // levels[i][j] = T^{-S_i[j]}(V_i)
  std::vector<std::vector<ClopenSet>> levels(t.pairs.size());
  std::vector<ClopenSet> family;
  std::vector<std::pair<std::size_t, std::size_t>> tag;
  bool disjoint = true;
  json dj_w;
  for (std::size_t i = 0; i < t.pairs.size(); ++i) {
    std::set<std::size_t> S(t.pairs[i].S.begin(), t.pairs[i].S.end());
    std::vector<long> owner(sys.size(), -1);
    ClopenSet cur = t.pairs[i].V;
    std::size_t at = 0;
    for (std::size_t n : S) {
      cur = preimage(sys, cur, n - at);
      at = n;
      levels[i].push_back(cur);
      for (State s : levels[i].back()) {
        if (owner[s] >= 0 && disjoint) {
          disjoint = false;
          dj_w = json{{"pair", i}, {"state", s}, {"exponents", {owner[s], n}}};
        }
        owner[s] = static_cast<long>(n);
      }
      if (!levels[i].back().empty()) {
        family.push_back(levels[i].back());
        tag.emplace_back(i, n);
      }
    }
  }
  c.add("preimages_disjoint", disjoint, dj_w);

  auto adj = intersection_graph(family);
  auto chrom = chromatic_number(family);
  // coloring by pair index is proper whenever (2) holds
  std::vector<std::size_t> by_pair;
  for (auto [i, n] : tag) by_pair.push_back(i);
  std::size_t pair_colors = t.pairs.size();
  std::vector<std::size_t> coloring = chrom.coloring;
  std::size_t colors = chrom.colors;
  bool exact = chrom.exact;
  if (!chrom.exact && disjoint && pair_colors < colors) {
    coloring = by_pair;
    colors = pair_colors;
  }
  bool proper = is_proper_coloring(adj, coloring);
  c.add("chromatic", proper && colors <= t.d_claimed + 1,
        json{{"colors", colors}, {"exact", exact}, {"bound", t.d_claimed + 1}, {"vertices", family.size()},
             {"proper", proper}});
  json col = json::array();
  for (std::size_t v = 0; v < tag.size(); ++v) col.push_back({tag[v].first, tag[v].second, coloring[v]});
  c.witnesses["coloring"] = col;

  std::vector<char> seen(sys.size(), 0);
  for (const auto& f : family)
    for (State s : f) seen[s] = 1;
  json hole;
  for (State s = 0; s < sys.size(); ++s)
    if (!seen[s]) {
      hole = json{{"state", s}};
      break;
    }
  c.add("covering", hole.is_null(), hole);

  // (5) for every x some (i,n) with x in T^{-n}(V_i) and E+n in S_i
  std::vector<long> wi(sys.size(), -1), wn(sys.size(), -1);
  for (std::size_t i = 0; i < t.pairs.size(); ++i) {
    std::set<std::size_t> S(t.pairs[i].S.begin(), t.pairs[i].S.end());
    std::vector<std::size_t> sorted_S(S.begin(), S.end());
    for (std::size_t j = 0; j < sorted_S.size(); ++j) {
      std::size_t n = sorted_S[j];
      bool fits = std::all_of(t.E.begin(), t.E.end(), [&](long e) {
        long v = static_cast<long>(n) + e;
        return v >= 0 && S.count(static_cast<std::size_t>(v));
      });
      if (!fits) continue;
      for (State s : levels[i][j])
        if (wi[s] < 0) {
          wi[s] = static_cast<long>(i);
          wn[s] = static_cast<long>(n);
        }
    }
  }
  json miss;
  std::size_t original = 0, shifted = 0;
  json wit = json::array();
  for (State s = 0; s < sys.size(); ++s) {
    if (wi[s] < 0) {
      if (miss.is_null()) miss = json{{"state", s}};
      wit.push_back(nullptr);
      continue;
    }
    (t.pairs[wi[s]].shifted ? shifted : original) += 1;
    wit.push_back({wi[s], wn[s]});
  }
  c.add("margin", miss.is_null(),
        miss.is_null() ? json{{"original", original}, {"shifted", shifted}} : miss);
  c.witnesses["margin"] = wit;
  c.witnesses["kinds"] = json{{"original", original}, {"shifted", shifted}};
  return c;
}

}  // namespace symdim
