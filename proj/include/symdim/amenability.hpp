#pragma once

#include "symdim/certificate.hpp"
#include "symdim/simplex.hpp"
#include "symdim/system.hpp"
#include "symdim/towers.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace symdim {

// k-fold sumset of E.
inline IntSet sumset(const IntSet& E, std::size_t k) {
  std::set<long> cur{0};
  for (std::size_t i = 0; i < k; ++i) {
    std::set<long> next;
    for (long a : cur)
      for (long e : E) next.insert(a + e);
    cur = std::move(next);
  }
  return {cur.begin(), cur.end()};
}

struct PartitionB {
  std::size_t i = 0;
  std::size_t N = 0;
  long W = 0;
  std::vector<std::size_t> block;  // block[m + W]; B_0 also holds everything outside [-W, W]

  std::size_t block_of(long m) const {
    if (m < -W || m > W) return 0;
    return block[static_cast<std::size_t>(m + W)];
  }
  std::vector<long> members(std::size_t k) const {
    std::vector<long> out;
    for (long m = -W; m <= W; ++m)
      if (block_of(m) == k) out.push_back(m);
    return out;
  }
};

// B_N = I_N, B_k = I_k \ I_{k+1}, B_0 = Z \ I_1 where I_k is the intersection of
// m + S over the k-fold sumset, computed as I_k = intersection of e + I_{k-1}.
inline PartitionB build_B_partition(const std::vector<std::size_t>& S, const IntSet& E_in, std::size_t N, long window,
                                    std::size_t pair_index = 0) {
  if (S.empty()) throw Error(ErrorKind::InvalidSpec, "S must be nonempty");
  if (N == 0) throw Error(ErrorKind::InvalidSpec, "N must be >= 1");
  IntSet E = normalize_E(E_in);
  long maxS = static_cast<long>(*std::max_element(S.begin(), S.end()));
  long need = static_cast<long>(N * max_abs(E)) + maxS;
  if (window < need)
    throw Error(ErrorKind::WindowTooSmall, "window " + std::to_string(window) + " < " + std::to_string(need));
  PartitionB b;
  b.i = pair_index;
  b.N = N;
  b.W = window;
  std::size_t len = static_cast<std::size_t>(2 * window + 1);
  std::vector<char> I(len, 0);
  for (std::size_t s : S) I[static_cast<std::size_t>(static_cast<long>(s) + window)] = 1;
  b.block.assign(len, 0);
  for (std::size_t k = 1; k <= N; ++k) {
    std::vector<char> next(len, 0);
    bool any = false;
    for (std::size_t x = 0; x < len; ++x) {
      bool in = true;
      for (long e : E) {
        long y = static_cast<long>(x) - e;
        if (y < 0 || y >= static_cast<long>(len) || !I[static_cast<std::size_t>(y)]) {
          in = false;
          break;
        }
      }
      next[x] = in;
      any = any || in;
    }
    for (std::size_t x = 0; x < len; ++x)
      if (next[x]) b.block[x] = k;
    I = std::move(next);
    if (!any) break;
  }
  // I_1 lies inside S, so the window already holds every positive block
  std::set<long> Sset;
  for (std::size_t s : S) Sset.insert(static_cast<long>(s));
  for (long m = -window; m <= window; ++m)
    if (b.block_of(m) != 0 && !Sset.count(m))
      throw Error(ErrorKind::ConstructionFailed, "positive block outside S at m = " + std::to_string(m));

  // shifting by e moves the block index by at most one
  for (long e : E)
    for (long m = -window; m <= window; ++m) {
      long t = m + e;
      if (t < -window || t > window) continue;
      std::size_t k = b.block_of(m), kt = b.block_of(t);
      std::size_t lo = k == 0 ? 0 : k - 1, hi = std::min(k + 1, N);
      if (kt < lo || kt > hi)
        throw Error(ErrorKind::ConstructionFailed, "shift containment fails at m = " + std::to_string(m) +
                                                       ", e = " + std::to_string(e));
    }
  return b;
}

struct MapTerm {
  std::size_t pair = 0;
  long m = 0;
  std::size_t k = 0;  // h_hat_{pair,m} = k / N
  bool operator==(const MapTerm&) const = default;
};

struct EquivariantMap {
  std::vector<SimplexPoint> phi;
  std::vector<std::vector<MapTerm>> terms;  // empty unless built from tower pairs
  std::size_t N = 0;
  std::size_t d = 0;
  long S_lo = 0, S_hi = 0;
  Rational epsilon_achieved = 0;
  std::string reading;
};

namespace detail {

inline SimplexPoint point_from_terms(const std::vector<MapTerm>& terms) {
  std::map<long, std::size_t> acc;
  std::size_t total = 0;
  for (const auto& t : terms) {
    acc[t.m] += t.k;
    total += t.k;
  }
  SimplexPoint p;
  if (total == 0) return p;
  for (auto [m, k] : acc)
    if (k) p.atoms.emplace_back(m, Rational(BigInt(k), BigInt(total)));
  return p;
}

// Longest backward chain into each state; kNever on and above cycles.
inline std::vector<std::size_t> backward_depth(const FiniteSymbolicSystem& sys) {
  std::vector<std::size_t> depth(sys.size(), kNever), indeg(sys.size());
  std::vector<State> queue;
  for (State s = 0; s < sys.size(); ++s) {
    indeg[s] = sys.indegree(s);
    if (indeg[s] == 0) {
      depth[s] = 0;
      queue.push_back(s);
    }
  }
  for (std::size_t h = 0; h < queue.size(); ++h) {
    State s = queue[h];
    State t = sys.sigma(s);
    std::size_t cand = depth[s] + 1;
    if (depth[t] == kNever || depth[t] < cand) depth[t] = cand;
    if (--indeg[t] == 0) queue.push_back(t);
  }
  // states left with positive indegree lie on or above a cycle
  for (State s = 0; s < sys.size(); ++s)
    if (indeg[s] > 0) depth[s] = kNever;
  return depth;
}

// (x, n, y) with n in E and y = T^n x (n >= 0) or T^{|n|} y = x (n < 0).
template <class F>
void for_each_edge(const FiniteSymbolicSystem& sys, const IntSet& E, F&& f) {
  for (State x = 0; x < sys.size(); ++x)
    for (long n : E) {
      if (n >= 0) {
        f(x, n, sys.power(x, static_cast<std::size_t>(n)));
      } else {
        for (State y : preimage(sys, ClopenSet{x}, static_cast<std::size_t>(-n))) f(x, n, y);
      }
    }
}

}  // namespace detail

inline Rational measure_deviation(const FiniteSymbolicSystem& sys, const EquivariantMap& map, const IntSet& E) {
  Rational worst = 0;
  detail::for_each_edge(sys, normalize_E(E), [&](State x, long n, State y) {
    Rational dev = rho(map.phi[y], shift_point(map.phi[x], n));
    if (dev > worst) worst = dev;
  });
  return worst;
}

inline EquivariantMap build_equivariant_map(const FiniteSymbolicSystem& sys, const TowerPairSystem& tps, const IntSet& E_in,
                                            std::size_t N, const Rational& epsilon) {
  if (!sys.resolution_surjective()) throw Error(ErrorKind::NotSurjective, "system is not surjective");
  if (epsilon <= 0) throw Error(ErrorKind::InvalidSpec, "epsilon must be positive");
  IntSet E = normalize_E(E_in);
  std::size_t d = tps.d_claimed;
  Rational need = Rational(BigInt((d + 1) * (d + 2))) / epsilon;
  if (Rational(BigInt(N)) < need) throw Error(ErrorKind::NTooSmall, "N = " + std::to_string(N) + " < (d+1)(d+2)/eps = " + to_string(need));

  EquivariantMap map;
  map.N = N;
  map.d = d;
  map.reading = "h_hat(i,m) = k/N * g_i(T^m x); g_i = max over the fiber of the indicator of T^{-n}(V_i); negative m uses the fiber max";
  map.terms.assign(sys.size(), {});
  auto depth = detail::backward_depth(sys);
  std::map<std::vector<std::size_t>, PartitionB> parts;
  long lo = 0, hi = 0;
  bool first = true;
  for (std::size_t i = 0; i < tps.pairs.size(); ++i) {
    const auto& pair = tps.pairs[i];
    std::vector<std::size_t> S(pair.S);
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    auto it = parts.find(S);
    if (it == parts.end()) {
      long W = static_cast<long>(N * max_abs(E) + S.back());
      it = parts.emplace(S, build_B_partition(S, E, N, W, i)).first;
    }
    const PartitionB& B = it->second;
    // g_i(x) = 1 iff x in V_i and x has a T^n-preimage for some n in S_i
    ClopenSet G;
    for (State s : pair.V)
      if (depth[s] >= S.front()) G.push_back(s);
    // negative m never reaches a positive block since I_1 lies inside S_i
    for (long m = -B.W; m < 0; ++m)
      if (B.block_of(m) != 0) throw Error(ErrorKind::ConstructionFailed, "negative exponent in a positive block");
    ClopenSet cur = G;
    for (long m = 0; m <= B.W && !cur.empty(); ++m) {
      std::size_t k = B.block_of(m);
      if (k > 0)
        for (State x : cur) map.terms[x].push_back(MapTerm{i, m, k});
      cur = preimage_once(sys, cur);
    }
  }
  map.phi.resize(sys.size());
  for (State x = 0; x < sys.size(); ++x) {
    std::size_t total = 0;
    for (const auto& t : map.terms[x]) total += t.k;
    if (total < N) throw Error(ErrorKind::ConstructionFailed, "H < 1 at state " + std::to_string(x));
    map.phi[x] = detail::point_from_terms(map.terms[x]);
    for (const auto& a : map.phi[x].atoms) {
      if (first || a.first < lo) lo = a.first;
      if (first || a.first > hi) hi = a.first;
      first = false;
    }
  }
  map.S_lo = lo;
  map.S_hi = hi;
  map.epsilon_achieved = measure_deviation(sys, map, E);
  return map;
}

inline json map_json(const EquivariantMap& m) {
  json states = json::array();
  if (!m.terms.empty()) {
    for (const auto& ts : m.terms) {
      json row = json::array();
      for (const auto& t : ts) row.push_back({t.pair, t.m, t.k});
      states.push_back(row);
    }
  } else {
    for (const auto& p : m.phi) {
      json row = json::array();
      for (const auto& [pos, w] : p.atoms) row.push_back({pos, to_string(w)});
      states.push_back(row);
    }
  }
  return json{{"form", m.terms.empty() ? "weights" : "terms"},
              {"states", states},
              {"N", m.N},
              {"d", m.d},
              {"S", {m.S_lo, m.S_hi}},
              {"epsilon_achieved", rational_json(m.epsilon_achieved)},
              {"reading", m.reading}};
}

inline EquivariantMap map_from_json(const json& j) {
  EquivariantMap m;
  m.N = j.at("N").get<std::size_t>();
  m.d = j.at("d").get<std::size_t>();
  m.S_lo = j.at("S").at(0).get<long>();
  m.S_hi = j.at("S").at(1).get<long>();
  m.epsilon_achieved = rational_from(j.at("epsilon_achieved"));
  m.reading = j.value("reading", "");
  bool terms = j.at("form").get<std::string>() == "terms";
  for (const auto& row : j.at("states")) {
    if (terms) {
      std::vector<MapTerm> ts;
      for (const auto& t : row) ts.push_back(MapTerm{t.at(0).get<std::size_t>(), t.at(1).get<long>(), t.at(2).get<std::size_t>()});
      m.phi.push_back(detail::point_from_terms(ts));
      m.terms.push_back(std::move(ts));
    } else {
      SimplexPoint p;
      for (const auto& a : row) p.atoms.emplace_back(a.at(0).get<long>(), rational_from(a.at(1)));
      m.phi.push_back(std::move(p));
    }
  }
  return m;
}

// strict: deviation < epsilon; otherwise <= epsilon.
inline Certificate check_equivariance(const FiniteSymbolicSystem& sys, const EquivariantMap& map, const IntSet& E_in,
                                      const Rational& epsilon, bool strict = true) {
  IntSet E = normalize_E(E_in);
  Certificate c;
  c.kind = "amen";
  c.params = json{{"E", E}, {"epsilon", rational_json(epsilon)}, {"strict", strict}};
  c.data = json{{"system", system_json(sys)}, {"map", map_json(map)}};
  if (map.phi.size() != sys.size()) {
    c.add("shape", false, json{{"states", sys.size()}, {"map", map.phi.size()}});
    return c;
  }

  json prob_w, supp_w, win_w;
  for (State x = 0; x < sys.size(); ++x) {
    const auto& p = map.phi[x];
    bool positive = std::all_of(p.atoms.begin(), p.atoms.end(), [](const auto& a) { return a.second > 0; });
    bool sorted = std::adjacent_find(p.atoms.begin(), p.atoms.end(),
                                     [](const auto& a, const auto& b) { return a.first >= b.first; }) == p.atoms.end();
    if (prob_w.is_null() && (!positive || !sorted || p.total() != 1)) prob_w = json{{"state", x}, {"mass", to_string(p.total())}};
    if (supp_w.is_null() && p.size() > map.d + 1) supp_w = json{{"state", x}, {"atoms", p.size()}};
    if (win_w.is_null() && !p.atoms.empty() && (p.atoms.front().first < map.S_lo || p.atoms.back().first > map.S_hi))
      win_w = json{{"state", x}};
  }
  c.add("probability", prob_w.is_null(), prob_w);
  c.add("support_bound", supp_w.is_null(), supp_w.is_null() ? json{{"bound", map.d + 1}} : supp_w);
  c.add("support_window", win_w.is_null(), win_w);

  bool with_terms = !map.terms.empty() && map.N > 0;
  if (with_terms) {
    json h_w;
    for (State x = 0; x < sys.size() && h_w.is_null(); ++x) {
      std::size_t total = 0;
      for (const auto& t : map.terms[x]) total += t.k;
      if (total < map.N) h_w = json{{"state", x}, {"H", to_string(Rational(BigInt(total), BigInt(map.N)))}};
      if (detail::point_from_terms(map.terms[x]) != map.phi[x]) h_w = json{{"state", x}, {"phi", "mismatch"}};
    }
    c.add("H_at_least_1", h_w.is_null(), h_w);
  }

  Rational worst = 0;
  json arg;
  json step_w;
  detail::for_each_edge(sys, E, [&](State x, long n, State y) {
    Rational dev = rho(map.phi[y], shift_point(map.phi[x], n));
    if (arg.is_null() || dev > worst) {
      worst = dev;
      arg = json{{"x", x}, {"n", n}, {"y", y}};
    }
    if (with_terms && step_w.is_null()) {
      // |h_hat_{i,m}(y) - h_hat_{i,m+n}(x)| <= 1/N
      std::map<std::pair<std::size_t, long>, long> diff;
      for (const auto& t : map.terms[y]) diff[{t.pair, t.m}] += static_cast<long>(t.k);
      for (const auto& t : map.terms[x]) diff[{t.pair, t.m - n}] -= static_cast<long>(t.k);
      for (const auto& [key, v] : diff)
        if (v > 1 || v < -1) {
          step_w = json{{"x", x}, {"n", n}, {"y", y}, {"pair", key.first}, {"m", key.second}};
          break;
        }
    }
  });
  if (with_terms) c.add("h_hat_step", step_w.is_null(), step_w);
  bool ok = strict ? worst < epsilon : worst <= epsilon;
  c.add("deviation", ok, json{{"max", rational_json(worst)}, {"argmax", arg}});
  if (map.N > 0) {
    Rational bound = Rational(BigInt((map.d + 1) * (map.d + 2)), BigInt(map.N));
    c.add("deviation_bound", worst <= bound, json{{"bound", rational_json(bound)}, {"max", rational_json(worst)}});
  }
  c.witnesses["max_deviation"] = rational_json(worst);
  c.witnesses["argmax"] = arg;
  return c;
}

struct Projection {
  EquivariantMap map;
  Rational max_distance = 0;  // max over states of rho(phi, phi')
  Rational adjusted_epsilon = 0;
};

// Restrict to S and renormalize. rho(phi(x), phi'(x)) = 2(1 - kept mass).
inline Projection project_finite_support(const EquivariantMap& map, const IntSet& S_in, const Rational& delta) {
  std::set<long> S(S_in.begin(), S_in.end());
  if (S.empty()) throw Error(ErrorKind::InvalidSpec, "S must be nonempty");
  Projection out;
  out.map.d = map.d;
  out.map.S_lo = *S.begin();
  out.map.S_hi = *S.rbegin();
  out.map.reading = "restriction to S, renormalized";
  for (std::size_t x = 0; x < map.phi.size(); ++x) {
    const auto& p = map.phi[x];
    Rational kept = 0;
    for (const auto& [m, w] : p.atoms)
      if (S.count(m)) kept += w;
    Rational tail = 1 - kept;
    if (!(tail < delta / 2))
      throw Error(ErrorKind::TailMassTooLarge, "tail mass " + to_string(tail) + " at state " + std::to_string(x));
    SimplexPoint q;
    for (const auto& [m, w] : p.atoms)
      if (S.count(m)) q.atoms.emplace_back(m, w / kept);
    Rational dist = rho(p, q);
    if (dist != 2 * tail) throw Error(ErrorKind::ConstructionFailed, "projection distance disagrees with 2(1 - kept)");
    if (dist > out.max_distance) out.max_distance = dist;
    out.map.phi.push_back(std::move(q));
  }
  out.map.epsilon_achieved = map.epsilon_achieved + 2 * out.max_distance;
  out.adjusted_epsilon = out.map.epsilon_achieved;
  return out;
}

inline IntSet support_union(const EquivariantMap& map) {
  std::set<long> s;
  for (const auto& p : map.phi)
    for (const auto& a : p.atoms) s.insert(a.first);
  return {s.begin(), s.end()};
}

}  // namespace symdim
