#pragma once

#include "symdim/amenability.hpp"
#include "symdim/certificate.hpp"
#include "symdim/simplex.hpp"
#include "symdim/system.hpp"

#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace symdim {

struct GroupoidElement {
  State x = 0;
  long n = 0;
  State y = 0;
  std::size_t a = 0, b = 0;  // T^a(x) = T^b(y), a - b = n
};

struct GroupoidWindow {
  IntSet E;
  std::size_t bound = 0;
  std::vector<GroupoidElement> elements;  // sorted by (x, n, y)

  std::size_t find(State x, long n, State y) const {
    auto key = std::make_tuple(x, n, y);
    auto it = std::lower_bound(elements.begin(), elements.end(), key, [](const GroupoidElement& g, const auto& k) {
      return std::make_tuple(g.x, g.n, g.y) < k;
    });
    if (it != elements.end() && it->x == x && it->n == n && it->y == y) return static_cast<std::size_t>(it - elements.begin());
    return elements.size();
  }
};

inline GroupoidWindow build_window(const FiniteSymbolicSystem& sys, const IntSet& E_in, std::size_t bound) {
  IntSet E = normalize_E(E_in);
  if (bound < max_abs(E)) throw Error(ErrorKind::InvalidSpec, "exponent bound below max|E|");
  std::set<long> En(E.begin(), E.end());
  std::map<std::tuple<State, long, State>, std::pair<std::size_t, std::size_t>> acc;
  for (State x = 0; x < sys.size(); ++x) {
    State z = x;
    for (std::size_t a = 0; a <= bound; ++a, z = sys.sigma(z)) {
      ClopenSet ys{z};
      for (std::size_t b = 0; b <= bound && !ys.empty(); ++b, ys = preimage_once(sys, ys)) {
        long n = static_cast<long>(a) - static_cast<long>(b);
        if (!En.count(n)) continue;
        for (State y : ys) {
          auto [it, fresh] = acc.emplace(std::make_tuple(x, n, y), std::make_pair(a, b));
          if (!fresh && std::make_pair(a, b) < it->second) it->second = {a, b};
        }
      }
    }
  }
  GroupoidWindow w;
  w.E = E;
  w.bound = bound;
  for (const auto& [k, ab] : acc)
    w.elements.push_back(GroupoidElement{std::get<0>(k), std::get<1>(k), std::get<2>(k), ab.first, ab.second});
  return w;
}

// {z : T^a(z) = T^b(w) for some special w, a, b <= bound}
inline ClopenSet special_orbit_window(const FiniteSymbolicSystem& sys, const ClopenSet& special, std::size_t bound) {
  ClopenSet images;
  for (State w : special) {
    State z = w;
    for (std::size_t b = 0; b <= bound; ++b, z = sys.sigma(z)) images.push_back(z);
  }
  images = normalized(std::move(images));
  return detail::union_of_preimages(sys, images, bound + 1);
}

struct WindowStructure {
  bool units = true, inverses = true, witnesses = true;
  json witness;
};

inline WindowStructure check_window(const FiniteSymbolicSystem& sys, const GroupoidWindow& w) {
  WindowStructure r;
  for (State x = 0; x < sys.size() && r.units; ++x)
    if (w.find(x, 0, x) == w.elements.size()) {
      r.units = false;
      r.witness = json{{"missing_unit", x}};
    }
  for (const auto& g : w.elements) {
    if (r.inverses && w.find(g.y, -g.n, g.x) == w.elements.size()) {
      r.inverses = false;
      r.witness = json{{"missing_inverse", {g.x, g.n, g.y}}};
    }
    bool ok = g.x < sys.size() && g.y < sys.size() && static_cast<long>(g.a) - static_cast<long>(g.b) == g.n &&
              g.a <= w.bound && g.b <= w.bound && sys.power(g.x, g.a) == sys.power(g.y, g.b);
    if (r.witnesses && !ok) {
      r.witnesses = false;
      r.witness = json{{"bad_element", {g.x, g.n, g.y, g.a, g.b}}};
    }
  }
  return r;
}

struct DadCover {
  std::size_t d = 0;
  std::vector<ClopenSet> U;        // U_0..U_d
  std::vector<ClopenSet> U_tilde;  // phi'-preimages of V_i
  ClopenSet orbit;                 // special-orbit states added to every U_i, exponents <= orbit_bound
  ClopenSet orbit_window;          // declared window for case-2 endpoints, exponents <= 2 * orbit_bound
  std::size_t orbit_bound = 0;
  IntSet S, F;
  std::vector<json> simplex;  // per state: [i, Delta] of the first V_i containing phi'(x)
};

// F = {n : (n + S) meets S}
inline IntSet difference_set(const IntSet& S) {
  if (S.empty()) return {};
  long lo = S.front(), hi = S.back();
  long span = hi - lo;
  std::vector<char> in(static_cast<std::size_t>(span + 1), 0), out(static_cast<std::size_t>(2 * span + 1), 0);
  for (long s : S) in[static_cast<std::size_t>(s - lo)] = 1;
  for (long a : S)
    for (long b : S) out[static_cast<std::size_t>(b - a + span)] = 1;
  IntSet F;
  for (long n = -span; n <= span; ++n)
    if (out[static_cast<std::size_t>(n + span)]) F.push_back(n);
  return F;
}

inline DadCover build_dad_cover(const FiniteSymbolicSystem& sys, const GroupoidWindow& window, const EquivariantMap& map_prime,
                                const Certificate* equivariance, const ClopenSet& special, std::size_t d) {
  if (!equivariance || equivariance->kind != "amen" || equivariance->verdict() != Verdict::Pass)
    throw Error(ErrorKind::MissingEquivarianceCertificate, "build_dad_cover needs a passing equivariance certificate");
  if (map_prime.phi.size() != sys.size()) throw Error(ErrorKind::InvalidSpec, "map does not match the system");
  DadCover c;
  c.d = d;
  c.U_tilde.assign(d + 1, {});
  c.simplex.assign(sys.size(), nullptr);
  for (State x = 0; x < sys.size(); ++x) {
    bool first = true;
    for (std::size_t i = 0; i <= d; ++i)
      if (auto delta = simplicial_cover_membership(map_prime.phi[x], i, d)) {
        c.U_tilde[i].push_back(x);
        if (first) c.simplex[x] = json{i, *delta};
        first = false;
      }
  }
  // one window step from orbit lands in orbit_window
  c.orbit_bound = window.bound;
  c.orbit = special_orbit_window(sys, special, c.orbit_bound);
  c.orbit_window = special_orbit_window(sys, special, 2 * c.orbit_bound);
  for (const auto& t : c.U_tilde) c.U.push_back(set_union(t, c.orbit));
  c.S = support_union(map_prime);
  c.F = difference_set(c.S);
  return c;
}

inline json window_json(const GroupoidWindow& w) {
  json el = json::array();
  for (const auto& g : w.elements) el.push_back({g.x, g.n, g.y, g.a, g.b});
  return json{{"E", w.E}, {"bound", w.bound}, {"elements", el}};
}

inline GroupoidWindow window_from_json(const json& j) {
  GroupoidWindow w;
  w.E = j.at("E").get<IntSet>();
  w.bound = j.at("bound").get<std::size_t>();
  for (const auto& e : j.at("elements"))
    w.elements.push_back(GroupoidElement{e.at(0).get<State>(), e.at(1).get<long>(), e.at(2).get<State>(),
                                         e.at(3).get<std::size_t>(), e.at(4).get<std::size_t>()});
  std::sort(w.elements.begin(), w.elements.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(a.x, a.n, a.y) < std::make_tuple(b.x, b.n, b.y);
  });
  return w;
}

inline json dad_cover_json(const DadCover& c) {
  return json{{"d", c.d},     {"U", c.U}, {"U_tilde", c.U_tilde}, {"orbit", c.orbit}, {"orbit_window", c.orbit_window}, {"orbit_bound", c.orbit_bound},
              {"S", c.S},     {"F", c.F}, {"simplex", c.simplex}};
}

inline DadCover dad_cover_from_json(const json& j) {
  DadCover c;
  c.d = j.at("d").get<std::size_t>();
  c.U = j.at("U").get<std::vector<ClopenSet>>();
  c.U_tilde = j.value("U_tilde", std::vector<ClopenSet>{});
  c.orbit = j.at("orbit").get<ClopenSet>();
  c.orbit_window = j.at("orbit_window").get<ClopenSet>();
  c.orbit_bound = j.value("orbit_bound", std::size_t{0});
  c.S = j.at("S").get<IntSet>();
  c.F = j.at("F").get<IntSet>();
  for (const auto& s : j.value("simplex", json::array())) c.simplex.push_back(s);
  return c;
}

inline Certificate verify_dad_cover(const FiniteSymbolicSystem& sys, const GroupoidWindow& w, const DadCover& cover) {
  Certificate c;
  c.kind = "dad";
  c.params = json{{"E", w.E}, {"bound", w.bound}, {"d", cover.d}};
  c.data = json{{"system", system_json(sys)}, {"window", window_json(w)}, {"cover", dad_cover_json(cover)}};

  auto ws = check_window(sys, w);
  c.add("window_units", ws.units, ws.units ? json() : ws.witness);
  c.add("window_inverse", ws.inverses, ws.inverses ? json() : ws.witness);
  c.add("window_witnesses", ws.witnesses, ws.witnesses ? json() : ws.witness);

  bool open = cover.U.size() == cover.d + 1;
  for (const auto& u : cover.U)
    open = open && std::is_sorted(u.begin(), u.end()) && std::adjacent_find(u.begin(), u.end()) == u.end() &&
           (u.empty() || u.back() < sys.size());
  c.add("open", open, json{{"sets", cover.U.size()}});
  if (!open) return c;

  bool f_ok = cover.F == difference_set(cover.S);
  c.add("F_from_S", f_ok, json{{"S_size", cover.S.size()}, {"F_size", cover.F.size()}});

  json hole;
  std::vector<char> seen(sys.size(), 0);
  for (const auto& u : cover.U)
    for (State s : u) seen[s] = 1;
  for (State s = 0; s < sys.size(); ++s)
    if (!seen[s]) {
      hole = json{{"unit", s}};
      break;
    }
  c.add("covering", hole.is_null(), hole);

  std::set<long> F(cover.F.begin(), cover.F.end());
  auto in_orbit = indicator(sys.size(), cover.orbit);
  auto in_window = indicator(sys.size(), cover.orbit_window);
  bool nested = std::includes(cover.orbit_window.begin(), cover.orbit_window.end(), cover.orbit.begin(), cover.orbit.end());
  c.add("orbit_nested", nested, json{{"orbit", cover.orbit.size()}, {"orbit_window", cover.orbit_window.size()}});
  bool restricted_ok = true;
  json bad, per_set = json::array();
  for (std::size_t i = 0; i < cover.U.size(); ++i) {
    auto inU = indicator(sys.size(), cover.U[i]);
    std::size_t case1 = 0, case2 = 0;
    std::vector<std::size_t> restricted;
    for (std::size_t e = 0; e < w.elements.size(); ++e) {
      const auto& g = w.elements[e];
      if (!inU[g.x] || !inU[g.y]) continue;
      restricted.push_back(e);
      if (in_orbit[g.x] || in_orbit[g.y]) {
        ++case2;
        if (!(in_window[g.x] && in_window[g.y]) && restricted_ok) {
          restricted_ok = false;
          bad = json{{"set", i}, {"element", {g.x, g.n, g.y}}, {"case", 2}};
        }
      } else {
        ++case1;
        if (!F.count(g.n) && restricted_ok) {
          restricted_ok = false;
          bad = json{{"set", i}, {"element", {g.x, g.n, g.y}}, {"case", 1}};
        }
      }
    }
    // subgroupoid generated inside the window
    std::set<std::size_t> closure(restricted.begin(), restricted.end());
    std::unordered_map<State, std::vector<std::size_t>> by_range;
    std::vector<std::size_t> frontier(restricted.begin(), restricted.end());
    for (std::size_t e : restricted) by_range[w.elements[e].x].push_back(e);
    std::size_t rounds = 0;
    while (!frontier.empty() && rounds < 64) {
      ++rounds;
      std::vector<std::size_t> next;
      for (std::size_t e : frontier) {
        const auto& g = w.elements[e];
        auto it = by_range.find(g.y);
        if (it == by_range.end()) continue;
        std::vector<std::size_t> targets = it->second;
        for (std::size_t f : targets) {
          const auto& h = w.elements[f];
          std::size_t k = w.find(g.x, g.n + h.n, h.y);
          if (k == w.elements.size() || closure.count(k)) continue;
          closure.insert(k);
          next.push_back(k);
          by_range[w.elements[k].x].push_back(k);
        }
      }
      frontier = std::move(next);
    }
    long max_n = 0;
    for (std::size_t e : closure) max_n = std::max(max_n, std::labs(w.elements[e].n));
    per_set.push_back(json{{"set", i},
                           {"restricted", restricted.size()},
                           {"case1", case1},
                           {"case2", case2},
                           {"generated", closure.size()},
                           {"generated_max_abs_n", max_n},
                           {"generated_closed", frontier.empty()}});
  }
  c.add("restricted_elements", restricted_ok, restricted_ok ? json{{"per_set", per_set}} : bad);
  c.witnesses["per_set"] = per_set;
  return c;
}

struct BoundReport {
  std::size_t rok, tow, am, dad, nuclear;
};

inline BoundReport bound_chain(std::size_t q, std::size_t dimX) {
  return {2 * q + 1, 4 * q + 3, 4 * q + 3, 4 * q + 3, 6 * (dimX + 1) * (dimX + 1)};
}

}  // namespace symdim
