#pragma once

#include "symdim/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace symdim {

// Finitely supported probability vector on Z; atoms sorted by position,
// weights strictly positive.
struct SimplexPoint {
  std::vector<std::pair<long, Rational>> atoms;

  std::size_t size() const { return atoms.size(); }
  Rational total() const {
    Rational t = 0;
    for (const auto& [m, w] : atoms) t += w;
    return t;
  }
  Rational at(long m) const {
    auto it = std::lower_bound(atoms.begin(), atoms.end(), m, [](const auto& a, long v) { return a.first < v; });
    return it != atoms.end() && it->first == m ? it->second : Rational(0);
  }
  std::vector<long> support() const {
    std::vector<long> s;
    for (const auto& a : atoms) s.push_back(a.first);
    return s;
  }
  bool operator==(const SimplexPoint&) const = default;
};

inline SimplexPoint make_point(const std::map<long, Rational>& w) {
  SimplexPoint p;
  for (const auto& [m, v] : w)
    if (v != 0) p.atoms.emplace_back(m, v);
  return p;
}

inline SimplexPoint dirac(long m) { return SimplexPoint{{{m, Rational(1)}}}; }

// alpha_n(mu)(m) = mu(m + n)
inline SimplexPoint shift_point(const SimplexPoint& mu, long n) {
  SimplexPoint r = mu;
  for (auto& a : r.atoms) a.first -= n;
  return r;
}

inline Rational rho(const SimplexPoint& a, const SimplexPoint& b) {
  Rational d = 0;
  std::size_t i = 0, j = 0;
  while (i < a.atoms.size() || j < b.atoms.size()) {
    if (j == b.atoms.size() || (i < a.atoms.size() && a.atoms[i].first < b.atoms[j].first)) {
      d += a.atoms[i++].second;
    } else if (i == a.atoms.size() || b.atoms[j].first < a.atoms[i].first) {
      d += b.atoms[j++].second;
    } else {
      d += abs_rational(a.atoms[i++].second - b.atoms[j++].second);
    }
  }
  return d;
}

// Atom positions ordered by weight descending, ties by position.
inline std::vector<long> weight_order(const SimplexPoint& mu) {
  auto atoms = mu.atoms;
  std::stable_sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<long> out;
  for (const auto& a : atoms) out.push_back(a.first);
  return out;
}

// l1 distance to the points supported on at most i atoms; nullopt is +infinity
// (i = 0, empty skeleton).
inline std::optional<Rational> skeleton_distance(const SimplexPoint& mu, std::size_t i) {
  if (i == 0) return std::nullopt;
  std::vector<Rational> w;
  for (const auto& a : mu.atoms) w.push_back(a.second);
  std::sort(w.begin(), w.end(), std::greater<>());
  Rational top = 0;
  for (std::size_t j = 0; j < std::min(i, w.size()); ++j) top += w[j];
  return Rational(2) * (mu.total() - top);
}

inline Rational pow10(std::size_t i) {
  Rational r = 1;
  for (std::size_t j = 0; j < i; ++j) r *= 10;
  return r;
}

// mu in V_i: within 1/(3*10^i) of the i-skeleton P_i and farther than
// 5/(2*10^i) from P_{i-1}. Returns the simplex (i+1 heaviest atoms) on success.
inline std::optional<std::vector<long>> simplicial_cover_membership(const SimplexPoint& mu, std::size_t i, std::size_t d) {
  if (i > d) return std::nullopt;
  Rational near = Rational(1) / (3 * pow10(i));
  Rational far = Rational(5) / (2 * pow10(i));
  auto to_i = skeleton_distance(mu, i + 1);
  if (!(*to_i < near)) return std::nullopt;
  auto below = skeleton_distance(mu, i);
  if (below && !(*below > far)) return std::nullopt;
  auto order = weight_order(mu);
  order.resize(std::min(order.size(), i + 1));
  std::sort(order.begin(), order.end());
  return order;
}

// Smallest i with mu in V_i, if any.
inline std::optional<std::pair<std::size_t, std::vector<long>>> cover_index(const SimplexPoint& mu, std::size_t d) {
  for (std::size_t i = 0; i <= d; ++i)
    if (auto delta = simplicial_cover_membership(mu, i, d)) return std::make_pair(i, *delta);
  return std::nullopt;
}

}  // namespace symdim
