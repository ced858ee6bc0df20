#pragma once

// Reference computations over exact rationals; they use the library's value
// types but none of its algorithms.

#include "symdim/rational.hpp"
#include "symdim/simplex.hpp"
#include "symdim/system.hpp"

#include <bit>
#include <map>
#include <vector>

namespace oracle {

using symdim::Rational;
using symdim::SimplexPoint;

inline Rational l1(const SimplexPoint& a, const SimplexPoint& b) {
  std::map<long, Rational> m;
  for (const auto& [k, w] : a.atoms) m[k] += w;
  for (const auto& [k, w] : b.atoms) m[k] -= w;
  Rational s = 0;
  for (const auto& [k, w] : m) s += abs(w);
  return s;
}

// Max l1 deviation over x, n in E and every y with y = T^n x (n >= 0) or T^{-n} y = x.
inline Rational deviation(const symdim::FiniteSymbolicSystem& sys, const std::vector<SimplexPoint>& phi,
                          const std::vector<long>& E) {
  Rational worst = 0;
  for (symdim::State x = 0; x < sys.size(); ++x)
    for (long n : E)
      for (symdim::State y = 0; y < sys.size(); ++y) {
        bool edge = n >= 0 ? sys.power(x, static_cast<std::size_t>(n)) == y : sys.power(y, static_cast<std::size_t>(-n)) == x;
        if (!edge) continue;
        SimplexPoint shifted = phi[x];
        for (auto& a : shifted.atoms) a.first -= n;
        worst = std::max(worst, l1(phi[y], shifted));
      }
  return worst;
}

// Distance to the nearest point carried by at most i atoms, trying every carrier
// T: the best point on T keeps mu on T and puts the missing mass on one atom.
inline Rational skeleton(const SimplexPoint& mu, std::size_t i) {
  std::size_t n = mu.size();
  Rational best = 2;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > i) continue;
    SimplexPoint nu;
    Rational kept = 0;
    for (std::size_t a = 0; a < n; ++a)
      if (mask >> a & 1) {
        nu.atoms.push_back(mu.atoms[a]);
        kept += mu.atoms[a].second;
      }
    nu.atoms.front().second += 1 - kept;
    best = std::min(best, l1(mu, nu));
  }
  return best;
}

}  // namespace oracle
