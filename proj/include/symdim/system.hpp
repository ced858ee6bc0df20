#pragma once

#include "symdim/language.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace symdim {

using State = std::uint32_t;
inline constexpr State kNoState = std::numeric_limits<State>::max();

// Sorted, duplicate-free list of state ids.
using ClopenSet = std::vector<State>;

inline ClopenSet normalized(ClopenSet c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

inline ClopenSet set_union(const ClopenSet& a, const ClopenSet& b) {
  ClopenSet r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

inline ClopenSet set_intersection(const ClopenSet& a, const ClopenSet& b) {
  ClopenSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

inline ClopenSet set_difference(const ClopenSet& a, const ClopenSet& b) {
  ClopenSet r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

inline bool contains(const ClopenSet& c, State s) { return std::binary_search(c.begin(), c.end(), s); }

class FiniteSymbolicSystem {
 public:
  FiniteSymbolicSystem() = default;

  // resolution_surjective: the relation this map was resolved from is onto,
  // even if the map itself is not.
  FiniteSymbolicSystem(std::vector<State> sigma, std::vector<std::string> meta, bool resolution_surjective)
      : sigma_(std::move(sigma)), meta_(std::move(meta)), resolution_surjective_(resolution_surjective) {
    if (meta_.size() != sigma_.size()) meta_.resize(sigma_.size());
    for (State t : sigma_)
      if (t >= sigma_.size()) throw Error(ErrorKind::InvalidSpec, "sigma is not total on the state set");
    start_.assign(sigma_.size() + 1, 0);
    for (State t : sigma_) ++start_[t + 1];
    std::partial_sum(start_.begin(), start_.end(), start_.begin());
    pred_.resize(sigma_.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (State s = 0; s < sigma_.size(); ++s) pred_[fill[sigma_[s]]++] = s;
  }

  std::size_t size() const { return sigma_.size(); }
  State sigma(State s) const { return sigma_[s]; }
  const std::vector<State>& sigma_map() const { return sigma_; }
  const std::string& meta(State s) const { return meta_[s]; }
  const std::vector<std::string>& metas() const { return meta_; }
  bool resolution_surjective() const { return resolution_surjective_; }

  std::size_t indegree(State s) const { return start_[s + 1] - start_[s]; }
  const State* preds_begin(State s) const { return pred_.data() + start_[s]; }
  const State* preds_end(State s) const { return pred_.data() + start_[s + 1]; }

  bool is_onto() const {
    for (State s = 0; s < size(); ++s)
      if (indegree(s) == 0) return false;
    return true;
  }
  bool surjective_flag() const { return is_onto(); }

  ClopenSet all_states() const {
    ClopenSet c(size());
    std::iota(c.begin(), c.end(), State{0});
    return c;
  }

  ClopenSet special_states() const {
    ClopenSet c;
    for (State s = 0; s < size(); ++s)
      if (indegree(s) >= 2) c.push_back(s);
    return c;
  }

  State power(State s, std::size_t n) const {
    for (std::size_t i = 0; i < n; ++i) s = sigma_[s];
    return s;
  }

  std::string adjacency_text() const {
    std::ostringstream os;
    for (State s = 0; s < size(); ++s) {
      os << s << " -> " << sigma_[s];
      if (!meta_[s].empty()) os << "  # " << meta_[s];
      os << '\n';
    }
    return os.str();
  }

 private:
  std::vector<State> sigma_;
  std::vector<std::string> meta_;
  bool resolution_surjective_ = false;
  std::vector<std::size_t> start_;
  std::vector<State> pred_;
};

inline ClopenSet preimage_once(const FiniteSymbolicSystem& sys, const ClopenSet& c) {
  ClopenSet r;
  for (State t : c) r.insert(r.end(), sys.preds_begin(t), sys.preds_end(t));
  std::sort(r.begin(), r.end());
  return r;
}

// {s : sigma^n(s) in C}
inline ClopenSet preimage(const FiniteSymbolicSystem& sys, const ClopenSet& c, std::size_t n) {
  ClopenSet cur = c;
  for (std::size_t i = 0; i < n && !cur.empty(); ++i) cur = preimage_once(sys, cur);
  return cur;
}

// {sigma^n(s) : s in C}
inline ClopenSet image(const FiniteSymbolicSystem& sys, const ClopenSet& c, std::size_t n) {
  ClopenSet cur = c;
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& s : cur) s = sys.sigma(s);
    cur = normalized(std::move(cur));
  }
  return cur;
}

inline bool disjoint_family_check(const std::vector<ClopenSet>& family, std::size_t universe = 0) {
  std::size_t top = universe;
  for (const auto& c : family)
    if (!c.empty()) top = std::max<std::size_t>(top, c.back() + 1);
  std::vector<char> seen(top, 0);
  for (const auto& c : family)
    for (State s : c) {
      if (seen[s]) return false;
      seen[s] = 1;
    }
  return true;
}

inline std::vector<char> indicator(std::size_t n, const ClopenSet& c) {
  std::vector<char> m(n, 0);
  for (State s : c) m[s] = 1;
  return m;
}

// Lengths of all cycles of the functional graph, sorted.
inline std::vector<std::size_t> cycle_lengths(const FiniteSymbolicSystem& sys) {
  std::vector<int> color(sys.size(), 0);
  std::vector<std::size_t> out;
  for (State s0 = 0; s0 < sys.size(); ++s0) {
    if (color[s0]) continue;
    std::vector<State> path;
    State s = s0;
    while (!color[s]) {
      color[s] = 1;
      path.push_back(s);
      s = sys.sigma(s);
    }
    if (color[s] == 1) {
      std::size_t len = 1;
      for (State t = sys.sigma(s); t != s; t = sys.sigma(t)) ++len;
      out.push_back(len);
    }
    for (State t : path) color[t] = 2;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t min_cycle_length(const FiniteSymbolicSystem& sys) {
  auto c = cycle_lengths(sys);
  return c.empty() ? 0 : c.front();
}

// No word w with |w| <= L whose periodic extension of length max(3L, 2|w|) is
// in the language. This is a repetition search: a witness is a long periodic
// stretch, which proves a periodic point only when the stretch outruns every
// forbidden word (SFTs). Acceptance is relative to the searched window.
struct AperiodicityReport {
  bool aperiodic = true;
  std::size_t window = 0;
  Word witness;
};

inline AperiodicityReport aperiodicity_window_check(Language& lang, std::size_t L) {
  if (L == 0) throw Error(ErrorKind::InvalidSpec, "window must be >= 1");
  AperiodicityReport r;
  r.window = L;
  for (std::size_t len = 1; len <= L; ++len) {
    std::size_t need = std::max(3 * L, 2 * len);
    for (const auto& w : lang.words(len)) {
      Word p;
      while (p.size() < need) p += w;
      p.resize(need);
      if (lang.contains(p)) {
        r.aperiodic = false;
        r.witness = w;
        return r;
      }
    }
  }
  return r;
}

// Binary lifting for sigma^t and first-hit times of a set.
class Walker {
 public:
  explicit Walker(const FiniteSymbolicSystem& sys, std::size_t max_power = 1) : sys_(sys) {
    jump_.push_back(sys.sigma_map());
    while ((std::size_t{1} << jump_.size()) <= max_power) {
      const auto& prev = jump_.back();
      std::vector<State> next(prev.size());
      for (std::size_t s = 0; s < prev.size(); ++s) next[s] = prev[prev[s]];
      jump_.push_back(std::move(next));
    }
  }

  State power(State s, std::size_t t) const {
    for (std::size_t b = 0; t; ++b, t >>= 1) {
      if (b >= jump_.size()) return sys_.power(s, t << b);
      if (t & 1) s = jump_[b][s];
    }
    return s;
  }

 private:
  const FiniteSymbolicSystem& sys_;
  std::vector<std::vector<State>> jump_;
};

inline constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

// hit[s] = least t >= 0 with sigma^t(s) in C.
inline std::vector<std::size_t> first_hit_times(const FiniteSymbolicSystem& sys, const ClopenSet& c) {
  std::vector<std::size_t> hit(sys.size(), kNever);
  std::vector<State> frontier;
  for (State s : c) {
    hit[s] = 0;
    frontier.push_back(s);
  }
  for (std::size_t d = 0; !frontier.empty(); ++d) {
    std::vector<State> next;
    for (State t : frontier)
      for (const State* p = sys.preds_begin(t); p != sys.preds_end(t); ++p)
        if (hit[*p] == kNever) {
          hit[*p] = d + 1;
          next.push_back(*p);
        }
    frontier = std::move(next);
  }
  return hit;
}

}  // namespace symdim
