#pragma once

#include "symdim/language.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace symdim {

// Number of symbols a with a.w in the language, for every w of length n.
inline std::map<Word, std::size_t> left_extension_counts(Language& lang, std::size_t n) {
  std::map<Word, std::size_t> e;
  for (const auto& w : lang.words(n)) e[w] = 0;
  for (const auto& aw : lang.words(n + 1)) ++e[aw.substr(1)];
  return e;
}

inline std::vector<Word> left_special_words(Language& lang, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidSpec, "length must be >= 1");
  std::vector<Word> out;
  for (const auto& [w, c] : left_extension_counts(lang, n))
    if (c >= 2) out.push_back(w);
  return out;
}

inline std::vector<Word> left_special_words(const SubshiftSpec& spec, std::size_t n) {
  Language lang(spec);
  return left_special_words(lang, n);
}

struct LeftSpecialTree {
  std::size_t depth = 0;
  std::vector<std::vector<Word>> level;            // level[n], n = 1..depth
  std::vector<std::vector<std::size_t>> parent;    // index into level[n-1], n >= 2
};

inline LeftSpecialTree left_special_tree(Language& lang, std::size_t depth) {
  LeftSpecialTree t;
  t.depth = depth;
  t.level.assign(depth + 1, {});
  t.parent.assign(depth + 1, {});
  for (std::size_t n = 1; n <= depth; ++n) {
    t.level[n] = left_special_words(lang, n);
    if (n < 2) continue;
    for (const auto& w : t.level[n]) {
      const auto& up = t.level[n - 1];
      auto it = std::lower_bound(up.begin(), up.end(), w.substr(0, n - 1));
      bool ok = it != up.end() && *it == w.substr(0, n - 1);
      t.parent[n].push_back(ok ? static_cast<std::size_t>(it - up.begin()) : static_cast<std::size_t>(-1));
    }
  }
  return t;
}

struct SpecialReport {
  std::size_t depth = 0;
  std::vector<std::size_t> counts;  // counts[n], n = 1..depth
  std::size_t count_at_depth = 0;  // special words of the final length with special prefixes
  std::optional<std::size_t> branch_upper;  // empty = unbounded
  bool stabilized = false;
  Rational d_hat;
  BigInt bound;
  bool superlinear_warning = false;
  bool prefix_closed = true;
  // Only meaningful when stabilized and no warning.
  bool bound_holds = true;
};

inline SpecialReport sp_estimate(Language& lang, std::size_t depth) {
  if (depth < 4) throw Error(ErrorKind::InvalidSpec, "sp_estimate depth must be >= 4");
  SpecialReport r;
  r.depth = depth;
  auto tree = left_special_tree(lang, depth);
  r.counts.assign(depth + 1, 0);
  for (std::size_t n = 1; n <= depth; ++n) r.counts[n] = tree.level[n].size();

  // A word counts toward a branch only if its whole prefix chain is special.
  std::vector<char> chain(tree.level[depth].size(), 1);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    std::size_t n = depth, idx = i;
    while (n >= 2) {
      idx = tree.parent[n][idx];
      if (idx == static_cast<std::size_t>(-1)) {
        chain[i] = 0;
        r.prefix_closed = false;
        break;
      }
      --n;
    }
  }
  for (char c : chain) r.count_at_depth += c;

  std::size_t from = depth - depth / 4;
  r.stabilized = true;
  for (std::size_t n = from; n <= depth; ++n) r.stabilized = r.stabilized && r.counts[n] == r.counts[depth];
  if (r.stabilized) r.branch_upper = r.count_at_depth;

  auto g = growth_report(lang, depth);
  r.d_hat = g.d_hat;
  r.bound = ceil_rational(2 * g.d_hat);
  r.superlinear_warning = g.superlinear_flag;
  if (r.stabilized && !r.superlinear_warning) r.bound_holds = BigInt(*r.branch_upper) <= r.bound;
  return r;
}

inline SpecialReport sp_estimate(const SubshiftSpec& spec, std::size_t depth) {
  Language lang(spec);
  return sp_estimate(lang, depth);
}

// Exact p(n) and |LS(n)| for an SFT by counting paths in the graph of live
// K-blocks (K = longest forbidden length - 1), without listing words. Same
// language convention as Language: blocks that extend to the right forever.
struct TransferCounts {
  std::vector<BigInt> p, ls;  // index n = 1..n_max
};

inline TransferCounts sft_transfer_counts(const SubshiftSpec& spec, std::size_t n_max) {
  if (spec.variant == Variant::Substitution) throw Error(ErrorKind::InvalidSpec, "transfer counts need an SFT or full shift");
  const std::size_t A = spec.alphabet.size();
  std::size_t f = max_forbidden_length(spec);
  std::size_t K = std::max<std::size_t>(f > 0 ? f - 1 : 1, 1);
  std::set<Word> forb(spec.forbidden.begin(), spec.forbidden.end());
  auto allowed = [&](const Word& w) {
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t j = i + 1; j <= w.size(); ++j)
        if (forb.count(w.substr(i, j - i))) return false;
    return true;
  };
  std::vector<Word> blocks{Word()};
  for (std::size_t i = 0; i < K; ++i) {
    std::vector<Word> next;
    for (const auto& w : blocks)
      for (std::size_t a = 0; a < A; ++a) next.push_back(w + static_cast<char>(a));
    if (next.size() > kMaxWordsPerLength) throw Error(ErrorKind::DepthInsufficient, "block graph too large");
    blocks = std::move(next);
  }
  std::map<Word, std::size_t> id;
  std::vector<Word> V;
  for (const auto& w : blocks)
    if (allowed(w)) {
      id[w] = V.size();
      V.push_back(w);
    }
  std::vector<std::vector<std::size_t>> succ(V.size());
  for (std::size_t v = 0; v < V.size(); ++v)
    for (std::size_t a = 0; a < A; ++a) {
      Word e = V[v] + static_cast<char>(a);
      auto it = id.find(e.substr(1));
      if (it != id.end() && allowed(e)) succ[v].push_back(it->second);
    }
  std::vector<char> live(V.size(), 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < V.size(); ++v) {
      if (!live[v]) continue;
      bool any = false;
      for (std::size_t u : succ[v]) any = any || live[u];
      if (!any) {
        live[v] = 0;
        changed = true;
      }
    }
  }
  if (std::none_of(live.begin(), live.end(), [](char c) { return c != 0; }))
    throw Error(ErrorKind::EmptyLanguage, "SFT has no infinite words");

  // a.u is a word of length K+1 iff the block a.u[0..K-1) is live and a.u allowed
  std::vector<std::size_t> lext(V.size(), 0);
  for (std::size_t u = 0; u < V.size(); ++u)
    if (live[u])
      for (std::size_t a = 0; a < A; ++a) {
        Word head = (static_cast<char>(a) + V[u]).substr(0, K);
        auto it = id.find(head);
        if (it != id.end() && live[it->second] && allowed(static_cast<char>(a) + V[u])) ++lext[u];
      }

  TransferCounts r;
  r.p.assign(n_max + 1, 0);
  r.ls.assign(n_max + 1, 0);
  // short lengths: prefixes of live blocks
  for (std::size_t n = 1; n < K && n <= n_max; ++n) {
    std::set<Word> Ln, Ln1;
    for (std::size_t v = 0; v < V.size(); ++v)
      if (live[v]) {
        Ln.insert(V[v].substr(0, n));
        Ln1.insert(V[v].substr(0, n + 1));
      }
    r.p[n] = Ln.size();
    for (const auto& w : Ln) {
      std::size_t c = 0;
      for (std::size_t a = 0; a < A; ++a) c += Ln1.count(static_cast<char>(a) + w);
      if (c >= 2) ++r.ls[n];
    }
  }
  std::vector<BigInt> paths(V.size(), 0);
  for (std::size_t v = 0; v < V.size(); ++v) paths[v] = live[v] ? 1 : 0;
  for (std::size_t n = K; n <= n_max; ++n) {
    for (std::size_t v = 0; v < V.size(); ++v) {
      r.p[n] += paths[v];
      if (lext[v] >= 2) r.ls[n] += paths[v];
    }
    std::vector<BigInt> next(V.size(), 0);
    for (std::size_t v = 0; v < V.size(); ++v)
      if (live[v])
        for (std::size_t u : succ[v])
          if (live[u]) next[v] += paths[u];
    paths = std::move(next);
  }
  return r;
}

struct UsefulInequalityReport {
  Rational d_hat;
  std::vector<std::size_t> qualifying;
  bool extendable = false;
  bool counting_step_holds = true;
  std::vector<std::size_t> counting_violations;
};

// m in 1..horizon with p(m+1)-p(m) <= 2(d_hat+eps), plus the pigeonhole step
// |LS(m)| <= p(m+1)-p(m) for each qualifying m.
inline UsefulInequalityReport check_useful_inequality(Language& lang, std::size_t horizon, const Rational& eps) {
  if (!(eps > 0 && eps < Rational(1, 2))) throw Error(ErrorKind::InvalidSpec, "epsilon must lie in (0, 1/2)");
  UsefulInequalityReport r;
  auto g = growth_report(lang, std::max<std::size_t>(horizon, 2));
  r.d_hat = g.d_hat;
  r.extendable = check_extendability(lang, horizon);
  Rational cap = 2 * (r.d_hat + eps);
  for (std::size_t m = 1; m <= horizon; ++m) {
    std::uint64_t diff = lang.complexity(m + 1) - lang.complexity(m);
    if (Rational(BigInt(diff)) <= cap) {
      r.qualifying.push_back(m);
      if (r.extendable && left_special_words(lang, m).size() > diff) {
        r.counting_step_holds = false;
        r.counting_violations.push_back(m);
      }
    }
  }
  return r;
}

inline UsefulInequalityReport check_useful_inequality(const SubshiftSpec& spec, std::size_t horizon,
                                                      const Rational& eps) {
  Language lang(spec);
  return check_useful_inequality(lang, horizon, eps);
}

}  // namespace symdim
