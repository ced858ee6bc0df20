#pragma once

#include "symdim/system.hpp"

#include <cstring>
#include <unordered_map>

namespace symdim {

// Functional model at depth k: states are the length-k factors, the relation
// u -> v comes from the length-(k+1) factors, and at a right-special vertex the
// successor is the left-special candidate if one exists, else the smallest.
struct DepthModel {
  std::size_t k = 0;
  FiniteSymbolicSystem sys;
  std::vector<std::vector<State>> relation;  // all successors
  bool relation_onto = false;
};

namespace detail {

inline DepthModel resolve(std::size_t k, std::vector<std::vector<State>> rel, std::vector<std::string> meta) {
  std::size_t n = rel.size();
  std::vector<std::size_t> indeg(n, 0);
  for (auto& r : rel) {
    r = normalized(std::move(r));
    for (State t : r) ++indeg[t];
  }
  DepthModel m;
  m.k = k;
  m.relation_onto = std::all_of(indeg.begin(), indeg.end(), [](std::size_t d) { return d > 0; });
  std::vector<State> sigma(n);
  for (State s = 0; s < n; ++s) {
    if (rel[s].empty()) throw Error(ErrorKind::InvalidSpec, "state without successor at depth " + std::to_string(k));
    State pick = rel[s].front();
    for (State t : rel[s])
      if (indeg[t] >= 2) {
        pick = t;
        break;
      }
    sigma[s] = pick;
  }
  m.relation = std::move(rel);
  m.sys = FiniteSymbolicSystem(std::move(sigma), std::move(meta), m.relation_onto);
  return m;
}

struct WindowIds {
  std::vector<std::vector<State>> id;  // id[text][offset]
  std::vector<std::pair<std::size_t, std::size_t>> rep;  // state -> (text, offset)
};

// Distinct length-len windows across the texts, numbered in lexicographic order.
inline WindowIds window_ids(const std::vector<Word>& texts, std::size_t len) {
  constexpr std::uint64_t mod = (std::uint64_t{1} << 61) - 1;
  constexpr std::uint64_t base = 1'000'003;
  auto mulmod = [](std::uint64_t a, std::uint64_t b) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(p & mod), hi = static_cast<std::uint64_t>(p >> 61);
    std::uint64_t r = lo + hi;
    return r >= mod ? r - mod : r;
  };
  std::uint64_t top = 1;
  for (std::size_t i = 0; i + 1 < len; ++i) top = mulmod(top, base);

  WindowIds w;
  std::unordered_map<std::uint64_t, std::vector<State>> buckets;
  std::vector<std::pair<std::size_t, std::size_t>> rep;
  w.id.resize(texts.size());
  for (std::size_t t = 0; t < texts.size(); ++t) {
    const Word& x = texts[t];
    if (x.size() < len) continue;
    w.id[t].assign(x.size() - len + 1, kNoState);
    std::uint64_t h = 0;
    for (std::size_t i = 0; i < len; ++i) h = (mulmod(h, base) + static_cast<unsigned char>(x[i]) + 1) % mod;
    for (std::size_t i = 0; i + len <= x.size(); ++i) {
      if (i > 0) {
        std::uint64_t drop = mulmod(static_cast<unsigned char>(x[i - 1]) + 1, top);
        h = (h + mod - drop) % mod;
        h = (mulmod(h, base) + static_cast<unsigned char>(x[i + len - 1]) + 1) % mod;
      }
      auto& b = buckets[h];
      State found = kNoState;
      for (State c : b) {
        auto [rt, ri] = rep[c];
        if (std::memcmp(texts[rt].data() + ri, x.data() + i, len) == 0) {
          found = c;
          break;
        }
      }
      if (found == kNoState) {
        found = static_cast<State>(rep.size());
        rep.emplace_back(t, i);
        b.push_back(found);
      }
      w.id[t][i] = found;
    }
  }
  std::vector<State> order(rep.size());
  std::iota(order.begin(), order.end(), State{0});
  std::sort(order.begin(), order.end(), [&](State a, State b) {
    auto [ta, ia] = rep[a];
    auto [tb, ib] = rep[b];
    return std::memcmp(texts[ta].data() + ia, texts[tb].data() + ib, len) < 0;
  });
  std::vector<State> rank(rep.size());
  for (State r = 0; r < order.size(); ++r) rank[order[r]] = r;
  for (auto& row : w.id)
    for (auto& v : row) v = rank[v];
  w.rep.resize(rep.size());
  for (State c = 0; c < rep.size(); ++c) w.rep[rank[c]] = rep[c];
  return w;
}

inline std::string describe(const Alphabet& a, const Word& w, std::size_t max_len = 48) {
  if (w.size() <= max_len) return a.spell(w);
  return a.spell(w.substr(0, max_len)) + "...(" + std::to_string(w.size()) + ")";
}

}  // namespace detail

inline DepthModel depth_model_explicit(Language& lang, std::size_t k) {
  const auto& states = lang.words(k);
  const auto& edges = lang.words(k + 1);
  std::vector<std::vector<State>> rel(states.size());
  auto id = [&](const Word& w) {
    return static_cast<State>(std::lower_bound(states.begin(), states.end(), w) - states.begin());
  };
  for (const auto& e : edges) rel[id(e.substr(0, k))].push_back(id(e.substr(1)));
  std::vector<std::string> meta;
  for (const auto& w : states) meta.push_back(detail::describe(lang.alphabet(), w));
  return detail::resolve(k, std::move(rel), std::move(meta));
}

// Same model for substitutions, without materializing the words.
inline DepthModel depth_model_texts(Language& lang, std::size_t k) {
  auto texts = lang.reference_texts(k + 1);
  auto w = detail::window_ids(texts, k);
  std::vector<std::vector<State>> rel(w.rep.size());
  for (std::size_t t = 0; t < texts.size(); ++t)
    for (std::size_t i = 0; i + k + 1 <= texts[t].size(); ++i) rel[w.id[t][i]].push_back(w.id[t][i + 1]);
  std::vector<std::string> meta;
  for (auto [t, i] : w.rep)
    meta.push_back(lang.alphabet().spell(texts[t].substr(i, std::min<std::size_t>(k, 48))) +
                   (k > 48 ? "...(" + std::to_string(k) + ")" : ""));
  return detail::resolve(k, std::move(rel), std::move(meta));
}

inline DepthModel depth_model(Language& lang, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::InvalidSpec, "depth must be >= 1");
  if (lang.spec().variant == Variant::Substitution) return depth_model_texts(lang, k);
  return depth_model_explicit(lang, k);
}

}  // namespace symdim
