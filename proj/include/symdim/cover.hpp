#pragma once

#include "symdim/special.hpp"
#include "symdim/system.hpp"

#include <map>
#include <set>
#include <tuple>

namespace symdim {

struct PastSet {
  std::size_t l = 0;
  std::size_t lookahead = 0;
  std::vector<Word> words;
  bool stabilized = false;  // same result at lookahead - 1
};

namespace detail {

// P_l over all extensions of w to length m.
inline std::vector<Word> past_words(Language& lang, const Word& w, std::size_t l, std::size_t m) {
  std::set<Word> out;
  for (const auto& x : lang.words(l + m))
    if (x.compare(l, w.size(), w) == 0) out.insert(x.substr(0, l));
  return {out.begin(), out.end()};
}

}  // namespace detail

inline PastSet past_set(Language& lang, const Word& w, std::size_t l, std::size_t m) {
  if (m < w.size()) throw Error(ErrorKind::InvalidSpec, "lookahead shorter than the word");
  if (!lang.contains(w)) throw Error(ErrorKind::EmptyLanguage, "word not in the language");
  PastSet p;
  p.l = l;
  p.lookahead = m;
  p.words = detail::past_words(lang, w, l, m);
  if (m > w.size() && m > 0) p.stabilized = detail::past_words(lang, w, l, m - 1) == p.words;
  else p.stabilized = false;
  return p;
}

struct CoverState {
  Word prefix;
  std::vector<Word> past;
};

struct CoverGraph {
  std::size_t k = 0, l = 0, horizon = 0;
  std::vector<CoverState> states;
  std::vector<std::vector<State>> succ;
  std::vector<std::size_t> preimage_classes;  // distinct (k+1,l)-classes mapping in
  std::map<Word, State> iota;                 // length k+horizon words
  bool stabilized = false;
  bool sound_lookahead = false;  // SFT with horizon >= max forbidden length
  std::string index_order = "coordinatewise (k,l)";

  std::size_t size() const { return states.size(); }
  const Word& pi(State s) const { return states[s].prefix; }
};

namespace detail {

// Map tail (length h) -> P_l(tail), from the length l+h factors.
inline std::map<Word, std::vector<Word>> past_table(Language& lang, std::size_t l, std::size_t h) {
  std::map<Word, std::set<Word>> acc;
  for (const auto& x : lang.words(l + h)) acc[x.substr(l)].insert(x.substr(0, l));
  std::map<Word, std::vector<Word>> out;
  for (auto& [t, s] : acc) out[t] = std::vector<Word>(s.begin(), s.end());
  return out;
}

}  // namespace detail

inline CoverGraph build_cover_graph(Language& lang, std::size_t k, std::size_t l, std::size_t horizon) {
  if (k < 1 || l < 1) throw Error(ErrorKind::InvalidSpec, "cover needs k, l >= 1");
  if (horizon < k + l) throw Error(ErrorKind::InvalidSpec, "cover needs horizon >= k + l");
  CoverGraph g;
  g.k = k;
  g.l = l;
  g.horizon = horizon;
  const std::size_t h = horizon;
  auto past = detail::past_table(lang, l, h);
  auto past_short = detail::past_table(lang, l, h - 1);

  using Key = std::pair<Word, std::vector<Word>>;
  std::map<Key, State> ids;
  const auto& words = lang.words(k + h);
  for (const auto& w : words) ids.emplace(Key{w.substr(0, k), past.at(w.substr(k))}, 0);
  State next = 0;
  for (auto& [key, id] : ids) {
    id = next++;
    g.states.push_back(CoverState{key.first, key.second});
  }
  for (const auto& w : words) g.iota[w] = ids.at(Key{w.substr(0, k), past.at(w.substr(k))});

  // Partition at lookahead h-1 must group the words the same way.
  std::map<Key, State> coarse_of;
  std::map<State, State> fine_to_coarse;
  std::map<Key, std::size_t> coarse_ids;
  g.stabilized = true;
  for (const auto& w : words) {
    Key ck{w.substr(0, k), past_short.at(w.substr(k, h - 1))};
    auto [it, fresh] = coarse_ids.emplace(ck, coarse_ids.size());
    State fine = g.iota[w];
    auto [jt, nf] = fine_to_coarse.emplace(fine, static_cast<State>(it->second));
    if (!nf && jt->second != it->second) g.stabilized = false;
  }
  if (coarse_ids.size() != ids.size()) g.stabilized = false;

  g.succ.assign(g.states.size(), {});
  std::vector<std::set<Key>> pre(g.states.size());
  for (const auto& W : lang.words(k + h + 1)) {
    State from = g.iota.at(W.substr(0, k + h));
    State to = g.iota.at(W.substr(1));
    g.succ[from].push_back(to);
    pre[to].insert(Key{W.substr(0, k + 1), past.at(W.substr(k + 1))});
  }
  for (auto& s : g.succ) s = normalized(std::move(s));
  for (const auto& p : pre) g.preimage_classes.push_back(p.size());
  if (lang.spec().variant == Variant::SFT) g.sound_lookahead = h >= max_forbidden_length(lang.spec());
  return g;
}

inline bool cover_is_onto(const CoverGraph& g) {
  std::vector<char> hit(g.size(), 0);
  for (const auto& s : g.succ)
    for (State t : s) hit[t] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

inline ClopenSet cover_special_states(const CoverGraph& g) {
  ClopenSet out;
  for (State s = 0; s < g.size(); ++s)
    if (g.preimage_classes[s] >= 2) out.push_back(s);
  return out;
}

struct SpecialCorrespondence {
  std::size_t special_states = 0;
  std::size_t branch_count = 0;
  bool counts_match = false;
  bool prefixes_left_special = true;
};

// Finite form of Sp_l(cover) = iota(Sp_l(X)).
inline SpecialCorrespondence check_special_correspondence(Language& lang, const CoverGraph& g) {
  SpecialCorrespondence r;
  auto sp = cover_special_states(g);
  r.special_states = sp.size();
  auto tree = left_special_tree(lang, g.k);
  std::size_t chains = 0;
  for (std::size_t i = 0; i < tree.level[g.k].size(); ++i) {
    std::size_t n = g.k, idx = i;
    bool ok = true;
    while (n >= 2 && ok) {
      idx = tree.parent[n][idx];
      ok = idx != static_cast<std::size_t>(-1);
      --n;
    }
    chains += ok;
  }
  r.branch_count = chains;
  r.counts_match = r.special_states == r.branch_count;
  const auto& ls = tree.level[g.k];
  for (State s : sp) r.prefixes_left_special = r.prefixes_left_special && std::binary_search(ls.begin(), ls.end(), g.pi(s));
  return r;
}

struct IntertwiningReport {
  bool ok = true;
  std::size_t words_checked = 0;
  std::size_t edges_witnessed = 0;
  std::string failure;
};

// Recomputes classes naively from the language and checks
// iota(W[1:]) in sigma(iota(W[:-1])), that every edge is witnessed, and
// pi(iota(w)) = w[0:k].
inline IntertwiningReport check_intertwining(Language& lang, const CoverGraph& g) {
  IntertwiningReport r;
  const std::size_t k = g.k, l = g.l, h = g.horizon;
  std::map<std::pair<Word, std::vector<Word>>, State> by_key;
  for (State s = 0; s < g.size(); ++s) by_key[{g.states[s].prefix, g.states[s].past}] = s;
  std::map<Word, State> naive;
  for (const auto& w : lang.words(k + h)) {
    auto p = detail::past_words(lang, w.substr(k), l, h);
    auto it = by_key.find({w.substr(0, k), p});
    if (it == by_key.end()) {
      r.ok = false;
      r.failure = "no state for word " + lang.alphabet().spell(w);
      return r;
    }
    naive[w] = it->second;
    if (g.iota.at(w) != it->second || g.pi(it->second) != w.substr(0, k)) {
      r.ok = false;
      r.failure = "iota disagrees on " + lang.alphabet().spell(w);
      return r;
    }
  }
  std::set<std::pair<State, State>> seen;
  for (const auto& W : lang.words(k + h + 1)) {
    State a = naive.at(W.substr(0, k + h)), b = naive.at(W.substr(1));
    ++r.words_checked;
    if (!std::binary_search(g.succ[a].begin(), g.succ[a].end(), b)) {
      r.ok = false;
      r.failure = "missing edge for " + lang.alphabet().spell(W);
      return r;
    }
    seen.insert({a, b});
  }
  std::size_t edges = 0;
  for (const auto& s : g.succ) edges += s.size();
  r.edges_witnessed = seen.size();
  if (seen.size() != edges) {
    r.ok = false;
    r.failure = "unwitnessed edge";
  }
  return r;
}

struct IsolationReport {
  bool isolated = false;
  std::vector<std::size_t> special_refinements;  // per refinement level
  std::vector<std::size_t> refinements;
};

// The state stays resolved by exactly one special class at every finer level.
inline IsolationReport isolated_state_check(Language& lang, const CoverGraph& g, State s,
                                            const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>& levels) {
  IsolationReport r;
  r.isolated = !levels.empty();
  for (auto [k2, l2, h2] : levels) {
    if (k2 < g.k || l2 < g.l || k2 + h2 < g.k + g.horizon)
      throw Error(ErrorKind::InvalidSpec, "refinements must increase coordinatewise");
    auto fine = build_cover_graph(lang, k2, l2, h2);
    auto sp = cover_special_states(fine);
    std::set<State> refine, special;
    for (const auto& [w, id] : fine.iota)
      if (g.iota.at(w.substr(0, g.k + g.horizon)) == s) {
        refine.insert(id);
        if (contains(sp, id)) special.insert(id);
      }
    r.refinements.push_back(refine.size());
    r.special_refinements.push_back(special.size());
    r.isolated = r.isolated && special.size() == 1;
  }
  return r;
}

inline std::string cover_adjacency_text(const CoverGraph& g, const Alphabet& a) {
  std::ostringstream os;
  for (State s = 0; s < g.size(); ++s) {
    os << s << " [" << a.spell(g.states[s].prefix) << " | ";
    for (std::size_t i = 0; i < g.states[s].past.size(); ++i) os << (i ? "," : "") << a.spell(g.states[s].past[i]);
    os << "] ->";
    for (State t : g.succ[s]) os << ' ' << t;
    os << '\n';
  }
  return os.str();
}

}  // namespace symdim
