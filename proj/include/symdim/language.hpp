#pragma once

#include "symdim/rational.hpp"
#include "symdim/words.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace symdim {

inline constexpr std::size_t kMaxWordsPerLength = 4'000'000;

// Memoizing language oracle. Lower lengths are derived as prefixes of the
// longest computed length, which is sound because every word of a one-sided
// subshift extends to the right.
class Language {
 public:
  explicit Language(SubshiftSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    if (spec_.variant == Variant::Substitution) {
      if (!is_primitive(spec_)) throw Error(ErrorKind::InvalidSpec, "substitution is not primitive");
      bool grows = false;
      for (const auto& r : spec_.rules) grows = grows || r.size() > 1;
      if (!grows) throw Error(ErrorKind::InvalidSpec, "substitution does not grow");
      build_two_factors();
    }
    if (spec_.variant == Variant::SFT) build_de_bruijn();
  }

  const SubshiftSpec& spec() const { return spec_; }
  const Alphabet& alphabet() const { return spec_.alphabet; }

  const std::vector<Word>& words(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidSpec, "word length must be >= 1");
    ensure(n);
    return table_[n];
  }

  std::uint64_t complexity(std::size_t n) {
    if (spec_.variant == Variant::FullShift) {
      std::uint64_t k = spec_.alphabet.size(), p = 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (p > std::numeric_limits<std::uint64_t>::max() / k)
          throw Error(ErrorKind::InvalidSpec, "complexity overflows 64 bits");
        p *= k;
      }
      return p;
    }
    return words(n).size();
  }

  bool contains(const Word& w) {
    if (w.empty()) return true;
    const auto& ws = words(w.size());
    return std::binary_search(ws.begin(), ws.end(), w);
  }

  // Texts whose length-n windows are exactly the length-n factors.
  std::vector<Word> reference_texts(std::size_t n) const {
    if (spec_.variant != Variant::Substitution)
      throw Error(ErrorKind::InvalidSpec, "reference texts exist only for substitutions");
    std::vector<Word> images(spec_.alphabet.size());
    for (std::size_t c = 0; c < images.size(); ++c) images[c] = Word(1, static_cast<char>(c));
    auto shortest = [&] {
      std::size_t m = std::numeric_limits<std::size_t>::max();
      for (const auto& w : images) m = std::min(m, w.size());
      return m;
    };
    while (shortest() < n) {
      for (auto& w : images) w = apply_substitution(spec_, w);
    }
    std::vector<Word> texts;
    for (const auto& ab : two_factors_)
      texts.push_back(images[sym(ab, 0)] + images[sym(ab, 1)]);
    return texts;
  }

  const std::vector<Word>& two_factors() const { return two_factors_; }

 private:
  void ensure(std::size_t n) {
    if (n <= top_) return;
    std::size_t target = n;
    if (spec_.variant == Variant::Substitution) target = std::max(n, 2 * top_);
    std::vector<Word> top;
    switch (spec_.variant) {
      case Variant::FullShift: top = full_words(target); break;
      case Variant::SFT: top = sft_words(target); break;
      case Variant::Substitution: top = substitution_words(target); break;
    }
    // existing levels stay in place; callers hold references into them
    if (table_.empty()) table_.emplace_back();
    while (table_.size() <= target) table_.emplace_back();
    table_[target] = std::move(top);
    for (std::size_t m = target; m-- > top_ + 1;) {
      auto& out = table_[m];
      out.reserve(table_[m + 1].size());
      for (const auto& w : table_[m + 1]) {
        Word p = w.substr(0, m);
        if (out.empty() || out.back() != p) out.push_back(std::move(p));
      }
    }
    top_ = target;
  }

  std::vector<Word> full_words(std::size_t n) const {
    std::vector<Word> cur{Word()};
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Word> next;
      if (cur.size() * spec_.alphabet.size() > kMaxWordsPerLength)
        throw Error(ErrorKind::DepthInsufficient, "language too large at length " + std::to_string(n));
      for (const auto& w : cur)
        for (std::size_t a = 0; a < spec_.alphabet.size(); ++a) next.push_back(w + static_cast<char>(a));
      cur = std::move(next);
    }
    return cur;
  }

  bool ends_forbidden(const Word& w) const {
    for (std::size_t len = 1; len <= std::min(w.size(), max_forb_); ++len)
      if (forbidden_.count(w.substr(w.size() - len))) return true;
    return false;
  }

  // Vertices are allowed words of length K; live ones lie on a path that
  // reaches a cycle, i.e. extend to the right forever.
  void build_de_bruijn() {
    max_forb_ = max_forbidden_length(spec_);
    forbidden_.insert(spec_.forbidden.begin(), spec_.forbidden.end());
    K_ = std::max<std::size_t>(max_forb_ > 0 ? max_forb_ - 1 : 1, 1);
    std::vector<Word> cur{Word()};
    for (std::size_t i = 0; i < K_; ++i) {
      std::vector<Word> next;
      for (const auto& w : cur)
        for (std::size_t a = 0; a < spec_.alphabet.size(); ++a) {
          Word v = w + static_cast<char>(a);
          if (!ends_forbidden(v)) next.push_back(std::move(v));
        }
      if (next.size() > kMaxWordsPerLength) throw Error(ErrorKind::DepthInsufficient, "de Bruijn graph too large");
      cur = std::move(next);
    }
    std::unordered_map<Word, std::size_t> index;
    for (std::size_t i = 0; i < cur.size(); ++i) index[cur[i]] = i;
    std::vector<std::vector<std::size_t>> succ(cur.size()), pred(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t a = 0; a < spec_.alphabet.size(); ++a) {
        Word e = cur[i] + static_cast<char>(a);
        if (ends_forbidden(e)) continue;
        auto it = index.find(e.substr(1));
        if (it == index.end()) continue;
        succ[i].push_back(it->second);
        pred[it->second].push_back(i);
      }
    std::vector<std::size_t> outdeg(cur.size());
    std::vector<char> alive(cur.size(), 1);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      outdeg[i] = succ[i].size();
      if (outdeg[i] == 0) stack.push_back(i);
    }
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      if (!alive[v]) continue;
      alive[v] = 0;
      for (std::size_t u : pred[v])
        if (alive[u] && --outdeg[u] == 0) stack.push_back(u);
    }
    for (std::size_t i = 0; i < cur.size(); ++i)
      if (alive[i]) live_.insert(cur[i]);
  }

  std::vector<Word> sft_words(std::size_t n) const {
    if (live_.empty()) throw Error(ErrorKind::InvalidSpec, "empty SFT language at length " + std::to_string(n));
    std::vector<Word> cur(live_.begin(), live_.end());
    if (n <= K_) {
      std::vector<Word> out;
      for (const auto& w : cur) out.push_back(w.substr(0, n));
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }
    for (std::size_t len = K_; len < n; ++len) {
      std::vector<Word> next;
      for (const auto& w : cur)
        for (std::size_t a = 0; a < spec_.alphabet.size(); ++a) {
          Word v = w + static_cast<char>(a);
          if (ends_forbidden(v)) continue;
          if (!live_.count(v.substr(v.size() - K_))) continue;
          next.push_back(std::move(v));
        }
      if (next.size() > kMaxWordsPerLength)
        throw Error(ErrorKind::DepthInsufficient, "language too large at length " + std::to_string(len + 1));
      cur = std::move(next);
    }
    std::sort(cur.begin(), cur.end());
    return cur;
  }

  void build_two_factors() {
    std::set<Word> s;
    auto add_factors = [&](const Word& w, std::set<Word>& into) {
      for (std::size_t i = 0; i + 2 <= w.size(); ++i) into.insert(w.substr(i, 2));
    };
    for (const auto& r : spec_.rules) add_factors(r, s);
    for (bool grew = true; grew;) {
      grew = false;
      std::set<Word> next = s;
      for (const auto& ab : s) add_factors(apply_substitution(spec_, ab), next);
      if (next.size() != s.size()) {
        grew = true;
        s = std::move(next);
      }
    }
    two_factors_.assign(s.begin(), s.end());
    if (two_factors_.empty()) throw Error(ErrorKind::InvalidSpec, "substitution has no two-letter factors");
  }

  std::vector<Word> substitution_words(std::size_t n) const {
    std::unordered_set<Word> seen;
    for (const auto& t : reference_texts(n))
      for (std::size_t i = 0; i + n <= t.size(); ++i) seen.insert(t.substr(i, n));
    std::vector<Word> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  SubshiftSpec spec_;
  std::deque<std::vector<Word>> table_;
  std::size_t top_ = 0;
  std::vector<Word> two_factors_;
  std::set<Word> forbidden_;
  std::set<Word> live_;
  std::size_t max_forb_ = 0;
  std::size_t K_ = 1;
};

inline std::vector<Word> enumerate_language(const SubshiftSpec& spec, std::size_t n) {
  Language lang(spec);
  return lang.words(n);
}

inline std::uint64_t complexity(const SubshiftSpec& spec, std::size_t n) {
  Language lang(spec);
  return lang.complexity(n);
}

struct LanguageTable {
  std::size_t n_max = 0;
  std::vector<std::vector<Word>> words;  // words[n] for 1..n_max
  std::vector<std::uint64_t> p;          // p[n]
};

inline LanguageTable build_table(Language& lang, std::size_t n_max) {
  LanguageTable t;
  t.n_max = n_max;
  t.words.assign(n_max + 1, {});
  t.p.assign(n_max + 1, 0);
  for (std::size_t n = 1; n <= n_max; ++n) {
    t.words[n] = lang.words(n);
    t.p[n] = t.words[n].size();
  }
  return t;
}

struct GrowthReport {
  Rational d_hat;
  std::size_t argmin = 0;
  bool superlinear_flag = false;
  std::vector<std::uint64_t> p;  // p[1..horizon]
};

inline GrowthReport growth_report(Language& lang, std::size_t horizon, const Rational& threshold = Rational(4)) {
  if (horizon < 2) throw Error(ErrorKind::InvalidSpec, "growth horizon must be >= 2");
  GrowthReport g;
  g.p.assign(horizon + 1, 0);
  for (std::size_t n = 1; n <= horizon; ++n) g.p[n] = lang.complexity(n);
  for (std::size_t n = 1; n <= horizon; ++n) {
    Rational r(BigInt(g.p[n]), BigInt(n));
    if (n == 1 || r < g.d_hat) {
      g.d_hat = r;
      g.argmin = n;
    }
  }
  std::size_t lo = (horizon + 1) / 2;
  bool increasing = true;
  for (std::size_t n = std::max<std::size_t>(lo, 1); n < horizon; ++n)
    increasing = increasing && Rational(BigInt(g.p[n + 1]), BigInt(n + 1)) > Rational(BigInt(g.p[n]), BigInt(n));
  g.superlinear_flag = increasing && Rational(BigInt(g.p[horizon]), BigInt(horizon)) > threshold;
  return g;
}

inline GrowthReport growth_report(const SubshiftSpec& spec, std::size_t horizon) {
  Language lang(spec);
  return growth_report(lang, horizon);
}

// Every word of length <= horizon has a left extension.
inline bool check_extendability(Language& lang, std::size_t horizon) {
  for (std::size_t n = 1; n <= horizon; ++n) {
    const auto& longer = lang.words(n + 1);
    std::vector<Word> suffixes;
    suffixes.reserve(longer.size());
    for (const auto& w : longer) suffixes.push_back(w.substr(1));
    std::sort(suffixes.begin(), suffixes.end());
    suffixes.erase(std::unique(suffixes.begin(), suffixes.end()), suffixes.end());
    if (suffixes != lang.words(n)) return false;
  }
  return true;
}

inline bool check_extendability(const SubshiftSpec& spec, std::size_t horizon) {
  Language lang(spec);
  return check_extendability(lang, horizon);
}

}  // namespace symdim
