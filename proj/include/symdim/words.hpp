#pragma once

#include "symdim/error.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace symdim {

// Words are byte strings of symbol ranks (0..k-1), so plain string order is
// the lexicographic order induced by the declared symbol order.
using Word = std::string;

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw Error(ErrorKind::InvalidSpec, "empty alphabet");
    if (symbols_.size() > 255) throw Error(ErrorKind::InvalidSpec, "alphabet too large");
    std::set<std::string> seen;
    for (const auto& s : symbols_) {
      if (s.empty()) throw Error(ErrorKind::InvalidSpec, "empty symbol");
      if (!seen.insert(s).second) throw Error(ErrorKind::InvalidSpec, "duplicate symbol '" + s + "'");
    }
  }

  std::size_t size() const { return symbols_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& symbol(std::size_t rank) const { return symbols_.at(rank); }

  int rank(const std::string& sym) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i] == sym) return static_cast<int>(i);
    return -1;
  }

  bool single_char() const {
    return std::all_of(symbols_.begin(), symbols_.end(), [](const std::string& s) { return s.size() == 1; });
  }

  // Single-character alphabets spell words directly; otherwise symbols are
  // separated by '.'.
  Word parse(const std::string& text) const {
    Word w;
    if (single_char()) {
      for (char c : text) {
        int r = rank(std::string(1, c));
        if (r < 0) throw Error(ErrorKind::InvalidSpec, "symbol '" + std::string(1, c) + "' not in alphabet");
        w.push_back(static_cast<char>(r));
      }
      return w;
    }
    std::size_t pos = 0;
    while (pos <= text.size() && !text.empty()) {
      auto dot = text.find('.', pos);
      std::string sym = text.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
      int r = rank(sym);
      if (r < 0) throw Error(ErrorKind::InvalidSpec, "symbol '" + sym + "' not in alphabet");
      w.push_back(static_cast<char>(r));
      if (dot == std::string::npos) break;
      pos = dot + 1;
    }
    return w;
  }

  std::string spell(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!single_char() && i > 0) out.push_back('.');
      out += symbols_.at(static_cast<unsigned char>(w[i]));
    }
    return out;
  }

  bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

 private:
  std::vector<std::string> symbols_;
};

inline std::size_t sym(const Word& w, std::size_t i) { return static_cast<unsigned char>(w[i]); }

enum class Variant { FullShift, SFT, Substitution };

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::FullShift: return "full";
    case Variant::SFT: return "sft";
    case Variant::Substitution: return "substitution";
  }
  return "?";
}

struct SubshiftSpec {
  Variant variant = Variant::FullShift;
  Alphabet alphabet;
  std::vector<Word> forbidden;  // SFT
  std::vector<Word> rules;      // Substitution, indexed by symbol rank
  std::size_t horizon = 20;
  std::string name;

  void validate() const {
    if (alphabet.size() == 0) throw Error(ErrorKind::InvalidSpec, "empty alphabet");
    if (variant == Variant::SFT) {
      for (const auto& f : forbidden)
        if (f.empty()) throw Error(ErrorKind::InvalidSpec, "empty forbidden word");
    }
    if (variant == Variant::Substitution) {
      if (rules.size() != alphabet.size())
        throw Error(ErrorKind::InvalidSpec, "substitution rule missing for some symbol");
      for (const auto& r : rules)
        if (r.empty()) throw Error(ErrorKind::InvalidSpec, "substitution rule with empty image");
    }
  }
};

inline SubshiftSpec full_shift(std::vector<std::string> symbols, std::string name = "full") {
  SubshiftSpec s;
  s.variant = Variant::FullShift;
  s.alphabet = Alphabet(std::move(symbols));
  s.name = std::move(name);
  return s;
}

inline SubshiftSpec sft(std::vector<std::string> symbols, const std::vector<std::string>& forbidden,
                        std::string name = "sft") {
  SubshiftSpec s;
  s.variant = Variant::SFT;
  s.alphabet = Alphabet(std::move(symbols));
  for (const auto& f : forbidden) s.forbidden.push_back(s.alphabet.parse(f));
  std::sort(s.forbidden.begin(), s.forbidden.end());
  s.forbidden.erase(std::unique(s.forbidden.begin(), s.forbidden.end()), s.forbidden.end());
  s.name = std::move(name);
  s.validate();
  return s;
}

inline SubshiftSpec substitution(std::vector<std::string> symbols, const std::map<std::string, std::string>& rules,
                                 std::string name = "substitution") {
  SubshiftSpec s;
  s.variant = Variant::Substitution;
  s.alphabet = Alphabet(std::move(symbols));
  s.rules.assign(s.alphabet.size(), Word());
  for (const auto& [k, v] : rules) {
    int r = s.alphabet.rank(k);
    if (r < 0) throw Error(ErrorKind::InvalidSpec, "rule for unknown symbol '" + k + "'");
    s.rules[r] = s.alphabet.parse(v);
  }
  s.name = std::move(name);
  s.validate();
  return s;
}

inline SubshiftSpec fibonacci() { return substitution({"0", "1"}, {{"0", "01"}, {"1", "0"}}, "fibonacci"); }
inline SubshiftSpec thue_morse() { return substitution({"0", "1"}, {{"0", "01"}, {"1", "10"}}, "thue-morse"); }
inline SubshiftSpec golden_mean_sft() { return sft({"0", "1"}, {"11"}, "golden-mean"); }
inline SubshiftSpec single_orbit() { return full_shift({"0"}, "single-orbit"); }

inline Word apply_substitution(const SubshiftSpec& s, const Word& w) {
  Word out;
  for (char c : w) out += s.rules[static_cast<unsigned char>(c)];
  return out;
}

// Some power of the incidence matrix is strictly positive. Wielandt's bound
// (k-1)^2+1 on the exponent makes the search finite.
inline bool is_primitive(const SubshiftSpec& s) {
  if (s.variant != Variant::Substitution) return true;
  std::size_t k = s.alphabet.size();
  std::vector<std::vector<char>> m(k, std::vector<char>(k, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (char c : s.rules[i]) m[i][static_cast<unsigned char>(c)] = 1;
  auto p = m;
  std::size_t bound = (k - 1) * (k - 1) + 1;
  for (std::size_t e = 1; e <= bound; ++e) {
    bool pos = true;
    for (auto& row : p)
      for (char v : row) pos = pos && v;
    if (pos) return true;
    std::vector<std::vector<char>> q(k, std::vector<char>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (p[i][j])
          for (std::size_t t = 0; t < k; ++t) q[i][t] |= m[j][t];
    p = std::move(q);
  }
  return false;
}

inline std::size_t max_forbidden_length(const SubshiftSpec& s) {
  std::size_t m = 0;
  for (const auto& f : s.forbidden) m = std::max(m, f.size());
  return m;
}

}  // namespace symdim
