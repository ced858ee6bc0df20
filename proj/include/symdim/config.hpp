#pragma once

#include "symdim/rational.hpp"
#include "symdim/towers.hpp"
#include "symdim/words.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace symdim {

// key = value, one per line; '#' starts a comment.
//
//   variant   = full | sft | substitution
//   alphabet  = 0 1            (space or comma separated)
//   forbidden = 11, 101        (sft)
//   rules     = 0->01, 1->0    (substitution)
//   horizon   = 20
//
// Pipeline keys: name, depth, cover_k, cover_l, cover_horizon, rokhlin_n,
// E, epsilon, big_n, window, n_max, dim_x, seed.
struct RunConfig {
  SubshiftSpec spec;
  std::optional<std::size_t> depth;
  std::size_t cover_k = 6, cover_l = 6;
  std::optional<std::size_t> cover_horizon;
  std::size_t rokhlin_n = 5;
  IntSet E{-1, 0, 1};
  Rational epsilon = Rational(1, 10);
  std::optional<std::size_t> big_n;
  std::optional<std::size_t> window;
  std::size_t n_max = 20;
  std::size_t dim_x = 0;
  std::uint64_t seed = 1;
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

[[noreturn]] inline void config_error(std::size_t line, const std::string& key, const std::string& msg) {
  throw Error(ErrorKind::Config, "line " + std::to_string(line) + ", key '" + key + "': " + msg);
}

inline std::size_t parse_natural(const std::string& v, std::size_t line, const std::string& key) {
  auto r = parse_rational(v);
  if (!r || *r < 0 || boost::multiprecision::denominator(*r) != 1) config_error(line, key, "expected a natural number");
  return static_cast<std::size_t>(boost::multiprecision::numerator(*r));
}

inline long parse_integer(const std::string& v, std::size_t line, const std::string& key) {
  auto r = parse_rational(v);
  if (!r || boost::multiprecision::denominator(*r) != 1) config_error(line, key, "expected an integer, got '" + v + "'");
  return static_cast<long>(boost::multiprecision::numerator(*r));
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    std::string line = detail::trim(raw.substr(0, hash));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) detail::config_error(lineno, line, "expected 'key = value'");
    std::string key = detail::trim(line.substr(0, eq)), value = detail::trim(line.substr(eq + 1));
    if (key.empty()) detail::config_error(lineno, key, "empty key");
    if (kv.count(key)) detail::config_error(lineno, key, "duplicate key");
    kv[key] = {value, lineno};
  }
  auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, std::size_t>> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };

  auto variant = take("variant");
  if (!variant) detail::config_error(0, "variant", "missing");
  auto alphabet = take("alphabet");
  if (!alphabet) detail::config_error(0, "alphabet", "missing");
  auto symbols = detail::split_list(alphabet->first);
  std::string name = "subshift";
  if (auto n = take("name")) name = n->first;

  try {
    if (variant->first == "full") {
      cfg.spec = full_shift(symbols, name);
    } else if (variant->first == "sft") {
      auto f = take("forbidden");
      if (!f) detail::config_error(variant->second, "forbidden", "sft needs forbidden words");
      cfg.spec = sft(symbols, detail::split_list(f->first), name);
    } else if (variant->first == "substitution") {
      auto r = take("rules");
      if (!r) detail::config_error(variant->second, "rules", "substitution needs rules");
      std::map<std::string, std::string> rules;
      std::stringstream ss(r->first);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = detail::trim(item);
        if (item.empty()) continue;
        auto arrow = item.find("->");
        if (arrow == std::string::npos) detail::config_error(r->second, "rules", "expected 'a->word', got '" + item + "'");
        std::string lhs = detail::trim(item.substr(0, arrow)), rhs = detail::trim(item.substr(arrow + 2));
        if (rules.count(lhs)) detail::config_error(r->second, "rules", "duplicate rule for '" + lhs + "'");
        rules[lhs] = rhs;
      }
      cfg.spec = substitution(symbols, rules, name);
    } else {
      detail::config_error(variant->second, "variant", "unknown variant '" + variant->first + "'");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    detail::config_error(variant->second, "variant", e.what());
  }

  if (auto h = take("horizon")) cfg.spec.horizon = detail::parse_natural(h->first, h->second, "horizon");
  if (auto v = take("depth")) cfg.depth = detail::parse_natural(v->first, v->second, "depth");
  if (auto v = take("cover_k")) cfg.cover_k = detail::parse_natural(v->first, v->second, "cover_k");
  if (auto v = take("cover_l")) cfg.cover_l = detail::parse_natural(v->first, v->second, "cover_l");
  if (auto v = take("cover_horizon")) cfg.cover_horizon = detail::parse_natural(v->first, v->second, "cover_horizon");
  if (auto v = take("rokhlin_n")) cfg.rokhlin_n = detail::parse_natural(v->first, v->second, "rokhlin_n");
  if (auto v = take("big_n")) cfg.big_n = detail::parse_natural(v->first, v->second, "big_n");
  if (auto v = take("window")) cfg.window = detail::parse_natural(v->first, v->second, "window");
  if (auto v = take("n_max")) cfg.n_max = detail::parse_natural(v->first, v->second, "n_max");
  if (auto v = take("dim_x")) cfg.dim_x = detail::parse_natural(v->first, v->second, "dim_x");
  if (auto v = take("seed")) cfg.seed = detail::parse_natural(v->first, v->second, "seed");
  if (auto v = take("epsilon")) {
    auto r = parse_rational(v->first);
    if (!r || *r <= 0) detail::config_error(v->second, "epsilon", "expected a positive rational P/Q");
    cfg.epsilon = *r;
  }
  if (auto v = take("E")) {
    cfg.E.clear();
    for (const auto& t : detail::split_list(v->first)) cfg.E.push_back(detail::parse_integer(t, v->second, "E"));
    if (cfg.E.empty()) detail::config_error(v->second, "E", "empty set");
  }
  if (!kv.empty()) detail::config_error(kv.begin()->second.second, kv.begin()->first, "unknown key");
  if (cfg.spec.variant == Variant::Substitution && !is_primitive(cfg.spec))
    detail::config_error(variant->second, "rules", "substitution is not primitive");
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config '" + path + "'");
  return parse_config(in);
}

}  // namespace symdim
