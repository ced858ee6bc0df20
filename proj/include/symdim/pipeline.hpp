#pragma once

#include "symdim/amenability.hpp"
#include "symdim/config.hpp"
#include "symdim/cover.hpp"
#include "symdim/dad.hpp"
#include "symdim/rauzy.hpp"
#include "symdim/rokhlin.hpp"
#include "symdim/special.hpp"
#include "symdim/towers.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace symdim {

inline json spec_json(const SubshiftSpec& s) {
  json j{{"variant", variant_name(s.variant)}, {"alphabet", s.alphabet.symbols()}, {"horizon", s.horizon}, {"name", s.name}};
  if (s.variant == Variant::SFT) {
    json f = json::array();
    for (const auto& w : s.forbidden) f.push_back(s.alphabet.spell(w));
    j["forbidden"] = f;
  }
  if (s.variant == Variant::Substitution) {
    json r = json::object();
    for (std::size_t i = 0; i < s.rules.size(); ++i) r[s.alphabet.symbol(i)] = s.alphabet.spell(s.rules[i]);
    j["rules"] = r;
  }
  return j;
}

inline SubshiftSpec spec_from_json(const json& j) {
  auto symbols = j.at("alphabet").get<std::vector<std::string>>();
  std::string v = j.at("variant").get<std::string>(), name = j.value("name", "");
  SubshiftSpec s;
  if (v == "full") s = full_shift(symbols, name);
  else if (v == "sft") s = sft(symbols, j.at("forbidden").get<std::vector<std::string>>(), name);
  else if (v == "substitution") s = substitution(symbols, j.at("rules").get<std::map<std::string, std::string>>(), name);
  else throw Error(ErrorKind::Config, "unknown variant '" + v + "' in certificate");
  s.horizon = j.value("horizon", std::size_t{20});
  return s;
}

inline IntSet interval(long lo, long hi) {
  IntSet out;
  for (long v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

// Sound periodicity probe. A primitive substitution is periodic iff p(n) <= n
// for some n; an SFT has the periodic point w^inf iff its stretch of length
// 2|w| + (longest forbidden word) is allowed. Stops quietly when the language
// gets too large to enumerate.
inline AperiodicityReport periodic_probe(Language& lang, std::size_t max_window) {
  AperiodicityReport r;
  auto periodic_in = [&](const Word& w, std::size_t len) {
    Word p;
    while (p.size() < len) p += w;
    p.resize(len);
    return lang.contains(p);
  };
  try {
    if (lang.spec().variant == Variant::Substitution) {
      for (std::size_t n = 1; n <= 8 * max_window; ++n) {
        r.window = n;
        std::size_t pn = lang.complexity(n);
        if (pn > n) continue;
        for (std::size_t len = 1; len <= pn; ++len)
          for (const auto& w : lang.words(len))
            if (periodic_in(w, 2 * len + n)) {
              r.aperiodic = false;
              r.witness = w;
              return r;
            }
      }
      return r;
    }
    std::size_t f = max_forbidden_length(lang.spec());
    for (std::size_t len = 1; len <= max_window; ++len) {
      r.window = len;
      for (const auto& w : lang.words(len))
        if (periodic_in(w, 2 * len + f)) {
          r.aperiodic = false;
          r.witness = w;
          return r;
        }
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DepthInsufficient) throw;
  }
  return r;
}

// Wraps a library failure as a certificate. Depth-curable failures are
// inconclusive; a periodic cycle is only a refutation when the language
// itself has a periodic word.
inline Certificate failure_certificate(const std::string& kind, json params, const Error& e, Language* lang = nullptr) {
  Certificate c;
  c.kind = kind;
  c.params = std::move(params);
  c.note = e.what();
  bool inconclusive = e.depth_related();
  if (e.kind() == ErrorKind::PeriodicWitness && lang) {
    auto ap = periodic_probe(*lang, 12);
    inconclusive = ap.aperiodic;
    c.witnesses["aperiodicity_window"] =
        json{{"window", ap.window}, {"aperiodic", ap.aperiodic}, {"periodic_word", lang->alphabet().spell(ap.witness)}};
  }
  c.add("construction", false, json{{"error", e.what()}});
  c.inconclusive = inconclusive;
  return c;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string text() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) os << ',';
        bool quote = r[i].find_first_of(",\"\n") != std::string::npos;
        if (!quote) {
          os << r[i];
          continue;
        }
        os << '"';
        for (char ch : r[i]) os << (ch == '"' ? "\"\"" : std::string(1, ch));
        os << '"';
      }
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
  }
};

struct RunResult {
  Certificate cert;
  std::vector<std::pair<std::string, std::string>> files;  // name -> contents
  std::string summary;
};

// ---- lang ----

inline RunResult run_lang(const RunConfig& cfg) {
  RunResult r;
  Language lang(cfg.spec);
  auto& c = r.cert;
  c.kind = "lang";
  c.params = json{{"spec", spec_json(cfg.spec)}, {"n_max", cfg.n_max}};
  CsvTable t{{"n", "p", "words_file"}, {}};
  std::vector<std::uint64_t> p;
  try {
    for (std::size_t n = 1; n <= cfg.n_max; ++n) {
      const auto& words = lang.words(n);
      p.push_back(words.size());
      std::string file = "words_" + std::to_string(n) + ".txt";
      std::string body;
      for (const auto& w : words) body += lang.alphabet().spell(w) + "\n";
      r.files.emplace_back(file, body);
      t.rows.push_back({std::to_string(n), std::to_string(words.size()), file});
    }
  } catch (const Error& e) {
    r.cert = failure_certificate("lang", c.params, e);
    return r;
  }
  c.data = json{{"p", p}};
  bool nondecreasing = std::is_sorted(p.begin(), p.end());
  c.add("p_nondecreasing", nondecreasing);
  c.add("factorial", check_extendability(lang, cfg.n_max));
  r.files.emplace_back("lang.csv", t.text());
  std::ostringstream os;
  for (std::size_t n = 1; n <= p.size(); ++n) os << "p(" << n << ") = " << p[n - 1] << "\n";
  r.summary = os.str();
  return r;
}

inline Certificate verify_lang(const Certificate& in) {
  auto spec = spec_from_json(in.params.at("spec"));
  Language lang(spec);
  auto stored = in.data.at("p").get<std::vector<std::uint64_t>>();
  Certificate c = in;
  c.clauses.clear();
  bool same = true;
  json where;
  for (std::size_t n = 1; n <= stored.size(); ++n)
    if (lang.complexity(n) != stored[n - 1]) {
      same = false;
      where = json{{"n", n}};
      break;
    }
  c.add("p_nondecreasing", std::is_sorted(stored.begin(), stored.end()));
  c.add("factorial", check_extendability(lang, stored.size()));
  c.add("p_recomputed", same, where);
  return c;
}

// ---- special ----

inline Certificate special_certificate(const SubshiftSpec& spec) {
  Language lang(spec);
  std::size_t depth = std::max<std::size_t>(spec.horizon, 4);
  Certificate c;
  c.kind = "special";
  c.params = json{{"spec", spec_json(spec)}, {"depth", depth}};
  auto rep = sp_estimate(lang, depth);
  json counts = json::array();
  for (std::size_t n = 1; n <= depth; ++n) counts.push_back(rep.counts[n]);
  c.data = json{{"counts", counts},
                {"count_at_depth", rep.count_at_depth},
                {"branch_upper", rep.branch_upper ? json(*rep.branch_upper) : json("unbounded")},
                {"stabilized", rep.stabilized},
                {"d_hat", rational_json(rep.d_hat)},
                {"bound", rep.bound.str()},
                {"superlinear_warning", rep.superlinear_warning},
                {"prefix_closed", rep.prefix_closed}};
  bool applicable = rep.stabilized && !rep.superlinear_warning;
  c.add("bound", rep.bound_holds,
        json{{"applicable", applicable}, {"count_at_depth", rep.count_at_depth}, {"bound", rep.bound.str()}});
  // |LS(m)| <= p(m+1) - p(m) for every m below the depth
  json viol;
  bool counting = check_extendability(lang, depth);
  for (std::size_t m = 1; m < depth && counting; ++m)
    if (rep.counts[m] > lang.complexity(m + 1) - lang.complexity(m)) {
      counting = false;
      viol = json{{"m", m}};
    }
  c.add("counting_step", counting, viol);
  c.inconclusive = !rep.stabilized && !rep.superlinear_warning;
  if (rep.superlinear_warning) c.note = "SuperlinearWarning: p(n)/n grows over the horizon; the bound does not apply";
  return c;
}

inline RunResult run_special(const RunConfig& cfg) {
  RunResult r;
  try {
    r.cert = special_certificate(cfg.spec);
  } catch (const Error& e) {
    r.cert = failure_certificate("special", json{{"spec", spec_json(cfg.spec)}}, e);
    return r;
  }
  const auto& d = r.cert.data;
  CsvTable t{{"n", "left_special"}, {}};
  for (std::size_t n = 0; n < d.at("counts").size(); ++n)
    t.rows.push_back({std::to_string(n + 1), std::to_string(d.at("counts")[n].get<std::size_t>())});
  r.files.emplace_back("special.csv", t.text());
  std::ostringstream os;
  os << "d_hat = " << d.at("d_hat").get<std::string>() << ", bound = " << d.at("bound").get<std::string>()
     << ", special at depth = " << d.at("count_at_depth") << (d.at("superlinear_warning").get<bool>() ? ", SuperlinearWarning" : "")
     << "\n";
  r.summary = os.str();
  return r;
}

inline Certificate verify_special(const Certificate& in) {
  auto c = special_certificate(spec_from_json(in.params.at("spec")));
  c.add("data_matches", c.data == in.data);
  return c;
}

// ---- cover ----

inline json cover_graph_json(const CoverGraph& g, const Alphabet& a) {
  json states = json::array();
  for (const auto& s : g.states) {
    json past = json::array();
    for (const auto& w : s.past) past.push_back(a.spell(w));
    states.push_back(json{{"prefix", a.spell(s.prefix)}, {"past", past}});
  }
  json iota = json::object();
  for (const auto& [w, id] : g.iota) iota[a.spell(w)] = id;
  return json{{"k", g.k},
              {"l", g.l},
              {"horizon", g.horizon},
              {"states", states},
              {"succ", g.succ},
              {"preimage_classes", g.preimage_classes},
              {"iota", iota},
              {"stabilized", g.stabilized},
              {"sound_lookahead", g.sound_lookahead},
              {"index_order", g.index_order}};
}

inline CoverGraph cover_graph_from_json(const json& j, const Alphabet& a) {
  CoverGraph g;
  g.k = j.at("k").get<std::size_t>();
  g.l = j.at("l").get<std::size_t>();
  g.horizon = j.at("horizon").get<std::size_t>();
  for (const auto& s : j.at("states")) {
    CoverState cs;
    cs.prefix = a.parse(s.at("prefix").get<std::string>());
    for (const auto& p : s.at("past")) cs.past.push_back(a.parse(p.get<std::string>()));
    g.states.push_back(std::move(cs));
  }
  g.succ = j.at("succ").get<std::vector<std::vector<State>>>();
  g.preimage_classes = j.at("preimage_classes").get<std::vector<std::size_t>>();
  for (const auto& [w, id] : j.at("iota").items()) g.iota[a.parse(w)] = id.get<State>();
  g.stabilized = j.value("stabilized", false);
  g.sound_lookahead = j.value("sound_lookahead", false);
  g.index_order = j.value("index_order", g.index_order);
  return g;
}

inline void cover_clauses(Certificate& c, Language& lang, const CoverGraph& g) {
  bool shape = g.succ.size() == g.size() && g.preimage_classes.size() == g.size();
  for (const auto& s : g.succ)
    for (State t : s) shape = shape && t < g.size();
  c.add("shape", shape);
  if (!shape) return;
  c.add("onto", cover_is_onto(g));
  auto it = check_intertwining(lang, g);
  c.add("intertwining", it.ok,
        it.ok ? json{{"words", it.words_checked}, {"edges", it.edges_witnessed}} : json{{"failure", it.failure}});
  // preimage classes recounted naively
  bool recount = true;
  {
    std::map<Word, std::set<Word>> past;
    for (const auto& x : lang.words(g.l + g.horizon)) past[x.substr(g.l)].insert(x.substr(0, g.l));
    std::vector<std::set<std::pair<Word, std::set<Word>>>> pre(g.size());
    for (const auto& W : lang.words(g.k + g.horizon + 1)) {
      auto to = g.iota.find(W.substr(1));
      if (to == g.iota.end() || to->second >= g.size()) {
        recount = false;
        break;
      }
      pre[to->second].insert({W.substr(0, g.k + 1), past.at(W.substr(g.k + 1))});
    }
    for (State s = 0; s < g.size(); ++s) recount = recount && pre[s].size() == g.preimage_classes[s];
  }
  c.add("preimage_classes", recount);
  auto sc = check_special_correspondence(lang, g);
  // the finite count only stands for the infinite branches once it has settled
  std::size_t lo = g.k - g.k / 4, hi = g.k + g.horizon;
  auto tree = left_special_tree(lang, hi);
  bool settled = true;
  for (std::size_t n = lo; n <= hi; ++n) settled = settled && tree.level[n].size() == tree.level[g.k].size();
  bool ok = sc.counts_match && sc.prefixes_left_special;
  c.add("special_correspondence", ok || !settled,
        json{{"special_states", sc.special_states}, {"branch_count", sc.branch_count},
             {"prefixes_left_special", sc.prefixes_left_special}, {"counts_settled", settled}});
  if (!ok && !settled && sc.prefixes_left_special) c.inconclusive = true;
}

inline std::size_t default_cover_horizon(const RunConfig& cfg) {
  return cfg.cover_horizon ? *cfg.cover_horizon : cfg.cover_k + cfg.cover_l;
}

inline RunResult run_cover(const RunConfig& cfg) {
  RunResult r;
  Language lang(cfg.spec);
  std::size_t h = default_cover_horizon(cfg);
  json params{{"spec", spec_json(cfg.spec)}, {"k", cfg.cover_k}, {"l", cfg.cover_l}, {"horizon", h}};
  try {
    auto g = build_cover_graph(lang, cfg.cover_k, cfg.cover_l, h);
    auto& c = r.cert;
    c.kind = "cover";
    c.params = params;
    c.data = json{{"graph", cover_graph_json(g, lang.alphabet())}};
    cover_clauses(c, lang, g);
    // isolation of each special state over two refinements, when the language stays small
    json iso = json::array();
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> levels;
    for (std::size_t step : {4u, 8u}) levels.emplace_back(g.k + step, g.l + step, h + 2 * step);
    auto [k2, l2, h2] = levels.back();
    auto small = [&](std::size_t n) {
      try {
        return lang.complexity(n) <= 200000;
      } catch (const Error&) {
        return false;
      }
    };
    if (small(k2 + h2 + 1) && small(l2 + h2)) {
      for (State s : cover_special_states(g)) {
        auto rep = isolated_state_check(lang, g, s, levels);
        iso.push_back(json{{"state", s}, {"isolated", rep.isolated}, {"special_refinements", rep.special_refinements}});
      }
      c.data["isolation"] = iso;
    } else {
      c.data["isolation"] = "skipped: refinement language too large";
    }
    CsvTable t{{"state", "prefix", "past", "successors", "special"}, {}};
    auto sp = cover_special_states(g);
    for (State s = 0; s < g.size(); ++s) {
      std::string past, succ;
      for (std::size_t i = 0; i < g.states[s].past.size(); ++i)
        past += (i ? " " : "") + lang.alphabet().spell(g.states[s].past[i]);
      for (std::size_t i = 0; i < g.succ[s].size(); ++i) succ += (i ? " " : "") + std::to_string(g.succ[s][i]);
      t.rows.push_back({std::to_string(s), lang.alphabet().spell(g.pi(s)), past, succ, contains(sp, s) ? "1" : "0"});
    }
    r.files.emplace_back("cover.csv", t.text());
    r.summary = std::to_string(g.size()) + " states, " + std::to_string(sp.size()) + " special\n";
  } catch (const Error& e) {
    r.cert = failure_certificate("cover", params, e);
  }
  return r;
}

inline Certificate verify_cover(const Certificate& in) {
  auto spec = spec_from_json(in.params.at("spec"));
  Language lang(spec);
  Certificate c = in;
  c.clauses.clear();
  auto g = cover_graph_from_json(in.data.at("graph"), lang.alphabet());
  cover_clauses(c, lang, g);
  return c;
}

// ---- dynamical model ----

struct ModelChoice {
  DepthModel model;
  std::vector<json> probes;  // (k, min cycle) tried on the way
};

inline std::size_t probe_depth(const SubshiftSpec& spec, std::optional<std::size_t> depth) {
  return depth ? *depth : spec.variant == Variant::Substitution ? 60 : 12;
}

inline std::size_t depth_cap(const SubshiftSpec& spec) { return spec.variant == Variant::Substitution ? 400000 : 64; }

// Depth k with min cycle >= need: the given depth, or k from max(start, need)
// grown by 5/4 until the cycle is long enough.

inline ModelChoice choose_model(Language& lang, std::optional<std::size_t> depth, std::size_t need, std::size_t start) {
  ModelChoice mc;
  if (depth) {
    mc.model = depth_model(lang, *depth);
    mc.probes.push_back(json{{"k", *depth}, {"min_cycle", min_cycle_length(mc.model.sys)}});
    return mc;
  }
  std::size_t k = std::max(start, need);
  if (!periodic_probe(lang, 12).aperiodic) k = start;
  std::size_t cap = depth_cap(lang.spec());
  for (;;) {
    if (lang.spec().variant != Variant::Substitution && lang.complexity(k + 1) > 2'000'000)
      throw Error(ErrorKind::DepthInsufficient, "language too large at depth " + std::to_string(k));
    mc.model = depth_model(lang, k);
    std::size_t cyc = min_cycle_length(mc.model.sys);
    mc.probes.push_back(json{{"k", k}, {"min_cycle", cyc}});
    if (cyc >= need || k >= cap) return mc;
    // a genuinely periodic word keeps the cycle short at every depth
    if (cyc > 0 && !periodic_probe(lang, std::min<std::size_t>(cyc, 12)).aperiodic) return mc;
    k = std::min(cap, std::max(k + 1, k * 5 / 4));
  }
}

inline json model_json(const DepthModel& m) {
  return json{{"k", m.k}, {"states", m.sys.size()}, {"relation_onto", m.relation_onto},
              {"special", m.sys.special_states()}, {"min_cycle", min_cycle_length(m.sys)}};
}

// ---- rokhlin ----

struct RokhlinStage {
  DepthModel model;
  RokhlinCover cover;
  std::vector<json> probes;
};

// With an automatic depth, a construction that is short of depth is retried
// deeper a few times.
inline RokhlinStage rokhlin_stage(Language& lang, std::optional<std::size_t> depth, std::size_t N) {
  RokhlinStage st;
  std::size_t start = probe_depth(lang.spec(), std::nullopt);
  for (int attempt = 0;; ++attempt) {
    auto mc = choose_model(lang, depth, 3 * N, start);
    st.probes.insert(st.probes.end(), mc.probes.begin(), mc.probes.end());
    try {
      st.cover = build_rokhlin_cover(mc.model.sys, N, mc.model.sys.special_states());
      st.model = std::move(mc.model);
      return st;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DepthInsufficient || depth || attempt >= 6 || mc.model.k >= depth_cap(lang.spec()))
        throw;
      st.probes.push_back(json{{"k", mc.model.k}, {"retry", e.what()}});
      start = mc.model.k * 5 / 4 + 1;
    }
  }
}

inline RunResult run_rokhlin(const RunConfig& cfg) {
  RunResult r;
  Language lang(cfg.spec);
  std::size_t N = cfg.big_n ? *cfg.big_n : cfg.rokhlin_n;
  json params{{"spec", spec_json(cfg.spec)}, {"N", N}};
  if (cfg.depth) params["depth"] = *cfg.depth;
  try {
    auto mc = rokhlin_stage(lang, cfg.depth, N);
    const auto& cover = mc.cover;
    r.cert = verify_rokhlin_cover(mc.model.sys, cover);
    r.cert.params = params;
    r.cert.params["q"] = cover.q;
    r.cert.params["N"] = cover.N;
    r.cert.data["model"] = model_json(mc.model);
    r.cert.data["probes"] = mc.probes;
    r.summary = std::to_string(cover.towers.size()) + " towers at depth " + std::to_string(mc.model.k) + ", N = " +
                std::to_string(N) + ", q = " + std::to_string(cover.q) + "\n";
  } catch (const Error& e) {
    r.cert = failure_certificate("rokhlin", params, e, &lang);
  }
  return r;
}

inline Certificate verify_rokhlin(const Certificate& in) {
  auto sys = system_from(in.data.at("system"));
  auto cover = rokhlin_from_json(sys, in.params, in.data);
  auto c = verify_rokhlin_cover(sys, cover);
  c.params = in.params;
  c.data["model"] = in.data.value("model", json());
  c.data["probes"] = in.data.value("probes", json());
  return c;
}

// ---- towerdim ----

struct TowerStage {
  DepthModel model;
  RokhlinCover cover;
  TowerPairSystem tps;
  std::vector<json> probes;
};

inline TowerStage tower_stage(Language& lang, std::optional<std::size_t> depth, const IntSet& E) {
  TowerStage st;
  auto [M, N] = tower_heights(normalize_E(E));
  auto rs = rokhlin_stage(lang, depth, N);
  st.model = std::move(rs.model);
  st.cover = std::move(rs.cover);
  st.probes = std::move(rs.probes);
  st.tps = pairs_from_rokhlin(st.model.sys, st.cover, E);
  return st;
}

inline RunResult run_towerdim(const RunConfig& cfg) {
  RunResult r;
  Language lang(cfg.spec);
  json params{{"spec", spec_json(cfg.spec)}, {"E", normalize_E(cfg.E)}};
  try {
    auto st = tower_stage(lang, cfg.depth, cfg.E);
    r.cert = verify_tower_pairs(st.model.sys, st.tps);
    r.cert.params.update(params);
    r.cert.params["towers"] = st.cover.towers.size();
    r.cert.data["model"] = model_json(st.model);
    auto* ch = r.cert.clause("chromatic");
    r.summary = std::to_string(st.tps.pairs.size()) + " pairs, M = " + std::to_string(st.tps.M) +
                ", N = " + std::to_string(st.tps.N) + ", colors " + (ch ? ch->detail.at("colors").dump() : "?") +
                " <= " + std::to_string(st.tps.d_claimed + 1) + "\n";
  } catch (const Error& e) {
    r.cert = failure_certificate("towerdim", params, e, &lang);
  }
  return r;
}

inline Certificate verify_towerdim(const Certificate& in) {
  auto sys = system_from(in.data.at("system"));
  auto tps = tower_pairs_from_json(in.data.at("tower_pairs"));
  auto c = verify_tower_pairs(sys, tps);
  c.params = in.params;
  c.data["model"] = in.data.value("model", json());
  return c;
}

// ---- amen ----

// Smallest N with (d+1)(d+2)/N < epsilon.
inline std::size_t strict_N(std::size_t d, const Rational& epsilon) {
  Rational need = Rational(BigInt((d + 1) * (d + 2))) / epsilon;
  BigInt n = boost::multiprecision::numerator(need) / boost::multiprecision::denominator(need);
  return static_cast<std::size_t>(n) + 1;
}

struct AmenStage {
  TowerStage towers;
  std::size_t N = 0;
  IntSet E, E_big;
  EquivariantMap map;
};

inline AmenStage amen_stage(Language& lang, const RunConfig& cfg) {
  AmenStage st;
  st.E = normalize_E(cfg.E);
  if (auto ap = periodic_probe(lang, 12); !ap.aperiodic)
    throw Error(ErrorKind::PeriodicWitness, "periodic word " + lang.alphabet().spell(ap.witness) + " in the language");
  // the towers needed are not known before the cover is built; size N for the
  // worst case 2q+2 towers, so d = 4q+3
  std::size_t N = cfg.big_n.value_or(0);
  if (!N) {
    auto probe = depth_model(lang, probe_depth(cfg.spec, cfg.depth));
    std::size_t q = probe.sys.special_states().size();
    N = strict_N(4 * q + 3, cfg.epsilon);
  }
  st.N = N;
  if (N * max_abs(st.E) > 10'000'000)
    throw Error(ErrorKind::DepthInsufficient, "block size N = " + std::to_string(N) + " is beyond the finite model");
  long reach = static_cast<long>(N * max_abs(st.E));
  st.E_big = interval(-reach, reach);
  st.towers = tower_stage(lang, cfg.depth, st.E_big);
  st.map = build_equivariant_map(st.towers.model.sys, st.towers.tps, st.E, N, cfg.epsilon);
  return st;
}

inline RunResult run_amen(const RunConfig& cfg) {
  RunResult r;
  Language lang(cfg.spec);
  json params{{"spec", spec_json(cfg.spec)}, {"E", normalize_E(cfg.E)}, {"epsilon", rational_json(cfg.epsilon)}};
  try {
    auto st = amen_stage(lang, cfg);
    r.cert = check_equivariance(st.towers.model.sys, st.map, st.E, cfg.epsilon);
    r.cert.params.update(params);
    r.cert.params["N"] = st.N;
    r.cert.params["tower_E_max"] = max_abs(st.E_big);
    r.cert.data["model"] = model_json(st.towers.model);
    r.summary = "N = " + std::to_string(st.N) + ", d = " + std::to_string(st.map.d) + ", epsilon achieved " +
                to_string(st.map.epsilon_achieved) + " vs " + to_string(cfg.epsilon) + "\n";
  } catch (const Error& e) {
    r.cert = failure_certificate("amen", params, e, &lang);
  }
  return r;
}

inline Certificate verify_amen(const Certificate& in) {
  auto sys = system_from(in.data.at("system"));
  auto map = map_from_json(in.data.at("map"));
  auto c = check_equivariance(sys, map, in.params.at("E").get<IntSet>(), rational_from(in.params.at("epsilon")),
                              in.params.value("strict", true));
  c.params = in.params;
  c.data["model"] = in.data.value("model", json());
  return c;
}

// ---- dad ----

inline RunResult run_dad(const RunConfig& cfg) {
  RunResult r;
  Language lang(cfg.spec);
  json params{{"spec", spec_json(cfg.spec)}, {"E", normalize_E(cfg.E)}, {"epsilon", rational_json(cfg.epsilon)}};
  try {
    auto st = amen_stage(lang, cfg);
    const auto& sys = st.towers.model.sys;
    auto S = support_union(st.map);
    // delta from the projection lemma: min{1, (2/eps)(eps - deviation)}
    Rational delta = std::min(Rational(1), Rational(2) / cfg.epsilon * (cfg.epsilon - st.map.epsilon_achieved));
    auto proj = project_finite_support(st.map, S, delta);
    auto eq = check_equivariance(sys, proj.map, st.E, proj.adjusted_epsilon, false);
    std::size_t bound = cfg.window.value_or(max_abs(st.E));
    auto w = build_window(sys, st.E, bound);
    auto cover = build_dad_cover(sys, w, proj.map, &eq, sys.special_states(), st.map.d);
    r.cert = verify_dad_cover(sys, w, cover);
    r.cert.params.update(params);
    r.cert.params["N"] = st.N;
    r.cert.data["model"] = model_json(st.towers.model);
    r.cert.data["projection"] = json{{"delta", rational_json(delta)},
                                     {"max_distance", rational_json(proj.max_distance)},
                                     {"adjusted_epsilon", rational_json(proj.adjusted_epsilon)},
                                     {"equivariance", verdict_name(eq.verdict())}};
    r.summary = "d = " + std::to_string(cover.d) + ", |S| = " + std::to_string(cover.S.size()) + ", |F| = " +
                std::to_string(cover.F.size()) + ", window " + std::to_string(w.elements.size()) + " elements\n";
  } catch (const Error& e) {
    r.cert = failure_certificate("dad", params, e, &lang);
  }
  return r;
}

inline Certificate verify_dad(const Certificate& in) {
  auto sys = system_from(in.data.at("system"));
  auto w = window_from_json(in.data.at("window"));
  auto cover = dad_cover_from_json(in.data.at("cover"));
  auto c = verify_dad_cover(sys, w, cover);
  c.params = in.params;
  c.data["model"] = in.data.value("model", json());
  c.data["projection"] = in.data.value("projection", json());
  return c;
}

// ---- bounds ----

inline Certificate bounds_certificate(std::size_t q, std::size_t dim_x) {
  Certificate c;
  c.kind = "bounds";
  c.params = json{{"q", q}, {"dim_x", dim_x}};
  auto b = bound_chain(q, dim_x);
  c.data = json{{"rokhlin", b.rok}, {"tower", b.tow}, {"amenability", b.am}, {"dad", b.dad}, {"nuclear", b.nuclear}};
  auto n = bound_chain(q + 1, dim_x);
  c.add("chain_order", b.rok <= b.tow && b.tow == 2 * b.rok + 1 && b.am <= b.tow && b.dad <= b.am);
  c.add("monotone_in_q", n.rok > b.rok && n.tow > b.tow && n.am > b.am && n.dad > b.dad && n.nuclear == b.nuclear);
  return c;
}

inline std::string bounds_text(const Certificate& c) {
  const auto& d = c.data;
  return "(" + d.at("rokhlin").dump() + "," + d.at("tower").dump() + "," + d.at("amenability").dump() + "," +
         d.at("dad").dump() + "," + d.at("nuclear").dump() + ")\n";
}

inline Certificate verify_bounds(const Certificate& in) {
  auto c = bounds_certificate(in.params.at("q").get<std::size_t>(), in.params.at("dim_x").get<std::size_t>());
  c.add("data_matches", c.data == in.data);
  return c;
}

// ---- verify ----

inline Certificate verify_certificate(const json& j, const std::filesystem::path& base_dir);

inline Certificate verify_certify(const Certificate& in, const std::filesystem::path& base) {
  Certificate c = in;
  c.clauses.clear();
  c.inconclusive = false;
  for (const auto& item : in.data.at("stages")) {
    std::string file = item.at("file").get<std::string>();
    std::ifstream f(base / file);
    if (!f) {
      c.add(file, false, json{{"error", "missing file"}});
      continue;
    }
    json sub;
    try {
      sub = json::parse(f);
    } catch (const json::exception& e) {
      c.add(file, false, json{{"error", e.what()}});
      continue;
    }
    auto v = verify_certificate(sub, base);
    c.add(file, v.verdict() != Verdict::Fail, json{{"verdict", verdict_name(v.verdict())}});
    if (v.verdict() == Verdict::Inconclusive) c.inconclusive = true;
  }
  if (!c.all_pass()) c.inconclusive = false;
  return c;
}

// Re-checks a certificate from its stored data; the result's verdict is
// authoritative. A stored verdict that disagrees is itself a failure.
inline Certificate verify_certificate(const json& j, const std::filesystem::path& base_dir) {
  Certificate in = Certificate::from_json(j);
  if (j.value("schema", std::string()) != kSchema) throw Error(ErrorKind::Config, "unknown certificate schema");
  Certificate out;
  if (in.clause("construction")) {
    // nothing was built, so nothing can be re-checked
    out = in;
  } else if (in.kind == "lang") out = verify_lang(in);
  else if (in.kind == "special") out = verify_special(in);
  else if (in.kind == "cover") out = verify_cover(in);
  else if (in.kind == "rokhlin") out = verify_rokhlin(in);
  else if (in.kind == "towerdim") out = verify_towerdim(in);
  else if (in.kind == "amen") out = verify_amen(in);
  else if (in.kind == "dad") out = verify_dad(in);
  else if (in.kind == "bounds") out = verify_bounds(in);
  else if (in.kind == "certify") out = verify_certify(in, base_dir);
  else throw Error(ErrorKind::Config, "unknown certificate kind '" + in.kind + "'");
  json mismatched = json::array();
  for (const auto& c : in.clauses) {
    auto* r = out.clause(c.name);
    if (c.name != "construction" && (!r || r->pass != c.pass)) mismatched.push_back(c.name);
  }
  if (!mismatched.empty()) out.add("stored_clauses", false, json{{"mismatched", mismatched}});
  std::string stored = j.value("verdict", std::string());
  if (stored != verdict_name(out.verdict()))
    out.add("stored_verdict", false, json{{"stored", stored}, {"recomputed", verdict_name(out.verdict())}});
  return out;
}

}  // namespace symdim
