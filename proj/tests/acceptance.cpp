// One line per acceptance criterion; exit status is nonzero if any fails.

#include "exact_oracles.hpp"
#include "oracles.hpp"

#include "symdim/symdim.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace symdim;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      note << "failed: " << what << "; ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void c1_fibonacci_complexity(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  Language lang(fibonacci());
  auto text = oracle::fibonacci_word(200000);
  for (std::size_t n = 1; n <= 200; ++n) {
    o.require(lang.complexity(n) == n + 1, "p(" + std::to_string(n) + ") = n + 1");
    if (n % 20 == 0 || n <= 20) o.require(oracle::factors(text, n).size() == n + 1, "sliding window at " + std::to_string(n));
  }
  double s = seconds_since(t0);
  o.require(s < 5, "under 5 s");
  o.note << "n <= 200, " << s << " s";
}

void c2_thue_morse_complexity(Outcome& o) {
  Language lang(thue_morse());
  auto text = oracle::thue_morse_word(1 << 16);
  for (std::size_t n = 1; n <= 30; ++n) {
    auto want = oracle::factors(text, n);
    std::set<std::string> got;
    for (const auto& w : lang.words(n)) got.insert(lang.alphabet().spell(w));
    o.require(got == want, "factor set at n = " + std::to_string(n));
  }
  o.note << "p(30) = " << lang.complexity(30);
}

void c3_special_bound(Outcome& o) {
  Language lang(fibonacci());
  auto tree = left_special_tree(lang, 200);
  for (std::size_t n = 1; n <= 200; ++n) o.require(tree.level[n].size() == 1, "one left special word at " + std::to_string(n));
  auto r = sp_estimate(fibonacci(), 20);
  o.require(r.stabilized, "fibonacci count stabilizes");
  o.require(r.d_hat == Rational(21, 20), "d_hat = 21/20");
  o.require(r.bound == 3, "bound = ceil(2 d_hat) = 3");
  o.require(r.bound >= BigInt(r.count_at_depth), "bound >= count");
  auto full = sp_estimate(full_shift({"0", "1"}), 12);
  o.require(full.superlinear_warning, "full shift warns");
  o.note << "count 1 to depth 200, bound " << r.bound;
}

void c4_counting_step(Outcome& o) {
  for (auto spec : {fibonacci(), thue_morse()}) {
    Language lang(spec);
    for (std::size_t m = 1; m <= 100; ++m) {
      auto ls = left_special_words(lang, m).size();
      o.require(ls <= lang.complexity(m + 1) - lang.complexity(m), spec.name + " at m = " + std::to_string(m));
    }
  }
  auto t = sft_transfer_counts(golden_mean_sft(), 101);
  for (std::size_t m = 1; m <= 100; ++m) o.require(t.ls[m] <= t.p[m + 1] - t.p[m], "SFT{11} at m = " + std::to_string(m));
  o.note << "m <= 100 on three systems";
}

void c5_cover(Outcome& o) {
  Language full(full_shift({"0", "1"}));
  auto g = build_cover_graph(full, 3, 3, 6);
  o.require(g.size() == 8, "2^3 states");
  for (State s = 0; s < g.size(); ++s) {
    std::string u = full.alphabet().spell(g.pi(s));
    std::set<std::string> got, want{u.substr(1) + "0", u.substr(1) + "1"};
    for (State t : g.succ[s]) got.insert(full.alphabet().spell(g.pi(t)));
    o.require(got == want, "de Bruijn edges from " + u);
  }
  Language fib(fibonacci());
  auto h = build_cover_graph(fib, 6, 6, 12);
  auto sp = cover_special_states(h);
  o.require(sp.size() == 1, "one special state");
  o.require(check_special_correspondence(fib, h).counts_match, "special count matches left special words");
  auto it = check_intertwining(fib, h);
  o.require(it.ok, "intertwining");
  o.note << "intertwining over " << it.words_checked << " words";
}

void c6_isolation(Outcome& o) {
  Language lang(fibonacci());
  auto g = build_cover_graph(lang, 6, 6, 12);
  auto sp = cover_special_states(g);
  o.require(sp.size() == 1, "one special state");
  if (sp.size() != 1) return;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> levels{{10, 10, 20}, {14, 14, 28}};
  o.require(isolated_state_check(lang, g, sp[0], levels).isolated, "special state isolated");
  std::size_t split = 0;
  for (State s = 0; s < g.size(); ++s)
    if (s != sp[0] && !isolated_state_check(lang, g, s, levels).isolated) ++split;
  o.require(split > 0, "a non-special state is not isolated");
  o.note << split << " of " << g.size() - 1 << " non-special states split";
}

void c7_rokhlin(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  Language lang(fibonacci());
  auto m = depth_model(lang, 60);
  auto cover = build_rokhlin_cover(m.sys, 5, m.sys.special_states());
  o.require(cover.towers.size() <= 4, "at most 4 towers");
  o.require(verify_rokhlin_cover(m.sys, cover).all_pass(), "all clauses");
  double s = seconds_since(t0);
  o.require(s < 60, "under 60 s");
  o.note << cover.towers.size() << " towers, " << s << " s";
}

void c8_tower_pairs(Outcome& o) {
  Language lang(fibonacci());
  auto m = depth_model(lang, 60);
  auto cover = build_rokhlin_cover(m.sys, 5, m.sys.special_states());
  auto tps = pairs_from_rokhlin(m.sys, cover, IntSet{-1, 0, 1});
  o.require(tps.M == 3 && tps.N == 5, "M = 3, N = 5");
  auto cert = verify_tower_pairs(m.sys, tps);
  o.require(cert.all_pass(), "all five clauses");
  auto* chrom = cert.clause("chromatic");
  o.require(chrom && chrom->detail.at("colors").get<std::size_t>() <= 2 * cover.towers.size(), "colors <= 2 towers");
  const auto& kinds = cert.witnesses.at("kinds");
  o.require(kinds.at("original").get<std::size_t>() > 0 && kinds.at("shifted").get<std::size_t>() > 0, "both witness kinds");
  o.note << "d = " << tps.d_claimed << ", kinds " << kinds.dump();
}

void c9_b_partition(Outcome& o) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000 && o.pass; ++trial) {
    std::vector<std::size_t> S;
    std::size_t span = rng() % 30;
    for (std::size_t s = 0; s <= span; ++s)
      if (rng() % 4 != 0) S.push_back(s);
    if (S.empty()) S.push_back(span);
    std::set<long> Eset{0};
    for (std::size_t i = 0, ne = rng() % 4; i < ne; ++i) {
      long e = 1 + static_cast<long>(rng() % 5);
      Eset.insert(e);
      Eset.insert(-e);
    }
    std::vector<long> E(Eset.begin(), Eset.end());
    std::size_t N = 1 + rng() % 8;
    long W = static_cast<long>(N) * E.back() + static_cast<long>(S.back()) + static_cast<long>(rng() % 5);
    auto b = build_B_partition(S, E, N, W);
    auto want = oracle::b_blocks(S, E, N, -W, W);
    for (long m = -W; m <= W; ++m) o.require(b.block_of(m) == want[m], "block of " + std::to_string(m));
    for (long e : E)
      for (long m = -W; m <= W; ++m) {
        long t = m + e;
        long k = static_cast<long>(want[m]), kt = (t < -W || t > W) ? 0 : static_cast<long>(want[t]);
        o.require(std::labs(kt - k) <= 1, "shift containment");
      }
  }
  o.note << "1000 random (E, S, N)";
}

void c10_equivariant_map(Outcome& o) {
  Language lang(fibonacci());
  RunConfig cfg;
  cfg.spec = fibonacci();
  cfg.epsilon = Rational(1, 10);
  auto st = amen_stage(lang, cfg);
  const auto& map = st.map;
  const auto& sys = st.towers.model.sys;
  Rational bound(BigInt((map.d + 1) * (map.d + 2)), BigInt(st.N));
  o.require(bound < cfg.epsilon, "(d+1)(d+2)/N < eps");
  for (const auto& p : map.phi) {
    bool positive = std::all_of(p.atoms.begin(), p.atoms.end(), [](const auto& a) { return a.second > 0; });
    o.require(positive && p.total() == 1, "probability vector");
    o.require(p.size() <= map.d + 1, "support <= d + 1");
  }
  Rational dev = oracle::deviation(sys, map.phi, st.E);
  o.require(dev <= bound, "deviation <= (d+1)(d+2)/N");
  o.require(check_equivariance(sys, map, st.E, cfg.epsilon).all_pass(), "equivariance certificate");
  o.note << "d = " << map.d << ", N = " << st.N << ", deviation " << to_string(dev) << ", bound " << to_string(bound);
}

void c11_projection(Outcome& o) {
  std::mt19937_64 rng(11);
  FiniteSymbolicSystem sys({1, 2, 3, 4, 5, 0, 0, 6, 3}, {}, true);
  IntSet E{-1, 0, 1}, S{-3, -2, -1, 0, 1, 2, 3};
  std::size_t projected = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    EquivariantMap map;
    map.d = 4;
    map.S_lo = -8;
    map.S_hi = 8;
    for (State x = 0; x < sys.size(); ++x) {
      std::map<long, BigInt> raw;
      BigInt total = 0;
      raw[static_cast<long>(rng() % 7) - 3] += 500;
      total += 500;
      for (std::size_t a = 0, n = rng() % 5; a < n; ++a) {
        long pos = static_cast<long>(rng() % 17) - 8;
        BigInt w = (pos < -3 || pos > 3) ? BigInt(rng() % 3) : BigInt(rng() % 300);
        raw[pos] += w;
        total += w;
      }
      std::map<long, Rational> w;
      for (const auto& [k, v] : raw) w[k] = Rational(v, total);
      map.phi.push_back(make_point(w));
    }
    map.epsilon_achieved = oracle::deviation(sys, map.phi, E);
    Rational delta(1, 20);
    auto pr = project_finite_support(map, S, delta);
    ++projected;
    Rational worst = 0;
    for (State x = 0; x < sys.size(); ++x) {
      Rational kept = 0;
      for (const auto& [m, w] : map.phi[x].atoms)
        if (m >= -3 && m <= 3) kept += w;
      Rational dist = oracle::l1(map.phi[x], pr.map.phi[x]);
      o.require(dist == 2 * (1 - kept), "rho = 2(1 - kept)");
      worst = std::max(worst, dist);
    }
    o.require(pr.max_distance == worst, "max distance");
    o.require(oracle::deviation(sys, pr.map.phi, E) <= pr.adjusted_epsilon, "equivariance at the adjusted bound");
  }
  o.note << projected << " random maps";
}

void c12_simplex(Outcome& o) {
  std::mt19937_64 rng(12);
  auto random_point = [&](std::size_t atoms, long range) {
    std::map<long, BigInt> raw;
    BigInt total = 0;
    for (std::size_t a = 0; a < atoms; ++a) {
      BigInt w = 1 + rng() % 1000;
      raw[static_cast<long>(rng() % static_cast<std::uint64_t>(range))] += w;
      total += w;
    }
    std::map<long, Rational> w;
    for (const auto& [k, v] : raw) w[k] = Rational(v, total);
    return make_point(w);
  };
  for (int trial = 0; trial < 1000; ++trial) {
    auto mu = random_point(1 + rng() % 6, 10);
    for (std::size_t i = 1; i <= 6; ++i) o.require(*skeleton_distance(mu, i) == oracle::skeleton(mu, i), "skeleton distance");
  }
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t d = rng() % 5;
    auto mu = random_point(1 + rng() % (d + 1), 20);
    if (trial % 2 && mu.size() > 1) {
      BigInt scale = BigInt(1) << (rng() % 40);
      std::map<long, Rational> w;
      for (std::size_t a = 0; a < mu.size(); ++a) w[mu.atoms[a].first] = a == 0 ? Rational(1) : mu.atoms[a].second / scale;
      Rational t = 0;
      for (const auto& [k, v] : w) t += v;
      for (auto& [k, v] : w) v /= t;
      mu = make_point(w);
    }
    o.require(cover_index(mu, d).has_value(), "point of P_d in some V_i");
  }
  std::size_t pairs = 0;
  while (pairs < 1000) {
    auto sample = [&]() -> std::optional<std::pair<std::vector<long>, SimplexPoint>> {
      long a = static_cast<long>(rng() % 4), b = static_cast<long>(rng() % 4);
      if (a == b) return std::nullopt;
      std::map<long, Rational> w;
      Rational wa(50 + static_cast<long>(rng() % 40), 100), tail(static_cast<long>(rng() % 16), 1000);
      w[a] += wa - tail;
      w[b] += 1 - wa;
      if (tail > 0) w[static_cast<long>(4 + rng() % 3)] += tail;
      auto mu = make_point(w);
      if (auto m = simplicial_cover_membership(mu, 1, 2)) return std::make_pair(*m, mu);
      return std::nullopt;
    };
    auto p = sample(), q = sample();
    if (!p || !q || p->first == q->first) continue;
    ++pairs;
    o.require(oracle::l1(p->second, q->second) >= Rational(1, 30), "separation >= 1/30");
  }
  o.note << "1000 points, 1000 covered samples, " << pairs << " pairs";
}

void c13_dad(Outcome& o) {
  o.require(difference_set(IntSet{0, 1, 2, 3, 4}) == IntSet{-4, -3, -2, -1, 0, 1, 2, 3, 4}, "F = -4..4");
  RunConfig cfg;
  cfg.spec = fibonacci();
  auto r = run_dad(cfg);
  auto* restricted = r.cert.clause("restricted_elements");
  o.require(restricted && restricted->pass, "restricted elements on the fibonacci window");
  o.require(r.cert.verdict() == Verdict::Pass, "fibonacci dad certificate passes");

  FiniteSymbolicSystem cyc({1, 2, 0}, {}, true);
  EquivariantMap map;
  map.d = 0;
  map.S_lo = 0;
  map.S_hi = 2;
  for (State x = 0; x < 3; ++x) map.phi.push_back(dirac(static_cast<long>(x)));
  map.epsilon_achieved = measure_deviation(cyc, map, IntSet{0});
  auto eq = check_equivariance(cyc, map, IntSet{0}, Rational(1, 3));
  o.require(eq.verdict() == Verdict::Pass, "micro equivariance at 1/3");
  auto w = build_window(cyc, IntSet{0}, 0);
  auto cover = build_dad_cover(cyc, w, map, &eq, {}, 0);
  o.require(verify_dad_cover(cyc, w, cover).all_pass(), "micro dad certificate");
  o.note << "fibonacci: " << r.summary.substr(0, r.summary.size() ? r.summary.size() - 1 : 0);
}

void c14_bounds(Outcome& o) {
  auto b = bound_chain(1, 0);
  o.require(b.rok == 3 && b.tow == 7 && b.am == 7 && b.dad == 7 && b.nuclear == 6, "(3, 7, 7, 7, 6)");
  o.require(bounds_certificate(1, 0).verdict() == Verdict::Pass, "bounds certificate");
  auto text = bounds_text(bounds_certificate(1, 0));
  o.note << text.substr(0, text.find('\n'));
}

void c15_determinism(Outcome& o) {
  RunConfig cfg;
  cfg.spec = fibonacci();
  cfg.spec.horizon = 20;
  std::vector<std::pair<std::string, std::function<Certificate()>>> stages{
      {"special", [&] { return run_special(cfg).cert; }}, {"cover", [&] { return run_cover(cfg).cert; }},
      {"rokhlin", [&] { return run_rokhlin(cfg).cert; }}, {"towerdim", [&] { return run_towerdim(cfg).cert; }},
      {"amen", [&] { return run_amen(cfg).cert; }},       {"dad", [&] { return run_dad(cfg).cert; }},
      {"bounds", [&] { return bounds_certificate(1, 0); }}};
  for (const auto& [name, run] : stages) {
    auto a = dump_canonical(run().to_json()), b = dump_canonical(run().to_json());
    o.require(a == b, name + " byte-identical");
    auto stored = json::parse(a);
    auto v = verify_certificate(stored, ".");
    o.require(verdict_name(v.verdict()) == stored.at("verdict").get<std::string>(), name + " re-verifies to its verdict");
    o.require(v.verdict() == Verdict::Pass, name + " passes");
  }
  o.note << stages.size() << " stages";
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria{
      {"fibonacci complexity p(n) = n + 1", c1_fibonacci_complexity},
      {"thue-morse complexity vs naive enumeration", c2_thue_morse_complexity},
      {"left special count and growth bound", c3_special_bound},
      {"counting step |LS(m)| <= p(m+1) - p(m)", c4_counting_step},
      {"cover graph correctness", c5_cover},
      {"isolation of the special state", c6_isolation},
      {"rokhlin cover on fibonacci", c7_rokhlin},
      {"tower pairs", c8_tower_pairs},
      {"B partition fuzz", c9_b_partition},
      {"equivariant map", c10_equivariant_map},
      {"finite-support projection", c11_projection},
      {"simplex geometry", c12_simplex},
      {"dad certificate", c13_dad},
      {"bound chain", c14_bounds},
      {"determinism and re-verification", c15_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << "exception: " << e.what();
    }
    failures += !o.pass;
    std::cout << "criterion " << (i + 1) << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << "  ("
              << o.note.str() << ")" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria pass\n";
  return failures ? 1 : 0;
}
