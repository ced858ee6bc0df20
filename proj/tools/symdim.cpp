#include "symdim/symdim.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace symdim;

namespace {

enum Exit { kPass = 0, kFail = 1, kInconclusive = 2, kUsage = 3 };

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Pass: return kPass;
    case Verdict::Inconclusive: return kInconclusive;
    case Verdict::Fail: return kFail;
  }
  return kFail;
}

struct Flags {
  std::string config, out = "symdim-out", epsilon;
  std::optional<std::size_t> depth, horizon, big_n, window, q, dim_x, n_max;
  std::optional<std::uint64_t> seed;
  std::string cert;
};

RunConfig make_config(const Flags& f) {
  if (f.config.empty()) throw Error(ErrorKind::Config, "--config is required for this subcommand");
  RunConfig cfg = load_config(f.config);
  if (f.depth) cfg.depth = *f.depth;
  if (f.horizon) {
    cfg.spec.horizon = *f.horizon;
    cfg.cover_horizon = *f.horizon;
  }
  if (f.big_n) cfg.big_n = *f.big_n;
  if (f.window) cfg.window = *f.window;
  if (f.n_max) cfg.n_max = *f.n_max;
  if (f.dim_x) cfg.dim_x = *f.dim_x;
  if (f.seed) cfg.seed = *f.seed;
  if (!f.epsilon.empty()) {
    auto r = parse_rational(f.epsilon);
    if (!r || *r <= 0) throw Error(ErrorKind::Config, "--epsilon expects a positive rational P/Q");
    cfg.epsilon = *r;
  }
  return cfg;
}

void emit(const fs::path& dir, const std::string& file, const std::string& text) {
  fs::create_directories(dir);
  write_file_atomic((dir / file).string(), text);
}

int report(const RunResult& r, const fs::path& dir) {
  for (const auto& [name, body] : r.files) emit(dir, name, body);
  emit(dir, r.cert.kind + ".json", dump_canonical(r.cert.to_json()));
  std::cout << r.summary;
  std::cout << r.cert.kind << ": " << verdict_name(r.cert.verdict());
  if (auto* c = r.cert.first_failure()) std::cout << " (clause " << c->name << ")";
  std::cout << "\n";
  if (!r.cert.note.empty()) std::cerr << r.cert.note << "\n";
  return exit_code(r.cert.verdict());
}

std::size_t model_q(const RunConfig& cfg) {
  Language lang(cfg.spec);
  return depth_model(lang, probe_depth(cfg.spec, cfg.depth)).sys.special_states().size();
}

int run_certify(const RunConfig& cfg, const fs::path& dir) {
  std::vector<RunResult> stages;
  stages.push_back(run_special(cfg));
  stages.push_back(run_cover(cfg));
  stages.push_back(run_rokhlin(cfg));
  stages.push_back(run_towerdim(cfg));
  stages.push_back(run_amen(cfg));
  stages.push_back(run_dad(cfg));
  RunResult b;
  try {
    const auto& rp = stages[2].cert.params;
    std::size_t q = rp.contains("q") ? rp.at("q").get<std::size_t>() : model_q(cfg);
    b.cert = bounds_certificate(q, cfg.dim_x);
  } catch (const Error& e) {
    b.cert = failure_certificate("bounds", json{{"dim_x", cfg.dim_x}}, e);
  }
  stages.push_back(std::move(b));

  Certificate m;
  m.kind = "certify";
  m.params = json{{"spec", spec_json(cfg.spec)}, {"seed", cfg.seed}};
  json list = json::array();
  for (const auto& s : stages) {
    for (const auto& [name, body] : s.files) emit(dir, name, body);
    std::string file = s.cert.kind + ".json";
    emit(dir, file, dump_canonical(s.cert.to_json()));
    list.push_back(json{{"kind", s.cert.kind}, {"file", file}, {"verdict", verdict_name(s.cert.verdict())}});
    m.add(file, s.cert.verdict() != Verdict::Fail, json{{"verdict", verdict_name(s.cert.verdict())}});
    if (s.cert.verdict() == Verdict::Inconclusive) m.inconclusive = true;
    std::cout << s.cert.kind << ": " << verdict_name(s.cert.verdict()) << "\n";
  }
  if (!m.all_pass()) m.inconclusive = false;
  m.data = json{{"stages", list}};
  emit(dir, "certify.json", dump_canonical(m.to_json()));
  std::cout << "certify: " << verdict_name(m.verdict()) << "\n";
  return exit_code(m.verdict());
}

int run_verify(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open certificate '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    std::cout << "verify: fail (unparseable: " << e.what() << ")\n";
    return kFail;
  }
  Certificate c;
  try {
    c = verify_certificate(j, fs::path(path).parent_path());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    std::cout << "verify: fail (" << e.what() << ")\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cout << "verify: fail (malformed certificate: " << e.what() << ")\n";
    return kFail;
  }
  for (const auto& cl : c.clauses) std::cout << (cl.pass ? "  ok    " : "  FAIL  ") << cl.name << "\n";
  std::cout << "verify " << c.kind << ": " << verdict_name(c.verdict()) << "\n";
  return exit_code(c.verdict());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symdim: dimension bounds for minimal subshifts, with certificates"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "subshift/pipeline config (key = value)");
  app.add_option("--out", f.out, "output directory")->capture_default_str();
  app.add_option("--depth", f.depth, "depth k of the finite model");
  app.add_option("--horizon", f.horizon, "special-word horizon and cover lookahead");
  app.add_option("--big-n", f.big_n, "tower height N (rokhlin) or block size N (amen, dad)");
  app.add_option("--epsilon", f.epsilon, "target epsilon as P/Q");
  app.add_option("--window", f.window, "groupoid window bound");
  app.add_option("--seed", f.seed, "seed recorded in the run");
  app.add_option("--n-max", f.n_max, "largest word length for lang");
  app.add_option("--q", f.q, "number of special elements (bounds)");
  app.add_option("--dim-x", f.dim_x, "covering dimension of X (bounds)");

  const char* names[][2] = {{"lang", "enumerate the language and complexity"},
                            {"special", "left-special counts and the branch bound"},
                            {"cover", "one-sided cover graph and its checks"},
                            {"rokhlin", "Rokhlin tower cover of the finite model"},
                            {"towerdim", "tower pairs, chromatic bound"},
                            {"amen", "almost-equivariant map to the simplex"},
                            {"dad", "open cover of the groupoid window"},
                            {"bounds", "dimension bound chain from q and dim X"},
                            {"certify", "run every stage and write a manifest"}};
  std::map<std::string, CLI::App*> subs;
  for (auto& n : names) subs[n[0]] = app.add_subcommand(n[0], n[1]);
  auto* verify = app.add_subcommand("verify", "re-check a certificate from its stored data");
  verify->add_option("certificate", f.cert, "certificate JSON")->required();
  app.fallthrough();
  for (auto& [_, s] : subs) s->fallthrough();
  verify->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    fs::path dir = f.out;
    if (verify->parsed()) return run_verify(f.cert);
    if (subs["bounds"]->parsed()) {
      std::size_t q, dim_x = f.dim_x.value_or(0);
      if (f.q) {
        q = *f.q;
      } else {
        RunConfig cfg = make_config(f);
        q = model_q(cfg);
        dim_x = cfg.dim_x;
      }
      RunResult r;
      r.cert = bounds_certificate(q, dim_x);
      r.summary = bounds_text(r.cert);
      return report(r, dir);
    }
    RunConfig cfg = make_config(f);
    if (subs["lang"]->parsed()) return report(run_lang(cfg), dir);
    if (subs["special"]->parsed()) return report(run_special(cfg), dir);
    if (subs["cover"]->parsed()) return report(run_cover(cfg), dir);
    if (subs["rokhlin"]->parsed()) return report(run_rokhlin(cfg), dir);
    if (subs["towerdim"]->parsed()) return report(run_towerdim(cfg), dir);
    if (subs["amen"]->parsed()) return report(run_amen(cfg), dir);
    if (subs["dad"]->parsed()) return report(run_dad(cfg), dir);
    if (subs["certify"]->parsed()) return run_certify(cfg, dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Config ? kUsage : kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
