#pragma once

#include "symdim/rational.hpp"
#include "symdim/system.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace symdim {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr const char* kSchema = "symdim-certificate/1";

enum class Verdict { Pass, Fail, Inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive-at-depth";
  }
  return "fail";
}

struct Clause {
  std::string name;
  bool pass = true;
  json detail = json::object();
};

struct Certificate {
  std::string kind;
  json params = json::object();
  json data = json::object();
  json witnesses = json::object();
  std::vector<Clause> clauses;
  bool inconclusive = false;
  std::string note;

  Clause& add(std::string name, bool pass, json detail = json::object()) {
    clauses.push_back(Clause{std::move(name), pass, std::move(detail)});
    return clauses.back();
  }

  bool all_pass() const {
    for (const auto& c : clauses)
      if (!c.pass) return false;
    return true;
  }

  Verdict verdict() const {
    if (inconclusive) return Verdict::Inconclusive;
    return all_pass() ? Verdict::Pass : Verdict::Fail;
  }

  const Clause* first_failure() const {
    for (const auto& c : clauses)
      if (!c.pass) return &c;
    return nullptr;
  }

  const Clause* clause(const std::string& name) const {
    for (const auto& c : clauses)
      if (c.name == name) return &c;
    return nullptr;
  }

  json to_json() const {
    json j;
    j["schema"] = kSchema;
    j["tool_version"] = kToolVersion;
    j["kind"] = kind;
    j["params"] = params;
    j["data"] = data;
    j["witnesses"] = witnesses;
    json cl = json::object();
    for (const auto& c : clauses) cl[c.name] = json{{"pass", c.pass}, {"detail", c.detail}};
    j["clauses"] = cl;
    j["verdict"] = verdict_name(verdict());
    if (!note.empty()) j["note"] = note;
    return j;
  }

  static Certificate from_json(const json& j) {
    Certificate c;
    c.kind = j.at("kind").get<std::string>();
    c.params = j.value("params", json::object());
    c.data = j.value("data", json::object());
    c.witnesses = j.value("witnesses", json::object());
    json clauses = j.value("clauses", json::object());
    for (const auto& [name, v] : clauses.items())
      c.clauses.push_back(Clause{name, v.at("pass").get<bool>(), v.value("detail", json::object())});
    c.inconclusive = j.value("verdict", std::string()) == verdict_name(Verdict::Inconclusive);
    c.note = j.value("note", std::string());
    return c;
  }
};

inline json rational_json(const Rational& r) { return to_string(r); }

inline Rational rational_from(const json& j) {
  auto r = parse_rational(j.get<std::string>());
  if (!r) throw Error(ErrorKind::Config, "bad rational in certificate: " + j.get<std::string>());
  return *r;
}

inline json system_json(const FiniteSymbolicSystem& sys) {
  return json{{"sigma", sys.sigma_map()}, {"resolution_surjective", sys.resolution_surjective()}};
}

inline FiniteSymbolicSystem system_from(const json& j) {
  return FiniteSymbolicSystem(j.at("sigma").get<std::vector<State>>(), {}, j.at("resolution_surjective").get<bool>());
}

// Compact, sorted-key, newline-terminated; identical inputs give identical bytes.
inline std::string dump_canonical(const json& j) { return j.dump(1) + "\n"; }

inline void write_file_atomic(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Config, "cannot write " + tmp);
    out << text;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error(ErrorKind::Config, "cannot rename " + tmp);
}

}  // namespace symdim
