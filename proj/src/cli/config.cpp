#include "ergo/cli/config.hpp"

#include <fstream>
#include <sstream>

namespace ergo::cli {

namespace {

[[noreturn]] void bad(const char* key, const std::string& why) {
  throw Error(ErrorKind::InvalidInput, std::string("config key '") + key + "': " + why);
}

const json* find(const json& doc, const char* key) {
  if (!doc.is_object()) return nullptr;
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return nullptr;
  return &*it;
}

}  // namespace

Scenario parse_scenario(std::string_view name) {
  if (name == "ergotropy") return Scenario::ergotropy;
  if (name == "drive-synth") return Scenario::drive_synth;
  if (name == "fig1") return Scenario::fig1;
  if (name == "fig2") return Scenario::fig2;
  if (name == "fig3" || name == "appendix-fig") return Scenario::fig3;
  if (name == "counterexample") return Scenario::counterexample;
  throw Error(ErrorKind::InvalidInput, "unknown scenario '" + std::string(name) + "'");
}

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::ergotropy: return "ergotropy";
    case Scenario::drive_synth: return "drive-synth";
    case Scenario::fig1: return "fig1";
    case Scenario::fig2: return "fig2";
    case Scenario::fig3: return "fig3";
    case Scenario::counterexample: return "counterexample";
  }
  return "?";
}

std::vector<double> Axis::values() const {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    out[static_cast<std::size_t>(k)] =
        points == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  if (points > 1) out.back() = hi;
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, "config '" + path + "' is not valid JSON: " + e.what());
  }
}

RunConfig make_config(Scenario scenario, const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::InvalidInput, "config must be a JSON object");
  RunConfig cfg;
  cfg.scenario = scenario;
  cfg.doc = doc;
  if (const json* s = find(doc, "seed")) {
    if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0)) {
      bad("seed", "must be a non-negative integer");
    }
    cfg.seed = s->get<std::uint64_t>();
  }
  if (find(doc, "steps")) cfg.steps = get_int(doc, "steps", 0);
  cfg.threads = get_int(doc, "threads", 1);
  if (const json* t = find(doc, "tolerances")) {
    if (!t->is_object()) bad("tolerances", "must be an object");
    cfg.tolerances.hermitian = get_real(*t, "hermitian", cfg.tolerances.hermitian);
    cfg.tolerances.unitary = get_real(*t, "unitary", cfg.tolerances.unitary);
    cfg.tolerances.branch_cut = get_real(*t, "branch_cut", cfg.tolerances.branch_cut);
    cfg.tolerances.degeneracy = get_real(*t, "degeneracy", cfg.tolerances.degeneracy);
  }
  for (const char* k : {"seed", "steps", "threads", "tolerances"}) cfg.doc.erase(k);
  return cfg;
}

double get_real(const json& doc, const char* key, double fallback) {
  const json* v = find(doc, key);
  if (!v) return fallback;
  if (!v->is_number()) bad(key, "must be a number");
  return v->get<double>();
}

int get_int(const json& doc, const char* key, int fallback) {
  const json* v = find(doc, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) bad(key, "must be an integer");
  const auto x = v->get<long long>();
  if (x < INT32_MIN || x > INT32_MAX) bad(key, "out of range");
  return static_cast<int>(x);
}

std::int64_t get_int64(const json& doc, const char* key, std::int64_t fallback) {
  const json* v = find(doc, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) bad(key, "must be an integer");
  return v->get<std::int64_t>();
}

bool get_bool(const json& doc, const char* key, bool fallback) {
  const json* v = find(doc, key);
  if (!v) return fallback;
  if (!v->is_boolean()) bad(key, "must be true or false");
  return v->get<bool>();
}

std::string get_string(const json& doc, const char* key, const std::string& fallback) {
  const json* v = find(doc, key);
  if (!v) return fallback;
  if (!v->is_string()) bad(key, "must be a string");
  return v->get<std::string>();
}

Axis get_axis(const json& doc, const char* key, Axis fallback) {
  const json* v = find(doc, key);
  if (!v) return fallback;
  if (!v->is_object()) bad(key, "must be {\"lo\", \"hi\", \"points\"}");
  Axis a;
  a.lo = get_real(*v, "lo", fallback.lo);
  a.hi = get_real(*v, "hi", fallback.hi);
  a.points = get_int(*v, "points", fallback.points);
  if (a.points < 1) bad(key, "points must be >= 1");
  if (!(a.lo <= a.hi)) bad(key, "lo must not exceed hi");
  return a;
}

cplx get_complex(const json& doc, const char* key, cplx fallback) {
  const json* v = find(doc, key);
  if (!v) return fallback;
  if (v->is_number()) return {v->get<double>(), 0.0};
  if (v->is_array() && v->size() == 2 && (*v)[0].is_number() && (*v)[1].is_number()) {
    return {(*v)[0].get<double>(), (*v)[1].get<double>()};
  }
  bad(key, "must be a number or [re, im]");
}

CMatrix get_matrix(const json& doc, const char* key) {
  const json* v = find(doc, key);
  if (!v) bad(key, "is required");
  return matrix_from_json(*v);
}

Ramp get_ramp(const json& doc) {
  const json* v = find(doc, "ramp");
  Ramp r;
  if (!v) return r;
  const std::string kind = v->is_string() ? v->get<std::string>() : get_string(*v, "kind", "smoothstep");
  if (kind == "smoothstep") {
    r.kind = RampKind::smoothstep;
  } else if (kind == "sine") {
    r.kind = RampKind::sine;
  } else if (kind == "overshoot") {
    r.kind = RampKind::overshoot;
    r.amplitude = v->is_object() ? get_real(*v, "amplitude", 0.0) : 0.0;
  } else {
    bad("ramp", "unknown kind '" + kind + "'");
  }
  return r;
}

}  // namespace ergo::cli
