#include <cstdio>
#include <fstream>
#include <set>

#include "nsolit_cli/cli.hpp"

namespace nsolit::cli {

namespace {

const std::set<std::string> kKeys = {"kind", "k",       "p",       "N",       "length",  "dt",     "tau_end",
                                     "kappa", "initial", "amplitude", "cadence", "k2_form", "dealias"};

template <class T>
T get(const nlohmann::json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

pde::FlowConfig parse_flow_config(const nlohmann::json& doc, pde::FlowConfig c) {
  if (!doc.is_object()) throw ConfigError("flow config must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!kKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  try {
    c.kind = pde::flow_kind_from_string(get<std::string>(doc, "kind", pde::to_string(c.kind)));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  c.k = get<int>(doc, "k", c.k);
  const auto p = get<std::int64_t>(doc, "p", std::int64_t(c.p));
  const auto n = get<std::int64_t>(doc, "N", std::int64_t(c.points));
  const auto cadence = get<std::int64_t>(doc, "cadence", std::int64_t(c.cadence));
  if (p < 1 || n < 1 || cadence < 0) throw ConfigError("p, N and cadence must be non-negative integers");
  c.p = std::size_t(p);
  c.points = std::size_t(n);
  c.cadence = std::size_t(cadence);
  c.length = get<double>(doc, "length", c.length);
  c.dt = get<double>(doc, "dt", c.dt);
  c.tau_end = get<double>(doc, "tau_end", c.tau_end);
  c.kappa = get<double>(doc, "kappa", c.kappa);
  c.initial = get<std::string>(doc, "initial", c.initial);
  c.amplitude = get<double>(doc, "amplitude", c.amplitude);
  const auto form = get<std::string>(doc, "k2_form", c.k2_form == hier::K2Form::Printed ? "printed" : "recursion");
  if (form != "recursion" && form != "printed") throw ConfigError("k2_form must be 'recursion' or 'printed'");
  c.k2_form = form == "printed" ? hier::K2Form::Printed : hier::K2Form::Recursion;
  c.dealias = get<bool>(doc, "dealias", c.dealias);
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

Json flow_config_json(const pde::FlowConfig& c) {
  Json j = Json::object();
  j.set("kind", pde::to_string(c.kind));
  j.set("k", c.k);
  j.set("p", c.p);
  j.set("N", c.points);
  j.set("length", c.length);
  j.set("dt", c.dt);
  j.set("tau_end", c.tau_end);
  j.set("kappa", c.kappa);
  j.set("initial", c.initial);
  j.set("amplitude", c.amplitude);
  j.set("cadence", c.cadence);
  j.set("k2_form", c.k2_form == hier::K2Form::Printed ? "printed" : "recursion");
  j.set("dealias", c.dealias);
  return j;
}

pde::FlowConfig sg_defaults() {
  pde::FlowConfig c;
  c.kind = pde::FlowKind::SineGordon;
  c.k = 0;
  c.points = 1024;
  c.length = 200.0;
  c.dt = 2e-3;
  c.tau_end = 1.0;
  c.initial = "breather";
  c.cadence = 100;
  return c;
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::uint64_t h = 14695981039346656037ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= std::uint8_t(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

std::string expand_text(int k) {
  switch (k) {
    case 0:
      return "flow k=0:\n"
             "  v_tau = v_l\n"
             "hamiltonian H0:\n"
             "  (1/2)|v|^2\n";
    case 1:
      return "flow k=1:\n"
             "  v_tau = v_3l + (3/2)|v|^2 v_l - kappa v_l\n"
             "hamiltonian H1:\n"
             "  -(1/2)|v_l|^2 + (1/8)|v|^4\n";
    case 2:
      return "flow k=2 (default, R applied to the k=1 flow):\n"
             "  v_tau = v_5l + (5/2)|v|^2 v_3l + 5(v.v_l) v_2l + 5(v.v_2l) v_l + (5/2)|v_l|^2 v_l"
             " + (15/8)|v|^4 v_l - kappa (v_3l + (3/2)|v|^2 v_l)\n"
             "flow k=2 (k2_form = printed):\n"
             "  v_tau = v_5l + (5/2)(|v|^2 v_2l)_l + (5/2)((|v|^2)_2l + |v_l|^2 + (3/4)|v|^4) v_l"
             " - (1/2)|v_l|^2 v - kappa (v_3l + (3/2)|v|^2 v_l)\n"
             "hamiltonian H2a (default):\n"
             "  (1/2)|v_2l|^2 - (3/4)|v|^2 |v_l|^2 - (1/2)(v.v_l)^2 + (1/16)|v|^6\n"
             "hamiltonian H2b:\n"
             "  (1/2)|v_2l|^2 - (3/4)|v|^2 |v_l|^2 - (1/2)(v.v_l) + (1/16)|v|^6\n";
    default:
      throw InvalidArgument("k must be 0, 1 or 2");
  }
}

}  // namespace nsolit::cli
