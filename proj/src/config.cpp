#include "hrm/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace hrm {

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config line " + std::to_string(line) + ": expected a number, got '" + v + "'");
  return x;
}

long long parse_int(const std::string& v, int line) {
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config line " + std::to_string(line) + ": expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("config line " + std::to_string(line) + ": expected true/false, got '" + v + "'");
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

std::vector<double> parse_double_list(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), line));
  if (out.empty())
    throw ConfigError("config line " + std::to_string(line) + ": empty list");
  return out;
}

}  // namespace

void RunConfig::validate() const {
  eos.validate();
  grid.validate();
  solver.validate();
  if (preset.name != "constant_eq" && preset.name != "gaussian" && preset.name != "riemann")
    throw ConfigError("RunConfig.preset.name: unknown preset '" + preset.name + "'");
  if (outputs.formats != "csv")
    throw ConfigError("RunConfig.outputs.formats: only 'csv' is supported");
  for (size_t k = 0; k + 1 < sweep.eps_list.size(); ++k)
    if (!(sweep.eps_list[k] > sweep.eps_list[k + 1]))
      throw ConfigError("RunConfig.sweep.eps_list: values must be strictly decreasing");
  for (double e : sweep.eps_list)
    if (!(e > 0.0)) throw ConfigError("RunConfig.sweep.eps_list: values must be positive");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;

  const std::map<std::string, std::function<void(const std::string&, int)>> setters = {
      {"eos.R", [&](const std::string& v, int ln) { cfg.eos.R = parse_double(v, ln); }},
      {"eos.T0", [&](const std::string& v, int ln) { cfg.eos.T0 = parse_double(v, ln); }},
      {"eos.rho_l", [&](const std::string& v, int ln) { cfg.eos.rho_l = parse_double(v, ln); }},
      {"eos.A_g", [&](const std::string& v, int ln) { cfg.eos.A_g = parse_double(v, ln); }},
      {"eos.A_l", [&](const std::string& v, int ln) { cfg.eos.A_l = parse_double(v, ln); }},
      {"eos.alpha_model",
       [&](const std::string& v, int ln) {
         const std::string s = unquote(v);
         if (s == "affine_clamp") cfg.eos.alpha_model.kind = AlphaEqKind::affine_clamp;
         else if (s == "logistic") cfg.eos.alpha_model.kind = AlphaEqKind::logistic;
         else throw ConfigError("config line " + std::to_string(ln) + ": unknown alpha model '" + s + "'");
       }},
      {"eos.alpha_c0", [&](const std::string& v, int ln) { cfg.eos.alpha_model.c0 = parse_double(v, ln); }},
      {"eos.alpha_c1", [&](const std::string& v, int ln) { cfg.eos.alpha_model.c1 = parse_double(v, ln); }},
      {"eos.alpha_min", [&](const std::string& v, int ln) { cfg.eos.alpha_model.alpha_min = parse_double(v, ln); }},
      {"eos.alpha_max", [&](const std::string& v, int ln) { cfg.eos.alpha_model.alpha_max = parse_double(v, ln); }},
      {"eos.p_lo", [&](const std::string& v, int ln) { cfg.eos.p_lo = parse_double(v, ln); }},
      {"eos.p_hi", [&](const std::string& v, int ln) { cfg.eos.p_hi = parse_double(v, ln); }},
      {"grid.n_cells", [&](const std::string& v, int ln) { cfg.grid.n_cells = static_cast<int>(parse_int(v, ln)); }},
      {"grid.x_lo", [&](const std::string& v, int ln) { cfg.grid.x_lo = parse_double(v, ln); }},
      {"grid.x_hi", [&](const std::string& v, int ln) { cfg.grid.x_hi = parse_double(v, ln); }},
      {"grid.boundary",
       [&](const std::string& v, int ln) {
         const std::string s = unquote(v);
         if (s == "periodic") cfg.grid.boundary = Boundary::periodic;
         else if (s == "outflow") cfg.grid.boundary = Boundary::outflow;
         else throw ConfigError("config line " + std::to_string(ln) + ": unknown boundary '" + s + "'");
       }},
      {"solver.eps", [&](const std::string& v, int ln) { cfg.solver.eps = parse_double(v, ln); }},
      {"solver.nu", [&](const std::string& v, int ln) { cfg.solver.nu = parse_double(v, ln); }},
      {"solver.cfl", [&](const std::string& v, int ln) { cfg.solver.cfl = parse_double(v, ln); }},
      {"solver.t_end", [&](const std::string& v, int ln) { cfg.solver.t_end = parse_double(v, ln); }},
      {"solver.flux_scheme",
       [&](const std::string& v, int ln) {
         if (unquote(v) != "rusanov")
           throw ConfigError("config line " + std::to_string(ln) + ": unknown flux scheme '" + v + "'");
         cfg.solver.flux_scheme = FluxScheme::rusanov;
       }},
      {"solver.source_scheme",
       [&](const std::string& v, int ln) {
         const std::string s = unquote(v);
         if (s == "backward_euler") cfg.solver.source_scheme = SourceScheme::backward_euler;
         else if (s == "exact_affine") cfg.solver.source_scheme = SourceScheme::exact_affine;
         else throw ConfigError("config line " + std::to_string(ln) + ": unknown source scheme '" + s + "'");
       }},
      {"solver.record_every", [&](const std::string& v, int ln) { cfg.solver.record_every = parse_double(v, ln); }},
      {"preset", [&](const std::string& v, int) { cfg.preset.name = unquote(v); }},
      {"preset.name", [&](const std::string& v, int) { cfg.preset.name = unquote(v); }},
      {"preset.p_bar", [&](const std::string& v, int ln) { cfg.preset.p_bar = parse_double(v, ln); }},
      {"preset.u_bar", [&](const std::string& v, int ln) { cfg.preset.u_bar = parse_double(v, ln); }},
      {"preset.amplitude", [&](const std::string& v, int ln) { cfg.preset.amplitude = parse_double(v, ln); }},
      {"preset.width", [&](const std::string& v, int ln) { cfg.preset.width = parse_double(v, ln); }},
      {"preset.center", [&](const std::string& v, int ln) { cfg.preset.center = parse_double(v, ln); }},
      {"preset.p_left", [&](const std::string& v, int ln) { cfg.preset.p_left = parse_double(v, ln); }},
      {"preset.p_right", [&](const std::string& v, int ln) { cfg.preset.p_right = parse_double(v, ln); }},
      {"preset.u_left", [&](const std::string& v, int ln) { cfg.preset.u_left = parse_double(v, ln); }},
      {"preset.u_right", [&](const std::string& v, int ln) { cfg.preset.u_right = parse_double(v, ln); }},
      {"preset.x_split", [&](const std::string& v, int ln) { cfg.preset.x_split = parse_double(v, ln); }},
      {"outputs.dir", [&](const std::string& v, int) { cfg.outputs.dir = unquote(v); }},
      {"outputs.formats", [&](const std::string& v, int) { cfg.outputs.formats = unquote(v); }},
      {"sweep.eps_list", [&](const std::string& v, int ln) { cfg.sweep.eps_list = parse_double_list(unquote(v), ln); }},
      {"sweep.precheck", [&](const std::string& v, int ln) { cfg.sweep.precheck = parse_bool(v, ln); }},
      {"sweep.synthetic", [&](const std::string& v, int ln) { cfg.sweep.synthetic = parse_bool(v, ln); }},
      {"sweep.synthetic_exponent", [&](const std::string& v, int ln) { cfg.sweep.synthetic_exponent = parse_double(v, ln); }},
      {"seed", [&](const std::string& v, int ln) { cfg.seed = static_cast<unsigned long long>(parse_int(v, ln)); }},
  };

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (value.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": missing value for '" + key + "'");
    it->second(value, line_no);
    cfg.explicit_keys.insert(key == "preset" ? "preset.name" : key);
  }

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("load_config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_config(const RunConfig& cfg) {
  std::ostringstream out;
  auto kv = [&](const std::string& k, const std::string& v) { out << k << " = " << v << "\n"; };

  kv("eos.R", g17(cfg.eos.R));
  kv("eos.T0", g17(cfg.eos.T0));
  kv("eos.rho_l", g17(cfg.eos.rho_l));
  kv("eos.A_g", g17(cfg.eos.A_g));
  kv("eos.A_l", g17(cfg.eos.A_l));
  kv("eos.alpha_model", cfg.eos.alpha_model.kind == AlphaEqKind::affine_clamp ? "affine_clamp" : "logistic");
  kv("eos.alpha_c0", g17(cfg.eos.alpha_model.c0));
  kv("eos.alpha_c1", g17(cfg.eos.alpha_model.c1));
  kv("eos.alpha_min", g17(cfg.eos.alpha_model.alpha_min));
  kv("eos.alpha_max", g17(cfg.eos.alpha_model.alpha_max));
  kv("eos.p_lo", g17(cfg.eos.p_lo));
  kv("eos.p_hi", g17(cfg.eos.p_hi));
  kv("grid.n_cells", std::to_string(cfg.grid.n_cells));
  kv("grid.x_lo", g17(cfg.grid.x_lo));
  kv("grid.x_hi", g17(cfg.grid.x_hi));
  kv("grid.boundary", cfg.grid.boundary == Boundary::periodic ? "periodic" : "outflow");
  kv("solver.eps", g17(cfg.solver.eps));
  kv("solver.nu", g17(cfg.solver.nu));
  kv("solver.cfl", g17(cfg.solver.cfl));
  kv("solver.t_end", g17(cfg.solver.t_end));
  kv("solver.flux_scheme", "rusanov");
  kv("solver.source_scheme",
     cfg.solver.source_scheme == SourceScheme::backward_euler ? "backward_euler" : "exact_affine");
  kv("solver.record_every", g17(cfg.solver.record_every));
  kv("preset.name", cfg.preset.name);
  kv("preset.p_bar", g17(cfg.preset.p_bar));
  kv("preset.u_bar", g17(cfg.preset.u_bar));
  kv("preset.amplitude", g17(cfg.preset.amplitude));
  kv("preset.width", g17(cfg.preset.width));
  kv("preset.center", g17(cfg.preset.center));
  kv("preset.p_left", g17(cfg.preset.p_left));
  kv("preset.p_right", g17(cfg.preset.p_right));
  kv("preset.u_left", g17(cfg.preset.u_left));
  kv("preset.u_right", g17(cfg.preset.u_right));
  kv("preset.x_split", g17(cfg.preset.x_split));
  kv("outputs.dir", cfg.outputs.dir);
  kv("outputs.formats", cfg.outputs.formats);
  {
    std::string list;
    for (size_t i = 0; i < cfg.sweep.eps_list.size(); ++i) {
      if (i) list += ",";
      list += g17(cfg.sweep.eps_list[i]);
    }
    kv("sweep.eps_list", list);
  }
  kv("sweep.precheck", cfg.sweep.precheck ? "true" : "false");
  kv("sweep.synthetic", cfg.sweep.synthetic ? "true" : "false");
  kv("sweep.synthetic_exponent", g17(cfg.sweep.synthetic_exponent));
  kv("seed", std::to_string(cfg.seed));
  return out.str();
}

void save_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("save_config: cannot open '" + path + "' for writing");
  out << canonical_config(cfg);
}

}  // namespace hrm
