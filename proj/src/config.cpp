#include "ymflow/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "ymflow/errors.hpp"
#include "ymflow/fields.hpp"

namespace ymflow {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Section key sets, kept strict so typos fail loudly instead of silently
// falling back to defaults.
bool known_key(const std::string& key) {
  static const std::map<std::string, int> allowed = {
      {"flow.group", 0},   {"flow.n", 0},      {"flow.l", 0},
      {"flow.dt", 0},      {"flow.theta", 0},  {"flow.t", 0},
      {"flow.bc", 0},      {"flow.flow", 0},   {"flow.scheme", 0},
      {"flow.epsilon", 0}, {"flow.record_stride", 0},
      {"flow.seed", 0},    {"flow.store", 0},
      {"initial.kind", 0}, {"initial.amplitude", 0},
      {"initial.kmax", 0}, {"initial.noise", 0},
      {"wilson.times", 0},
  };
  if (allowed.count(key)) return true;
  if (key.rfind("wilson.loop", 0) == 0) return true;
  if (key.rfind("output.", 0) == 0) return true;  // free-form output options
  return false;
}

}  // namespace

std::string ConfigFile::get(const std::string& key, const std::string& fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double ConfigFile::get_num(const std::string& key, double fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &pos);
  } catch (const std::exception&) {
    throw ConfigParseError("key '" + key + "' is not a number: " + it->second);
  }
  if (pos != it->second.size())
    throw ConfigParseError("key '" + key + "' has trailing characters: " + it->second);
  return v;
}

long long ConfigFile::get_int(const std::string& key, long long fallback) const {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(it->second, &pos);
  } catch (const std::exception&) {
    throw ConfigParseError("key '" + key + "' is not an integer: " + it->second);
  }
  if (pos != it->second.size())
    throw ConfigParseError("key '" + key + "' has trailing characters: " + it->second);
  return v;
}

ConfigFile parse_config_text(const std::string& text) {
  ConfigFile cf;
  cf.text = text;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigParseError("line " + std::to_string(lineno) + ": unterminated section");
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (section.empty())
        throw ConfigParseError("line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigParseError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = lower(trim(line.substr(0, eq)));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigParseError("line " + std::to_string(lineno) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (!known_key(key))
      throw ConfigParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!cf.kv.emplace(key, val).second)
      throw ConfigParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return cf;
}

ConfigFile parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigParseError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

FlowConfig flow_config_from(const ConfigFile& cf) {
  FlowConfig cfg;
  const std::string group = lower(cf.get("flow.group", "su2"));
  if (group == "u1")
    cfg.group = GroupKind::U1;
  else if (group == "su2")
    cfg.group = GroupKind::SU2;
  else
    throw ConfigParseError("flow.group must be u1 or su2, got " + group);

  cfg.n = static_cast<int>(cf.get_int("flow.n", cfg.n));
  cfg.L = cf.get_num("flow.l", cfg.L);
  cfg.dt = cf.get_num("flow.dt", cfg.dt);
  cfg.theta = cf.get_num("flow.theta", cfg.theta);
  cfg.T = cf.get_num("flow.t", cfg.T);
  cfg.epsilon = cf.get_num("flow.epsilon", cfg.epsilon);
  cfg.record_stride = static_cast<int>(cf.get_int("flow.record_stride", cfg.record_stride));
  cfg.seed = static_cast<std::uint64_t>(cf.get_int("flow.seed", static_cast<long long>(cfg.seed)));

  const std::string bc = lower(cf.get("flow.bc", "dirichlet"));
  if (bc == "dirichlet")
    cfg.bc = FlowBc::Dirichlet;
  else if (bc == "neumann")
    cfg.bc = FlowBc::Neumann;
  else if (bc == "marini")
    cfg.bc = FlowBc::Marini;
  else
    throw ConfigParseError("flow.bc must be dirichlet, neumann, or marini, got " + bc);

  const std::string fl = lower(cf.get("flow.flow", "direct"));
  if (fl == "direct")
    cfg.flow = FlowKind::Direct;
  else if (fl == "parabolic")
    cfg.flow = FlowKind::Parabolic;
  else
    throw ConfigParseError("flow.flow must be direct or parabolic, got " + fl);

  const std::string sc = lower(cf.get("flow.scheme", "rk4"));
  if (sc == "euler")
    cfg.scheme = Scheme::Euler;
  else if (sc == "rk4")
    cfg.scheme = Scheme::RK4;
  else
    throw ConfigParseError("flow.scheme must be euler or rk4, got " + sc);

  const std::string st = lower(cf.get("flow.store", "none"));
  if (st == "none")
    cfg.store = StoreFields::None;
  else if (st == "b")
    cfg.store = StoreFields::B;
  else if (st == "ab")
    cfg.store = StoreFields::AB;
  else
    throw ConfigParseError("flow.store must be none, b, or ab, got " + st);

  try {
    cfg.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigParseError(e.what());
  }
  return cfg;
}

InitialSpec initial_spec_from(const ConfigFile& cf) {
  InitialSpec spec;
  spec.kind = lower(cf.get("initial.kind", spec.kind));
  spec.amplitude = cf.get_num("initial.amplitude", spec.amplitude);
  spec.kmax = static_cast<int>(cf.get_int("initial.kmax", spec.kmax));
  spec.noise = cf.get_num("initial.noise", spec.noise);
  return spec;
}

Cochain make_initial(const CubeMesh& mesh, const FlowConfig& cfg, const InitialSpec& spec) {
  const BcKind bc = cfg.bc == FlowBc::Dirichlet   ? BcKind::DirichletTan0
                    : cfg.bc == FlowBc::Neumann   ? BcKind::NeumannNorm0
                                                  : BcKind::None;
  if (spec.kind == "zero") return zero_field(mesh, cfg.group, 1);
  if (spec.kind == "random_smooth")
    return random_smooth(mesh, cfg.group, 1, bc, cfg.seed, spec.amplitude, spec.kmax);
  if (spec.kind == "interior_bump")
    return interior_bump(mesh, cfg.group, 1, cfg.seed, spec.amplitude);
  if (spec.kind == "white_noise")
    return white_noise(mesh, cfg.group, 1, cfg.seed, spec.amplitude);
  if (spec.kind == "pure_gauge")
    return pure_gauge(smooth_gauge(mesh, cfg.group, cfg.seed, spec.amplitude, true));
  if (spec.kind == "noisy_smooth") {
    Cochain a = random_smooth(mesh, cfg.group, 1, bc, cfg.seed, spec.amplitude, spec.kmax);
    a += white_noise(mesh, cfg.group, 1, cfg.seed + 0x9e3779b97f4a7c15ull, spec.noise);
    return a;
  }
  throw ConfigParseError("unknown initial.kind: " + spec.kind);
}

WilsonSpec wilson_spec_from(const ConfigFile& cf) {
  WilsonSpec spec;
  if (cf.has("wilson.times")) {
    spec.times.clear();
    std::istringstream in(cf.kv.at("wilson.times"));
    std::string tok;
    while (in >> tok) {
      // allow comma separation as well
      if (!tok.empty() && tok.back() == ',') tok.pop_back();
      if (tok.empty()) continue;
      try {
        spec.times.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigParseError("wilson.times entry is not a number: " + tok);
      }
    }
    if (spec.times.empty()) throw ConfigParseError("wilson.times is empty");
  }
  for (const auto& [key, val] : cf.kv) {
    if (key.rfind("wilson.loop", 0) != 0) continue;
    std::istringstream in(val);
    std::string plane;
    LoopSpec loop;
    if (!(in >> plane >> loop.i >> loop.j >> loop.k >> loop.a >> loop.b))
      throw ConfigParseError("loop '" + key + "' needs: plane i j k a b");
    plane = lower(plane);
    if (plane == "xy")
      loop.plane = LoopPlane::xy;
    else if (plane == "yz")
      loop.plane = LoopPlane::yz;
    else if (plane == "zx")
      loop.plane = LoopPlane::zx;
    else
      throw ConfigParseError("loop '" + key + "' plane must be xy, yz, or zx");
    spec.loops.push_back(loop);
  }
  return spec;
}

}  // namespace ymflow
