#include "wicknls/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wicknls {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& val) {
  if (val == "inf") return INFINITY;
  try {
    size_t used = 0;
    double x = std::stod(val, &used);
    if (used != val.size()) throw std::invalid_argument(val);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " wants a number, got '" + val + "'");
  }
}

int64_t parse_int(const std::string& key, const std::string& val) {
  int64_t x = 0;
  auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), x);
  if (ec != std::errc() || ptr != val.data() + val.size())
    throw ConfigError("config: " + key + " wants an integer, got '" + val + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& val) {
  if (val == "on" || val == "true" || val == "1") return true;
  if (val == "off" || val == "false" || val == "0") return false;
  throw ConfigError("config: " + key + " wants on/off, got '" + val + "'");
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::strang_primitive: return "strang";
    case Scheme::direct_v_rk4: return "direct_v";
    case Scheme::dense_oracle: return "dense_oracle";
  }
  return "strang";
}

std::string norm_kind_name(NormKind k) {
  switch (k) {
    case NormKind::lebesgue: return "lebesgue";
    case NormKind::sobolev_w1p: return "w1p";
    case NormKind::sobolev_hs: return "hs";
    case NormKind::besov: return "besov";
    case NormKind::holder: return "holder";
  }
  return "hs";
}

std::string fmt_num(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

void apply_config_line(RunConfig& cfg, const std::string& raw) {
  std::string line = raw.substr(0, raw.find('#'));
  line = trim(line);
  if (line.empty()) return;
  size_t eq = line.find('=');
  if (eq == std::string::npos)
    throw ConfigError("config: expected key = value, got '" + trim(raw) + "'");
  std::string key = trim(line.substr(0, eq));
  std::string val = trim(line.substr(eq + 1));
  if (key.empty() || val.empty())
    throw ConfigError("config: expected key = value, got '" + trim(raw) + "'");

  if (key == "grid.n") {
    cfg.sim.grid.n = int(parse_int(key, val));
  } else if (key == "box.L") {
    cfg.sim.grid.L = parse_double(key, val);
  } else if (key == "eps") {
    cfg.sim.eps = parse_double(key, val);
  } else if (key == "seed") {
    cfg.sim.seed = uint64_t(parse_int(key, val));
  } else if (key == "stream") {
    cfg.sim.stream = uint32_t(parse_int(key, val));
  } else if (key == "dt") {
    cfg.sim.dt = parse_double(key, val);
  } else if (key == "T") {
    cfg.sim.T = parse_double(key, val);
  } else if (key == "p") {
    cfg.sim.p = parse_double(key, val);
  } else if (key == "lambda") {
    cfg.sim.lambda = parse_double(key, val);
  } else if (key == "scheme") {
    if (val == "strang")
      cfg.sim.scheme = Scheme::strang_primitive;
    else if (val == "direct_v")
      cfg.sim.scheme = Scheme::direct_v_rk4;
    else if (val == "dense_oracle")
      cfg.sim.scheme = Scheme::dense_oracle;
    else
      throw ConfigError("config: scheme must be strang|direct_v|dense_oracle, got '" + val +
                        "'");
  } else if (key == "cadence") {
    cfg.sim.cadence = int(parse_int(key, val));
  } else if (key == "renormalize") {
    cfg.sim.renormalize = parse_bool(key, val);
  } else if (key == "dealias") {
    cfg.sim.dealias = parse_bool(key, val);
  } else if (key == "resolution.allow_coarse") {
    cfg.sim.allow_coarse = parse_bool(key, val);
  } else if (key == "noise.amplitude") {
    cfg.sim.amplitude = parse_double(key, val);
  } else if (key == "out.dir") {
    cfg.out_dir = val;
  } else if (key == "ladder.kmin") {
    cfg.ladder_kmin = int(parse_int(key, val));
  } else if (key == "ladder.kmax") {
    cfg.ladder_kmax = int(parse_int(key, val));
  } else if (key == "mc.M") {
    cfg.mc_M = int(parse_int(key, val));
  } else if (key == "norm.kind") {
    if (val == "lebesgue")
      cfg.norm.kind = NormKind::lebesgue;
    else if (val == "w1p")
      cfg.norm.kind = NormKind::sobolev_w1p;
    else if (val == "hs")
      cfg.norm.kind = NormKind::sobolev_hs;
    else if (val == "besov")
      cfg.norm.kind = NormKind::besov;
    else if (val == "holder")
      cfg.norm.kind = NormKind::holder;
    else
      throw ConfigError("config: norm.kind must be lebesgue|w1p|hs|besov|holder, got '" +
                        val + "'");
  } else if (key == "norm.alpha") {
    cfg.norm.alpha = parse_double(key, val);
  } else if (key == "norm.p") {
    cfg.norm.p = parse_double(key, val);
  } else if (key == "norm.q") {
    cfg.norm.q = parse_double(key, val);
  } else if (key == "norm.mu") {
    cfg.norm.mu = parse_double(key, val);
  } else if (key == "datum") {
    if (val != "gauss" && val != "smooth")
      throw ConfigError("config: datum must be gauss|smooth, got '" + val + "'");
    cfg.datum = val;
  } else if (key == "datum.kappa") {
    cfg.datum_kappa = parse_double(key, val);
  } else if (key == "datum.seed") {
    cfg.datum_seed = uint64_t(parse_int(key, val));
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) apply_config_line(cfg, line);
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "grid.n = " << cfg.sim.grid.n << '\n';
  os << "box.L = " << fmt_num(cfg.sim.grid.L) << '\n';
  os << "eps = " << fmt_num(cfg.sim.eps) << '\n';
  os << "seed = " << cfg.sim.seed << '\n';
  os << "stream = " << cfg.sim.stream << '\n';
  os << "dt = " << fmt_num(cfg.sim.dt) << '\n';
  os << "T = " << fmt_num(cfg.sim.T) << '\n';
  os << "p = " << fmt_num(cfg.sim.p) << '\n';
  os << "lambda = " << fmt_num(cfg.sim.lambda) << '\n';
  os << "scheme = " << scheme_name(cfg.sim.scheme) << '\n';
  os << "cadence = " << cfg.sim.cadence << '\n';
  os << "renormalize = " << (cfg.sim.renormalize ? "on" : "off") << '\n';
  os << "dealias = " << (cfg.sim.dealias ? "on" : "off") << '\n';
  os << "resolution.allow_coarse = " << (cfg.sim.allow_coarse ? "on" : "off") << '\n';
  os << "noise.amplitude = " << fmt_num(cfg.sim.amplitude) << '\n';
  os << "ladder.kmin = " << cfg.ladder_kmin << '\n';
  os << "ladder.kmax = " << cfg.ladder_kmax << '\n';
  os << "mc.M = " << cfg.mc_M << '\n';
  os << "norm.kind = " << norm_kind_name(cfg.norm.kind) << '\n';
  os << "norm.alpha = " << fmt_num(cfg.norm.alpha) << '\n';
  os << "norm.p = " << fmt_num(cfg.norm.p) << '\n';
  os << "norm.q = " << fmt_num(cfg.norm.q) << '\n';
  os << "norm.mu = " << fmt_num(cfg.norm.mu) << '\n';
  os << "datum = " << cfg.datum << '\n';
  os << "datum.kappa = " << fmt_num(cfg.datum_kappa) << '\n';
  os << "datum.seed = " << cfg.datum_seed << '\n';
  if (!cfg.out_dir.empty()) os << "out.dir = " << cfg.out_dir << '\n';
  return os.str();
}

}  // namespace wicknls
