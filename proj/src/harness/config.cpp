#include "wz/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wz {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size()) throw std::invalid_argument("config: " + key + " expects a number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size()) throw std::invalid_argument("config: " + key + " expects an integer, got '" + v + "'");
  return x;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    if (!v.empty() && v[0] != '-') x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw std::invalid_argument("config: " + key + " expects an unsigned integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: " + key + " expects true or false, got '" + v + "'");
}

}  // namespace

SystemSelector parse_system_selector(const std::string& text) {
  if (text == "se") return SystemSelector::Simplified;
  if (text == "e") return SystemSelector::Full;
  if (text == "both") return SystemSelector::Both;
  throw std::invalid_argument("system must be se, e or both, got '" + text + "'");
}

std::string to_string(SystemSelector s) {
  switch (s) {
    case SystemSelector::Simplified: return "se";
    case SystemSelector::Full: return "e";
    case SystemSelector::Both: return "both";
  }
  return "both";
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double("list", item));
  return out;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (n < 16 || n % 2 != 0) fail("n must be even and >= 16");
  if (m < 1) fail("m must be positive");
  if (eps.empty()) fail("eps list is empty");
  for (double e : eps)
    if (!(e > 0.0)) fail("every eps must be > 0");
  if (!(rho > 1.5 && rho < 2.0)) fail("rho must lie in (1.5, 2)");
  if (!(horizon > 0.0)) fail("horizon must be > 0");
  if (k_max < 1 || k_max >= n / 3) fail("k_max must be >= 1 and below n/3");
  if (!(decay > 0.0)) fail("decay must be > 0");
  if (!(amplitude >= 0.0)) fail("amplitude must be >= 0");
  if (replicas < 1) fail("replicas must be >= 1");
  if (checkpoints < 1) fail("checkpoints must be >= 1");
  if (!(tolerance_scale > 0.0)) fail("tolerance_scale must be > 0");
  if (!(diagnostic_scale > 0.0)) fail("diagnostic_scale must be > 0");
  if (test_functions.empty()) fail("test_functions is empty");
  const double step = time_step();
  if (!(step > 0.0)) fail("dt must be > 0");
  for (double e : eps)
    if (amplitude > 0.0 && step > e * e / 10.0 * (1.0 + 1e-12))
      fail("dt exceeds eps^2/10 for eps = " + std::to_string(e));
  const double r = horizon / step;
  if (std::abs(r - std::round(r)) > 1e-9 * r) fail("horizon must be a multiple of dt");
  if (steps() < checkpoints) fail("fewer steps than checkpoints");
}

double ExperimentConfig::time_step() const {
  if (dt > 0.0) return dt;
  const double e = *std::min_element(eps.begin(), eps.end());
  return std::min(dt_max, e * e / 10.0);
}

long ExperimentConfig::steps() const { return std::lround(horizon / time_step()); }

double ExperimentConfig::mesh(double epsilon) const { return std::pow(epsilon, rho); }

void set_config_value(ExperimentConfig& cfg, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in), v = trim(value_in);
  if (key == "n") cfg.n = static_cast<int>(to_integer(key, v));
  else if (key == "m") cfg.m = static_cast<int>(to_integer(key, v));
  else if (key == "eps") cfg.eps = parse_double_list(v);
  else if (key == "rho") cfg.rho = to_double(key, v);
  else if (key == "dt") cfg.dt = to_double(key, v);
  else if (key == "dt_max") cfg.dt_max = to_double(key, v);
  else if (key == "horizon") cfg.horizon = to_double(key, v);
  else if (key == "k_max") cfg.k_max = static_cast<int>(to_integer(key, v));
  else if (key == "decay") cfg.decay = to_double(key, v);
  else if (key == "amplitude") cfg.amplitude = to_double(key, v);
  else if (key == "replicas") cfg.replicas = static_cast<int>(to_integer(key, v));
  else if (key == "seed") cfg.seed = to_unsigned(key, v);
  else if (key == "system") cfg.system = parse_system_selector(v);
  else if (key == "test_functions") cfg.test_functions = split(v, ';');
  else if (key == "initial_condition") cfg.initial_condition = v;
  else if (key == "ic_seed") cfg.ic_seed = to_unsigned(key, v);
  else if (key == "matched_seeds") cfg.matched_seeds = to_bool(key, v);
  else if (key == "checkpoints") cfg.checkpoints = static_cast<int>(to_integer(key, v));
  else if (key == "advect_small_scales") cfg.advect_small_scales = to_bool(key, v);
  else if (key == "per_replica_rows") cfg.per_replica_rows = to_bool(key, v);
  else if (key == "workers") cfg.workers = static_cast<int>(to_integer(key, v));
  else if (key == "tolerance_scale") cfg.tolerance_scale = to_double(key, v);
  else if (key == "diagnostic_scale") cfg.diagnostic_scale = to_double(key, v);
  else if (key == "out") cfg.out = v;
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

ExperimentConfig load_config(const std::filesystem::path& file, ExperimentConfig base) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("config: cannot open " + file.string());
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not key=value");
    set_config_value(base, t.substr(0, eq), t.substr(eq + 1));
  }
  return base;
}

std::string dump_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  auto list = [&](const std::vector<double>& v) {
    std::ostringstream s;
    s.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
    return s.str();
  };
  std::string tf;
  for (std::size_t i = 0; i < cfg.test_functions.size(); ++i) tf += (i ? ";" : "") + cfg.test_functions[i];
  os << "n=" << cfg.n << "\nm=" << cfg.m << "\neps=" << list(cfg.eps) << "\nrho=" << cfg.rho << "\ndt=" << cfg.dt
     << "\ndt_max=" << cfg.dt_max << "\nhorizon=" << cfg.horizon << "\nk_max=" << cfg.k_max << "\ndecay=" << cfg.decay
     << "\namplitude=" << cfg.amplitude << "\nreplicas=" << cfg.replicas << "\nseed=" << cfg.seed
     << "\nsystem=" << to_string(cfg.system) << "\ntest_functions=" << tf
     << "\ninitial_condition=" << cfg.initial_condition << "\nic_seed=" << cfg.ic_seed
     << "\nmatched_seeds=" << (cfg.matched_seeds ? "true" : "false") << "\ncheckpoints=" << cfg.checkpoints
     << "\nadvect_small_scales=" << (cfg.advect_small_scales ? "true" : "false")
     << "\nper_replica_rows=" << (cfg.per_replica_rows ? "true" : "false") << "\nworkers=" << cfg.workers
     << "\ntolerance_scale=" << cfg.tolerance_scale << "\ndiagnostic_scale=" << cfg.diagnostic_scale
     << "\nout=" << cfg.out.string() << "\n";
  return os.str();
}

}  // namespace wz
