#include "bpreg/config.hpp"

#include <fstream>
#include <sstream>

namespace bpreg {

namespace {

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad value for '" + key + "': '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  const long l = static_cast<long>(d);
  if (static_cast<double>(l) != d)
    throw ConfigError("config: '" + key + "' must be an integer, got '" + v + "'");
  return l;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ','))
    out.push_back(to_double(key, item));
  if (out.empty()) throw ConfigError("config: '" + key + "' needs at least one value");
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  size_t b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
  if (key == "penalty") {
    penalty.family = family_from_name(value);
  } else if (key == "lambda") {
    penalty.lambda_star = to_double(key, value);
  } else if (key == "alpha") {
    penalty.alpha = to_double(key, value);
  } else if (key == "p") {
    penalty.p = to_double(key, value);
  } else if (key == "group_size") {
    penalty.group_size = static_cast<int>(to_long(key, value));
  } else if (key == "basis") {
    basis = basis_from_name(value);
  } else if (key == "tol") {
    solve.tol = to_double(key, value);
  } else if (key == "max_sweeps") {
    solve.max_sweeps = static_cast<int>(to_long(key, value));
  } else if (key == "init") {
    if (value == "zero") solve.init = Init::Zero;
    else if (value == "ols") solve.init = Init::Ols;
    else if (value == "warm") solve.init = Init::Warm;
    else throw ConfigError("config: 'init' must be zero, ols or warm, got '" + value + "'");
  } else if (key == "n_cases") {
    n_cases = static_cast<int>(to_long(key, value));
  } else if (key == "n_covariates") {
    n_covariates = static_cast<int>(to_long(key, value));
  } else if (key == "t_max") {
    t_max = to_double(key, value);
  } else if (key == "n_times") {
    n_times = static_cast<int>(to_long(key, value));
  } else if (key == "seed") {
    seed = static_cast<std::uint64_t>(to_long(key, value));
  } else if (key == "paths") {
    n_paths = static_cast<int>(to_long(key, value));
  } else if (key == "noise_scale") {
    noise_scale = to_double(key, value);
  } else if (key == "u0") {
    u0 = to_double(key, value);
  } else if (key == "beta") {
    beta_start = to_list(key, value);
  } else if (key == "beta_end") {
    beta_end = to_list(key, value);
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not key=value: '" + t + "'");
    cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return cfg;
}

CoefPath Config::true_path() const {
  if (n_times < 2) throw ConfigError("config: 'n_times' must be >= 2");
  if (n_cases < 1) throw ConfigError("config: 'n_cases' must be >= 1");
  if (n_covariates < 1) throw ConfigError("config: 'n_covariates' must be >= 1");
  std::vector<double> b0 = beta_start;
  if (b0.empty()) b0.assign(static_cast<size_t>(n_covariates), 1.0);
  if (static_cast<int>(b0.size()) != n_covariates)
    throw ConfigError("config: 'beta' must list n_covariates values");
  std::vector<double> b1 = beta_end.empty() ? b0 : beta_end;
  if (b1.size() != b0.size())
    throw ConfigError("config: 'beta_end' must match 'beta' in length");

  TimeGrid grid = TimeGrid::uniform(t_max, n_times);
  std::vector<Vec> betas;
  betas.reserve(static_cast<size_t>(n_times));
  for (int t = 0; t < n_times; ++t) {
    const double w = grid.t_max() > 0.0 ? grid[t] / grid.t_max() : 0.0;
    Vec b(n_covariates);
    for (int k = 0; k < n_covariates; ++k)
      b(k) = (1.0 - w) * b0[static_cast<size_t>(k)] + w * b1[static_cast<size_t>(k)];
    betas.push_back(std::move(b));
  }
  return CoefPath::plain(std::move(grid), std::move(betas));
}

}  // namespace bpreg
