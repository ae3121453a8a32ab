#include "ageinv/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ageinv {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return v;
  } catch (const std::exception&) {
    throw config_error("config key '" + key + "': cannot parse '" + value +
                       "' as a number");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) {
      throw std::invalid_argument("trailing characters");
    }
    return v;
  } catch (const std::exception&) {
    throw config_error("config key '" + key +
                       "': cannot parse '" + value + "' as an integer");
  }
}

std::vector<double> parse_table(const std::string& key,
                                const std::string& value) {
  std::vector<double> out;
  std::istringstream iss(value);
  std::string tok;
  while (iss >> tok) {
    out.push_back(parse_double(key, tok));
  }
  if (out.empty()) {
    throw config_error("config key '" + key + "': empty table");
  }
  return out;
}

void require_aligned(const std::string& key, double t, double delta_a) {
  const double ratio = t / delta_a;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw config_error("config key '" + key + "': value " +
                       std::to_string(t) +
                       " is not a multiple of grid.delta_a");
  }
}

}  // namespace

AgeGrid Config::make_grid() const {
  require_aligned("grid.a_max", a_max, delta_a);
  const auto cells =
      static_cast<std::size_t>(std::llround(a_max / delta_a));
  return AgeGrid(delta_a, cells, p);
}

ModelParams Config::make_model() const {
  const AgeGrid grid = make_grid();
  if (beta_profile == "const_on_support") {
    const double level = beta_level;
    const double cutoff = a_dagger;
    return ModelParams::from_profiles(
        grid, n, kappa, [&](double a) { return a < cutoff ? level : 0.0; },
        [&](double a) {
          if (mu_profile == "const") {
            return mu_const;
          }
          const auto i = std::min(
              static_cast<std::size_t>(a / delta_a), mu_table.size() - 1);
          return mu_table[i];
        },
        a_dagger);
  }
  if (beta_profile != "table") {
    throw config_error("config key 'model.beta_profile': unknown profile '" +
                       beta_profile + "'");
  }
  if (beta_table.size() != grid.n_cells()) {
    throw config_error("config key 'model.beta_table': expected " +
                       std::to_string(grid.n_cells()) + " entries");
  }
  std::vector<double> mu_cells;
  if (mu_profile == "const") {
    mu_cells.assign(grid.n_cells(), mu_const);
  } else if (mu_profile == "table") {
    if (mu_table.size() != grid.n_cells()) {
      throw config_error("config key 'model.mu_table': expected " +
                         std::to_string(grid.n_cells()) + " entries");
    }
    mu_cells = mu_table;
  } else {
    throw config_error("config key 'model.mu_profile': unknown profile '" +
                       mu_profile + "'");
  }
  return ModelParams(grid, n, kappa, beta_table, mu_cells, a_dagger);
}

GridFunction Config::make_initial_state() const {
  const AgeGrid grid = make_grid();
  GridFunction u0(grid, n);
  for (std::size_t i = 0; i < grid.n_cells(); ++i) {
    const double a = grid.cell_center(i);
    double v = 0.0;
    if (u0_profile == "exp") {
      v = u0_amplitude * std::exp(-u0_rate * a);
    } else if (u0_profile == "const") {
      v = u0_amplitude;
    } else if (u0_profile == "bump") {
      const double r = (a - 1.0) / std::max(u0_rate, 1e-6);
      v = std::max(0.0, u0_amplitude * (std::exp(-r * r) - 0.05));
    } else {
      throw config_error("config key 'run.u0_profile': unknown profile '" +
                         u0_profile + "'");
    }
    for (std::size_t c = 0; c < n; ++c) {
      u0(i, c) = v;
    }
  }
  // Split mass across species so the total stays inside the band.
  if (n > 1) {
    u0 *= 1.0 / static_cast<double>(n);
  }
  return project_to_C(u0, kappa);
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("cannot open config file '" + path + "'");
  }
  Config cfg;
  bool seed_seen = false;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw config_error("config line " + std::to_string(line_no) +
                           ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("config line " + std::to_string(line_no) +
                         ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section + "." + key;
    cfg.echo[full] = value;

    if (full == "grid.delta_a") {
      cfg.delta_a = parse_double(full, value);
    } else if (full == "grid.a_max") {
      cfg.a_max = parse_double(full, value);
    } else if (full == "grid.p") {
      cfg.p = parse_double(full, value);
    } else if (full == "grid.n") {
      cfg.n = parse_u64(full, value);
    } else if (full == "model.kappa") {
      cfg.kappa = parse_double(full, value);
    } else if (full == "model.beta_profile") {
      cfg.beta_profile = value;
    } else if (full == "model.beta_level") {
      cfg.beta_level = parse_double(full, value);
    } else if (full == "model.a_dagger") {
      cfg.a_dagger = parse_double(full, value);
    } else if (full == "model.beta_table") {
      cfg.beta_table = parse_table(full, value);
    } else if (full == "model.mu_profile") {
      cfg.mu_profile = value;
    } else if (full == "model.mu_const") {
      cfg.mu_const = parse_double(full, value);
    } else if (full == "model.mu_table") {
      cfg.mu_table = parse_table(full, value);
    } else if (full == "scheme.epsilon") {
      cfg.scheme.epsilon = parse_double(full, value);
    } else if (full == "scheme.tau") {
      cfg.scheme.tau = parse_double(full, value);
    } else if (full == "scheme.gamma") {
      cfg.scheme.gamma = parse_double(full, value);
    } else if (full == "scheme.rho") {
      cfg.scheme.rho = parse_double(full, value);
    } else if (full == "scheme.eta_min") {
      cfg.scheme.eta_min = parse_double(full, value);
    } else if (full == "scheme.max_knots") {
      cfg.scheme.max_knots = parse_u64(full, value);
    } else if (full == "run.seed") {
      cfg.seed = parse_u64(full, value);
      seed_seen = true;
    } else if (full == "run.u0_profile") {
      cfg.u0_profile = value;
    } else if (full == "run.u0_amplitude") {
      cfg.u0_amplitude = parse_double(full, value);
    } else if (full == "run.u0_rate") {
      cfg.u0_rate = parse_double(full, value);
    } else if (full == "run.levels") {
      cfg.levels = parse_u64(full, value);
    } else {
      throw config_error("config key '" + full + "': unknown key");
    }
  }
  if (!seed_seen) {
    throw config_error("config key 'run.seed': missing (seed is mandatory)");
  }
  if (!(cfg.delta_a > 0.0)) {
    throw config_error("config key 'grid.delta_a': must be positive");
  }
  require_aligned("scheme.tau", cfg.scheme.tau, cfg.delta_a);
  if (cfg.scheme.eta_min > 0.0) {
    require_aligned("scheme.eta_min", cfg.scheme.eta_min, cfg.delta_a);
  }
  cfg.scheme.seed = cfg.seed;
  return cfg;
}

Config default_config() {
  Config cfg;
  cfg.seed = 42;
  cfg.scheme.seed = 42;
  return cfg;
}

}  // namespace ageinv
