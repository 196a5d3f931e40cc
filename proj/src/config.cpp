#include "cata/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cata {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

KeyedConfig KeyedConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), std::filesystem::path(path).parent_path().string());
}

KeyedConfig KeyedConfig::parse_string(const std::string& text, const std::string& origin_dir) {
  KeyedConfig cfg;
  cfg.origin_dir_ = origin_dir.empty() ? "." : origin_dir;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    cfg.kv_[key] = value;
  }
  return cfg;
}

std::string KeyedConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : kv_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

void KeyedConfig::set(const std::string& key, double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  kv_[key] = buf;
}

void KeyedConfig::set(const std::string& key, int value) { kv_[key] = std::to_string(value); }

std::string KeyedConfig::get_string(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

double KeyedConfig::get_double(const std::string& key) const {
  const std::string raw = get_string(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not a number: '" + raw + "'");
  }
}

int KeyedConfig::get_int(const std::string& key) const {
  const std::string raw = get_string(key);
  try {
    std::size_t pos = 0;
    const int v = std::stoi(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not an integer: '" + raw + "'");
  }
}

std::vector<double> KeyedConfig::get_doubles(const std::string& key) const {
  const std::string raw = get_string(key);
  std::vector<double> out;
  std::istringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("config key " + key + ": not a number list: '" + raw + "'");
    }
  }
  if (out.empty()) throw ConfigError("config key " + key + ": empty list");
  return out;
}

std::string KeyedConfig::get_string(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double KeyedConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int KeyedConfig::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::string KeyedConfig::resolve_path(const std::string& value) const {
  std::filesystem::path p(value);
  if (p.is_absolute()) return value;
  return (std::filesystem::path(origin_dir_) / p).string();
}

void KeyedConfig::merge(const KeyedConfig& other) {
  for (const auto& [k, v] : other.kv_) kv_[k] = v;
  origin_dir_ = other.origin_dir_;
}

void KeyedConfig::reject_unknown_keys(const std::vector<std::string>& known) const {
  for (const auto& [k, v] : kv_) {
    (void)v;
    bool ok = false;
    for (const auto& kk : known)
      if (k == kk) { ok = true; break; }
    if (!ok) throw ConfigError("unknown config key: " + k);
  }
}

// ---------------------------------------------------------------------------

KeyedConfig default_keyed_config() {
  KeyedConfig c = KeyedConfig::parse_string("", ".");
  const SimConfig d{};

  c.set("hazard.cells", d.hazard.cells);
  c.set("hazard.copula", std::string("gumbel"));
  c.set("hazard.theta_a", d.hazard.theta_a);
  c.set("hazard.t_max", d.hazard.t_max);
  c.set("hazard.target_periods", std::string("100,250,1500"));
  c.set("hazard.target_fractions", std::string("0.006,0.012,0.10"));
  c.set("hazard.cell_inventory", std::string("builtin"));
  c.set("hazard.city_capital_share", d.hazard.city_capital_share);
  c.set("hazard.prone_cell_fraction", d.hazard.prone_cell_fraction);
  c.set("hazard.prone_capital_share", d.hazard.prone_capital_share);
  c.set("hazard.prone_t0", d.hazard.prone_t0);
  c.set("hazard.safe_t0", d.hazard.safe_t0);
  c.set("hazard.marginal_slope", d.hazard.marginal_slope);

  c.set("relief.moderate_cap", d.relief.moderate_cap);
  c.set("relief.severe_cap", d.relief.severe_cap);
  c.set("relief.severe_threshold", d.relief.severe_threshold);
  c.set("relief.firm_moderate_cap", d.relief.firm_moderate_cap);
  c.set("relief.firm_severe_cap", d.relief.firm_severe_cap);
  c.set("relief.self_finance_share", d.relief.self_finance_share);
  c.set("relief.disbursement_profile", std::string("0,1,1,1,1,1,1,1,1"));

  c.set("econ.sectors", d.econ.sectors);
  c.set("econ.population", d.econ.population);
  c.set("econ.cohorts", d.econ.cohorts);
  c.set("econ.gdp_quarterly", d.econ.gdp_quarterly);
  c.set("econ.capital_to_annual_gdp", d.econ.capital_to_annual_gdp);
  c.set("econ.dwellings_to_annual_gdp", d.econ.dwellings_to_annual_gdp);
  c.set("econ.rent_share_gdp", d.econ.rent_share_gdp);
  c.set("econ.utilization_target", d.econ.utilization_target);
  c.set("econ.unemployment_initial", d.econ.unemployment_initial);
  c.set("econ.mpc", d.econ.mpc);
  c.set("econ.wealth_spend_rate", d.econ.wealth_spend_rate);
  c.set("econ.labor_share", d.econ.labor_share);
  c.set("econ.lambda_expectation", d.econ.lambda_expectation);
  c.set("econ.capacity_smoothing", d.econ.capacity_smoothing);
  c.set("econ.market_share_adapt", d.econ.market_share_adapt);
  c.set("econ.delta_depreciation", d.econ.delta_depreciation);
  c.set("econ.nu_accelerator", d.econ.nu_accelerator);
  c.set("econ.outage_decay", d.econ.outage_decay);
  c.set("econ.debt_interest_rate", d.econ.debt_interest_rate);
  c.set("econ.participation_adapt", d.econ.participation_adapt);
  c.set("econ.backlog_order_rate", d.econ.backlog_order_rate);
  c.set("econ.recon_floor", d.econ.recon_floor);
  c.set("econ.backlog_decay", d.econ.backlog_decay);
  c.set("econ.household_rebuild_rate", d.econ.household_rebuild_rate);
  c.set("econ.max_leverage", d.econ.max_leverage);
  c.set("econ.bank_equity", d.econ.bank_equity);
  c.set("econ.loans_initial", d.econ.loans_initial);
  c.set("econ.tax_profit", d.econ.tax_profit);
  c.set("econ.gov_consumption", d.econ.gov_consumption);
  c.set("econ.benefit_replacement", d.econ.benefit_replacement);
  c.set("econ.price_eta", d.econ.price_eta);
  c.set("econ.price_cap", d.econ.price_cap);
  c.set("econ.infrastructure_share", d.econ.infrastructure_share);
  c.set("econ.demand_noise", d.econ.demand_noise);
  c.set("econ.io_matrix", std::string("builtin"));

  c.set("run.start_year", d.run.start_year);
  c.set("run.shock_year", d.run.shock_year);
  c.set("run.shock_phase", d.run.shock_phase);
  c.set("run.end_year", d.run.end_year);
  c.set("run.default_runs", d.run.default_runs);
  return c;
}

namespace {

void require(bool ok, const std::string& key, const std::string& why) {
  if (!ok) throw ConfigError("config key " + key + ": " + why);
}

}  // namespace

SimConfig sim_config_from(const KeyedConfig& raw) {
  const KeyedConfig defaults = default_keyed_config();
  KeyedConfig kc = defaults;
  kc.merge(raw);

  std::vector<std::string> known;
  for (const auto& [k, v] : defaults.entries()) {
    (void)v;
    known.push_back(k);
  }
  kc.reject_unknown_keys(known);

  SimConfig s;
  s.hazard.cells = kc.get_int("hazard.cells");
  s.hazard.copula = kc.get_string("hazard.copula");
  s.hazard.theta_a = kc.get_double("hazard.theta_a");
  s.hazard.t_max = kc.get_double("hazard.t_max");
  s.hazard.target_periods = kc.get_doubles("hazard.target_periods");
  s.hazard.target_fractions = kc.get_doubles("hazard.target_fractions");
  s.hazard.cell_inventory = kc.get_string("hazard.cell_inventory");
  if (s.hazard.cell_inventory != "builtin")
    s.hazard.cell_inventory = kc.resolve_path(s.hazard.cell_inventory);
  s.hazard.city_capital_share = kc.get_double("hazard.city_capital_share");
  s.hazard.prone_cell_fraction = kc.get_double("hazard.prone_cell_fraction");
  s.hazard.prone_capital_share = kc.get_double("hazard.prone_capital_share");
  s.hazard.prone_t0 = kc.get_double("hazard.prone_t0");
  s.hazard.safe_t0 = kc.get_double("hazard.safe_t0");
  s.hazard.marginal_slope = kc.get_double("hazard.marginal_slope");

  s.relief.moderate_cap = kc.get_double("relief.moderate_cap");
  s.relief.severe_cap = kc.get_double("relief.severe_cap");
  s.relief.severe_threshold = kc.get_double("relief.severe_threshold");
  s.relief.firm_moderate_cap = kc.get_double("relief.firm_moderate_cap");
  s.relief.firm_severe_cap = kc.get_double("relief.firm_severe_cap");
  s.relief.self_finance_share = kc.get_double("relief.self_finance_share");
  s.relief.disbursement_profile = kc.get_doubles("relief.disbursement_profile");

  s.econ.sectors = kc.get_int("econ.sectors");
  s.econ.population = kc.get_double("econ.population");
  s.econ.cohorts = kc.get_int("econ.cohorts");
  s.econ.gdp_quarterly = kc.get_double("econ.gdp_quarterly");
  s.econ.capital_to_annual_gdp = kc.get_double("econ.capital_to_annual_gdp");
  s.econ.dwellings_to_annual_gdp = kc.get_double("econ.dwellings_to_annual_gdp");
  s.econ.rent_share_gdp = kc.get_double("econ.rent_share_gdp");
  s.econ.utilization_target = kc.get_double("econ.utilization_target");
  s.econ.unemployment_initial = kc.get_double("econ.unemployment_initial");
  s.econ.mpc = kc.get_double("econ.mpc");
  s.econ.wealth_spend_rate = kc.get_double("econ.wealth_spend_rate");
  s.econ.labor_share = kc.get_double("econ.labor_share");
  s.econ.lambda_expectation = kc.get_double("econ.lambda_expectation");
  s.econ.capacity_smoothing = kc.get_double("econ.capacity_smoothing");
  s.econ.market_share_adapt = kc.get_double("econ.market_share_adapt");
  s.econ.delta_depreciation = kc.get_double("econ.delta_depreciation");
  s.econ.nu_accelerator = kc.get_double("econ.nu_accelerator");
  s.econ.outage_decay = kc.get_double("econ.outage_decay");
  s.econ.debt_interest_rate = kc.get_double("econ.debt_interest_rate");
  s.econ.participation_adapt = kc.get_double("econ.participation_adapt");
  s.econ.backlog_order_rate = kc.get_double("econ.backlog_order_rate");
  s.econ.recon_floor = kc.get_double("econ.recon_floor");
  s.econ.backlog_decay = kc.get_double("econ.backlog_decay");
  s.econ.household_rebuild_rate = kc.get_double("econ.household_rebuild_rate");
  s.econ.max_leverage = kc.get_double("econ.max_leverage");
  s.econ.bank_equity = kc.get_double("econ.bank_equity");
  s.econ.loans_initial = kc.get_double("econ.loans_initial");
  s.econ.tax_profit = kc.get_double("econ.tax_profit");
  s.econ.gov_consumption = kc.get_double("econ.gov_consumption");
  s.econ.benefit_replacement = kc.get_double("econ.benefit_replacement");
  s.econ.price_eta = kc.get_double("econ.price_eta");
  s.econ.price_cap = kc.get_double("econ.price_cap");
  s.econ.infrastructure_share = kc.get_double("econ.infrastructure_share");
  s.econ.demand_noise = kc.get_double("econ.demand_noise");
  s.econ.io_matrix = kc.get_string("econ.io_matrix");
  if (s.econ.io_matrix != "builtin") s.econ.io_matrix = kc.resolve_path(s.econ.io_matrix);

  s.run.start_year = kc.get_int("run.start_year");
  s.run.shock_year = kc.get_int("run.shock_year");
  s.run.shock_phase = kc.get_int("run.shock_phase");
  s.run.end_year = kc.get_int("run.end_year");
  s.run.default_runs = kc.get_int("run.default_runs");

  // ---- validation: name the offending key ----
  require(s.hazard.cells > 0, "hazard.cells", "must be positive");
  require(s.hazard.copula == "gumbel" || s.hazard.copula == "independence",
          "hazard.copula", "must be 'gumbel' or 'independence'");
  require(s.hazard.theta_a >= 0.0, "hazard.theta_a", "must be nonnegative");
  require(s.hazard.t_max > 1.0, "hazard.t_max", "must exceed 1");
  require(s.hazard.target_periods.size() == s.hazard.target_fractions.size(),
          "hazard.target_fractions", "must match hazard.target_periods in length");
  for (std::size_t i = 1; i < s.hazard.target_periods.size(); ++i)
    require(s.hazard.target_periods[i] > s.hazard.target_periods[i - 1],
            "hazard.target_periods", "must be strictly increasing");
  for (double f : s.hazard.target_fractions)
    require(f > 0.0 && f < 1.0, "hazard.target_fractions", "must lie in (0,1)");
  require(s.hazard.city_capital_share >= 0.0 && s.hazard.city_capital_share < 1.0,
          "hazard.city_capital_share", "must lie in [0,1)");
  require(s.hazard.prone_cell_fraction > 0.0 && s.hazard.prone_cell_fraction <= 1.0,
          "hazard.prone_cell_fraction", "must lie in (0,1]");
  require(s.hazard.prone_capital_share > 0.0 && s.hazard.prone_capital_share < 1.0,
          "hazard.prone_capital_share", "must lie in (0,1)");

  require(s.relief.moderate_cap >= 0.0 && s.relief.moderate_cap <= 1.0,
          "relief.moderate_cap", "must lie in [0,1]");
  require(s.relief.self_finance_share >= 0.0 && s.relief.self_finance_share <= 1.0,
          "relief.self_finance_share", "must lie in [0,1]");
  require(s.relief.firm_moderate_cap >= 0.0 && s.relief.firm_moderate_cap <= 1.0,
          "relief.firm_moderate_cap", "must lie in [0,1]");
  require(s.relief.firm_severe_cap >= 0.0 && s.relief.firm_severe_cap <= 1.0,
          "relief.firm_severe_cap", "must lie in [0,1]");
  require(s.relief.severe_cap >= 0.0 && s.relief.severe_cap <= 1.0,
          "relief.severe_cap", "must lie in [0,1]");
  require(s.relief.severe_threshold > 0.0, "relief.severe_threshold", "must be positive");
  double profile_sum = 0.0;
  for (double p : s.relief.disbursement_profile) {
    require(p >= 0.0, "relief.disbursement_profile", "entries must be nonnegative");
    profile_sum += p;
  }
  require(profile_sum > 0.0, "relief.disbursement_profile",
          "weights must sum to a positive value");

  require(s.econ.sectors >= 3 && s.econ.sectors <= 64, "econ.sectors", "must lie in [3,64]");
  require(s.econ.population > 0.0, "econ.population", "must be positive");
  require(s.econ.cohorts > 0, "econ.cohorts", "must be positive");
  require(s.econ.gdp_quarterly > 0.0, "econ.gdp_quarterly", "must be positive");
  require(s.econ.mpc >= 0.0 && s.econ.mpc <= 1.0, "econ.mpc", "must lie in [0,1]");
  require(s.econ.wealth_spend_rate > 0.0 && s.econ.wealth_spend_rate <= 1.0,
          "econ.wealth_spend_rate",
          "must lie in (0,1]; the stationary deposit stock scales with its inverse");
  require(s.econ.labor_share > 0.0 && s.econ.labor_share < 1.0, "econ.labor_share",
          "must lie in (0,1)");
  require(s.econ.lambda_expectation > 0.0 && s.econ.lambda_expectation <= 1.0,
          "econ.lambda_expectation", "must lie in (0,1]");
  require(s.econ.capacity_smoothing > 0.0 && s.econ.capacity_smoothing <= 1.0,
          "econ.capacity_smoothing", "must lie in (0,1]");
  require(s.econ.market_share_adapt > 0.0 && s.econ.market_share_adapt <= 1.0,
          "econ.market_share_adapt", "must lie in (0,1]");
  require(s.econ.delta_depreciation > 0.0 && s.econ.delta_depreciation < 1.0,
          "econ.delta_depreciation", "must lie in (0,1)");
  require(s.econ.nu_accelerator >= 0.0 && s.econ.nu_accelerator <= 1.0,
          "econ.nu_accelerator", "must lie in [0,1]");
  require(s.econ.outage_decay >= 0.0 && s.econ.outage_decay < 1.0,
          "econ.outage_decay", "must lie in [0,1)");
  require(s.econ.debt_interest_rate >= 0.0 && s.econ.debt_interest_rate < 0.05,
          "econ.debt_interest_rate", "must lie in [0,0.05)");
  require(s.econ.participation_adapt >= 0.0 && s.econ.participation_adapt <= 1.0,
          "econ.participation_adapt", "must lie in [0,1]");
  require(s.econ.backlog_order_rate > 0.0 && s.econ.backlog_order_rate <= 1.0,
          "econ.backlog_order_rate", "must lie in (0,1]");
  require(s.econ.recon_floor >= 0.0 && s.econ.recon_floor <= 0.05,
          "econ.recon_floor", "must lie in [0,0.05]");
  require(s.econ.backlog_decay >= 0.0 && s.econ.backlog_decay < 1.0,
          "econ.backlog_decay", "must lie in [0,1)");
  require(s.econ.household_rebuild_rate >= 0.0 && s.econ.household_rebuild_rate <= 1.0,
          "econ.household_rebuild_rate", "must lie in [0,1]");
  require(s.econ.max_leverage > 0.0, "econ.max_leverage", "must be positive");
  require(s.econ.bank_equity > 0.0, "econ.bank_equity", "must be positive");
  require(s.econ.loans_initial >= 0.0, "econ.loans_initial", "must be nonnegative");
  require(s.econ.tax_profit >= 0.0 && s.econ.tax_profit < 1.0, "econ.tax_profit",
          "must lie in [0,1)");
  require(s.econ.utilization_target > 0.0 && s.econ.utilization_target <= 1.0,
          "econ.utilization_target", "must lie in (0,1]");
  require(s.econ.unemployment_initial >= 0.0 && s.econ.unemployment_initial < 1.0,
          "econ.unemployment_initial", "must lie in [0,1)");
  require(s.econ.benefit_replacement >= 0.0 && s.econ.benefit_replacement <= 1.0,
          "econ.benefit_replacement", "must lie in [0,1]");
  require(s.econ.price_eta >= 0.0, "econ.price_eta", "must be nonnegative");
  require(s.econ.price_cap >= 0.0, "econ.price_cap", "must be nonnegative");
  require(s.econ.infrastructure_share >= 0.0 && s.econ.infrastructure_share < 1.0,
          "econ.infrastructure_share", "must lie in [0,1)");
  require(s.econ.demand_noise >= 0.0, "econ.demand_noise", "must be nonnegative");
  require(s.econ.gov_consumption >= 0.0, "econ.gov_consumption", "must be nonnegative");
  require(s.econ.gov_consumption < s.econ.gdp_quarterly, "econ.gov_consumption",
          "must be below quarterly GDP");

  require(s.run.shock_year > s.run.start_year, "run.shock_year",
          "must leave at least one pre-shock year");
  require(s.run.shock_phase >= 0 && s.run.shock_phase <= 3, "run.shock_phase",
          "must be a quarter index in [0,3]");
  require(s.run.end_year >= s.run.shock_year, "run.end_year", "must not precede shock year");
  require(s.run.default_runs > 0, "run.default_runs", "must be positive");
  return s;
}

}  // namespace cata
