#pragma once
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cata {

// Raised for malformed files, unknown keys, or out-of-range values; the CLI
// maps it to exit code 2. what() always names the offending key or line.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Flat "key = value" text config. Keys are dotted lowercase identifiers,
// '#' starts a comment, values are kept verbatim (typed parsing happens on
// access). Serialization is canonical: keys sorted, single-space separators.
class KeyedConfig {
 public:
  static KeyedConfig parse_file(const std::string& path);
  static KeyedConfig parse_string(const std::string& text,
                                  const std::string& origin_dir = ".");

  std::string serialize() const;

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  void set(const std::string& key, double value);
  void set(const std::string& key, int value);

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;  // comma list

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;

  // path values are resolved relative to the config file's directory
  std::string resolve_path(const std::string& value) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }
  const std::string& origin_dir() const { return origin_dir_; }

  // overlay other's entries on top of this one
  void merge(const KeyedConfig& other);

  // throws ConfigError if any key is not in the known set
  void reject_unknown_keys(const std::vector<std::string>& known) const;

 private:
  std::map<std::string, std::string> kv_;
  std::string origin_dir_ = ".";
};

// ----- typed simulation config -------------------------------------------

struct HazardConfig {
  int cells = 200;
  std::string copula = "gumbel";  // or "independence"
  double theta_a = 0.4;           // theta(T) = 1 + theta_a * ln T
  double t_max = 1e4;
  std::vector<double> target_periods = {100.0, 250.0, 1500.0};
  std::vector<double> target_fractions = {0.006, 0.012, 0.10};
  std::string cell_inventory = "builtin";  // or a CSV path
  // builtin synthetic grid structure
  double city_capital_share = 0.18;
  double prone_cell_fraction = 0.45;
  double prone_capital_share = 0.25;
  double prone_t0 = 1.5;
  double safe_t0 = 5.0;
  double marginal_slope = 0.1;  // c_r center value
};

struct ReliefConfig {
  double moderate_cap = 1.0;
  double severe_cap = 1.0 / 3.0;
  double severe_threshold = 0.03;  // capital-loss fraction separating regimes
  double firm_moderate_cap = 1.0;   // government share of firm reconstruction, moderate
  double firm_severe_cap = 0.8;     // government share of firm reconstruction, severe
  double self_finance_share = 0.20;  // uncompensated dwelling damage households still rebuild
  // relative payout weights per quarter from the shock quarter on; default is
  // an administrative one-quarter delay, then eight equal installments
  std::vector<double> disbursement_profile = {0, 1, 1, 1, 1, 1, 1, 1, 1};
};

struct EconConfig {
  int sectors = 10;
  double population = 1e6;
  int cohorts = 1000;
  double gdp_quarterly = 100.0;
  double capital_to_annual_gdp = 3.0;
  double dwellings_to_annual_gdp = 1.5;
  double rent_share_gdp = 0.10;
  double utilization_target = 0.85;
  double unemployment_initial = 0.05;
  double mpc = 0.8;
  double wealth_spend_rate = 0.02;
  double debt_interest_rate = 0.008;  // quarterly rate the government pays on its debt
  double labor_share = 0.7;  // wage bill as a share of market value added
  double lambda_expectation = 0.5;
  double capacity_smoothing = 0.08;  // quarterly weight of the capacity-planning demand signal
  double market_share_adapt = 0.15;  // quarterly pull of market share toward capital share
  double delta_depreciation = 0.0125;
  double nu_accelerator = 0.25;
  double outage_decay = 0.75;  // business-interruption fraction carried into the next quarter
  double participation_adapt = 0.35;  // quarterly pull of participation toward structural unemployment
  double backlog_order_rate = 0.06;
  double recon_floor = 0.0005;  // minimum rebuild pace, share of sector capital per quarter  // share of reconstruction backlog ordered per quarter
  double backlog_decay = 0.06;  // share of outstanding reconstruction plans abandoned per quarter
  double household_rebuild_rate = 0.05;  // share of deposits usable per quarter
  double max_leverage = 10.0;
  double bank_equity = 40.0;
  double loans_initial = 360.0;
  double tax_profit = 0.20;
  double gov_consumption = 20.0;
  double benefit_replacement = 0.5;
  double price_eta = 0.05;
  double price_cap = 0.02;
  double infrastructure_share = 0.15;
  double demand_noise = 0.0;
  std::string io_matrix = "builtin";  // or a CSV path
};

struct RunConfig {
  int start_year = 2013;
  int shock_year = 2014;
  int shock_phase = 2;  // quarter of the shock year in which the event lands (0-3)
  int end_year = 2023;
  int default_runs = 50;
};

struct SimConfig {
  HazardConfig hazard;
  ReliefConfig relief;
  EconConfig econ;
  RunConfig run;

  int horizon_quarters() const { return (run.end_year - run.start_year + 1) * 4; }
  int shock_quarter() const { return (run.shock_year - run.start_year) * 4 + run.shock_phase; }
};

KeyedConfig default_keyed_config();
SimConfig sim_config_from(const KeyedConfig& kc);  // validates, throws ConfigError

}  // namespace cata
