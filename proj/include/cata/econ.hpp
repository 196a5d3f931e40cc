#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "cata/config.hpp"
#include "cata/damage.hpp"
#include "cata/grid.hpp"
#include "cata/hazard.hpp"
#include "cata/leontief.hpp"
#include "cata/rng.hpp"

namespace cata {

// Sector-level structural tables: technical coefficients plus the final-demand
// split vectors. The builtin tables cover the 10-sector desk economy; other
// sector counts take A from a CSV and generic share vectors.
struct SectorTables {
  int sectors = 0;
  std::vector<double> a;  // row-major, a[i*S+j] = input of i per unit output of j
  std::vector<double> consumption_shares;
  std::vector<double> investment_shares;  // capital-goods suppliers
  std::vector<double> government_shares;
  int manufacturing = 1;
  int construction = 3;
  int real_estate = 8;
};

SectorTables builtin_sector_tables();  // sectors == 10
// io_csv_resolved ignored when ec.io_matrix == "builtin"
SectorTables sector_tables_for(const EconConfig& ec, const std::string& io_csv_resolved);

// One representative firm per cell x sector, index f = cell*S + s. Market
// share within the sector adapts with a lag, so freshly destroyed capacity is
// not instantly backfilled by survivors.
struct FirmBlock {
  int cells = 0;
  int sectors = 0;
  std::vector<double> capital;          // productive capital, firm-held
  std::vector<double> market_share;     // sums to 1 within each sector
  std::vector<double> recon_backlog;    // destroyed capital awaiting rebuild
  std::vector<double> pending_capital;  // delivered, credited next quarter
  std::vector<double> outage;           // business-interruption share of capacity

  std::size_t idx(int cell, int s) const {
    return static_cast<std::size_t>(cell) * static_cast<std::size_t>(sectors) +
           static_cast<std::size_t>(s);
  }
};

// Pooled per-sector financial and expectation state.
struct SectorBlock {
  std::vector<double> expected_fd;           // expected final demand (adaptive, fast)
  std::vector<double> expected_fd_capacity;  // slow signal used for capacity planning
  std::vector<double> liquidity;
  std::vector<double> loans;
  std::vector<double> loans_floor;        // initial stock, never amortized below
  std::vector<double> pending_dividends;  // declared last quarter, paid this one
  std::vector<double> kappa;              // capital per unit of quarterly capacity
  std::vector<double> labor_coeff;        // persons per unit of output
  std::vector<double> price;
  std::vector<double> base_output;  // stationary gross output (weights, utilization)
  std::vector<double> base_capital;  // stationary sector capital (reconstruction target)
};

struct CohortBlock {
  std::vector<double> count;
  std::vector<double> employed;
  std::vector<double> deposits;
  std::vector<double> dwellings;
  std::vector<double> dwelling_backlog;
  std::vector<double> pending_dwellings;
  std::vector<int> cell;
};

struct GovState {
  double debt = 0.0;
  double debt_target = 0.0;  // pre-shock debt level the fiscal rule defends
  double tax_income = 0.0;
  double tax_profit = 0.0;
  double consumption = 0.0;
  double recon_backlog = 0.0;            // destroyed infrastructure
  std::vector<double> relief_due;   // release schedule of the relief fund, front = this quarter
  double relief_available = 0.0;    // released but not yet paid out (reimbursement pool)
};

struct BankState {
  double equity = 0.0;
  double loans = 0.0;
  double reserves = 0.0;  // claims on government; tracks debt one-for-one
  double max_leverage = 10.0;
};

struct QuarterOutcome {
  double gdp_production = 0.0;
  double gdp_expenditure = 0.0;
  double consumption = 0.0;  // delivered, excluding imputed rent
  double investment = 0.0;   // delivered capital goods, all buyers
  double government = 0.0;   // delivered government consumption
  double imputed_rent = 0.0;
  double unemployment_rate = 0.0;
  double debt_to_gdp = 0.0;  // vs 4-quarter rolling GDP
  double price_index = 1.0;
  double relief_paid = 0.0;
  double gov_revenue = 0.0;      // taxes collected
  double gov_expenditure = 0.0;  // all government outlays
  double benefits_paid = 0.0;
  double recon_outlay = 0.0;  // infrastructure rebuild + firm reconstruction subsidies
  std::vector<double> sectoral_gva;  // at base prices; real estate includes rent
};

struct TimeSeries {
  std::vector<QuarterOutcome> quarters;
};

struct EconState {
  SimConfig cfg;
  SectorTables tables;
  Leontief leontief;
  CellGrid grid;
  FirmBlock firms;
  SectorBlock sectors;
  CohortBlock cohorts;
  GovState gov;
  BankState bank;
  double wage_rate = 0.0;
  double rent_rate = 0.0;  // imputed rent per unit of dwelling stock per quarter
  double firm_comp_share = 0.0;      // government share of firm reconstruction costs
  double dwelling_comp_share = 0.0;  // relief share of household rebuild spending
  double participation = 1.0;     // labor-force participation relative to initial
  double u_structural = 0.0;      // unemployment rate of the stationary state
  std::vector<double> last_final_demand;  // demand observed last quarter
  std::vector<double> rolling_gdp;        // last four quarters
  int quarter_index = 0;

  double sector_capital(int s) const;
  double total_dwellings() const;
  double household_deposits() const;
  double firm_liquidity() const;
  // |sum of net financial assets| over all agents; ~0 when stock-flow consistent
  double nfa_gap() const;

  explicit EconState(Leontief l) : leontief(std::move(l)) {}
};

// Builds the stationary baseline state: firm capital sized for target
// utilization, wages/taxes/deposits mutually consistent, all identities exact.
EconState init_economy(const SimConfig& cfg);

// Applies one event's per-cell loss fractions to firm capital and cohort
// dwellings, books reconstruction backlogs and the relief schedule. Purely a
// stock writedown: no financial stocks change here.
void apply_damage_to_state(EconState& st, const FloodEvent& ev, const DamageReport& rep);

QuarterOutcome step_quarter(EconState& st, Rng& rng);

}  // namespace cata
