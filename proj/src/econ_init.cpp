#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cata/econ.hpp"
#include "cata/kernels.hpp"

namespace cata {

namespace {

// 10-sector desk economy: 0 agriculture, 1 manufacturing, 2 utilities,
// 3 construction, 4 trade, 5 transport, 6 information, 7 finance,
// 8 real estate, 9 services. Column sums stay below 0.56, so the matrix is
// productive by the 1-norm bound.
constexpr double kBuiltinA[100] = {
    // agri  manu  util  cons  trade trans info  fin   re    serv
    0.05, 0.06, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.02,  // agriculture
    0.10, 0.25, 0.08, 0.30, 0.03, 0.10, 0.05, 0.00, 0.00, 0.04,  // manufacturing
    0.04, 0.04, 0.06, 0.02, 0.03, 0.02, 0.02, 0.01, 0.03, 0.03,  // utilities
    0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.10, 0.00,  // construction
    0.05, 0.06, 0.00, 0.06, 0.00, 0.04, 0.02, 0.02, 0.00, 0.04,  // trade
    0.04, 0.05, 0.03, 0.05, 0.08, 0.06, 0.00, 0.00, 0.00, 0.03,  // transport
    0.00, 0.02, 0.02, 0.01, 0.03, 0.02, 0.10, 0.06, 0.01, 0.04,  // information
    0.03, 0.02, 0.03, 0.02, 0.04, 0.04, 0.03, 0.10, 0.08, 0.04,  // finance
    0.00, 0.00, 0.00, 0.00, 0.06, 0.02, 0.03, 0.05, 0.00, 0.06,  // real estate
    0.04, 0.05, 0.04, 0.05, 0.06, 0.05, 0.08, 0.10, 0.05, 0.06,  // services
};

std::vector<double> load_io_csv(const std::string& path, int s) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open io matrix file: " + path);
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(s) * static_cast<std::size_t>(s));
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string tok;
    int col = 0;
    while (std::getline(ss, tok, ',')) {
      a.push_back(std::stod(tok));
      ++col;
    }
    if (col != s) {
      std::ostringstream os;
      os << "io matrix file " << path << ": row " << row + 1 << " has " << col
         << " entries, expected " << s;
      throw std::runtime_error(os.str());
    }
    ++row;
  }
  if (row != s) {
    std::ostringstream os;
    os << "io matrix file " << path << ": " << row << " rows, expected " << s;
    throw std::runtime_error(os.str());
  }
  return a;
}

void check_shares(const std::vector<double>& v, const char* what) {
  double s = 0.0;
  for (double x : v) {
    if (!(x >= 0.0)) throw std::runtime_error(std::string(what) + " share is negative");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-12) {
    std::ostringstream os;
    os << what << " shares sum to " << s << ", expected 1";
    throw std::runtime_error(os.str());
  }
}

}  // namespace

SectorTables builtin_sector_tables() {
  SectorTables t;
  t.sectors = 10;
  t.a.assign(kBuiltinA, kBuiltinA + 100);
  t.consumption_shares = {0.05, 0.22, 0.06, 0.00, 0.18, 0.08, 0.06, 0.07, 0.03, 0.25};
  t.investment_shares = {0.00, 0.40, 0.00, 0.55, 0.00, 0.00, 0.05, 0.00, 0.00, 0.00};
  t.government_shares = {0.00, 0.05, 0.02, 0.05, 0.00, 0.05, 0.03, 0.00, 0.00, 0.80};
  t.manufacturing = 1;
  t.construction = 3;
  t.real_estate = 8;
  return t;
}

SectorTables sector_tables_for(const EconConfig& ec, const std::string& io_csv_resolved) {
  if (ec.sectors == 10 && ec.io_matrix == "builtin") return builtin_sector_tables();
  SectorTables t;
  int s = ec.sectors;
  t.sectors = s;
  if (ec.io_matrix == "builtin") {
    throw std::runtime_error("builtin io matrix only covers 10 sectors; supply econ.io_matrix");
  }
  t.a = load_io_csv(io_csv_resolved, s);
  t.manufacturing = s > 1 ? 1 : 0;
  t.construction = s > 3 ? 3 : 0;
  t.real_estate = s > 8 ? 8 : s - 1;
  t.consumption_shares.assign(static_cast<std::size_t>(s), 1.0 / s);
  t.government_shares.assign(static_cast<std::size_t>(s), 1.0 / s);
  t.investment_shares.assign(static_cast<std::size_t>(s), 0.0);
  if (t.construction == t.manufacturing) {
    t.investment_shares[static_cast<std::size_t>(t.construction)] = 1.0;
  } else {
    t.investment_shares[static_cast<std::size_t>(t.construction)] = 0.6;
    t.investment_shares[static_cast<std::size_t>(t.manufacturing)] = 0.4;
  }
  return t;
}

double EconState::sector_capital(int s) const {
  double acc = 0.0;
  for (int r = 0; r < firms.cells; ++r) acc += firms.capital[firms.idx(r, s)];
  return acc;
}

double EconState::total_dwellings() const { return kernels::sum(cohorts.dwellings); }

double EconState::household_deposits() const { return kernels::sum(cohorts.deposits); }

double EconState::firm_liquidity() const { return kernels::sum(sectors.liquidity); }

double EconState::nfa_gap() const {
  double dep_h = household_deposits();
  double liq_f = firm_liquidity();
  double loans_f = kernels::sum(sectors.loans);
  double households = dep_h;
  double firms_nfa = liq_f - loans_f;
  double bank_nfa = bank.loans + bank.reserves - (dep_h + liq_f);
  double gov_nfa = -gov.debt;
  return std::abs(households + firms_nfa + bank_nfa + gov_nfa);
}

EconState init_economy(const SimConfig& cfg) {
  const EconConfig& ec = cfg.econ;
  int s = ec.sectors;
  SectorTables tables = sector_tables_for(ec, ec.io_matrix);
  check_shares(tables.consumption_shares, "consumption");
  check_shares(tables.investment_shares, "investment");
  check_shares(tables.government_shares, "government");

  Leontief leontief(s, tables.a);
  EconState st(std::move(leontief));
  st.cfg = cfg;
  st.tables = tables;

  // quarterly national accounts of the stationary baseline
  double gdp_q = ec.gdp_quarterly;
  double annual = 4.0 * gdp_q;
  double rent = ec.rent_share_gdp * gdp_q;
  double dwell_total = ec.dwellings_to_annual_gdp * annual;
  st.rent_rate = rent / dwell_total;
  double k_destructible = ec.capital_to_annual_gdp * annual;
  double k_firm_total = (1.0 - ec.infrastructure_share) * k_destructible;
  double i_star = ec.delta_depreciation * k_firm_total;
  double g_star = ec.gov_consumption;
  double c_star = gdp_q - rent - i_star - g_star;
  if (!(c_star > 0.0)) {
    throw std::runtime_error(
        "stationary consumption is non-positive: lower gov_consumption, rent share, or "
        "depreciation");
  }

  std::size_t su = static_cast<std::size_t>(s);
  std::vector<double> f_star(su);
  for (std::size_t j = 0; j < su; ++j) {
    f_star[j] = c_star * tables.consumption_shares[j] + i_star * tables.investment_shares[j] +
                g_star * tables.government_shares[j];
  }
  std::vector<double> x_star = st.leontief.requirements(f_star);
  std::vector<double> colsum(su, 0.0);
  for (std::size_t i = 0; i < su; ++i) {
    for (std::size_t j = 0; j < su; ++j) colsum[j] += tables.a[i * su + j];
  }
  std::vector<double> va(su);
  double va_total = 0.0;
  for (std::size_t j = 0; j < su; ++j) {
    if (!(x_star[j] > 0.0)) throw std::runtime_error("stationary gross output non-positive");
    va[j] = (1.0 - colsum[j]) * x_star[j];
    if (!(va[j] > 0.0)) throw std::runtime_error("stationary value added non-positive");
    va_total += va[j];
  }
  if (std::abs(va_total - (c_star + i_star + g_star)) > 1e-9 * va_total) {
    throw std::runtime_error("value added does not match final demand at initialization");
  }

  // sector capital, capacity ratios, labor
  std::vector<double> k_s(su), w_s(su), pi_s(su);
  double wage_bill = ec.labor_share * va_total;
  double labor_force = ec.population;
  double employed = (1.0 - ec.unemployment_initial) * labor_force;
  st.wage_rate = wage_bill / employed;

  st.sectors.expected_fd = f_star;
  st.sectors.expected_fd_capacity = f_star;
  st.sectors.kappa.resize(su);
  st.sectors.labor_coeff.resize(su);
  st.sectors.price.assign(su, 1.0);
  st.sectors.base_output = x_star;
  st.sectors.base_capital.assign(su, 0.0);
  st.sectors.liquidity.resize(su);
  st.sectors.loans.resize(su);
  st.sectors.loans_floor.resize(su);
  st.sectors.pending_dividends.resize(su);

  for (std::size_t j = 0; j < su; ++j) {
    k_s[j] = k_firm_total * va[j] / va_total;
    st.sectors.base_capital[j] = k_s[j];
    st.sectors.kappa[j] = k_s[j] * ec.utilization_target / x_star[j];
    w_s[j] = ec.labor_share * va[j];
    st.sectors.labor_coeff[j] = (w_s[j] / st.wage_rate) / x_star[j];
    pi_s[j] = va[j] - w_s[j] - ec.delta_depreciation * k_s[j];
    if (!(pi_s[j] > 0.0)) {
      throw std::runtime_error(
          "stationary profits non-positive: lower labor_share or depreciation");
    }
    st.sectors.liquidity[j] = w_s[j];  // one quarter of payroll as buffer
    st.sectors.loans[j] = ec.loans_initial * va[j] / va_total;
    st.sectors.loans_floor[j] = st.sectors.loans[j];
    st.sectors.pending_dividends[j] = (1.0 - ec.tax_profit) * pi_s[j];
  }

  double dividends = 0.0;
  for (std::size_t j = 0; j < su; ++j) dividends += st.sectors.pending_dividends[j];
  double benefits =
      ec.unemployment_initial * labor_force * st.wage_rate * ec.benefit_replacement;
  // Interest on the public debt is passed through the bank to households as
  // distributed profits, so it enters the taxable income base; the income tax
  // rate that balances the budget accounts for it exactly.
  double dep_h0 = (1.0 - ec.mpc) * c_star / ec.wealth_spend_rate;
  double debt0 = dep_h0 + wage_bill + ec.bank_equity - ec.loans_initial;
  double interest0 = ec.debt_interest_rate * std::max(0.0, debt0);
  double tau_inc = 1.0 - (c_star - benefits) / (wage_bill + dividends + interest0);
  if (!(tau_inc > 0.0 && tau_inc < 1.0)) {
    std::ostringstream os;
    os << "implied income tax rate " << tau_inc << " outside (0,1); adjust labor_share, "
       << "gov_consumption, or benefit_replacement";
    throw std::runtime_error(os.str());
  }
  double dep_h = (1.0 - ec.mpc) * c_star / ec.wealth_spend_rate;

  // cell inventory: capital at risk includes the infrastructure share
  std::vector<double> grid_capital(su);
  for (std::size_t j = 0; j < su; ++j) grid_capital[j] = k_s[j] / (1.0 - ec.infrastructure_share);
  if (cfg.hazard.cell_inventory == "builtin") {
    st.grid = synthetic_grid(cfg.hazard, grid_capital, dwell_total);
  } else {
    st.grid = load_grid(cfg.hazard.cell_inventory);
    if (st.grid.sectors != s) {
      throw std::runtime_error("cell inventory sector count does not match econ.sectors");
    }
    // keep the file's geography but renormalize stocks to the calibrated totals
    for (std::size_t j = 0; j < su; ++j) {
      double tot = 0.0;
      for (int r = 0; r < st.grid.cells(); ++r) {
        tot += st.grid.capital[static_cast<std::size_t>(r) * su + j];
      }
      if (!(tot > 0.0)) throw std::runtime_error("cell inventory has a zero-capital sector");
      double f = grid_capital[j] / tot;
      for (int r = 0; r < st.grid.cells(); ++r) {
        st.grid.capital[static_cast<std::size_t>(r) * su + j] *= f;
      }
    }
    double dtot = 0.0;
    for (double d : st.grid.dwellings) dtot += d;
    if (!(dtot > 0.0)) throw std::runtime_error("cell inventory has zero dwelling stock");
    for (double& d : st.grid.dwellings) d *= dwell_total / dtot;
  }

  int cells = st.grid.cells();
  st.firms.cells = cells;
  st.firms.sectors = s;
  std::size_t nf = static_cast<std::size_t>(cells) * su;
  st.firms.capital.resize(nf);
  st.firms.market_share.resize(nf);
  st.firms.recon_backlog.assign(nf, 0.0);
  st.firms.outage.assign(nf, 0.0);
  st.firms.pending_capital.resize(nf);
  for (int r = 0; r < cells; ++r) {
    for (std::size_t j = 0; j < su; ++j) {
      std::size_t f = st.firms.idx(r, static_cast<int>(j));
      st.firms.capital[f] = (1.0 - ec.infrastructure_share) * st.grid.capital[f];
      st.firms.market_share[f] = st.firms.capital[f] / k_s[j];
      // one quarter of replacement deliveries is already in transit
      st.firms.pending_capital[f] = ec.delta_depreciation * st.firms.capital[f];
    }
  }

  int h = ec.cohorts;
  if (h < 1) throw std::runtime_error("need at least one household cohort");
  std::size_t hu = static_cast<std::size_t>(h);
  st.cohorts.count.assign(hu, ec.population / h);
  st.cohorts.employed.assign(hu, (1.0 - ec.unemployment_initial) * ec.population / h);
  st.cohorts.deposits.assign(hu, dep_h / h);
  st.cohorts.dwellings.resize(hu);
  st.cohorts.dwelling_backlog.assign(hu, 0.0);
  st.cohorts.pending_dwellings.assign(hu, 0.0);
  st.cohorts.cell.resize(hu);
  std::vector<int> per_cell(static_cast<std::size_t>(cells), 0);
  for (int i = 0; i < h; ++i) {
    st.cohorts.cell[static_cast<std::size_t>(i)] = i % cells;
    ++per_cell[static_cast<std::size_t>(i % cells)];
  }
  for (int i = 0; i < h; ++i) {
    int r = st.cohorts.cell[static_cast<std::size_t>(i)];
    st.cohorts.dwellings[static_cast<std::size_t>(i)] =
        st.grid.dwellings[static_cast<std::size_t>(r)] / per_cell[static_cast<std::size_t>(r)];
  }

  st.participation = 1.0;
  st.u_structural = ec.unemployment_initial;

  st.gov.tax_income = tau_inc;
  st.gov.tax_profit = ec.tax_profit;
  st.gov.consumption = g_star;
  st.gov.recon_backlog = 0.0;

  st.bank.equity = ec.bank_equity;
  st.bank.max_leverage = ec.max_leverage;
  st.bank.loans = ec.loans_initial;
  if (!(st.bank.loans <= st.bank.max_leverage * st.bank.equity)) {
    throw std::runtime_error("initial loans exceed the bank leverage cap");
  }
  double deposits_total = dep_h + wage_bill;  // household deposits + firm buffers
  st.bank.reserves = deposits_total + st.bank.equity - st.bank.loans;
  if (!(st.bank.reserves > 0.0)) {
    throw std::runtime_error("initial bank reserves non-positive; raise deposits or cut loans");
  }
  st.gov.debt = st.bank.reserves;
  st.gov.debt_target = st.gov.debt;

  st.last_final_demand = f_star;
  st.rolling_gdp.assign(4, gdp_q);
  st.quarter_index = 0;

  if (st.nfa_gap() > 1e-9 * annual) {
    throw std::runtime_error("initial state is not stock-flow consistent");
  }
  return st;
}

void apply_damage_to_state(EconState& st, const FloodEvent& ev, const DamageReport& rep) {
  int cells = st.firms.cells;
  int s = st.firms.sectors;
  if (static_cast<int>(ev.loss_fraction.size()) != cells) {
    throw std::runtime_error("event cell count does not match the economy state");
  }
  for (int r = 0; r < cells; ++r) {
    double f = ev.loss_fraction[static_cast<std::size_t>(r)];
    if (f == 0.0) continue;
    for (int j = 0; j < s; ++j) {
      std::size_t i = st.firms.idx(r, j);
      double loss = st.firms.capital[i] * f;
      st.firms.capital[i] -= loss;
      st.firms.recon_backlog[i] += loss;
      st.firms.outage[i] = std::min(1.0, st.firms.outage[i] + f);
    }
  }
  double dwelling_loss_total = 0.0;
  std::vector<double> loss_h(st.cohorts.count.size(), 0.0);
  for (std::size_t i = 0; i < st.cohorts.count.size(); ++i) {
    double f = ev.loss_fraction[static_cast<std::size_t>(st.cohorts.cell[i])];
    if (f == 0.0) continue;
    loss_h[i] = st.cohorts.dwellings[i] * f;
    st.cohorts.dwellings[i] -= loss_h[i];
    // only the compensated and self-financed share is ever rebuilt; the
    // remainder is written off and the dwelling stock stays lower
    st.cohorts.dwelling_backlog[i] += rep.rebuild_share * loss_h[i];
    dwelling_loss_total += loss_h[i];
  }
  st.gov.recon_backlog += rep.infrastructure_loss;
  st.firm_comp_share = rep.firm_comp_share;
  st.dwelling_comp_share = rep.compensation_share;
  if (st.gov.relief_due.size() < rep.relief_per_quarter.size()) {
    st.gov.relief_due.resize(rep.relief_per_quarter.size(), 0.0);
  }
  for (std::size_t q = 0; q < rep.relief_per_quarter.size(); ++q) {
    st.gov.relief_due[q] += rep.relief_per_quarter[q];
  }
}

}  // namespace cata
