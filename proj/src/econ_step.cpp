#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cata/econ.hpp"
#include "cata/kernels.hpp"

namespace cata {

namespace {

// Realized gross output: capped by the per-firm plan, by demand, and by input
// availability (intermediates have priority over final deliveries; inputs are
// rationed proportionally). Monotone downward iteration from the plan.
std::vector<double> realized_output(const Leontief& lt, const std::vector<double>& plan,
                                    const std::vector<double>& f_dem) {
  std::size_t n = plan.size();
  std::vector<double> x = plan;
  for (int it = 0; it < 500; ++it) {
    std::vector<double> ax = lt.intermediate(x);
    double move = 0.0;
    // input fill rate of each supplier at current activity
    std::vector<double> fill(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (ax[i] > x[i] && ax[i] > 0.0) fill[i] = x[i] / ax[i];
    }
    const std::vector<double>& a = lt.matrix();
    for (std::size_t j = 0; j < n; ++j) {
      double cap = std::min(plan[j], ax[j] + f_dem[j]);
      double in_cap = x[j];
      for (std::size_t i = 0; i < n; ++i) {
        if (a[i * n + j] > 0.0 && fill[i] < 1.0) in_cap = std::min(in_cap, x[j] * fill[i]);
      }
      double nx = std::min({x[j], cap, in_cap});
      move = std::max(move, x[j] - nx);
      x[j] = nx;
    }
    if (move < 1e-12) break;
  }
  return x;
}

}  // namespace

QuarterOutcome step_quarter(EconState& st, Rng& rng) {
  const EconConfig& ec = st.cfg.econ;
  const SectorTables& tb = st.tables;
  int s = tb.sectors;
  std::size_t su = static_cast<std::size_t>(s);
  int cells = st.firms.cells;
  std::size_t hu = st.cohorts.count.size();

  // depreciate and credit last quarter's deliveries to the capital stock
  for (std::size_t f = 0; f < st.firms.capital.size(); ++f) {
    st.firms.capital[f] =
        st.firms.capital[f] * (1.0 - ec.delta_depreciation) + st.firms.pending_capital[f];
    st.firms.pending_capital[f] = 0.0;
  }
  for (std::size_t h = 0; h < hu; ++h) {
    st.cohorts.dwellings[h] += st.cohorts.pending_dwellings[h];
    st.cohorts.pending_dwellings[h] = 0.0;
  }
  std::vector<double> k_s(su, 0.0);
  for (int r = 0; r < cells; ++r) {
    for (int j = 0; j < s; ++j) k_s[static_cast<std::size_t>(j)] += st.firms.capital[st.firms.idx(r, j)];
  }

  // 1. plan_production: adaptive expected final demand. Capacity planning
  // tracks a much slower signal, otherwise the stock-adjustment accelerator
  // (gain nu * kappa / u per quarter) overreacts to quarterly demand noise
  // and the multiplier loop turns locally explosive.
  for (std::size_t j = 0; j < su; ++j) {
    st.sectors.expected_fd[j] = ec.lambda_expectation * st.last_final_demand[j] +
                                (1.0 - ec.lambda_expectation) * st.sectors.expected_fd[j];
    st.sectors.expected_fd_capacity[j] =
        ec.capacity_smoothing * st.last_final_demand[j] +
        (1.0 - ec.capacity_smoothing) * st.sectors.expected_fd_capacity[j];
  }
  if (ec.demand_noise > 0.0) {
    for (std::size_t j = 0; j < su; ++j) {
      double shock = 1.0 + ec.demand_noise * rng.normal();
      st.sectors.expected_fd[j] *= std::max(0.01, shock);
    }
  }

  // 2. leontief_requirements on the expected final demand
  std::vector<double> x_exp = st.leontief.requirements(st.sectors.expected_fd);
  for (double& v : x_exp) v = std::max(v, 0.0);

  // per-firm plan: expected sector demand split by market share, capped by
  // each firm's own capacity net of business interruption; survivors do not
  // instantly absorb lost share
  std::vector<double> plan(su, 0.0);
  for (int r = 0; r < cells; ++r) {
    for (int j = 0; j < s; ++j) {
      std::size_t f = st.firms.idx(r, j);
      std::size_t js = static_cast<std::size_t>(j);
      double cap_f =
          st.firms.capital[f] * (1.0 - st.firms.outage[f]) / st.sectors.kappa[js];
      plan[js] += std::min(x_exp[js] * st.firms.market_share[f], cap_f);
    }
  }

  // 3. labor_market_update: hire toward the plan, ration if labor is scarce.
  // Participation follows job availability with a lag (discouraged-worker
  // effect), so the measured unemployment rate reverts toward its structural
  // level and its fluctuations track output growth rather than its level.
  double population = kernels::sum(st.cohorts.count);
  double labor_force = st.participation * population;
  std::vector<double> need_n(su);
  double total_need = 0.0;
  for (std::size_t j = 0; j < su; ++j) {
    need_n[j] = st.sectors.labor_coeff[j] * plan[j];
    total_need += need_n[j];
  }
  if (total_need > labor_force) {
    double ration = labor_force / total_need;
    for (std::size_t j = 0; j < su; ++j) {
      need_n[j] *= ration;
      plan[j] = need_n[j] / st.sectors.labor_coeff[j];
    }
    total_need = labor_force;
  }
  double employment_rate = total_need / population;  // share of working-age persons
  double unemployment = 1.0 - total_need / labor_force;
  {
    double part_target = total_need / ((1.0 - st.u_structural) * population);
    st.participation += ec.participation_adapt * (part_target - st.participation);
    st.participation = std::min(1.25, std::max(0.5, st.participation));
  }
  std::vector<double> wage_s(su);
  for (std::size_t j = 0; j < su; ++j) wage_s[j] = st.wage_rate * need_n[j];

  // The relief fund releases tranches on its schedule, but money is only paid
  // out as reimbursement of verified rebuild spending. Plans that are later
  // abandoned therefore never collect their relief.
  if (!st.gov.relief_due.empty()) {
    st.gov.relief_available += st.gov.relief_due.front();
    st.gov.relief_due.erase(st.gov.relief_due.begin());
  }

  // dividends declared last quarter, paid now (limited by cash on hand);
  // interest on the public debt is passed straight through to households
  double interest = ec.debt_interest_rate * st.gov.debt;
  std::vector<double> div_paid(su);
  double dividends = interest;
  for (std::size_t j = 0; j < su; ++j) {
    div_paid[j] = std::min(st.sectors.pending_dividends[j], std::max(0.0, st.sectors.liquidity[j]));
    st.sectors.pending_dividends[j] -= div_paid[j];
    st.sectors.liquidity[j] -= div_paid[j];
    dividends += div_paid[j];
  }

  // 4. household_consumption and dwelling-rebuild orders
  double c_demand = 0.0, rb_demand = 0.0, income_tax = 0.0, benefits = 0.0;
  std::vector<double> c_plan(hu), rb_plan(hu), yd(hu);
  for (std::size_t h = 0; h < hu; ++h) {
    st.cohorts.employed[h] = st.cohorts.count[h] * employment_rate;
    double wage_inc = st.cohorts.employed[h] * st.wage_rate;
    double div_inc = dividends * st.cohorts.count[h] / population;
    // replacement income covers everyone without a job (unemployment benefits
    // plus social assistance for those who left the labor force)
    double ben = (st.cohorts.count[h] - st.cohorts.employed[h]) * st.wage_rate *
                 ec.benefit_replacement;
    double tax = st.gov.tax_income * (wage_inc + div_inc);
    yd[h] = wage_inc + div_inc - tax + ben;
    double c = ec.mpc * yd[h] + ec.wealth_spend_rate * st.cohorts.deposits[h];
    // Rebuilding is paced by the backlog and financed out of savings bridged
    // by the expected reimbursement (at most an 80% advance rate).
    double advance = std::max(0.2, 1.0 - st.dwelling_comp_share);
    double rb = std::min(ec.backlog_order_rate * st.cohorts.dwelling_backlog[h],
                         ec.household_rebuild_rate * st.cohorts.deposits[h] / advance);
    rb = std::min(rb, st.cohorts.dwelling_backlog[h]);
    double budget = st.cohorts.deposits[h] + yd[h];
    if (c + rb > budget && c + rb > 0.0) {
      double f = budget / (c + rb);
      c *= f;
      rb *= f;
    }
    c_plan[h] = c;
    rb_plan[h] = rb;
    income_tax += tax;
    benefits += ben;
    c_demand += c;
    rb_demand += rb;
  }

  // 5. firm_investment: replacement + accelerator + reconstruction draw.
  // The accelerator gap nets out capital already queued for rebuild, so
  // destruction flows through the backlog channel, not twice.
  std::vector<double> ord_base(su), draw_s(su, 0.0);
  std::vector<double> backlog_s(su, 0.0);
  for (int r = 0; r < cells; ++r) {
    for (int j = 0; j < s; ++j) {
      backlog_s[static_cast<std::size_t>(j)] += st.firms.recon_backlog[st.firms.idx(r, j)];
    }
  }
  // Reconstruction rebuilds to normal scale and no further: draws only cover
  // the shortfall against pre-disaster capital; once capacity is back any
  // remaining plans are superseded by ordinary expansion investment and sit
  // inert. Expansion itself is the accelerator's business.
  std::vector<double> x_cap = st.leontief.requirements(st.sectors.expected_fd_capacity);
  for (std::size_t j = 0; j < su; ++j) {
    double desired = st.sectors.kappa[j] * std::max(x_cap[j], 0.0) / ec.utilization_target;
    double deficit = std::max(0.0, st.sectors.base_capital[j] - k_s[j]);
    double bl_eff = std::min(backlog_s[j], deficit);
    double expand = ec.nu_accelerator * (desired - (k_s[j] + bl_eff));
    // A sector still rebuilding does not expand on top of its reconstruction,
    // so transient boom demand cannot double-order capital.
    if (bl_eff > 0.0) expand = std::min(expand, 0.0);
    ord_base[j] = std::max(0.0, ec.delta_depreciation * k_s[j] + expand);
    // The flat floor lets the exponential draw-down finish in finite time.
    draw_s[j] = std::min(bl_eff, ec.backlog_order_rate * bl_eff +
                                     ec.recon_floor * st.sectors.base_capital[j]);
  }
  // Plans beyond restored capacity are written off: capital is back to normal
  // scale, and any further growth is ordinary expansion investment.
  for (int j = 0; j < s; ++j) {
    std::size_t js = static_cast<std::size_t>(j);
    if (backlog_s[js] > 0.0 && k_s[js] >= st.sectors.base_capital[js]) {
      for (int r = 0; r < cells; ++r) st.firms.recon_backlog[st.firms.idx(r, j)] = 0.0;
      backlog_s[js] = 0.0;
      draw_s[js] = 0.0;
    }
  }
  double gov_draw =
      std::min(st.gov.recon_backlog,
               ec.backlog_order_rate * st.gov.recon_backlog +
                   ec.recon_floor * kernels::sum(st.sectors.base_capital));
  double g_plan = st.gov.consumption;

  // 6. credit_allocation for firm orders: own cash first, then loans. The
  // government pays its compensation share of reconstruction draws directly
  // (disaster-fund subsidies), so firms only finance the remainder.
  double comp = st.firm_comp_share;
  std::vector<double> need(su), liq_part(su), loan_req(su);
  double total_loan_req = 0.0;
  double subsidized_draw = 0.0;
  for (std::size_t j = 0; j < su; ++j) {
    subsidized_draw += comp * draw_s[j];
    need[j] = ord_base[j] + (1.0 - comp) * draw_s[j];
    double va_plan = 0.0;  // operating cash expected this quarter
    va_plan = plan[j];
    for (std::size_t i = 0; i < su; ++i) va_plan -= tb.a[i * su + j] * plan[j];
    double usable = std::max(0.0, st.sectors.liquidity[j] + (va_plan - wage_s[j]) - wage_s[j]);
    liq_part[j] = std::min(need[j], usable);
    loan_req[j] = need[j] - liq_part[j];
    total_loan_req += loan_req[j];
  }
  double headroom = std::max(0.0, st.bank.max_leverage * st.bank.equity - st.bank.loans);
  double loan_ratio = total_loan_req > headroom && total_loan_req > 0.0
                          ? headroom / total_loan_req
                          : 1.0;
  std::vector<double> approved(su), financed(su), fin_ratio(su);
  double i_firm_demand = 0.0;
  for (std::size_t j = 0; j < su; ++j) {
    approved[j] = loan_req[j] * loan_ratio;
    financed[j] = liq_part[j] + approved[j];
    fin_ratio[j] = need[j] > 0.0 ? financed[j] / need[j] : 1.0;
    i_firm_demand += financed[j];
  }
  i_firm_demand += subsidized_draw;

  // 7. realized production and reconstruction_delivery
  std::vector<double> f_dem(su);
  for (std::size_t j = 0; j < su; ++j) {
    f_dem[j] = c_demand * tb.consumption_shares[j] + i_firm_demand * tb.investment_shares[j] +
               g_plan * tb.government_shares[j];
  }
  f_dem[static_cast<std::size_t>(tb.construction)] += rb_demand + gov_draw;

  std::vector<double> x = realized_output(st.leontief, plan, f_dem);
  std::vector<double> ax = st.leontief.intermediate(x);
  std::vector<double> f_del(su), ration(su);
  for (std::size_t j = 0; j < su; ++j) {
    f_del[j] = x[j] - ax[j];
    if (f_del[j] < -1e-9 * std::max(1.0, x[j])) {
      throw std::runtime_error("negative final deliveries: input rationing failed");
    }
    f_del[j] = std::max(0.0, f_del[j]);
    ration[j] = f_dem[j] > 0.0 ? std::min(1.0, f_del[j] / f_dem[j]) : 1.0;
  }
  double r_c = 0.0, r_i = 0.0, r_g = 0.0;
  for (std::size_t j = 0; j < su; ++j) {
    r_c += tb.consumption_shares[j] * ration[j];
    r_i += tb.investment_shares[j] * ration[j];
    r_g += tb.government_shares[j] * ration[j];
  }
  double r_cons = ration[static_cast<std::size_t>(tb.construction)];

  double c_del = c_demand * r_c;
  double g_del = g_plan * r_g;
  double rb_del = rb_demand * r_cons;
  double gov_recon_del = gov_draw * r_cons;
  double i_firm_del = i_firm_demand * r_i;

  // capital deliveries: backlog rebuild per firm, expansion pro rata to capital
  for (int r = 0; r < cells; ++r) {
    for (int j = 0; j < s; ++j) {
      std::size_t f = st.firms.idx(r, j);
      std::size_t js = static_cast<std::size_t>(j);
      double fund = (1.0 - comp) * fin_ratio[js] + comp;
      double share = backlog_s[js] > 0.0 ? st.firms.recon_backlog[f] / backlog_s[js] : 0.0;
      double bl_del = draw_s[js] * share * fund * r_i;
      bl_del = std::min(bl_del, st.firms.recon_backlog[f]);
      st.firms.recon_backlog[f] -= bl_del;
      double w = k_s[js] > 0.0 ? st.firms.capital[f] / k_s[js] : st.firms.market_share[f];
      double ord_del = ord_base[js] * fin_ratio[js] * r_i * w;
      st.firms.pending_capital[f] += bl_del + ord_del;
    }
  }
  st.gov.recon_backlog -= gov_recon_del;
  double rb_done_total = 0.0;
  for (std::size_t h = 0; h < hu; ++h) rb_done_total += rb_plan[h] * r_cons;
  double relief_q =
      std::min(st.dwelling_comp_share * rb_done_total, st.gov.relief_available);
  st.gov.relief_available -= relief_q;
  for (std::size_t h = 0; h < hu; ++h) {
    double done = rb_plan[h] * r_cons;
    double reimb = rb_done_total > 0.0 ? relief_q * done / rb_done_total : 0.0;
    st.cohorts.pending_dwellings[h] += done;
    st.cohorts.dwelling_backlog[h] -= std::min(done, st.cohorts.dwelling_backlog[h]);
    st.cohorts.deposits[h] += yd[h] + reimb - c_plan[h] * r_c - done;
  }

  // firm money settlement
  std::vector<double> va(su);
  double profit_tax = 0.0;
  double headroom_left = std::max(0.0, st.bank.max_leverage * st.bank.equity - st.bank.loans);
  for (std::size_t j = 0; j < su; ++j) {
    double colsum = 0.0;
    for (std::size_t i = 0; i < su; ++i) colsum += tb.a[i * su + j];
    va[j] = x[j] - colsum * x[j];
    double profit = va[j] - wage_s[j] - ec.delta_depreciation * k_s[j];
    double tax = st.gov.tax_profit * std::max(0.0, profit);
    profit_tax += tax;
    double invest_pay = financed[j] * r_i;
    double cash = st.sectors.liquidity[j] + (va[j] - wage_s[j]) - tax;
    double draw = std::min(approved[j], std::max(0.0, invest_pay - std::max(0.0, cash)));
    draw = std::min(draw, headroom_left);
    headroom_left -= draw;
    double liq_new = cash - invest_pay + draw;
    if (liq_new < 0.0) {
      double extra = std::min(-liq_new, headroom_left);
      draw += extra;
      headroom_left -= extra;
      liq_new += extra;
    }
    st.sectors.loans[j] += draw;
    st.bank.loans += draw;
    double excess = liq_new - wage_s[j];
    if (excess > 0.0 && st.sectors.loans[j] > st.sectors.loans_floor[j]) {
      double repay = std::min(excess, st.sectors.loans[j] - st.sectors.loans_floor[j]);
      st.sectors.loans[j] -= repay;
      st.bank.loans -= repay;
      liq_new -= repay;
    }
    st.sectors.liquidity[j] = liq_new;
    st.sectors.pending_dividends[j] += (1.0 - st.gov.tax_profit) * std::max(0.0, profit);
  }

  // 8. fiscal_update: the only place government debt moves
  double firm_subsidy = subsidized_draw * r_i;
  double expenditures = benefits + relief_q + g_del + gov_recon_del + firm_subsidy + interest;
  double revenues = income_tax + profit_tax;
  st.gov.debt += expenditures - revenues;
  st.bank.reserves += expenditures - revenues;

  // 9. price_update (diagnostic index; flows settle in the unit of account)
  double base_total = kernels::sum(st.sectors.base_output);
  double price_index = 0.0;
  for (std::size_t j = 0; j < su; ++j) {
    double capacity = k_s[j] > 0.0 ? k_s[j] / st.sectors.kappa[j] : 0.0;
    double util = capacity > 0.0 ? x[j] / capacity : ec.utilization_target;
    double step = std::clamp(ec.price_eta * (util - ec.utilization_target), -ec.price_cap,
                             ec.price_cap);
    st.sectors.price[j] *= 1.0 + step;
    price_index += st.sectors.price[j] * st.sectors.base_output[j] / base_total;
  }

  // 10. compute_national_accounts
  double rent = st.rent_rate * st.total_dwellings();
  double gdp_prod = kernels::sum(va) + rent;
  double investment = i_firm_del + rb_del + gov_recon_del;
  double gdp_exp = c_del + investment + g_del + rent;

  st.rolling_gdp.erase(st.rolling_gdp.begin());
  st.rolling_gdp.push_back(gdp_prod);
  double annual_gdp = kernels::sum(st.rolling_gdp);

  QuarterOutcome out;
  out.gdp_production = gdp_prod;
  out.gdp_expenditure = gdp_exp;
  out.consumption = c_del;
  out.investment = investment;
  out.government = g_del;
  out.imputed_rent = rent;
  out.unemployment_rate = unemployment;
  out.debt_to_gdp = st.gov.debt / annual_gdp;
  out.price_index = price_index;
  out.relief_paid = relief_q;
  out.gov_revenue = revenues;
  out.gov_expenditure = expenditures;
  out.benefits_paid = benefits;
  out.recon_outlay = gov_recon_del + firm_subsidy;
  out.sectoral_gva.assign(va.begin(), va.end());
  out.sectoral_gva[static_cast<std::size_t>(tb.real_estate)] += rent;

  // close the quarter: demand observation and market-share adaptation
  st.last_final_demand = f_dem;
  for (int j = 0; j < s; ++j) {
    double total = 0.0;
    for (int r = 0; r < cells; ++r) total += st.firms.capital[st.firms.idx(r, j)];
    double norm = 0.0;
    for (int r = 0; r < cells; ++r) {
      std::size_t f = st.firms.idx(r, j);
      double target = total > 0.0 ? st.firms.capital[f] / total
                                  : 1.0 / static_cast<double>(cells);
      st.firms.market_share[f] = ec.market_share_adapt * target +
                                 (1.0 - ec.market_share_adapt) * st.firms.market_share[f];
      norm += st.firms.market_share[f];
    }
    for (int r = 0; r < cells; ++r) st.firms.market_share[st.firms.idx(r, j)] /= norm;
  }
  for (double& o : st.firms.outage) o *= ec.outage_decay;
  // households abandon a slice of outstanding rebuild plans every quarter
  // (relocation, demolition), so part of the housing stock is never restored;
  // firm plans are not decayed here because the investment accelerator would
  // simply re-order the gap as expansion capital
  double keep = 1.0 - ec.backlog_decay;
  for (double& b : st.cohorts.dwelling_backlog) b *= keep;
  // grants disburse against actual reconstruction, so abandoned plans forfeit
  // the matching share of the remaining relief schedule
  for (double& r : st.gov.relief_due) r *= keep;
  st.gov.relief_available *= keep;
  ++st.quarter_index;
  return out;
}

}  // namespace cata
