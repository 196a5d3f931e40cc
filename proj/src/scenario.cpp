#include "cata/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cata/pool.hpp"
#include "cata/stats.hpp"

namespace cata {
namespace {

FloodEvent zero_event(int cells) {
  FloodEvent ev;
  ev.return_period = 0.0;
  ev.loss_fraction.assign(static_cast<size_t>(cells), 0.0);
  return ev;
}

double attainable_fraction(const HazardModel& model, const FloodEvent& ev) {
  double a = 0.0;
  for (size_t i = 0; i < ev.loss_fraction.size(); ++i)
    if (ev.loss_fraction[i] > 0.0) a += model.exposure_weight[i];
  return a;
}

SeriesStats column_stats(const std::vector<std::vector<double>>& rows) {
  SeriesStats out;
  if (rows.empty()) return out;
  size_t cols = rows[0].size();
  out.mean.resize(cols);
  out.sd.resize(cols);
  std::vector<double> col(rows.size());
  for (size_t j = 0; j < cols; ++j) {
    for (size_t r = 0; r < rows.size(); ++r) col[r] = rows[r][j];
    out.mean[j] = stats::mean(col);
    out.sd[j] = stats::stdev(col);
  }
  return out;
}

}  // namespace

ScenarioEngine::ScenarioEngine(const SimConfig& cfg)
    : cfg_(cfg), proto_(init_economy(cfg)), hazard_(make_hazard_model(proto_.grid, cfg.hazard)) {
  calibrate(hazard_);
}

std::uint64_t ScenarioEngine::econ_seed(std::uint64_t master_seed, int run_index) const {
  return derive_seed(master_seed, "econ", static_cast<std::uint64_t>(run_index));
}

TimeSeries ScenarioEngine::run_baseline(std::uint64_t master_seed, int run_index) const {
  EconState st = proto_;
  Rng rng(econ_seed(master_seed, run_index));
  TimeSeries ts;
  int h = cfg_.horizon_quarters();
  ts.quarters.reserve(static_cast<size_t>(h));
  for (int q = 0; q < h; ++q) ts.quarters.push_back(step_quarter(st, rng));
  return ts;
}

FloodEvent ScenarioEngine::reference_event(std::uint64_t master_seed, int run_index,
                                           int /*runs*/, double max_fraction) const {
  double t_ref = 0.0;
  for (double t : hazard_.cfg.target_periods) t_ref = std::max(t_ref, t);
  if (t_ref <= 1.0) t_ref = 1500.0;

  double best = -1.0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::uint64_t seed =
        attempt == 0
            ? derive_seed(master_seed, "event", static_cast<std::uint64_t>(run_index))
            : derive_seed(master_seed, "event-retry",
                          static_cast<std::uint64_t>(run_index) * 64u +
                              static_cast<std::uint64_t>(attempt));
    Rng rng(seed);
    FloodEvent ev = sample_event(hazard_, t_ref, rng);
    double a = attainable_fraction(hazard_, ev);
    best = std::max(best, a);
    if (a > max_fraction) return ev;
  }
  throw std::runtime_error(
      "damage sweep: no sampled reference event can reach loss fraction " +
      std::to_string(max_fraction) + " (best attainable " + std::to_string(best) +
      "); lower the grid maximum or raise the unprotected exposure share");
}

RunDiff ScenarioEngine::annual_diff(const TimeSeries& baseline, const TimeSeries& shocked,
                                    const FloodEvent& ev) const {
  const int y0 = cfg_.run.start_year;
  const int years = cfg_.run.end_year - cfg_.run.start_year + 1;
  const int s_count = cfg_.econ.sectors;

  RunDiff d;
  d.years.resize(static_cast<size_t>(years));
  for (int y = 0; y < years; ++y) d.years[static_cast<size_t>(y)] = y0 + y;
  d.direct_loss = ev.total_direct_loss;
  d.loss_fraction = ev.total_loss_fraction;

  auto annual_gdp = [&](const TimeSeries& ts, int y) {
    double v = 0.0;
    for (int q = 4 * y; q < 4 * y + 4; ++q)
      v += ts.quarters[static_cast<size_t>(q)].gdp_production;
    return v;
  };
  auto annual_unemp = [&](const TimeSeries& ts, int y) {
    double v = 0.0;
    for (int q = 4 * y; q < 4 * y + 4; ++q)
      v += ts.quarters[static_cast<size_t>(q)].unemployment_rate;
    return v / 4.0;
  };
  auto annual_gva = [&](const TimeSeries& ts, int y, int s) {
    double v = 0.0;
    for (int q = 4 * y; q < 4 * y + 4; ++q)
      v += ts.quarters[static_cast<size_t>(q)].sectoral_gva[static_cast<size_t>(s)];
    return v;
  };

  d.gdp_growth_pp.resize(static_cast<size_t>(years));
  d.gdp_growth_cum_pp.resize(static_cast<size_t>(years));
  d.unemployment_pp.resize(static_cast<size_t>(years));
  d.debt_to_gdp_pp.resize(static_cast<size_t>(years));
  d.gva_growth_cum_pp.assign(static_cast<size_t>(s_count),
                             std::vector<double>(static_cast<size_t>(years), 0.0));

  // The baseline starts stationary, so its first-year values stand in for the
  // unobserved pre-sample year when computing first-year growth rates.
  double prev_b = annual_gdp(baseline, 0);
  double prev_s = prev_b;
  double cum = 0.0;
  for (int y = 0; y < years; ++y) {
    double gb = annual_gdp(baseline, y);
    double gs = annual_gdp(shocked, y);
    double diff_pp = 100.0 * (gs / prev_s - gb / prev_b);
    prev_b = gb;
    prev_s = gs;
    cum += diff_pp;
    d.gdp_growth_pp[static_cast<size_t>(y)] = diff_pp;
    d.gdp_growth_cum_pp[static_cast<size_t>(y)] = cum;
    d.unemployment_pp[static_cast<size_t>(y)] =
        100.0 * (annual_unemp(shocked, y) - annual_unemp(baseline, y));
    const auto& qb = baseline.quarters[static_cast<size_t>(4 * y + 3)];
    const auto& qs = shocked.quarters[static_cast<size_t>(4 * y + 3)];
    d.debt_to_gdp_pp[static_cast<size_t>(y)] = 100.0 * (qs.debt_to_gdp - qb.debt_to_gdp);
  }

  for (int s = 0; s < s_count; ++s) {
    double pb = annual_gva(baseline, 0, s);
    double ps = pb;
    double c = 0.0;
    for (int y = 0; y < years; ++y) {
      double vb = annual_gva(baseline, y, s);
      double vs = annual_gva(shocked, y, s);
      c += 100.0 * (vs / ps - vb / pb);
      pb = vb;
      ps = vs;
      d.gva_growth_cum_pp[static_cast<size_t>(s)][static_cast<size_t>(y)] = c;
    }
  }

  double indirect = 0.0;
  for (size_t q = 0; q < baseline.quarters.size(); ++q)
    indirect += baseline.quarters[q].gdp_production - shocked.quarters[q].gdp_production;
  d.indirect_loss = indirect;
  return d;
}

RunPairResult ScenarioEngine::run_pair(const ShockSpec& shock, std::uint64_t master_seed,
                                       int run_index) const {
  RunPairResult out;

  if (shock.loss_fraction >= 0.0) {
    if (shock.loss_fraction == 0.0) {
      out.event = zero_event(proto_.grid.cells());
    } else {
      FloodEvent ref = reference_event(master_seed, run_index, 0, shock.loss_fraction);
      out.event = scale_event_to_fraction(hazard_, ref, shock.loss_fraction);
    }
  } else {
    Rng ev_rng(derive_seed(master_seed, "event", static_cast<std::uint64_t>(run_index)));
    out.event = sample_event(hazard_, shock.return_period, ev_rng);
  }
  out.damage =
      assess_damage(proto_.grid, out.event, cfg_.econ.infrastructure_share, cfg_.relief);

  const int h = cfg_.horizon_quarters();
  const int shock_q = cfg_.shock_quarter();
  const std::uint64_t seed = econ_seed(master_seed, run_index);

  {
    EconState st = proto_;
    Rng rng(seed);
    out.baseline.quarters.reserve(static_cast<size_t>(h));
    for (int q = 0; q < h; ++q) out.baseline.quarters.push_back(step_quarter(st, rng));
  }
  {
    EconState st = proto_;
    Rng rng(seed);
    out.shocked.quarters.reserve(static_cast<size_t>(h));
    for (int q = 0; q < h; ++q) {
      if (q == shock_q) apply_damage_to_state(st, out.event, out.damage);
      out.shocked.quarters.push_back(step_quarter(st, rng));
    }
  }

  out.diff = annual_diff(out.baseline, out.shocked, out.event);
  return out;
}

DiffMetrics ScenarioEngine::ensemble(const ShockSpec& shock, std::uint64_t master_seed,
                                     int runs, int workers,
                                     std::vector<RunPairResult>* keep) const {
  if (runs < 1) throw std::invalid_argument("ensemble: runs must be >= 1");
  std::vector<RunPairResult> results(static_cast<size_t>(runs));
  parallel_for(
      runs, [&](int r) { results[static_cast<size_t>(r)] = run_pair(shock, master_seed, r); },
      workers);

  DiffMetrics m;
  m.years = results[0].diff.years;
  m.runs = runs;
  const int s_count = cfg_.econ.sectors;

  auto gather = [&](auto&& get) {
    std::vector<std::vector<double>> rows;
    rows.reserve(results.size());
    for (const auto& r : results) rows.push_back(get(r));
    return column_stats(rows);
  };
  m.gdp_growth_pp = gather([](const RunPairResult& r) { return r.diff.gdp_growth_pp; });
  m.gdp_growth_cum_pp =
      gather([](const RunPairResult& r) { return r.diff.gdp_growth_cum_pp; });
  m.unemployment_pp = gather([](const RunPairResult& r) { return r.diff.unemployment_pp; });
  m.debt_to_gdp_pp = gather([](const RunPairResult& r) { return r.diff.debt_to_gdp_pp; });
  m.gva_growth_cum_pp.resize(static_cast<size_t>(s_count));
  for (int s = 0; s < s_count; ++s)
    m.gva_growth_cum_pp[static_cast<size_t>(s)] = gather(
        [s](const RunPairResult& r) { return r.diff.gva_growth_cum_pp[static_cast<size_t>(s)]; });

  double dl = 0.0, il = 0.0;
  for (const auto& r : results) {
    dl += r.diff.direct_loss;
    il += r.diff.indirect_loss;
  }
  m.mean_direct_loss = dl / runs;
  m.mean_indirect_loss = il / runs;

  if (keep) *keep = std::move(results);
  return m;
}

SweepResult ScenarioEngine::damage_sweep(std::span<const double> fractions, int year_k,
                                         std::uint64_t master_seed, int runs,
                                         int workers) const {
  const int n = static_cast<int>(fractions.size());
  if (n < 1) throw std::invalid_argument("damage sweep: empty grid");
  for (int j = 0; j < n; ++j) {
    if (!(fractions[j] > 0.0 && fractions[j] < 1.0))
      throw std::invalid_argument("damage sweep: loss fractions must lie in (0,1)");
    if (j > 0 && !(fractions[j] > fractions[j - 1]))
      throw std::invalid_argument("damage sweep: grid must be strictly increasing");
  }
  const int years = cfg_.run.end_year - cfg_.run.start_year + 1;
  const int shock_idx = cfg_.run.shock_year - cfg_.run.start_year;
  if (year_k < 1 || shock_idx + year_k - 1 >= years)
    throw std::invalid_argument("damage sweep: year " + std::to_string(year_k) +
                                " is outside the simulated horizon");
  if (runs < 1) throw std::invalid_argument("damage sweep: runs must be >= 1");

  const int h = cfg_.horizon_quarters();
  const int shock_q = cfg_.shock_quarter();
  const double max_frac = fractions[static_cast<size_t>(n - 1)];

  std::vector<std::vector<double>> year1(static_cast<size_t>(runs),
                                         std::vector<double>(static_cast<size_t>(n)));
  auto yeark = year1;

  parallel_for(
      runs,
      [&](int r) {
        FloodEvent ref = reference_event(master_seed, r, runs, max_frac);
        const std::uint64_t seed = econ_seed(master_seed, r);

        TimeSeries base;
        {
          EconState st = proto_;
          Rng rng(seed);
          base.quarters.reserve(static_cast<size_t>(h));
          for (int q = 0; q < h; ++q) base.quarters.push_back(step_quarter(st, rng));
        }
        for (int j = 0; j < n; ++j) {
          FloodEvent ev = scale_event_to_fraction(hazard_, ref, fractions[static_cast<size_t>(j)]);
          DamageReport rep =
              assess_damage(proto_.grid, ev, cfg_.econ.infrastructure_share, cfg_.relief);
          TimeSeries shocked;
          EconState st = proto_;
          Rng rng(seed);
          shocked.quarters.reserve(static_cast<size_t>(h));
          for (int q = 0; q < h; ++q) {
            if (q == shock_q) apply_damage_to_state(st, ev, rep);
            shocked.quarters.push_back(step_quarter(st, rng));
          }
          RunDiff d = annual_diff(base, shocked, ev);
          year1[static_cast<size_t>(r)][static_cast<size_t>(j)] =
              d.gdp_growth_cum_pp[static_cast<size_t>(shock_idx)];
          yeark[static_cast<size_t>(r)][static_cast<size_t>(j)] =
              d.gdp_growth_cum_pp[static_cast<size_t>(shock_idx + year_k - 1)];
        }
      },
      workers);

  SeriesStats s1 = column_stats(year1);
  SeriesStats sk = column_stats(yeark);

  SweepResult out;
  out.year_k = year_k;
  const double exposure = proto_.grid.national_exposure();
  const double annual_gdp = 4.0 * cfg_.econ.gdp_quarterly;
  const double capital = proto_.grid.national_capital();
  out.points.resize(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    auto& p = out.points[static_cast<size_t>(j)];
    p.fraction = fractions[static_cast<size_t>(j)];
    p.loss_pct_gdp = 100.0 * p.fraction * exposure / annual_gdp;
    p.loss_pct_capital = 100.0 * p.fraction * exposure / capital;
    p.year1_mean_pp = s1.mean[static_cast<size_t>(j)];
    p.year1_sd_pp = s1.sd[static_cast<size_t>(j)];
    p.yeark_mean_pp = sk.mean[static_cast<size_t>(j)];
    p.yeark_sd_pp = sk.sd[static_cast<size_t>(j)];
  }

  if (n >= 4) {
    std::vector<double> xs(fractions.begin(), fractions.end());
    out.spline = fit_smoothing_spline(xs, sk.mean);
    double lo = xs.front(), hi = xs.back();
    double ax = out.spline.argmax(lo, hi);
    double margin = 1e-9 * (hi - lo);
    if (ax > lo + margin && ax < hi - margin) {
      out.has_interior_max = true;
      out.argmax_fraction = ax;
      out.argmax_value_pp = out.spline.value(ax);
      out.inflection_fraction = out.spline.inflection_below(ax);
    }
  }
  return out;
}

// ----- multiplier-accelerator reference model ------------------------------

SamuelsonOracle samuelson_oracle(double alpha, double beta, double g, int n) {
  SamuelsonOracle o;
  double b1 = alpha * (1.0 + beta);  // Y_{t-1} coefficient
  double c = alpha * beta;           // Y_{t-2} coefficient (sign handled below)
  o.income.reserve(static_cast<size_t>(std::max(n, 0)));
  double ym2 = 0.0, ym1 = 0.0;
  for (int t = 0; t < n; ++t) {
    double y = g + b1 * ym1 - c * ym2;
    o.income.push_back(y);
    ym2 = ym1;
    ym1 = y;
  }

  std::complex<double> disc(b1 * b1 - 4.0 * c, 0.0);
  std::complex<double> sq = std::sqrt(disc);
  o.root1 = (std::complex<double>(b1, 0.0) + sq) / 2.0;
  o.root2 = (std::complex<double>(b1, 0.0) - sq) / 2.0;
  o.max_modulus = std::max(std::abs(o.root1), std::abs(o.root2));
  o.oscillatory = disc.real() < 0.0;

  const double eps = 1e-12;
  if (o.max_modulus < 1.0 - eps)
    o.regime = "damped";
  else if (o.max_modulus <= 1.0 + eps)
    o.regime = "sustained";
  else
    o.regime = "explosive";
  if (o.oscillatory) o.regime += "-oscillatory";
  return o;
}

SamuelsonParams samuelson_map(const EconState& st) {
  const EconConfig& ec = st.cfg.econ;
  SamuelsonParams p;
  p.alpha = ec.mpc * (1.0 - st.gov.tax_income);

  // Gross output pulled by one unit of consumption demand, weighted by each
  // sector's capital intensity: the stock the accelerator tries to install.
  // Investment reacts through the slow capacity-planning smoother.
  std::vector<double> pull = st.leontief.requirements(st.tables.consumption_shares);
  double capital_per_cons = 0.0;
  for (size_t s = 0; s < pull.size(); ++s) capital_per_cons += st.sectors.kappa[s] * pull[s];
  p.beta = ec.nu_accelerator * ec.capacity_smoothing * capital_per_cons /
           ec.utilization_target;
  return p;
}

double okun_correlation(std::span<const RunPairResult> runs, int shock_year) {
  std::vector<double> g, u;
  for (const auto& r : runs) {
    for (size_t y = 0; y < r.diff.years.size(); ++y) {
      if (r.diff.years[y] < shock_year) continue;
      g.push_back(r.diff.gdp_growth_pp[y]);
      u.push_back(r.diff.unemployment_pp[y]);
    }
  }
  return stats::pearson(g, u);
}

}  // namespace cata
