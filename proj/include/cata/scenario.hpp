#pragma once
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cata/config.hpp"
#include "cata/damage.hpp"
#include "cata/econ.hpp"
#include "cata/hazard.hpp"
#include "cata/spline.hpp"

namespace cata {

// Shock selector: a positive loss_fraction scales a reference event to hit the
// national loss exactly; otherwise an event is drawn at return_period.
struct ShockSpec {
  double return_period = 250.0;
  double loss_fraction = -1.0;  // < 0: disabled
};

// Per-run annual differences, shocked minus baseline. Growth series follow the
// cumulative convention: entry y is the sum of annual growth-rate differences
// from the first year through year y, in percentage points. All series are
// exactly zero for years strictly before the shock year.
struct RunDiff {
  std::vector<int> years;
  std::vector<double> gdp_growth_pp;      // annual growth-rate difference
  std::vector<double> gdp_growth_cum_pp;  // running sum of the above
  std::vector<double> unemployment_pp;    // rate difference (== cumulative change)
  std::vector<double> debt_to_gdp_pp;
  std::vector<std::vector<double>> gva_growth_cum_pp;  // [sector][year]
  double direct_loss = 0.0;
  double loss_fraction = 0.0;
  double indirect_loss = 0.0;  // cumulative baseline-minus-shocked GDP, money units
};

struct SeriesStats {
  std::vector<double> mean, sd;
};

struct DiffMetrics {
  std::vector<int> years;
  int runs = 0;
  SeriesStats gdp_growth_pp;
  SeriesStats gdp_growth_cum_pp;
  SeriesStats unemployment_pp;
  SeriesStats debt_to_gdp_pp;
  std::vector<SeriesStats> gva_growth_cum_pp;  // per sector
  double mean_direct_loss = 0.0;
  double mean_indirect_loss = 0.0;
};

struct RunPairResult {
  FloodEvent event;
  DamageReport damage;
  TimeSeries baseline;
  TimeSeries shocked;
  RunDiff diff;
};

struct SweepPoint {
  double fraction = 0.0;      // national loss fraction of exposure (the grid)
  double loss_pct_gdp = 0.0;  // same loss as % of annual GDP
  double loss_pct_capital = 0.0;
  double year1_mean_pp = 0.0, year1_sd_pp = 0.0;  // shock-year growth difference
  double yeark_mean_pp = 0.0, yeark_sd_pp = 0.0;  // cumulative through year k
};

struct SweepResult {
  int year_k = 2;
  std::vector<SweepPoint> points;
  SmoothingSpline spline;  // year-k means vs loss fraction
  bool has_interior_max = false;
  double argmax_fraction = 0.0;
  double argmax_value_pp = 0.0;
  std::optional<double> inflection_fraction;  // curvature sign change below the max
};

class ScenarioEngine {
 public:
  explicit ScenarioEngine(const SimConfig& cfg);

  const SimConfig& config() const { return cfg_; }
  const HazardModel& hazard() const { return hazard_; }
  const EconState& prototype() const { return proto_; }

  TimeSeries run_baseline(std::uint64_t master_seed, int run_index) const;

  // Baseline and shocked trajectories share one economy seed, so pre-shock
  // quarters are bit-identical; the event uses its own derived stream.
  RunPairResult run_pair(const ShockSpec& shock, std::uint64_t master_seed,
                         int run_index) const;

  DiffMetrics ensemble(const ShockSpec& shock, std::uint64_t master_seed, int runs,
                       int workers = 0,
                       std::vector<RunPairResult>* keep = nullptr) const;

  // Scales one reference event per run to each grid fraction (common random
  // numbers across gridpoints) and summarizes the year-1 and cumulative
  // year-k growth differences, with a cross-validated spline analysis of the
  // year-k curve.
  SweepResult damage_sweep(std::span<const double> fractions, int year_k,
                           std::uint64_t master_seed, int runs,
                           int workers = 0) const;

  RunDiff annual_diff(const TimeSeries& baseline, const TimeSeries& shocked,
                      const FloodEvent& ev) const;

  std::uint64_t econ_seed(std::uint64_t master_seed, int run_index) const;

 private:
  FloodEvent reference_event(std::uint64_t master_seed, int run_index, int runs,
                             double max_fraction) const;

  SimConfig cfg_;
  EconState proto_;
  HazardModel hazard_;
};

// ----- multiplier-accelerator reference model ------------------------------

// Classic second-order income recursion Y_t = G + a(1+b) Y_{t-1} - a b Y_{t-2}
// started from Y_{-2} = Y_{-1} = 0; converges to G/(1-a) in the damped regime.
struct SamuelsonOracle {
  std::vector<double> income;
  std::complex<double> root1, root2;  // characteristic roots
  double max_modulus = 0.0;
  bool oscillatory = false;  // complex pair
  std::string regime;  // damped | sustained | explosive, "-oscillatory" suffix
                       // when the pair is complex
};

SamuelsonOracle samuelson_oracle(double alpha, double beta, double g, int n);

// Reduced-form (alpha, beta) implied by the behavioral parameters: alpha is
// the after-tax consumption response to income, beta the capital orders
// induced per unit change in consumption demand (through expectations,
// the Leontief gross-up, and the stock-adjustment speed).
struct SamuelsonParams {
  double alpha = 0.0;
  double beta = 0.0;
};
SamuelsonParams samuelson_map(const EconState& st);

// Pearson correlation between annual GDP-growth differences and
// unemployment-rate differences, pooled over post-shock years of all runs.
double okun_correlation(std::span<const RunPairResult> runs, int shock_year);

}  // namespace cata
