#pragma once
#include <span>
#include <string>
#include <vector>

#include "cata/config.hpp"
#include "cata/grid.hpp"
#include "cata/rng.hpp"

namespace cata {

struct FloodEvent {
  double return_period = 0.0;
  std::vector<double> loss_fraction;  // per cell, in [0,1]
  double total_direct_loss = 0.0;     // monetary units (capital + dwellings)
  double total_loss_fraction = 0.0;   // of national exposure
};

struct CalibrationTargetResult {
  double period = 0.0;
  double target = 0.0;
  double multiplier = 0.0;
  double achieved = 0.0;  // expected national loss fraction at the multiplier
};

// Spatially coupled flood generator. Severity per cell follows the per-cell
// loss-exceedance marginal; co-occurrence follows a Gumbel copula whose
// dependence grows with the event return period.
struct HazardModel {
  CellGrid grid;
  HazardConfig cfg;

  std::vector<double> c;        // marginal slope per cell
  std::vector<double> t0;       // reference period per cell
  std::vector<double> log_t0;
  std::vector<double> exposure_weight;  // (capital + dwellings) share per cell

  bool calibrated = false;
  std::vector<CalibrationTargetResult> calibration;

  double theta_of_T(double T) const;
  double multiplier_at(double T) const;  // log-log interpolation, 1.0 if uncalibrated

  // Pure per-cell loss-exceedance curve at local return period t (no t_max
  // truncation; truncation applies to the uniform->period map in events).
  double marginal_loss_fraction(int cell, double t) const;

  // Exact expectation of the event-loss transform over u ~ U(0,1) for one
  // cell, with the event-level protection gate at event_t.
  double expected_cell_loss(int cell, double multiplier, double event_t) const;
  double expected_national_fraction(double multiplier, double event_t) const;
  // limit multiplier -> inf (feasibility bound)
  double max_national_fraction(double event_t) const;
};

HazardModel make_hazard_model(const CellGrid& grid, const HazardConfig& cfg);

// Fits the global severity multiplier at each configured target by bisection
// on the exact expected national loss fraction; throws std::runtime_error
// naming the first infeasible target. Deterministic.
void calibrate(HazardModel& model);

// n copula uniforms with the stable-frailty construction; theta >= 1.
// family: "gumbel" or "independence".
std::vector<double> sample_copula(const std::string& family, double theta, int n, Rng& rng);

FloodEvent sample_event(const HazardModel& model, double T, Rng& rng);

// Multiplicative rescale of an event's per-cell losses (clamped to [0,1],
// zeros preserved) so total_loss_fraction == x exactly.
FloodEvent scale_event_to_fraction(const HazardModel& model, const FloodEvent& ev, double x);

}  // namespace cata
