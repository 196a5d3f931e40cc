#include "cata/hazard.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cata/kernels.hpp"

namespace cata {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

double HazardModel::theta_of_T(double T) const {
  double th = 1.0 + cfg.theta_a * std::log(std::max(T, 1.0));
  return std::max(th, 1.0);
}

double HazardModel::multiplier_at(double T) const {
  if (!calibrated || calibration.empty()) return 1.0;
  const auto& pts = calibration;  // sorted by period in calibrate()
  double lx = std::log(std::max(T, 1.0));
  if (pts.size() == 1) return pts[0].multiplier;
  std::size_t hi = 1;
  while (hi + 1 < pts.size() && std::log(pts[hi].period) < lx) ++hi;
  std::size_t lo = hi - 1;
  double x0 = std::log(pts[lo].period), x1 = std::log(pts[hi].period);
  double y0 = std::log(pts[lo].multiplier), y1 = std::log(pts[hi].multiplier);
  double t = (lx - x0) / (x1 - x0);  // not clamped: end segments extrapolate
  return std::exp(y0 + t * (y1 - y0));
}

double HazardModel::marginal_loss_fraction(int cell, double t) const {
  std::size_t i = static_cast<std::size_t>(cell);
  if (!(t > grid.protection[i])) return 0.0;
  return clamp01(c[i] * (std::log(t) - log_t0[i]));
}

double HazardModel::expected_cell_loss(int cell, double multiplier, double event_t) const {
  std::size_t i = static_cast<std::size_t>(cell);
  double prot = grid.protection[i];
  if (!(prot <= event_t)) return 0.0;  // also rejects +inf protection
  double a = multiplier * c[i];
  if (!(a > 0.0)) return 0.0;
  double T0 = t0[i];
  double tm = cfg.t_max;
  double thr = std::max({T0, prot, 1.0});
  if (thr >= tm) {
    // only the truncation atom at t_max can contribute
    if (!(tm > prot)) return 0.0;
    return clamp01(a * std::log(tm / T0)) / tm;
  }
  // saturation point of the marginal curve, kept inside [thr, t_max]
  double t1;
  if (1.0 / a >= std::log(tm / T0)) {
    t1 = tm;
  } else {
    t1 = std::clamp(T0 * std::exp(1.0 / a), thr, tm);
  }
  double lin = a * ((1.0 + std::log(thr / T0)) / thr - (1.0 + std::log(t1 / T0)) / t1);
  double sat = 1.0 / t1 - 1.0 / tm;
  double tail = clamp01(a * std::log(tm / T0)) / tm;
  return lin + sat + tail;
}

double HazardModel::expected_national_fraction(double multiplier, double event_t) const {
  double acc = 0.0;
  for (int r = 0; r < grid.cells(); ++r) {
    acc += exposure_weight[static_cast<std::size_t>(r)] *
           expected_cell_loss(r, multiplier, event_t);
  }
  return acc;
}

double HazardModel::max_national_fraction(double event_t) const {
  // multiplier -> inf limit: every gated cell loses everything above its
  // threshold period, i.e. with probability 1/thr.
  double acc = 0.0;
  for (int r = 0; r < grid.cells(); ++r) {
    std::size_t i = static_cast<std::size_t>(r);
    double prot = grid.protection[i];
    if (!(prot <= event_t)) continue;
    double thr = std::max({t0[i], prot, 1.0});
    if (thr >= cfg.t_max) {
      if (cfg.t_max > prot) acc += exposure_weight[i] / cfg.t_max;
      continue;
    }
    acc += exposure_weight[i] / thr;
  }
  return acc;
}

HazardModel make_hazard_model(const CellGrid& grid, const HazardConfig& cfg) {
  HazardModel m;
  m.grid = grid;
  m.cfg = cfg;
  int n = grid.cells();
  if (n <= 0) throw std::runtime_error("hazard model needs a non-empty cell grid");
  m.c.resize(static_cast<std::size_t>(n));
  m.t0.resize(static_cast<std::size_t>(n));
  m.log_t0.resize(static_cast<std::size_t>(n));
  m.exposure_weight.resize(static_cast<std::size_t>(n));
  double total = grid.national_exposure();
  if (!(total > 0.0)) throw std::runtime_error("cell grid has zero total exposure");
  for (int r = 0; r < n; ++r) {
    std::size_t i = static_cast<std::size_t>(r);
    m.c[i] = cfg.marginal_slope;
    // unprotected cells sit lower in the basin: damage starts at shorter
    // return periods there
    m.t0[i] = grid.protection[i] <= 1.0 ? cfg.prone_t0 : cfg.safe_t0;
    m.log_t0[i] = std::log(m.t0[i]);
    m.exposure_weight[i] = grid.exposure(r) / total;
  }
  return m;
}

void calibrate(HazardModel& model) {
  const auto& periods = model.cfg.target_periods;
  const auto& fractions = model.cfg.target_fractions;
  std::vector<std::size_t> order(periods.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return periods[a] < periods[b]; });

  model.calibration.clear();
  model.calibrated = false;
  for (std::size_t k : order) {
    double T = periods[k];
    double f = fractions[k];
    double cap = model.max_national_fraction(T);
    if (!(f < cap * (1.0 - 1e-12))) {
      std::ostringstream os;
      os << "calibration target infeasible: " << f << " of national exposure at the " << T
         << "-year event, but the inventory admits at most " << cap
         << " (exposure behind protection above " << T
         << " years never floods at that return period)";
      throw std::runtime_error(os.str());
    }
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (model.expected_national_fraction(hi, T) < f) {
      hi *= 2.0;
      if (++guard > 200) throw std::runtime_error("calibration bracket failed to expand");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * std::max(1.0, hi); ++it) {
      double mid = 0.5 * (lo + hi);
      (model.expected_national_fraction(mid, T) < f ? lo : hi) = mid;
    }
    CalibrationTargetResult res;
    res.period = T;
    res.target = f;
    res.multiplier = 0.5 * (lo + hi);
    res.achieved = model.expected_national_fraction(res.multiplier, T);
    model.calibration.push_back(res);
  }
  model.calibrated = true;
}

std::vector<double> sample_copula(const std::string& family, double theta, int n, Rng& rng) {
  double th;
  if (family == "independence") {
    th = 1.0;
  } else if (family == "gumbel") {
    th = std::max(theta, 1.0);
  } else {
    throw std::runtime_error("unknown copula family: " + family);
  }
  // fixed draw order (angle, exponential tilt, then cell exponentials) keeps
  // severity draws aligned across return periods under a common seed
  double angle = std::numbers::pi * rng.uniform_open();
  double w = rng.exponential();
  std::vector<double> e(static_cast<std::size_t>(n));
  rng.fill_exponential(e);

  double alpha = 1.0 / th;
  double log_frailty = 0.0;
  if (alpha < 1.0) {
    double r = (1.0 - alpha) / alpha;
    log_frailty = std::log(std::sin(alpha * angle)) - std::log(std::sin(angle)) / alpha +
                  r * (std::log(std::sin((1.0 - alpha) * angle)) - std::log(w));
  }
  std::vector<double> u(static_cast<std::size_t>(n));
  kernels::gumbel_uniforms(u, e, alpha, log_frailty);
  return u;
}

FloodEvent sample_event(const HazardModel& model, double T, Rng& rng) {
  int n = model.grid.cells();
  std::vector<double> u = sample_copula(model.cfg.copula, model.theta_of_T(T), n, rng);
  double mult = model.multiplier_at(T);
  std::vector<double> scale(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < scale.size(); ++i) scale[i] = mult * model.c[i];

  FloodEvent ev;
  ev.return_period = T;
  ev.loss_fraction.resize(static_cast<std::size_t>(n));
  kernels::flood_losses(ev.loss_fraction, u, model.grid.protection, scale, model.log_t0, T,
                        model.cfg.t_max);
  double total = 0.0;
  for (int r = 0; r < n; ++r) {
    total += ev.loss_fraction[static_cast<std::size_t>(r)] * model.grid.exposure(r);
  }
  ev.total_direct_loss = total;
  ev.total_loss_fraction = total / model.grid.national_exposure();
  return ev;
}

FloodEvent scale_event_to_fraction(const HazardModel& model, const FloodEvent& ev, double x) {
  int n = model.grid.cells();
  FloodEvent out;
  out.return_period = ev.return_period;
  out.loss_fraction.assign(static_cast<std::size_t>(n), 0.0);
  if (x <= 0.0) return out;

  double attainable = 0.0;
  for (int r = 0; r < n; ++r) {
    if (ev.loss_fraction[static_cast<std::size_t>(r)] > 0.0) {
      attainable += model.exposure_weight[static_cast<std::size_t>(r)];
    }
  }
  if (!(x < attainable * (1.0 - 1e-12))) {
    std::ostringstream os;
    os << "cannot scale event to loss fraction " << x << ": cells flooded in this draw cover "
       << attainable << " of national exposure";
    throw std::runtime_error(os.str());
  }

  auto frac_at = [&](double g) {
    double acc = 0.0;
    for (int r = 0; r < n; ++r) {
      std::size_t i = static_cast<std::size_t>(r);
      acc += model.exposure_weight[i] * std::min(1.0, g * ev.loss_fraction[i]);
    }
    return acc;
  };
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (frac_at(hi) < x) {
    hi *= 2.0;
    if (++guard > 300) throw std::runtime_error("event rescale bracket failed to expand");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    (frac_at(mid) < x ? lo : hi) = mid;
  }
  double g = 0.5 * (lo + hi);
  double total = 0.0;
  for (int r = 0; r < n; ++r) {
    std::size_t i = static_cast<std::size_t>(r);
    out.loss_fraction[i] = std::min(1.0, g * ev.loss_fraction[i]);
    total += out.loss_fraction[i] * model.grid.exposure(r);
  }
  out.total_direct_loss = total;
  out.total_loss_fraction = total / model.grid.national_exposure();
  return out;
}

}  // namespace cata
