#include "cata/damage.hpp"

#include <cstddef>
#include <stdexcept>

namespace cata {

std::vector<double> relief_schedule(const ReliefConfig& relief, double dwellings_loss,
                                    bool severe) {
  double cap = severe ? relief.severe_cap : relief.moderate_cap;
  double total = cap * dwellings_loss;
  double wsum = 0.0;
  for (double w : relief.disbursement_profile) wsum += w;
  if (!(wsum > 0.0)) throw std::runtime_error("relief disbursement profile sums to zero");
  std::vector<double> out(relief.disbursement_profile.size());
  for (std::size_t q = 0; q < out.size(); ++q) {
    out[q] = total * relief.disbursement_profile[q] / wsum;
  }
  return out;
}

DamageReport assess_damage(const CellGrid& grid, const FloodEvent& ev,
                           double infrastructure_share, const ReliefConfig& relief) {
  int n = grid.cells();
  int s = grid.sectors;
  if (static_cast<int>(ev.loss_fraction.size()) != n) {
    throw std::runtime_error("event cell count does not match the grid");
  }
  DamageReport rep;
  rep.sector_capital_loss.assign(static_cast<std::size_t>(s), 0.0);
  rep.firm_capital_loss.assign(static_cast<std::size_t>(s), 0.0);
  for (int r = 0; r < n; ++r) {
    std::size_t i = static_cast<std::size_t>(r);
    double f = ev.loss_fraction[i];
    if (f == 0.0) continue;
    for (int j = 0; j < s; ++j) {
      rep.sector_capital_loss[static_cast<std::size_t>(j)] +=
          f * grid.capital[i * static_cast<std::size_t>(s) + static_cast<std::size_t>(j)];
    }
    rep.dwellings_loss += f * grid.dwellings[i];
  }
  double gross_capital = 0.0;
  for (int j = 0; j < s; ++j) {
    std::size_t js = static_cast<std::size_t>(j);
    gross_capital += rep.sector_capital_loss[js];
    rep.firm_capital_loss[js] = (1.0 - infrastructure_share) * rep.sector_capital_loss[js];
  }
  rep.infrastructure_loss = infrastructure_share * gross_capital;
  rep.total_direct_loss = gross_capital + rep.dwellings_loss;
  rep.loss_fraction = rep.total_direct_loss / grid.national_exposure();
  rep.severe = rep.loss_fraction >= relief.severe_threshold;
  rep.compensation_share = rep.severe ? relief.severe_cap : relief.moderate_cap;
  rep.firm_comp_share = rep.severe ? relief.firm_severe_cap : relief.firm_moderate_cap;
  rep.rebuild_share = rep.compensation_share +
                      relief.self_finance_share * (1.0 - rep.compensation_share);
  rep.relief_per_quarter = relief_schedule(relief, rep.dwellings_loss, rep.severe);
  return rep;
}

}  // namespace cata
