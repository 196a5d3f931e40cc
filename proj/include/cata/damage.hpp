#pragma once
#include <vector>

#include "cata/config.hpp"
#include "cata/grid.hpp"
#include "cata/hazard.hpp"

namespace cata {

// Direct-damage assessment of one flood event against the cell inventory.
// Gross capital losses are split into the firm-held share and the public
// infrastructure share; dwelling losses accrue to households. The split
// conserves the event total exactly.
struct DamageReport {
  std::vector<double> sector_capital_loss;  // gross per sector, incl. infrastructure
  std::vector<double> firm_capital_loss;    // (1 - infra_share) * gross
  double infrastructure_loss = 0.0;
  double dwellings_loss = 0.0;
  double total_direct_loss = 0.0;
  double loss_fraction = 0.0;  // of national exposure
  bool severe = false;
  double compensation_share = 1.0;  // relief share of dwelling losses
  double firm_comp_share = 1.0;     // government share of firm reconstruction
  double rebuild_share = 1.0;       // share of dwelling losses actually rebuilt
  std::vector<double> relief_per_quarter;  // government transfers to households
};

DamageReport assess_damage(const CellGrid& grid, const FloodEvent& ev,
                           double infrastructure_share, const ReliefConfig& relief);

// Relief is a share of dwelling losses: full compensation for moderate events,
// a capped share once the loss fraction crosses the severe threshold. The
// disbursement profile spreads payments over quarters (normalized to sum 1).
std::vector<double> relief_schedule(const ReliefConfig& relief, double dwellings_loss,
                                    bool severe);

}  // namespace cata
