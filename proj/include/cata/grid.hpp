#pragma once
#include <string>
#include <vector>

#include "cata/config.hpp"

namespace cata {

// Cell inventory: exposure (sectoral capital incl. the infrastructure share,
// dwellings) plus flood-protection level per cell. Column-major per-sector
// capital lives in `capital` as [cell * sectors + s].
struct CellGrid {
  int sectors = 0;
  std::vector<long long> cell_id;
  std::vector<double> x, y;
  std::vector<double> dwellings;
  std::vector<double> protection;  // protection_T, may be +inf
  std::vector<double> capital;

  int cells() const { return static_cast<int>(cell_id.size()); }
  double cell_capital(int r) const;
  double exposure(int r) const { return cell_capital(r) + dwellings[static_cast<std::size_t>(r)]; }
  double national_capital() const;
  double national_dwellings() const;
  double national_exposure() const { return national_capital() + national_dwellings(); }
};

// Deterministic synthetic inventory: one large protected "capital city" cell,
// a flood-prone share of cells with no protection, the rest protected at
// 250/400/1000-year standards. Sector capital totals are distributed across
// cells proportionally to cell weight.
CellGrid synthetic_grid(const HazardConfig& hc, const std::vector<double>& sector_capital,
                        double total_dwellings);

CellGrid load_grid(const std::string& csv_path);
void save_grid(const CellGrid& g, const std::string& csv_path);

}  // namespace cata
