#include "cata/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cata/csvio.hpp"
#include "cata/kernels.hpp"
#include "cata/rng.hpp"

namespace cata {

double CellGrid::cell_capital(int r) const {
  double acc = 0.0;
  for (int s = 0; s < sectors; ++s) acc += capital[static_cast<std::size_t>(r) * sectors + s];
  return acc;
}

double CellGrid::national_capital() const { return kernels::sum(capital); }

double CellGrid::national_dwellings() const { return kernels::sum(dwellings); }

CellGrid synthetic_grid(const HazardConfig& hc, const std::vector<double>& sector_capital,
                        double total_dwellings) {
  const int n = hc.cells;
  const int S = static_cast<int>(sector_capital.size());
  if (n <= 0) throw std::invalid_argument("synthetic_grid: need at least one cell");

  CellGrid g;
  g.sectors = S;
  g.cell_id.resize(static_cast<std::size_t>(n));
  g.x.resize(static_cast<std::size_t>(n));
  g.y.resize(static_cast<std::size_t>(n));
  g.dwellings.assign(static_cast<std::size_t>(n), 0.0);
  g.protection.assign(static_cast<std::size_t>(n), 1.0);
  g.capital.assign(static_cast<std::size_t>(n) * S, 0.0);

  // layout and weights are derived from a fixed internal stream so the
  // default inventory is part of the configuration, not of run randomness
  Rng rng(0x5eedc0de5eedc0deULL ^ static_cast<std::uint64_t>(n));

  const int n_prone = n == 1 ? 0 : std::max(1, static_cast<int>(std::round(hc.prone_cell_fraction * (n - 1))));
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);

  // cell 0: capital city, fully protected
  w[0] = hc.city_capital_share;
  g.protection[0] = std::numeric_limits<double>::infinity();

  double prone_raw = 0.0, safe_raw = 0.0;
  std::vector<double> raw(static_cast<std::size_t>(n), 0.0);
  for (int r = 1; r < n; ++r) {
    raw[static_cast<std::size_t>(r)] = std::exp(0.8 * rng.normal());
    if (r <= n_prone)
      prone_raw += raw[static_cast<std::size_t>(r)];
    else
      safe_raw += raw[static_cast<std::size_t>(r)];
  }
  const double safe_share = 1.0 - hc.city_capital_share - (n > 1 ? hc.prone_capital_share : 0.0);
  if (safe_share < 0.0)
    throw std::invalid_argument("synthetic_grid: city + prone capital shares exceed 1");
  static const double kSafeProt[3] = {250.0, 400.0, 1000.0};
  for (int r = 1; r < n; ++r) {
    const bool prone = r <= n_prone;
    if (prone) {
      w[static_cast<std::size_t>(r)] = hc.prone_capital_share * raw[static_cast<std::size_t>(r)] / prone_raw;
      g.protection[static_cast<std::size_t>(r)] = 1.0;
    } else {
      w[static_cast<std::size_t>(r)] =
          safe_raw > 0.0 ? safe_share * raw[static_cast<std::size_t>(r)] / safe_raw : 0.0;
      g.protection[static_cast<std::size_t>(r)] = kSafeProt[r % 3];
    }
  }
  if (n == 1) w[0] = 1.0;

  const double national_capital = kernels::sum(sector_capital);
  for (int r = 0; r < n; ++r) {
    g.cell_id[static_cast<std::size_t>(r)] = r;
    g.x[static_cast<std::size_t>(r)] = static_cast<double>(r % 20) * 10.0 + rng.uniform(0.0, 4.0);
    g.y[static_cast<std::size_t>(r)] = static_cast<double>(r / 20) * 10.0 + rng.uniform(0.0, 4.0);
    g.dwellings[static_cast<std::size_t>(r)] = total_dwellings * w[static_cast<std::size_t>(r)];
    for (int s = 0; s < S; ++s)
      g.capital[static_cast<std::size_t>(r) * S + s] =
          sector_capital[static_cast<std::size_t>(s)] * w[static_cast<std::size_t>(r)];
  }
  (void)national_capital;
  return g;
}

CellGrid load_grid(const std::string& csv_path) {
  const csv::Table t = csv::read_table(csv_path);
  const int id_c = t.col("cell_id"), x_c = t.col("x"), y_c = t.col("y");
  const int dw_c = t.col("dwellings"), pr_c = t.col("protection_T");
  if (id_c < 0 || x_c < 0 || y_c < 0 || dw_c < 0 || pr_c < 0)
    throw std::runtime_error("cell inventory " + csv_path +
                             ": header must contain cell_id,x,y,dwellings,protection_T");
  std::vector<int> cap_cols;
  for (int s = 1;; ++s) {
    const int c = t.col("capital_s" + std::to_string(s));
    if (c < 0) break;
    cap_cols.push_back(c);
  }
  if (cap_cols.empty())
    throw std::runtime_error("cell inventory " + csv_path + ": no capital_s1.. columns");

  CellGrid g;
  g.sectors = static_cast<int>(cap_cols.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    g.cell_id.push_back(static_cast<long long>(t.num(r, id_c)));
    g.x.push_back(t.num(r, x_c));
    g.y.push_back(t.num(r, y_c));
    g.dwellings.push_back(t.num(r, dw_c));
    const std::string& praw = t.rows[r][static_cast<std::size_t>(pr_c)];
    g.protection.push_back(praw == "inf" ? std::numeric_limits<double>::infinity()
                                         : t.num(r, pr_c));
    for (int c : cap_cols) g.capital.push_back(t.num(r, c));
  }
  for (double d : g.dwellings)
    if (d < 0.0) throw std::runtime_error("cell inventory: negative dwellings");
  for (double c : g.capital)
    if (c < 0.0) throw std::runtime_error("cell inventory: negative capital");
  for (double p : g.protection)
    if (!(p >= 1.0)) throw std::runtime_error("cell inventory: protection_T must be >= 1");
  return g;
}

void save_grid(const CellGrid& g, const std::string& csv_path) {
  std::vector<std::string> header = {"cell_id", "x", "y", "dwellings", "protection_T"};
  for (int s = 1; s <= g.sectors; ++s) header.push_back("capital_s" + std::to_string(s));
  csv::Writer w(csv_path, header);
  for (int r = 0; r < g.cells(); ++r) {
    std::vector<std::string> row;
    row.push_back(std::to_string(g.cell_id[static_cast<std::size_t>(r)]));
    row.push_back(csv::format_double(g.x[static_cast<std::size_t>(r)]));
    row.push_back(csv::format_double(g.y[static_cast<std::size_t>(r)]));
    row.push_back(csv::format_double(g.dwellings[static_cast<std::size_t>(r)]));
    const double p = g.protection[static_cast<std::size_t>(r)];
    row.push_back(std::isinf(p) ? "inf" : csv::format_double(p));
    for (int s = 0; s < g.sectors; ++s)
      row.push_back(csv::format_double(g.capital[static_cast<std::size_t>(r) * g.sectors + s]));
    w.row_raw(row);
  }
  w.flush();
}

}  // namespace cata
