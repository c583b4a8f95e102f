#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nps/csv.hpp"
#include "nps/mae.hpp"

namespace nps {

// Per-method MAE across the n grid, plus the two summary criteria: total MAE
// over n <= 100 and the average of per-n ranks (ties share the minimum rank).
struct MaeTableRow {
  MethodSpec method;
  std::vector<double> mae_by_n; // aligned with MaeTable::n_values
  double total_le_100 = 0.0;
  double avg_rank = 0.0;
};

struct MaeTable {
  Weighting weighting = Weighting::Uniform;
  ConfidenceLevel level{0.95};
  std::vector<long long> n_values;
  std::vector<MaeTableRow> rows; // sorted ascending by the active criterion
};

// Groups coverage records by (method, n). When weights are given, their
// tpmds must match the tpmd sequence of every group (checked to 1e-9).
// rank_order sorts rows by average rank instead of total MAE.
MaeTable build_mae_table(std::span<const CoverageRecord> records,
                         const WeightsFile* weights, Weighting weighting,
                         bool rank_order = false);

// method,n,level,weighting,mae rows for one or more tables.
void write_mae_csv(std::ostream& os, std::span<const MaeTable> tables);

// Markdown tables, MAE scaled by 100 unless raw_scale.
std::string render_markdown_report(std::span<const MaeTable> tables,
                                   bool raw_scale = false);

} // namespace nps
