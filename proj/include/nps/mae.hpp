#pragma once

#include <span>
#include <vector>

#include "nps/coverage.hpp"

namespace nps {

enum class Weighting { Uniform, Observed };

// Weighted mean absolute deviation of coverage from the nominal level over
// the sampled Tpmds of one (method, n, level) cell group.
struct MaeSummary {
  MethodSpec method;
  long long n = 0;
  ConfidenceLevel level{0.95};
  Weighting weighting = Weighting::Uniform;
  double mae = 0.0;
};

// records must share method/n/level; weights nonnegative with positive sum.
MaeSummary mae(std::span<const CoverageRecord> records,
               std::span<const double> weights, Weighting weighting);

// Ascending ranks starting at 1; ties share the minimum rank.
std::vector<double> min_ranks(std::span<const double> values);

} // namespace nps
