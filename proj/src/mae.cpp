#include "nps/mae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nps {

MaeSummary mae(std::span<const CoverageRecord> records,
               std::span<const double> weights, Weighting weighting) {
  if (records.empty())
    throw std::invalid_argument("mae: no coverage records");
  if (records.size() != weights.size())
    throw std::invalid_argument("mae: records and weights differ in length");

  const CoverageRecord& first = records.front();
  std::string method_text = first.method.canonical();
  for (const CoverageRecord& r : records) {
    if (r.n != first.n || r.method.canonical() != method_text ||
        std::fabs(r.level.level - first.level.level) > 1e-12)
      throw std::invalid_argument("mae: records mix methods, n values or levels");
  }

  double wsum = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!(weights[i] >= 0.0))
      throw std::invalid_argument("mae: weights must be nonnegative");
    acc += std::fabs(records[i].coverage - first.level.level) * weights[i];
    wsum += weights[i];
  }
  if (!(wsum > 0.0))
    throw std::invalid_argument("mae: weights must have a positive sum");

  MaeSummary out;
  out.method = first.method;
  out.n = first.n;
  out.level = first.level;
  out.weighting = weighting;
  out.mae = acc / wsum;
  return out;
}

std::vector<double> min_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k)
      ranks[order[k]] = static_cast<double>(i + 1); // ties share the minimum rank
    i = j + 1;
  }
  return ranks;
}

} // namespace nps
