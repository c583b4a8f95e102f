#pragma once

#include <cstdint>
#include <vector>

namespace nps {

// Respondent counts per category. Counts are kept as exact integers so that
// coverage enumeration can identify outcomes exactly.
struct TrinomialCounts {
  long long det = 0;
  long long pas = 0;
  long long pro = 0;

  long long total() const noexcept { return det + pas + pro; }
};

// Trinomial probability mass distribution (p_det, p_pas, p_pro).
// The constructor renormalizes inputs whose sum is within 1e-9 of 1 and
// rejects anything further off, so file round-trip noise is tolerated
// without masking genuinely bad data.
struct Tpmd {
  double det = 0.0;
  double pas = 0.0;
  double pro = 0.0;

  Tpmd() = default;
  Tpmd(double p_det, double p_pas, double p_pro);

  double nps() const noexcept { return pro - det; }
  double variance() const noexcept;
};

// Confidence level together with its two-sided normal quantile z.
struct ConfidenceLevel {
  double level;
  double z;

  explicit ConfidenceLevel(double lvl);
};

double nps_from_counts(const TrinomialCounts& c);
Tpmd tpmd_from_counts(const TrinomialCounts& c);

// sigma_NPS = p_pro + p_det - (p_pro - p_det)^2, ranging 0..1.
double nps_variance(const Tpmd& p);

// All 2n+1 scores attainable with n respondents, ascending.
std::vector<double> possible_scores(long long n);

// The "inverted shield": a (nps, variance) pair is realizable by some Tpmd
// iff |nps| <= variance + nps^2 <= 1.
bool feasible_nps_variance(double nps_value, double variance) noexcept;

// Throws std::invalid_argument on negative counts or (when require_total) a
// zero total.
void validate_counts(const TrinomialCounts& c, bool require_total = true);

} // namespace nps
