#include "nps/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nps/normal.hpp"

namespace nps {

void validate_counts(const TrinomialCounts& c, bool require_total) {
  if (c.det < 0 || c.pas < 0 || c.pro < 0)
    throw std::invalid_argument("trinomial counts must be nonnegative");
  if (require_total && c.total() < 1)
    throw std::invalid_argument("trinomial counts must total at least 1");
}

Tpmd::Tpmd(double p_det, double p_pas, double p_pro)
    : det(p_det), pas(p_pas), pro(p_pro) {
  const double lo = -1e-12;
  if (!(det >= lo && pas >= lo && pro >= lo) || det > 1.0 + 1e-9 ||
      pas > 1.0 + 1e-9 || pro > 1.0 + 1e-9)
    throw std::invalid_argument("Tpmd components must lie in [0,1]");
  det = std::clamp(det, 0.0, 1.0);
  pas = std::clamp(pas, 0.0, 1.0);
  pro = std::clamp(pro, 0.0, 1.0);
  double sum = det + pas + pro;
  if (std::fabs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("Tpmd components must sum to 1 (got " +
                                std::to_string(sum) + ")");
  if (sum != 1.0) {
    det /= sum;
    pas /= sum;
    pro /= sum;
  }
}

double Tpmd::variance() const noexcept {
  double d = nps();
  return std::max(0.0, pro + det - d * d);
}

ConfidenceLevel::ConfidenceLevel(double lvl) : level(lvl) {
  if (!(lvl > 0.0 && lvl < 1.0))
    throw std::invalid_argument("confidence level must be in (0,1)");
  z = inverse_normal_cdf(0.5 * (1.0 + lvl));
}

double nps_from_counts(const TrinomialCounts& c) {
  validate_counts(c);
  return static_cast<double>(c.pro - c.det) / static_cast<double>(c.total());
}

Tpmd tpmd_from_counts(const TrinomialCounts& c) {
  validate_counts(c);
  double n = static_cast<double>(c.total());
  return Tpmd(static_cast<double>(c.det) / n, static_cast<double>(c.pas) / n,
              static_cast<double>(c.pro) / n);
}

double nps_variance(const Tpmd& p) { return p.variance(); }

std::vector<double> possible_scores(long long n) {
  if (n < 1)
    throw std::invalid_argument("possible_scores: n must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * n + 1));
  for (long long k = -n; k <= n; ++k)
    out.push_back(static_cast<double>(k) / static_cast<double>(n));
  return out;
}

bool feasible_nps_variance(double nps_value, double variance) noexcept {
  double s = variance + nps_value * nps_value; // p_pro + p_det
  return std::fabs(nps_value) <= s && s <= 1.0;
}

} // namespace nps
