#include "nps/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "nps/normal.hpp"
#include "nps/rng.hpp"

namespace nps {

double WeightModel::density(double nps_value, double variance) const {
  double sum = 0.0;
  for (const NpsVarPoint& obs : observations) {
    double u = (nps_value - obs.nps) / h_nps;
    double v = (variance - obs.variance) / h_var;
    sum += normal_pdf(u) * normal_pdf(v);
  }
  return sum / (static_cast<double>(observations.size()) * h_nps * h_var);
}

WeightModel fit_weight_model(std::span<const NpsVarPoint> observations) {
  std::size_t n = observations.size();
  if (n < 2)
    throw std::invalid_argument("fit_weight_model: need at least 2 observations");

  double mean_nps = 0.0, mean_var = 0.0;
  for (const NpsVarPoint& o : observations) {
    if (!feasible_nps_variance(o.nps, o.variance))
      throw std::invalid_argument("fit_weight_model: observation outside the feasible region");
    mean_nps += o.nps;
    mean_var += o.variance;
  }
  mean_nps /= static_cast<double>(n);
  mean_var /= static_cast<double>(n);

  double ss_nps = 0.0, ss_var = 0.0;
  for (const NpsVarPoint& o : observations) {
    ss_nps += (o.nps - mean_nps) * (o.nps - mean_nps);
    ss_var += (o.variance - mean_var) * (o.variance - mean_var);
  }
  double sd_nps = std::sqrt(ss_nps / static_cast<double>(n - 1));
  double sd_var = std::sqrt(ss_var / static_cast<double>(n - 1));
  if (!(sd_nps > 0.0) || !(sd_var > 0.0))
    throw std::invalid_argument("fit_weight_model: observations are degenerate on one dimension");

  double scale = std::pow(static_cast<double>(n), -1.0 / 6.0);
  WeightModel model;
  model.observations.assign(observations.begin(), observations.end());
  model.h_nps = sd_nps * scale;
  model.h_var = sd_var * scale;
  return model;
}

std::vector<double> observation_weights(const WeightModel& model,
                                        std::span<const Tpmd> sample) {
  if (sample.empty())
    throw std::invalid_argument("observation_weights: empty sample");
  std::vector<double> w;
  w.reserve(sample.size());
  double total = 0.0;
  for (const Tpmd& p : sample) {
    double d = model.density(p.nps(), p.variance());
    w.push_back(d);
    total += d;
  }
  if (!(total > 0.0))
    throw std::invalid_argument("observation_weights: density vanished over the whole sample");
  for (double& x : w) x /= total;
  return w;
}

Tpmd tpmd_from_nps_variance(double nps_value, double variance) {
  if (!feasible_nps_variance(nps_value, variance))
    throw std::invalid_argument("tpmd_from_nps_variance: point outside the feasible region");
  double s = variance + nps_value * nps_value; // p_pro + p_det
  return Tpmd(0.5 * (s - nps_value), 1.0 - s, 0.5 * (s + nps_value));
}

std::vector<Tpmd> synth_observed_surrogate(long long count, std::uint64_t seed) {
  if (count < 1)
    throw std::invalid_argument("synth_observed_surrogate: count must be >= 1");
  // Proposal means chosen so that rejection against the feasible region
  // leaves truncated means of about (0.26, 0.59).
  const double mean_nps = 0.306, sd_nps = 0.24;
  const double mean_var = 0.600, sd_var = 0.12;

  Rng rng(seed);
  std::vector<Tpmd> out;
  out.reserve(static_cast<std::size_t>(count));
  while (out.size() < static_cast<std::size_t>(count)) {
    double d = mean_nps + sd_nps * rng.normal();
    double v = mean_var + sd_var * rng.normal();
    if (!feasible_nps_variance(d, v)) continue;
    out.push_back(tpmd_from_nps_variance(d, v));
  }
  return out;
}

} // namespace nps
