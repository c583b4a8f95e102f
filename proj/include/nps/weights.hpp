#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nps/core.hpp"

namespace nps {

// One observed distribution summarized by its score and variance.
struct NpsVarPoint {
  double nps = 0.0;
  double variance = 0.0;
};

// Bivariate Gaussian product-kernel density over (nps, variance) points.
// Bandwidths follow the Scott plug-in rule h_i = sd_i * N^(-1/6).
struct WeightModel {
  std::vector<NpsVarPoint> observations;
  double h_nps = 0.0;
  double h_var = 0.0;

  double density(double nps_value, double variance) const;
};

// Requires >= 2 observations, all inside the feasible region, with positive
// spread on both dimensions.
WeightModel fit_weight_model(std::span<const NpsVarPoint> observations);

// Density at each sample point's (nps, variance), rescaled to sum to 1.
std::vector<double> observation_weights(const WeightModel& model,
                                        std::span<const Tpmd> sample);

// The unique Tpmd with the given score and variance; throws if infeasible.
Tpmd tpmd_from_nps_variance(double nps_value, double variance);

// Synthetic stand-in for an observed-distribution database: draws
// (nps, variance) from independent normals truncated to the feasible region.
// The proposal means are calibrated so the truncated sample means land on
// (0.26, 0.59) with standard deviations (0.24, 0.12) before truncation.
std::vector<Tpmd> synth_observed_surrogate(long long count, std::uint64_t seed);

} // namespace nps
