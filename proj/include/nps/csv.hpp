#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nps/coverage.hpp"
#include "nps/weights.hpp"

namespace nps {

// Reals in every CSV are serialized with 10 significant digits.
std::string format_real(double v);

inline constexpr const char* kCoverageCsvHeader =
    "method,n,level,p_det,p_pas,p_pro,true_nps,true_var,mode,sims,seed,"
    "coverage,mean_width";

// In exact mode the sims and seed columns are left empty.
void write_coverage_csv(std::ostream& os, std::span<const CoverageRecord> records);
std::vector<CoverageRecord> read_coverage_csv(std::istream& is);

struct WeightsFile {
  std::vector<Tpmd> tpmds;
  std::vector<double> weights;
};

void write_weights_csv(std::ostream& os, std::span<const Tpmd> tpmds,
                       std::span<const double> weights);
WeightsFile read_weights_csv(std::istream& is);

void write_observations_csv(std::ostream& os, std::span<const NpsVarPoint> points);
std::vector<NpsVarPoint> read_observations_csv(std::istream& is);

} // namespace nps
