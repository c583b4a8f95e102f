#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nps/core.hpp"
#include "nps/methods.hpp"

namespace nps {

class Rng;

enum class CoverageMode { MonteCarlo, Exact };

// Coverage of one (method, n, tpmd) cell: the probability (estimated or
// exact) that the method's closed interval contains the true NPS, plus the
// expected interval width. sims/seed are meaningful in Monte-Carlo mode only.
struct CoverageRecord {
  MethodSpec method;
  long long n = 0;
  ConfidenceLevel level{0.95};
  Tpmd tpmd;
  double true_nps = 0.0;
  double true_var = 0.0;
  CoverageMode mode = CoverageMode::Exact;
  long long sims = 0;
  std::uint64_t seed = 0;
  double coverage = 0.0;
  double mean_width = 0.0;
};

// log k!, exact table lookup (Stirling-free) for moderate k, lgamma above.
double log_factorial(long long k);

// Exact binomial draw by pmf enumeration outward from the mode.
long long sample_binomial(long long n, double p, Rng& rng);

// Exact trinomial draw via sequential binomial conditioning.
TrinomialCounts sample_trinomial(long long n, const Tpmd& p, Rng& rng);

CoverageRecord simulate_coverage(const Tpmd& p, long long n, ConfidenceLevel lvl,
                                 const MethodSpec& m, long long sims,
                                 std::uint64_t seed);

inline constexpr long long kDefaultExactCap = 300;

// Enumerates all (n+1)(n+2)/2 outcomes; refuses n above the cap.
CoverageRecord exact_coverage(const Tpmd& p, long long n, ConfidenceLevel lvl,
                              const MethodSpec& m,
                              long long enumeration_cap = kDefaultExactCap);

// Per-cell seed derivation; a cell run standalone with this seed reproduces
// its grid result exactly.
std::uint64_t derive_cell_seed(std::uint64_t master, std::size_t method_index,
                               long long n, std::size_t tpmd_index);

struct GridConfig {
  std::vector<MethodSpec> methods;
  std::vector<long long> n_values;
  ConfidenceLevel level{0.95};
  std::vector<Tpmd> tpmds;
  CoverageMode mode = CoverageMode::Exact;
  long long sims = 2000;
  std::uint64_t seed = 0;
  int threads = 0; // 0 = hardware concurrency
  long long exact_cap = kDefaultExactCap;
  // called after each (method, n) block with (blocks done, blocks total)
  std::function<void(std::size_t, std::size_t)> progress;
};

// Full method x n x tpmd cross-product, in that row order. Cells are
// independent and computed in parallel; output order does not depend on
// scheduling.
std::vector<CoverageRecord> run_grid(const GridConfig& cfg);

} // namespace nps
