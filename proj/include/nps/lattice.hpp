#pragma once

#include <cstdint>
#include <vector>

#include "nps/core.hpp"

namespace nps {

// A (3, degree) simplex lattice sample: sample_size points (a/m, b/m, c/m)
// with a+b+c = m, drawn uniformly without replacement.
struct LatticeSpec {
  int degree = 400;
  long long sample_size = 10000;
  std::uint64_t seed = 0;
};

// (m+1)(m+2)/2
long long lattice_point_count(int degree);

// Every lattice point, in a fixed deterministic order.
std::vector<Tpmd> full_simplex_lattice(int degree);

// Seeded partial Fisher-Yates over the full lattice; deterministic per seed.
std::vector<Tpmd> sample_simplex_lattice(const LatticeSpec& spec);

} // namespace nps
