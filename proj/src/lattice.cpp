#include "nps/lattice.hpp"

#include <stdexcept>

#include "nps/rng.hpp"

namespace nps {

long long lattice_point_count(int degree) {
  if (degree < 1) throw std::invalid_argument("lattice degree must be >= 1");
  long long m = degree;
  return (m + 1) * (m + 2) / 2;
}

std::vector<Tpmd> full_simplex_lattice(int degree) {
  long long count = lattice_point_count(degree);
  std::vector<Tpmd> pts;
  pts.reserve(static_cast<std::size_t>(count));
  double m = static_cast<double>(degree);
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; b <= degree - a; ++b) {
      int c = degree - a - b;
      pts.emplace_back(a / m, b / m, c / m);
    }
  return pts;
}

std::vector<Tpmd> sample_simplex_lattice(const LatticeSpec& spec) {
  long long count = lattice_point_count(spec.degree);
  if (spec.sample_size < 1)
    throw std::invalid_argument("lattice sample size must be >= 1");
  if (spec.sample_size > count)
    throw std::invalid_argument("lattice sample size exceeds lattice cardinality");

  std::vector<Tpmd> pts = full_simplex_lattice(spec.degree);
  Rng rng(spec.seed);
  std::size_t j = static_cast<std::size_t>(spec.sample_size);
  for (std::size_t i = 0; i < j; ++i) {
    std::size_t pick = i + static_cast<std::size_t>(
                               rng.below(static_cast<std::uint64_t>(pts.size() - i)));
    std::swap(pts[i], pts[pick]);
  }
  pts.resize(j);
  return pts;
}

} // namespace nps
