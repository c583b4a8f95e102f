#include "nps/coverage.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

#include "nps/rng.hpp"
#include "parallel.hpp"

namespace nps {

namespace {

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

} // namespace

double log_factorial(long long k) {
  if (k < 0) throw std::invalid_argument("log_factorial: negative argument");
  static const std::vector<double> table = [] {
    std::vector<double> t(4097);
    t[0] = 0.0;
    KahanSum acc;
    for (std::size_t i = 1; i < t.size(); ++i) {
      acc.add(std::log(static_cast<double>(i)));
      t[i] = acc.sum;
    }
    return t;
  }();
  if (k < static_cast<long long>(table.size())) return table[static_cast<std::size_t>(k)];
  // Stirling series; error < 1e-28 for k > 4096
  double x = static_cast<double>(k);
  double inv = 1.0 / x;
  double inv2 = inv * inv;
  return (x + 0.5) * std::log(x) - x + 0.91893853320467274178 +
         inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
}

long long sample_binomial(long long n, double p, Rng& rng) {
  if (n < 0) throw std::invalid_argument("sample_binomial: n must be >= 0");
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;

  double u = rng.uniform();
  double nn = static_cast<double>(n);
  long long mode = static_cast<long long>(std::floor((nn + 1.0) * p));
  if (mode > n) mode = n;

  double q = 1.0 - p;
  double pmf_mode = std::exp(log_factorial(n) - log_factorial(mode) -
                             log_factorial(n - mode) +
                             static_cast<double>(mode) * std::log(p) +
                             static_cast<double>(n - mode) * std::log(q));
  // Enumerate outward from the mode; first k whose cumulative mass passes u.
  long long k_lo = mode, k_hi = mode;
  double pmf_lo = pmf_mode, pmf_hi = pmf_mode;
  double cum = pmf_mode;
  if (u < cum) return mode;
  while (k_lo > 0 || k_hi < n) {
    if (k_lo > 0) {
      pmf_lo *= static_cast<double>(k_lo) * q /
                (static_cast<double>(n - k_lo + 1) * p);
      --k_lo;
      cum += pmf_lo;
      if (u < cum) return k_lo;
    }
    if (k_hi < n) {
      pmf_hi *= static_cast<double>(n - k_hi) * p /
                (static_cast<double>(k_hi + 1) * q);
      ++k_hi;
      cum += pmf_hi;
      if (u < cum) return k_hi;
    }
  }
  return mode; // u landed in the last few ulp of cumulative mass
}

TrinomialCounts sample_trinomial(long long n, const Tpmd& p, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_trinomial: n must be >= 1");
  long long det = sample_binomial(n, p.det, rng);
  long long rem = n - det;
  double denom = 1.0 - p.det;
  double cond = denom > 0.0 ? std::min(1.0, p.pas / denom) : 0.0;
  long long pas = sample_binomial(rem, cond, rng);
  return {det, pas, rem - pas};
}

namespace {

struct OutcomeCell {
  long long det;
  long long pas;
  double lower;
  double upper;
  double width;
  double logcoef;
};

std::size_t outcome_count(long long n) {
  return static_cast<std::size_t>((n + 1) * (n + 2) / 2);
}

// Interval bounds per outcome depend only on (method, n, level); a table is
// shared across every Tpmd evaluated at that cell shape.
std::vector<OutcomeCell> build_outcome_table(long long n, ConfidenceLevel lvl,
                                             const MethodSpec& m, int threads) {
  std::vector<OutcomeCell> table(outcome_count(n));
  double lf_n = log_factorial(n);
  // row d occupies [offset(d), offset(d) + (n-d)] with offset as below
  auto row_offset = [n](long long d) {
    return static_cast<std::size_t>(d * (n + 1) - d * (d - 1) / 2);
  };
  detail::parallel_for(static_cast<std::size_t>(n + 1), threads, [&](std::size_t di) {
    long long d = static_cast<long long>(di);
    std::size_t base = row_offset(d);
    for (long long s = 0; s <= n - d; ++s) {
      long long r = n - d - s;
      IntervalEstimate est = compute_interval({d, s, r}, lvl, m);
      double logcoef =
          lf_n - log_factorial(d) - log_factorial(s) - log_factorial(r);
      table[base + static_cast<std::size_t>(s)] =
          OutcomeCell{d, s, est.lower, est.upper, est.width(), logcoef};
    }
  });
  return table;
}

CoverageRecord accumulate_exact(const Tpmd& p, long long n, ConfidenceLevel lvl,
                                const MethodSpec& m,
                                const std::vector<OutcomeCell>& table) {
  double target = p.nps();
  double log_det = p.det > 0.0 ? std::log(p.det) : 0.0;
  double log_pas = p.pas > 0.0 ? std::log(p.pas) : 0.0;
  double log_pro = p.pro > 0.0 ? std::log(p.pro) : 0.0;

  KahanSum covered;
  KahanSum width;
  for (const OutcomeCell& cell : table) {
    long long r = n - cell.det - cell.pas;
    if ((cell.det > 0 && p.det <= 0.0) || (cell.pas > 0 && p.pas <= 0.0) ||
        (r > 0 && p.pro <= 0.0))
      continue; // impossible outcome
    double lp = cell.logcoef + static_cast<double>(cell.det) * log_det +
                static_cast<double>(cell.pas) * log_pas +
                static_cast<double>(r) * log_pro;
    double prob = std::exp(lp);
    if (cell.lower <= target && target <= cell.upper) covered.add(prob);
    width.add(prob * cell.width);
  }

  CoverageRecord rec;
  rec.method = m;
  rec.n = n;
  rec.level = lvl;
  rec.tpmd = p;
  rec.true_nps = target;
  rec.true_var = p.variance();
  rec.mode = CoverageMode::Exact;
  rec.coverage = covered.sum;
  rec.mean_width = width.sum;
  return rec;
}

} // namespace

CoverageRecord exact_coverage(const Tpmd& p, long long n, ConfidenceLevel lvl,
                              const MethodSpec& m, long long enumeration_cap) {
  if (n < 1) throw std::invalid_argument("exact_coverage: n must be >= 1");
  if (n > enumeration_cap)
    throw std::invalid_argument("exact_coverage: n exceeds the enumeration cap of " +
                                std::to_string(enumeration_cap));
  std::vector<OutcomeCell> table = build_outcome_table(n, lvl, m, 1);
  return accumulate_exact(p, n, lvl, m, table);
}

CoverageRecord simulate_coverage(const Tpmd& p, long long n, ConfidenceLevel lvl,
                                 const MethodSpec& m, long long sims,
                                 std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("simulate_coverage: n must be >= 1");
  if (sims < 1) throw std::invalid_argument("simulate_coverage: sims must be >= 1");

  Rng rng(seed);
  double target = p.nps();
  std::unordered_map<long long, std::pair<IntervalEstimate, bool>> memo;
  long long covered = 0;
  KahanSum width;
  for (long long i = 0; i < sims; ++i) {
    TrinomialCounts c = sample_trinomial(n, p, rng);
    long long key = c.det * (n + 1) + c.pas;
    auto it = memo.find(key);
    if (it == memo.end()) {
      IntervalEstimate est = compute_interval(c, lvl, m);
      it = memo.emplace(key, std::make_pair(est, est.contains(target))).first;
    }
    if (it->second.second) ++covered;
    width.add(it->second.first.width());
  }

  CoverageRecord rec;
  rec.method = m;
  rec.n = n;
  rec.level = lvl;
  rec.tpmd = p;
  rec.true_nps = target;
  rec.true_var = p.variance();
  rec.mode = CoverageMode::MonteCarlo;
  rec.sims = sims;
  rec.seed = seed;
  rec.coverage = static_cast<double>(covered) / static_cast<double>(sims);
  rec.mean_width = width.sum / static_cast<double>(sims);
  return rec;
}

std::uint64_t derive_cell_seed(std::uint64_t master, std::size_t method_index,
                               long long n, std::size_t tpmd_index) {
  std::uint64_t h = splitmix64(master ^ 0x6e70732d67726964ULL);
  h = splitmix64(h ^ static_cast<std::uint64_t>(method_index));
  h = splitmix64(h ^ static_cast<std::uint64_t>(n));
  h = splitmix64(h ^ static_cast<std::uint64_t>(tpmd_index));
  return h;
}

std::vector<CoverageRecord> run_grid(const GridConfig& cfg) {
  if (cfg.methods.empty() || cfg.n_values.empty() || cfg.tpmds.empty())
    throw std::invalid_argument("run_grid: methods, n values and tpmds must be nonempty");
  for (long long n : cfg.n_values) {
    if (n < 1) throw std::invalid_argument("run_grid: n values must be >= 1");
    if (cfg.mode == CoverageMode::Exact && n > cfg.exact_cap)
      throw std::invalid_argument("run_grid: n=" + std::to_string(n) +
                                  " exceeds the exact enumeration cap");
  }

  const std::size_t n_methods = cfg.methods.size();
  const std::size_t n_ns = cfg.n_values.size();
  const std::size_t n_tpmds = cfg.tpmds.size();
  std::vector<CoverageRecord> records(n_methods * n_ns * n_tpmds);

  std::size_t total_blocks = n_methods * n_ns;
  std::size_t done_blocks = 0;
  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    for (std::size_t ni = 0; ni < n_ns; ++ni) {
      long long n = cfg.n_values[ni];
      std::size_t base = (mi * n_ns + ni) * n_tpmds;
      if (cfg.mode == CoverageMode::Exact) {
        std::vector<OutcomeCell> table =
            build_outcome_table(n, cfg.level, cfg.methods[mi], cfg.threads);
        detail::parallel_for(n_tpmds, cfg.threads, [&](std::size_t j) {
          records[base + j] =
              accumulate_exact(cfg.tpmds[j], n, cfg.level, cfg.methods[mi], table);
        });
      } else {
        detail::parallel_for(n_tpmds, cfg.threads, [&](std::size_t j) {
          records[base + j] =
              simulate_coverage(cfg.tpmds[j], n, cfg.level, cfg.methods[mi],
                                cfg.sims, derive_cell_seed(cfg.seed, mi, n, j));
        });
      }
      ++done_blocks;
      if (cfg.progress) cfg.progress(done_blocks, total_blocks);
    }
  }
  return records;
}

} // namespace nps
