#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "nps/core.hpp"

namespace nps {

enum class MethodKind {
  Wald,
  Goodman,
  AdjustedWald,
  ScoreShrunk,
  MayJohnson,
  IterativeScore,
};

// Placement of the Adjusted Wald pseudo-weight across the three categories:
// Extreme puts it all on Detractors/Promoters, Uniform splits it evenly, and
// Triangular gives Passives twice the share of either extreme. The pure
// additions have variance 1, 2/3 and 1/2 respectively.
enum class AwShape { Extreme, Triangular, Uniform };

// An interval method plus its parameters. The textual form used by the CLI
// and CSV files is:
//   wald | goodman:K | aw:W:SHAPE | score:PRIOR | mayjohnson | iterscore
// where W is a positive real or "z2" (meaning z^2 at the active level),
// SHAPE is one of e/t/u, and PRIOR is 1, 2/3 or 1/2. Parsing is
// case-insensitive; canonical() serializes in lowercase and round-trips
// losslessly.
struct MethodSpec {
  MethodKind kind = MethodKind::Wald;
  int goodman_k = 3;            // Goodman only
  double aw_weight = 3.0;       // AdjustedWald only, ignored when aw_weight_is_z2
  bool aw_weight_is_z2 = false; // AdjustedWald only
  AwShape aw_shape = AwShape::Triangular; // AdjustedWald only
  double prior_variance = 1.0;  // ScoreShrunk only

  static MethodSpec parse(std::string_view text);
  std::string canonical() const;

  // Resolves the aw:z2 symbolic weight against a level.
  double aw_effective_weight(const ConfidenceLevel& lvl) const;

  static MethodSpec wald();
  static MethodSpec goodman(int k = 3);
  static MethodSpec adjusted_wald(double w, AwShape shape);
  static MethodSpec adjusted_wald_z2(AwShape shape);
  static MethodSpec score_shrunk(double prior = 1.0);
  static MethodSpec may_johnson();
  static MethodSpec iterative_score();
};

// Bounds are stored raw (a Wald interval can spill past +-1); clamped() is a
// presentation view. The true score always lies in [-1,1], so clamping never
// changes whether an interval covers it.
struct IntervalEstimate {
  double center = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  MethodSpec method;
  ConfidenceLevel level{0.95};

  double width() const noexcept { return upper - lower; }
  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
  std::pair<double, double> clamped() const noexcept;
};

// w1 = n/(n+z^2), w2 = z^2/(n+z^2); the Wilson-style weighted average.
struct ShrinkageWeights {
  double w1;
  double w2;
};
ShrinkageWeights shrinkage_weights(long long n, double z);

// Adjusted pseudo-counts x-hat and total n-hat = n + w.
struct AwAdjusted {
  double det;
  double pas;
  double pro;
  double n;
};

// Trinomial MLE under the constraint p_pro - p_det = delta.
struct ConstrainedMle {
  double delta;
  Tpmd p_tilde;
  double loglik;
};

IntervalEstimate wald_interval(const TrinomialCounts& c, ConfidenceLevel lvl);

IntervalEstimate goodman_interval(const TrinomialCounts& c, ConfidenceLevel lvl,
                                  int k);

AwAdjusted aw_adjust(const TrinomialCounts& c, double w, AwShape shape);

IntervalEstimate adjusted_wald_interval(const TrinomialCounts& c,
                                        ConfidenceLevel lvl, double w,
                                        AwShape shape);

// prior_variance in (0,1]; 1 recovers the plain shrunk-score interval, 2/3
// and 1/2 pull the variance toward the uniform and triangular priors.
IntervalEstimate score_shrunk_interval(const TrinomialCounts& c,
                                       ConfidenceLevel lvl,
                                       double prior_variance);

// Closed-form score interval. The default half-width is (z/n-hat) *
// sqrt(n-hat*(p_pro+p_det) - n*NPS^2), which recovers the Wald z*sqrt(sigma/n)
// behavior as n grows; printed_form reproduces the literature form that
// divides the radicand by n-hat only once.
IntervalEstimate may_johnson_interval(const TrinomialCounts& c,
                                      ConfidenceLevel lvl,
                                      bool printed_form = false);

ConstrainedMle constrained_mle(const TrinomialCounts& c, double delta);

// |NPS - delta| / sqrt((p~pro + p~det - delta^2)/n); 0 when both numerator
// and standard error vanish, +inf when only the standard error does.
double iterative_score_statistic(const TrinomialCounts& c, double delta);

IntervalEstimate iterative_score_interval(const TrinomialCounts& c,
                                          ConfidenceLevel lvl);

IntervalEstimate compute_interval(const TrinomialCounts& c, ConfidenceLevel lvl,
                                  const MethodSpec& m);

char aw_shape_char(AwShape shape);

} // namespace nps
