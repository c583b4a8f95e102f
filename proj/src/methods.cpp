#include "nps/methods.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "nps/normal.hpp"

namespace nps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string lower_copy(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

double parse_positive_real(const std::string& tok, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid " + what + " '" + tok + "'");
  }
  if (pos != tok.size() || !(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument("invalid " + what + " '" + tok + "'");
  return v;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

IntervalEstimate make_estimate(double center, double half_width, MethodSpec m,
                               ConfidenceLevel lvl) {
  IntervalEstimate est;
  est.center = center;
  est.lower = center - half_width;
  est.upper = center + half_width;
  est.method = std::move(m);
  est.level = lvl;
  return est;
}

} // namespace

char aw_shape_char(AwShape shape) {
  switch (shape) {
    case AwShape::Extreme: return 'e';
    case AwShape::Triangular: return 't';
    case AwShape::Uniform: return 'u';
  }
  throw std::logic_error("unreachable aw shape");
}

MethodSpec MethodSpec::wald() { return MethodSpec{}; }

MethodSpec MethodSpec::goodman(int k) {
  if (k < 1) throw std::invalid_argument("goodman K must be a positive integer");
  MethodSpec m;
  m.kind = MethodKind::Goodman;
  m.goodman_k = k;
  return m;
}

MethodSpec MethodSpec::adjusted_wald(double w, AwShape shape) {
  if (!(w > 0.0)) throw std::invalid_argument("adjusted Wald weight must be > 0");
  MethodSpec m;
  m.kind = MethodKind::AdjustedWald;
  m.aw_weight = w;
  m.aw_shape = shape;
  return m;
}

MethodSpec MethodSpec::adjusted_wald_z2(AwShape shape) {
  MethodSpec m;
  m.kind = MethodKind::AdjustedWald;
  m.aw_weight_is_z2 = true;
  m.aw_shape = shape;
  return m;
}

MethodSpec MethodSpec::score_shrunk(double prior) {
  auto near = [&](double v) { return std::fabs(prior - v) <= 1e-12; };
  if (!near(1.0) && !near(2.0 / 3.0) && !near(0.5))
    throw std::invalid_argument("score prior variance must be 1, 2/3 or 1/2");
  MethodSpec m;
  m.kind = MethodKind::ScoreShrunk;
  m.prior_variance = prior;
  return m;
}

MethodSpec MethodSpec::may_johnson() {
  MethodSpec m;
  m.kind = MethodKind::MayJohnson;
  return m;
}

MethodSpec MethodSpec::iterative_score() {
  MethodSpec m;
  m.kind = MethodKind::IterativeScore;
  return m;
}

MethodSpec MethodSpec::parse(std::string_view text) {
  std::string s = lower_copy(text);
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t colon = s.find(':', start);
    if (colon == std::string::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, colon - start));
    start = colon + 1;
  }
  const std::string& name = parts[0];
  auto want_args = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() - 1 < lo || parts.size() - 1 > hi)
      throw std::invalid_argument("method '" + name + "' given " +
                                  std::to_string(parts.size() - 1) +
                                  " parameter(s)");
  };

  if (name == "wald") {
    want_args(0, 0);
    return wald();
  }
  if (name == "goodman") {
    want_args(0, 1);
    if (parts.size() == 1) return goodman();
    const std::string& tok = parts[1];
    std::size_t pos = 0;
    long k = 0;
    try {
      k = std::stol(tok, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid goodman K '" + tok + "'");
    }
    if (pos != tok.size() || k < 1 || k > 1000000)
      throw std::invalid_argument("invalid goodman K '" + tok + "'");
    return goodman(static_cast<int>(k));
  }
  if (name == "aw") {
    want_args(2, 2);
    AwShape shape;
    if (parts[2] == "e") shape = AwShape::Extreme;
    else if (parts[2] == "t") shape = AwShape::Triangular;
    else if (parts[2] == "u") shape = AwShape::Uniform;
    else throw std::invalid_argument("invalid aw shape '" + parts[2] + "' (want e, t or u)");
    if (parts[1] == "z2") return adjusted_wald_z2(shape);
    return adjusted_wald(parse_positive_real(parts[1], "aw weight"), shape);
  }
  if (name == "score") {
    want_args(0, 1);
    if (parts.size() == 1) return score_shrunk(1.0);
    const std::string& tok = parts[1];
    if (tok == "1") return score_shrunk(1.0);
    if (tok == "2/3") return score_shrunk(2.0 / 3.0);
    if (tok == "1/2") return score_shrunk(0.5);
    double v = parse_positive_real(tok, "score prior");
    return score_shrunk(v); // validates against the allowed set
  }
  if (name == "mayjohnson") {
    want_args(0, 0);
    return may_johnson();
  }
  if (name == "iterscore") {
    want_args(0, 0);
    return iterative_score();
  }
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::string MethodSpec::canonical() const {
  switch (kind) {
    case MethodKind::Wald:
      return "wald";
    case MethodKind::Goodman:
      return "goodman:" + std::to_string(goodman_k);
    case MethodKind::AdjustedWald:
      if (aw_weight_is_z2) return std::string("aw:z2:") + aw_shape_char(aw_shape);
      return "aw:" + format_real(aw_weight) + ":" + aw_shape_char(aw_shape);
    case MethodKind::ScoreShrunk:
      if (std::fabs(prior_variance - 1.0) <= 1e-12) return "score:1";
      if (std::fabs(prior_variance - 2.0 / 3.0) <= 1e-12) return "score:2/3";
      return "score:1/2";
    case MethodKind::MayJohnson:
      return "mayjohnson";
    case MethodKind::IterativeScore:
      return "iterscore";
  }
  throw std::logic_error("unreachable method kind");
}

double MethodSpec::aw_effective_weight(const ConfidenceLevel& lvl) const {
  return aw_weight_is_z2 ? lvl.z * lvl.z : aw_weight;
}

std::pair<double, double> IntervalEstimate::clamped() const noexcept {
  return {std::clamp(lower, -1.0, 1.0), std::clamp(upper, -1.0, 1.0)};
}

ShrinkageWeights shrinkage_weights(long long n, double z) {
  double nn = static_cast<double>(n);
  double z2 = z * z;
  return {nn / (nn + z2), z2 / (nn + z2)};
}

IntervalEstimate wald_interval(const TrinomialCounts& c, ConfidenceLevel lvl) {
  double center = nps_from_counts(c);
  double sigma = nps_variance(tpmd_from_counts(c));
  double hw = lvl.z * std::sqrt(sigma / static_cast<double>(c.total()));
  return make_estimate(center, hw, MethodSpec::wald(), lvl);
}

IntervalEstimate goodman_interval(const TrinomialCounts& c, ConfidenceLevel lvl,
                                  int k) {
  if (k < 1) throw std::invalid_argument("goodman K must be a positive integer");
  double center = nps_from_counts(c);
  double sigma = nps_variance(tpmd_from_counts(c));
  double alpha = 1.0 - lvl.level;
  // upper (alpha/K)*100th percentile of chi-squared with 1 df
  double q = inverse_normal_cdf(1.0 - alpha / (2.0 * k));
  double chi = q * q;
  double hw = std::sqrt(chi * sigma / static_cast<double>(c.total()));
  return make_estimate(center, hw, MethodSpec::goodman(k), lvl);
}

AwAdjusted aw_adjust(const TrinomialCounts& c, double w, AwShape shape) {
  validate_counts(c, /*require_total=*/false);
  if (!(w > 0.0)) throw std::invalid_argument("adjusted Wald weight must be > 0");
  double add_det = 0.0, add_pas = 0.0, add_pro = 0.0;
  switch (shape) {
    case AwShape::Extreme:
      add_det = add_pro = w / 2.0;
      break;
    case AwShape::Uniform:
      add_det = add_pas = add_pro = w / 3.0;
      break;
    case AwShape::Triangular:
      add_det = add_pro = w / 4.0;
      add_pas = w / 2.0;
      break;
  }
  return {static_cast<double>(c.det) + add_det, static_cast<double>(c.pas) + add_pas,
          static_cast<double>(c.pro) + add_pro, static_cast<double>(c.total()) + w};
}

IntervalEstimate adjusted_wald_interval(const TrinomialCounts& c,
                                        ConfidenceLevel lvl, double w,
                                        AwShape shape) {
  validate_counts(c);
  AwAdjusted adj = aw_adjust(c, w, shape);
  double center = (adj.pro - adj.det) / adj.n;
  Tpmd p_hat(adj.det / adj.n, adj.pas / adj.n, adj.pro / adj.n);
  double hw = lvl.z * std::sqrt(nps_variance(p_hat) / adj.n);
  return make_estimate(center, hw, MethodSpec::adjusted_wald(w, shape), lvl);
}

IntervalEstimate score_shrunk_interval(const TrinomialCounts& c,
                                       ConfidenceLevel lvl,
                                       double prior_variance) {
  if (!(prior_variance > 0.0 && prior_variance <= 1.0))
    throw std::invalid_argument("score prior variance must be in (0,1]");
  double nps = nps_from_counts(c);
  long long n = c.total();
  double sigma = nps_variance(tpmd_from_counts(c));
  ShrinkageWeights sw = shrinkage_weights(n, lvl.z);
  double center = (nps + 1.0) * sw.w1 + sw.w2 - 1.0;
  double z2 = lvl.z * lvl.z;
  double hw = lvl.z * std::sqrt((sigma * sw.w1 + prior_variance * sw.w2) /
                                (static_cast<double>(n) + z2));
  MethodSpec m;
  m.kind = MethodKind::ScoreShrunk;
  m.prior_variance = prior_variance;
  return make_estimate(center, hw, m, lvl);
}

IntervalEstimate may_johnson_interval(const TrinomialCounts& c,
                                      ConfidenceLevel lvl, bool printed_form) {
  double nps = nps_from_counts(c);
  double n = static_cast<double>(c.total());
  Tpmd p = tpmd_from_counts(c);
  double n_hat = n + lvl.z * lvl.z;
  double center = nps * (n / n_hat);
  double radicand = std::max(0.0, n_hat * (p.pro + p.det) - n * nps * nps);
  double hw = printed_form ? lvl.z * std::sqrt(radicand / n_hat)
                           : (lvl.z / n_hat) * std::sqrt(radicand);
  return make_estimate(center, hw, MethodSpec::may_johnson(), lvl);
}

ConstrainedMle constrained_mle(const TrinomialCounts& c, double delta) {
  validate_counts(c);
  if (!(delta >= -1.0 && delta <= 1.0))
    throw std::invalid_argument("constrained_mle: delta must be in [-1,1]");

  double xd = static_cast<double>(c.det);
  double xs = static_cast<double>(c.pas);
  double xp = static_cast<double>(c.pro);
  double n = static_cast<double>(c.total());

  // Parametrize p_det = t, p_pro = t + delta, p_pas = 1 - 2t - delta.
  double t_lo = std::max(0.0, -delta);
  double t_hi = 0.5 * (1.0 - delta);

  auto loglik = [&](double t) {
    double pd = t;
    double pp = t + delta;
    double ps = 1.0 - 2.0 * t - delta;
    double ll = 0.0;
    struct Term { double count, p; };
    for (Term term : {Term{xd, pd}, Term{xs, ps}, Term{xp, pp}}) {
      if (term.count > 0.0) {
        if (term.p <= 0.0) return -kInf;
        ll += term.count * std::log(term.p);
      }
    }
    return ll;
  };

  double best_t = t_lo;
  double best_ll = loglik(t_lo);
  auto consider = [&](double t) {
    if (t < t_lo - 1e-12 || t > t_hi + 1e-12) return;
    t = std::clamp(t, t_lo, t_hi);
    double ll = loglik(t);
    if (ll > best_ll) {
      best_ll = ll;
      best_t = t;
    }
  };
  consider(t_hi);

  // Stationarity of the log-likelihood reduces to a*t^2 + b*t + c = 0.
  double S = 1.0 - delta;
  double a = -2.0 * n;
  double b = xd * (S - 2.0 * delta) + xp * S - 2.0 * xs * delta;
  double cc = xd * delta * S;
  double disc = b * b - 4.0 * a * cc;
  if (disc >= 0.0) {
    double sq = std::sqrt(disc);
    double q = -0.5 * (b + std::copysign(sq, b == 0.0 ? 1.0 : b));
    consider(q / a);
    if (q != 0.0) consider(cc / q);
  }

  double pd = best_t;
  double pp = best_t + delta;
  double ps = 1.0 - 2.0 * best_t - delta;
  Tpmd p_tilde(std::max(0.0, pd), std::max(0.0, ps), std::max(0.0, pp));
  return {delta, p_tilde, best_ll};
}

namespace {

// z*SE(delta) with SE from the constrained MLE; avoids dividing so the
// containment test is well-defined when SE = 0.
double score_bound(const TrinomialCounts& c, double delta, double z) {
  ConstrainedMle m = constrained_mle(c, delta);
  double rad =
      std::max(0.0, m.p_tilde.pro + m.p_tilde.det - delta * delta);
  return z * std::sqrt(rad / static_cast<double>(c.total()));
}

} // namespace

double iterative_score_statistic(const TrinomialCounts& c, double delta) {
  ConstrainedMle m = constrained_mle(c, delta);
  double rad = std::max(0.0, m.p_tilde.pro + m.p_tilde.det - delta * delta);
  double se = std::sqrt(rad / static_cast<double>(c.total()));
  double num = std::fabs(nps_from_counts(c) - delta);
  if (num == 0.0) return 0.0;
  if (se == 0.0) return kInf;
  return num / se;
}

IntervalEstimate iterative_score_interval(const TrinomialCounts& c,
                                          ConfidenceLevel lvl) {
  double nps = nps_from_counts(c);
  const double z = lvl.z;
  auto g = [&](double d) { return std::fabs(nps - d) - score_bound(c, d, z); };
  auto inside = [&](double d) { return g(d) <= 0.0; };

  // Finds the containment boundary between an inside and an outside endpoint.
  auto bisect = [&](double in, double out) {
    double lo = in, hi = out;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      double gm = g(mid);
      if (std::fabs(gm) <= 1e-8) return mid;
      if (gm <= 0.0)
        lo = mid;
      else
        hi = mid;
      if (std::fabs(hi - lo) <= 1e-10) return lo;
    }
    throw std::runtime_error("iterative score interval did not converge");
  };

  double upper = inside(1.0) ? 1.0 : bisect(nps, 1.0);
  double lower = inside(-1.0) ? -1.0 : bisect(nps, -1.0);

  IntervalEstimate est;
  est.center = nps;
  est.lower = lower;
  est.upper = upper;
  est.method = MethodSpec::iterative_score();
  est.level = lvl;
  return est;
}

IntervalEstimate compute_interval(const TrinomialCounts& c, ConfidenceLevel lvl,
                                  const MethodSpec& m) {
  IntervalEstimate est;
  switch (m.kind) {
    case MethodKind::Wald:
      est = wald_interval(c, lvl);
      break;
    case MethodKind::Goodman:
      est = goodman_interval(c, lvl, m.goodman_k);
      break;
    case MethodKind::AdjustedWald:
      est = adjusted_wald_interval(c, lvl, m.aw_effective_weight(lvl), m.aw_shape);
      break;
    case MethodKind::ScoreShrunk:
      est = score_shrunk_interval(c, lvl, m.prior_variance);
      break;
    case MethodKind::MayJohnson:
      est = may_johnson_interval(c, lvl);
      break;
    case MethodKind::IterativeScore:
      est = iterative_score_interval(c, lvl);
      break;
  }
  est.method = m; // keep the caller's spec (e.g. symbolic z2 weight)
  return est;
}

} // namespace nps
