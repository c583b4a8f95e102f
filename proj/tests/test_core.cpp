#include <doctest.h>

#include <cmath>
#include <set>

#include "nps/core.hpp"
#include "nps/normal.hpp"
#include "nps/rng.hpp"

using namespace nps;

TEST_CASE("inverse normal cdf matches reference quantiles") {
  // reference values from an independent implementation
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.995) == doctest::Approx(2.575829303548900).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.95) == doctest::Approx(1.644853626951472).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.9) == doctest::Approx(1.281551565544600).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.9916666666666667) ==
        doctest::Approx(2.3939797998185104).epsilon(1e-12));
  CHECK(inverse_normal_cdf(1e-6) == doctest::Approx(-4.753424308822899).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.3) == doctest::Approx(-0.5244005127080409).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0));
  CHECK(std::fabs(inverse_normal_cdf(0.7) + inverse_normal_cdf(0.3)) < 1e-14);
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), std::invalid_argument);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), std::invalid_argument);
}

TEST_CASE("inverse normal cdf round-trips through the cdf") {
  // error measured in x units must stay far below the 1e-9 contract
  for (double p = 0.000001; p < 1.0; p += 0.000997) {
    double x = inverse_normal_cdf(p);
    double err = std::fabs(normal_cdf(x) - p) / normal_pdf(x);
    CHECK(err < 1e-12);
  }
}

TEST_CASE("confidence level derives z") {
  ConfidenceLevel lvl(0.95);
  CHECK(lvl.level == 0.95);
  CHECK(lvl.z == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK(lvl.z == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(ConfidenceLevel(0.99).z == doctest::Approx(2.575829303548900).epsilon(1e-12));
  CHECK_THROWS_AS(ConfidenceLevel(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ConfidenceLevel(1.0), std::invalid_argument);
  CHECK_THROWS_AS(ConfidenceLevel(-0.5), std::invalid_argument);
}

TEST_CASE("nps from counts") {
  CHECK(nps_from_counts({3, 4, 3}) == 0.0);
  CHECK(nps_from_counts({0, 0, 10}) == 1.0);
  CHECK(nps_from_counts({2, 3, 5}) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK_THROWS_AS(nps_from_counts({0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(nps_from_counts({-1, 2, 3}), std::invalid_argument);
}

TEST_CASE("tpmd from counts") {
  Tpmd p = tpmd_from_counts({2, 3, 5});
  CHECK(p.det == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(p.pas == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(p.pro == doctest::Approx(0.5).epsilon(1e-15));
  Tpmd q = tpmd_from_counts({10, 0, 0});
  CHECK(q.det == 1.0);
  CHECK(q.pro == 0.0);
  Tpmd r = tpmd_from_counts({1, 1, 1});
  CHECK(r.det == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(tpmd_from_counts({0, 0, 0}), std::invalid_argument);
}

TEST_CASE("tpmd validation and renormalization") {
  // drift within 1e-9 is renormalized
  Tpmd p(0.2 + 2e-10, 0.3, 0.5);
  CHECK(p.det + p.pas + p.pro == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(Tpmd(0.2, 0.3, 0.5 + 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(Tpmd(-0.1, 0.6, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(Tpmd(0.5, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("nps variance") {
  CHECK(nps_variance(Tpmd(0, 1, 0)) == 0.0);
  CHECK(nps_variance(Tpmd(0.5, 0, 0.5)) == 1.0);
  CHECK(nps_variance(Tpmd(0.2, 0.3, 0.5)) == doctest::Approx(0.61).epsilon(1e-15));
  // zero exactly at the three mass-concentration points
  CHECK(nps_variance(Tpmd(1, 0, 0)) == 0.0);
  CHECK(nps_variance(Tpmd(0, 0, 1)) == 0.0);
}

TEST_CASE("variance bounds and feasibility over random tpmds") {
  Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    double a = rng.uniform(), b = rng.uniform();
    if (a > b) std::swap(a, b);
    Tpmd p(a, b - a, 1.0 - b);
    double v = nps_variance(p);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(feasible_nps_variance(p.nps(), v));
  }
  CHECK_FALSE(feasible_nps_variance(0.9, 0.05)); // |d| > v + d^2
  CHECK_FALSE(feasible_nps_variance(0.1, 1.05)); // v + d^2 > 1
}

TEST_CASE("possible scores") {
  auto s1 = possible_scores(1);
  CHECK(s1 == std::vector<double>{-1.0, 0.0, 1.0});
  auto s2 = possible_scores(2);
  CHECK(s2 == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(possible_scores(10).size() == 21);
  CHECK_THROWS_AS(possible_scores(0), std::invalid_argument);
}

TEST_CASE("possible scores match exhaustive outcome enumeration") {
  for (long long n : {1, 2, 3, 7, 12}) {
    std::set<double> brute;
    for (long long d = 0; d <= n; ++d)
      for (long long s = 0; s <= n - d; ++s)
        brute.insert(static_cast<double>(n - d - s - d) / static_cast<double>(n));
    auto scores = possible_scores(n);
    CHECK(scores.size() == brute.size());
    CHECK(std::set<double>(scores.begin(), scores.end()) == brute);
  }
}

TEST_CASE("possible scores cardinality is 2n+1 up to n=200") {
  for (long long n = 1; n <= 200; ++n) {
    auto scores = possible_scores(n);
    CHECK(scores.size() == static_cast<std::size_t>(2 * n + 1));
    for (std::size_t i = 1; i < scores.size(); ++i) CHECK(scores[i - 1] < scores[i]);
  }
}

TEST_CASE("nps of counts equals nps of derived tpmd") {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    TrinomialCounts c{static_cast<long long>(rng.below(50)),
                      static_cast<long long>(rng.below(50)),
                      static_cast<long long>(rng.below(50))};
    if (c.total() == 0) c.pas = 1;
    CHECK(nps_from_counts(c) ==
          doctest::Approx(tpmd_from_counts(c).nps()).epsilon(1e-15));
  }
}
