#pragma once

namespace nps {

// Quantile function of the standard normal distribution.
// Acklam's rational approximation polished with one Halley step against
// std::erfc, which brings the error down to a few ulp.
// Throws std::invalid_argument unless 0 < p < 1.
double inverse_normal_cdf(double p);

double normal_pdf(double x);
double normal_cdf(double x);

} // namespace nps
