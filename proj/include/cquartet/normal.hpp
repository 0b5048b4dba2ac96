#pragma once

namespace cquartet {

double normal_pdf(double x);

// Standard normal CDF, computed as erfc(-x / sqrt 2) / 2 so the lower tail
// keeps full relative precision.
double normal_cdf(double x);

// Inverse of normal_cdf on (0, 1). Wichura's AS 241 (PPND16) rational
// approximation, accurate to about 1e-16 relative. Throws
// std::domain_error outside (0, 1).
double normal_quantile(double p);

}  // namespace cquartet
