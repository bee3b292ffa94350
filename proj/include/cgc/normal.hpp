#pragma once

namespace cgc {

// Standard normal CDF Phi(z).
double normal_cdf(double z);

// Standard normal quantile Phi^{-1}(p) for p in (0, 1). Rational
// approximation with absolute error far below 1e-9 over the full range.
double normal_quantile(double p);

// Upper-tail critical value z_alpha = Phi^{-1}(1 - alpha), computed as
// -Phi^{-1}(alpha) to keep full precision for small alpha.
double upper_quantile(double alpha);

}  // namespace cgc
