#pragma once

namespace depsgd::infer {

/// Inverse standard normal CDF (Acklam's rational approximation, ~1e-9
/// relative accuracy), p in (0,1).
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Chi-square CDF with k degrees of freedom.
double chi_squared_cdf(double x, int k);

/// Chi-square quantile by bisection on the CDF.
double chi_squared_quantile(double p, int k);

}  // namespace depsgd::infer
