#pragma once

#include <vector>

namespace lozlab {

// Pearson chi-squared goodness of fit; probs need not be normalised.
double chi2_pvalue(const std::vector<long>& counts, const std::vector<double>& probs);
double chi2_uniform_pvalue(const std::vector<long>& counts);

double normal_quantile(double p);
double binomial_halfwidth(double p, double n, double level = 0.95);

struct TrendTest {
  double s = 0;        // Kendall S
  double z = 0;
  double p_value = 1;  // one-sided
  long n = 0;
};

// Mann-Kendall on (x, y) pairs; ties in x and y are allowed and corrected for.
// decreasing = true tests H1: y decreases with x.
TrendTest mann_kendall(const std::vector<double>& x, const std::vector<double>& y, bool decreasing);

struct Slope {
  double slope = 0;
  double intercept = 0;
  double se = 0;
  double ci_low = 0;
  double ci_high = 0;
  long n = 0;
};
Slope ols_slope(const std::vector<double>& x, const std::vector<double>& y, double level = 0.95);

}  // namespace lozlab
