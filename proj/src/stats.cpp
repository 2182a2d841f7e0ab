#include "lozlab/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace lozlab {

double chi2_pvalue(const std::vector<long>& counts, const std::vector<double>& probs) {
  if (counts.size() != probs.size() || counts.size() < 2) throw std::invalid_argument("chi2: bad cells");
  double n = std::accumulate(counts.begin(), counts.end(), 0.0);
  double tot = std::accumulate(probs.begin(), probs.end(), 0.0);
  double stat = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    double e = n * probs[i] / tot;
    if (e <= 0) throw std::invalid_argument("chi2: empty expected cell");
    stat += (counts[i] - e) * (counts[i] - e) / e;
  }
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

double chi2_uniform_pvalue(const std::vector<long>& counts) {
  return chi2_pvalue(counts, std::vector<double>(counts.size(), 1.0));
}

double normal_quantile(double p) { return boost::math::quantile(boost::math::normal(), p); }

double binomial_halfwidth(double p, double n, double level) {
  if (n <= 0) return 0;
  return normal_quantile(0.5 + level / 2) * std::sqrt(p * (1 - p) / n);
}

TrendTest mann_kendall(const std::vector<double>& x, const std::vector<double>& y, bool decreasing) {
  if (x.size() != y.size()) throw std::invalid_argument("mann_kendall: size mismatch");
  const long n = static_cast<long>(x.size());
  TrendTest t;
  t.n = n;
  if (n < 2) return t;
  auto sgn = [](double a) { return (a > 0) - (a < 0); };
  double s = 0;
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j) s += sgn(x[j] - x[i]) * sgn(y[j] - y[i]);
  // variance of S for Kendall's tau with ties in both variables
  auto tie_terms = [](const std::vector<double>& v, double& a, double& b, double& c) {
    std::map<double, long> g;
    for (double e : v) ++g[e];
    a = b = c = 0;
    for (auto& [_, t] : g) {
      double tt = static_cast<double>(t);
      a += tt * (tt - 1) * (2 * tt + 5);
      b += tt * (tt - 1) * (tt - 2);
      c += tt * (tt - 1);
    }
  };
  double ax, bx, cx, ay, by, cy;
  tie_terms(x, ax, bx, cx);
  tie_terms(y, ay, by, cy);
  double nn = static_cast<double>(n);
  double var = (nn * (nn - 1) * (2 * nn + 5) - ax - ay) / 18 + cx * cy / (2 * nn * (nn - 1));
  if (n > 2) var += bx * by / (9 * nn * (nn - 1) * (nn - 2));
  t.s = s;
  if (var <= 0) return t;
  double stat = decreasing ? -s : s;
  double adj = stat > 0 ? stat - 1 : (stat < 0 ? stat + 1 : 0);  // continuity correction
  t.z = adj / std::sqrt(var);
  t.p_value = boost::math::cdf(boost::math::complement(boost::math::normal(), t.z));
  return t;
}

Slope ols_slope(const std::vector<double>& x, const std::vector<double>& y, double level) {
  if (x.size() != y.size() || x.size() < 3) throw std::invalid_argument("ols: need >= 3 points");
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("ols: constant regressor");
  Slope r;
  r.n = static_cast<long>(x.size());
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - r.intercept - r.slope * x[i];
    rss += e * e;
  }
  r.se = std::sqrt(rss / (n - 2) / sxx);
  double q = boost::math::quantile(boost::math::students_t(n - 2), 0.5 + level / 2);
  r.ci_low = r.slope - q * r.se;
  r.ci_high = r.slope + q * r.se;
  return r;
}

}  // namespace lozlab
