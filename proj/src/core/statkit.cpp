#include "core/statkit.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "core/error.hpp"

namespace rmtlab {

double CdfTable::operator()(double x) const {
  if (grid.empty()) fail(ErrorCode::invalid_parameter, "cdf table is empty");
  if (x <= grid.front()) return values.front();
  if (x >= grid.back()) return values.back();
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  double s = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return values[i - 1] + s * (values[i] - values[i - 1]);
}

void validate(const CdfTable& t) {
  require(!t.grid.empty() && t.grid.size() == t.values.size(), "cdf table: size mismatch");
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    require(t.values[i] >= 0.0 && t.values[i] <= 1.0, "cdf table: value outside [0,1]");
    if (i > 0) {
      require(t.grid[i] > t.grid[i - 1], "cdf table: grid must increase");
      require(t.values[i] >= t.values[i - 1], "cdf table: values must be non-decreasing");
    }
  }
}

Ecdf::Ecdf(std::vector<double> samples) : s_(std::move(samples)) {
  require(!s_.empty(), "ecdf: empty sample");
  for (double x : s_) require(!std::isnan(x), "ecdf: NaN sample");
  std::sort(s_.begin(), s_.end());
}

double Ecdf::operator()(double x) const {
  auto it = std::upper_bound(s_.begin(), s_.end(), x);
  return static_cast<double>(it - s_.begin()) / static_cast<double>(s_.size());
}

double ks_distance(const Ecdf& a, const Ecdf& b) {
  const auto& x = a.samples();
  const auto& y = b.samples();
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (j == y.size() || (i < x.size() && x[i] <= y[j]))
      v = x[i];
    else
      v = y[j];
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_distance(const Ecdf& a, const std::function<double(double)>& cdf) {
  const auto& x = a.samples();
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size();) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;  // ties form one jump
    double f = cdf(x[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(j) / n - f)});
    i = j;
  }
  return d;
}

double ks_distance(const Ecdf& a, const CdfTable& table) {
  return ks_distance(a, [&](double x) { return table(x); });
}

Interval wilson_interval(long long successes, long long trials, double level) {
  require(trials > 0, "wilson_interval: trials must be > 0");
  require(successes >= 0 && successes <= trials, "wilson_interval: successes out of range");
  require(level > 0.0 && level < 1.0, "wilson_interval: level must be in (0,1)");
  boost::math::normal_distribution<double> nd;
  const double z = boost::math::quantile(nd, 0.5 + 0.5 * level);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  Interval iv{centre - half, centre + half};
  if (successes == 0) iv.lo = 0.0;
  if (successes == trials) iv.hi = 1.0;
  iv.lo = std::max(0.0, iv.lo);
  iv.hi = std::min(1.0, iv.hi);
  return iv;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), "linear_fit: size mismatch");
  require(x.size() >= 2, "linear_fit: need at least two points");
  const double mx = mean(x), my = mean(y);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorCode::degenerate_input, "linear_fit: x values are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    sse += r * r;
  }
  f.r2 = (syy > 0.0) ? 1.0 - sse / syy : 1.0;
  return f;
}

double mean(const std::vector<double>& x) {
  require(!x.empty(), "mean: empty input");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double variance(const std::vector<double>& x) {
  require(x.size() >= 2, "variance: need at least two values");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double quantile(std::vector<double> x, double p) {
  require(!x.empty(), "quantile: empty input");
  require(p >= 0.0 && p <= 1.0, "quantile: p must be in [0,1]");
  std::sort(x.begin(), x.end());
  double pos = p * static_cast<double>(x.size() - 1);
  auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= x.size()) return x.back();
  double f = pos - static_cast<double>(i);
  return x[i] + f * (x[i + 1] - x[i]);
}

double median(std::vector<double> x) { return quantile(std::move(x), 0.5); }

std::vector<std::size_t> histogram(const std::vector<double>& x, double lo, double hi,
                                   std::size_t bins) {
  require(hi > lo && bins > 0, "histogram: need lo < hi and bins > 0");
  std::vector<std::size_t> h(bins, 0);
  for (double v : x) {
    if (!(v >= lo && v < hi)) continue;
    auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
    h[std::min(b, bins - 1)]++;
  }
  return h;
}

}  // namespace rmtlab
