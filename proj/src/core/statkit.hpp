#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace rmtlab {

/// Monotone table of probabilities on an increasing grid.
struct CdfTable {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> ci_halfwidth;  // empty for deterministic methods
  struct Meta {
    double beta = 2.0;
    double w = 0.0;  // +inf for the Dirichlet boundary
    std::string method;
    long long paths = 0;
    unsigned long long seed = 0;
    unsigned long long stream_id = 0;
    double step = 0.0;
  } meta;

  /// Linear interpolation, clamped to the end values outside the grid.
  double operator()(double x) const;
};

void validate(const CdfTable& t);

/// Empirical distribution function of a sample.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> samples);
  const std::vector<double>& samples() const noexcept { return s_; }
  std::size_t size() const noexcept { return s_.size(); }
  /// Fraction of samples <= x.
  double operator()(double x) const;

 private:
  std::vector<double> s_;
};

double ks_distance(const Ecdf& a, const Ecdf& b);
/// One-sample distance to a continuous cdf, checked on both sides of each jump.
double ks_distance(const Ecdf& a, const std::function<double(double)>& cdf);
double ks_distance(const Ecdf& a, const CdfTable& table);

struct Interval {
  double lo;
  double hi;
};

/// Wilson score interval at the given two-sided confidence level.
Interval wilson_interval(long long successes, long long trials, double level = 0.95);

struct LinearFit {
  double slope;
  double intercept;
  double r2;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& x);
/// Unbiased sample variance.
double variance(const std::vector<double>& x);
double median(std::vector<double> x);
double quantile(std::vector<double> x, double p);

/// Counts in equal bins on [lo, hi); out-of-range samples are dropped.
std::vector<std::size_t> histogram(const std::vector<double>& x, double lo, double hi,
                                   std::size_t bins);

}  // namespace rmtlab
