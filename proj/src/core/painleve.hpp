#pragma once

#include <memory>
#include <vector>

namespace rmtlab {

double airy_ai(double t);
double airy_ai_prime(double t);
/// k-th zero of Ai (k >= 1), a negative number.
double airy_ai_zero(int k);

/**
 * Hastings-McLeod solution of u'' = 2u^3 + t u tabulated on a uniform grid,
 * together with v = int_t^inf u^2, I = int_t^inf v = -log F and
 * J = int_t^inf u = -log E. Grid runs from t_plus down to t_min.
 */
struct HmSolution {
  double t_min = 0.0;
  double t_plus = 0.0;
  double step = 0.0;
  std::vector<double> t_grid;  // decreasing
  std::vector<double> u;
  std::vector<double> u_prime;
  std::vector<double> v;
  std::vector<double> log_f;  // -I
  std::vector<double> log_e;  // -J

  struct Point {
    double u, u_prime, v, log_f, log_e;
  };
  /// Cubic Hermite interpolation using the exact ODE derivatives at nodes.
  Point at(double t) const;
  bool covers(double t) const { return t >= t_min && t <= t_plus; }
};

/// Fixed-step RK4 integration leftward from (Ai, Ai')(t_plus).
HmSolution hastings_mcleod(double t_min, double t_plus, double step = 1e-3);

/// Shared table on [-8, 8]; built once, immutable afterwards. Double precision
/// shooting drifts off the separatrix below about -8.5.
const HmSolution& default_hm();

struct TwAuxiliaries {
  std::vector<double> t_grid;
  std::vector<double> v;
  std::vector<double> e;
  std::vector<double> f;
};

TwAuxiliaries tw_auxiliaries(const HmSolution& hm, const std::vector<double>& t_grid);

/// F(t) = exp(-int_t^inf v); Airy closure beyond the table.
double tw2_cdf(double t);
double tw2_cdf(const HmSolution& hm, double t);
/// E(t) = exp(-int_t^inf u).
double tw_e(const HmSolution& hm, double t);

/**
 * Rank-one deformed law F(t, w) = f(t, w) F(t) from the Lax ODE in w with
 * f(t, 0) = g(t, 0) = E(t). For w > 0 the bounded solution is recovered by
 * integrating down from w + 6, which damps the mode that grows with w.
 * w = +inf returns F(t).
 */
inline constexpr double kMaxLaxW = 256.0;  // larger finite |w| is a range error

double deformed_tw(double t, double w);
double deformed_tw(const HmSolution& hm, double t, double w);

}  // namespace rmtlab
