#include "core/painleve.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "core/error.hpp"

namespace rmtlab {

double airy_ai(double t) { return boost::math::airy_ai(t); }
double airy_ai_prime(double t) { return boost::math::airy_ai_prime(t); }

double airy_ai_zero(int k) {
  require(k >= 1, "airy_ai_zero: index must be >= 1");
  return boost::math::airy_ai_zero<double>(k);
}

namespace {

// Tail integrals of the Airy asymptote, exact for u = Ai.
double ai_sq_tail(double t) {
  double a = airy_ai(t), ap = airy_ai_prime(t);
  return ap * ap - t * a * a;
}

double ai_sq_moment_tail(double t) {
  double a = airy_ai(t), ap = airy_ai_prime(t);
  return (2.0 * t * t * a * a - 2.0 * t * ap * ap - a * ap) / 3.0;
}

double ai_tail(double t) {
  auto f = [](double s) { return airy_ai(s); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, t, std::numeric_limits<double>::infinity(), 10, 1e-14);
}

using State = std::array<double, 5>;  // u, u', v, I, J

State rhs(double t, const State& y) {
  const double u = y[0];
  return {y[1], 2.0 * u * u * u + t * u, -u * u, -y[2], -u};
}

}  // namespace

HmSolution hastings_mcleod(double t_min, double t_plus, double step) {
  require(std::isfinite(t_min) && std::isfinite(t_plus) && t_min < t_plus,
          "hastings_mcleod: need t_min < t_plus");
  require(step > 0.0 && step <= 0.1, "hastings_mcleod: step must be in (0, 0.1]");
  HmSolution s;
  s.t_min = t_min;
  s.t_plus = t_plus;
  const auto n = static_cast<std::size_t>(std::ceil((t_plus - t_min) / step));
  s.step = (t_plus - t_min) / static_cast<double>(n);
  const double h = s.step;
  s.t_grid.resize(n + 1);
  s.u.resize(n + 1);
  s.u_prime.resize(n + 1);
  s.v.resize(n + 1);
  s.log_f.resize(n + 1);
  s.log_e.resize(n + 1);

  State y = {airy_ai(t_plus), airy_ai_prime(t_plus), ai_sq_tail(t_plus), ai_sq_moment_tail(t_plus),
             ai_tail(t_plus)};
  auto store = [&](std::size_t i, double t) {
    s.t_grid[i] = t;
    s.u[i] = y[0];
    s.u_prime[i] = y[1];
    s.v[i] = y[2];
    s.log_f[i] = -y[3];
    s.log_e[i] = -y[4];
  };
  store(0, t_plus);
  for (std::size_t i = 1; i <= n; ++i) {
    double t = t_plus - static_cast<double>(i - 1) * h;
    State k1 = rhs(t, y), k2, k3, k4, tmp;
    for (int j = 0; j < 5; ++j) tmp[j] = y[j] - 0.5 * h * k1[j];
    k2 = rhs(t - 0.5 * h, tmp);
    for (int j = 0; j < 5; ++j) tmp[j] = y[j] - 0.5 * h * k2[j];
    k3 = rhs(t - 0.5 * h, tmp);
    for (int j = 0; j < 5; ++j) tmp[j] = y[j] - h * k3[j];
    k4 = rhs(t - h, tmp);
    for (int j = 0; j < 5; ++j) y[j] -= h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    double tn = t_plus - static_cast<double>(i) * h;
    // The separatrix is unstable to the left: a wrong-side error either blows up
    // or sends u negative into the oscillating family.
    if (!std::isfinite(y[0]) || y[0] <= 0.0 || y[0] > 10.0 * (1.0 + std::sqrt(std::abs(tn))))
      fail(ErrorCode::numerical_failure,
           "hastings_mcleod: shooting failed near t=" + std::to_string(tn) +
               " (u=" + std::to_string(y[0]) + "); raise t_min or vary t_plus");
    store(i, tn);
  }
  return s;
}

HmSolution::Point HmSolution::at(double t) const {
  if (!covers(t))
    fail(ErrorCode::range_error, "HM table covers [" + std::to_string(t_min) + ", " +
                                     std::to_string(t_plus) + "], got t=" + std::to_string(t));
  const std::size_t n = t_grid.size() - 1;
  double x = (t_plus - t) / step;
  auto i = static_cast<std::size_t>(std::floor(x));
  if (i >= n) i = n - 1;
  // Node i is the right end (larger t) of the cell.
  const double ta = t_grid[i + 1], tb = t_grid[i];
  const double hh = tb - ta;
  const double s = (t - ta) / hh;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  auto herm = [&](double ya, double da, double yb, double db) {
    return h00 * ya + h10 * hh * da + h01 * yb + h11 * hh * db;
  };
  const std::size_t a = i + 1, b = i;
  auto upp = [&](std::size_t k) { return 2.0 * u[k] * u[k] * u[k] + t_grid[k] * u[k]; };
  Point p;
  p.u = herm(u[a], u_prime[a], u[b], u_prime[b]);
  p.u_prime = herm(u_prime[a], upp(a), u_prime[b], upp(b));
  p.v = herm(v[a], -u[a] * u[a], v[b], -u[b] * u[b]);
  p.log_f = herm(log_f[a], v[a], log_f[b], v[b]);
  p.log_e = herm(log_e[a], u[a], log_e[b], u[b]);
  return p;
}

const HmSolution& default_hm() {
  static const HmSolution hm = hastings_mcleod(-8.0, 8.0, 1e-3);
  return hm;
}

TwAuxiliaries tw_auxiliaries(const HmSolution& hm, const std::vector<double>& t_grid) {
  TwAuxiliaries aux;
  aux.t_grid = t_grid;
  for (double t : t_grid) {
    auto p = hm.at(t);
    aux.v.push_back(p.v);
    aux.e.push_back(std::exp(p.log_e));
    aux.f.push_back(std::exp(p.log_f));
  }
  return aux;
}

double tw2_cdf(const HmSolution& hm, double t) {
  require(!std::isnan(t), "tw2_cdf: t is NaN");
  if (t > hm.t_plus) return std::exp(-ai_sq_moment_tail(t));
  // Left of the table the law has no mass at double precision (F(-8) ~ 1e-19).
  if (t < hm.t_min && hm.log_f.back() < -40.0) return 0.0;
  return std::exp(hm.at(t).log_f);
}

double tw2_cdf(double t) { return tw2_cdf(default_hm(), t); }

double tw_e(const HmSolution& hm, double t) {
  if (t > hm.t_plus) return std::exp(-ai_tail(t));
  return std::exp(hm.at(t).log_e);
}

namespace {

struct LaxCoeffs {
  double t, u, up;
};

std::array<double, 2> lax_rhs(const LaxCoeffs& c, double w, const std::array<double, 2>& y) {
  const double u2 = c.u * c.u;
  return {u2 * y[0] + (-w * c.u - c.up) * y[1], (-w * c.u + c.up) * y[0] + (w * w - c.t - u2) * y[1]};
}

// RK4 from w0 to w1 with steps short enough for the w^2 - t stiffness.
std::array<double, 2> lax_integrate(const LaxCoeffs& c, double w0, double w1, std::array<double, 2> y,
                                    double* f_at = nullptr, double w_mark = 0.0) {
  double w = w0;
  const double dir = (w1 > w0) ? 1.0 : -1.0;
  bool marked = (f_at == nullptr);
  while (dir * (w1 - w) > 0.0) {
    double scale = 1.0 + w * w + std::abs(c.t) + c.u * c.u + std::abs(c.up);
    double h = std::min(0.01, 0.5 / scale);
    double target = w1;
    if (!marked && dir * (w_mark - w) > 0.0) target = w_mark;
    if (dir * (target - w) < h) h = dir * (target - w);
    auto k1 = lax_rhs(c, w, y);
    std::array<double, 2> tmp = {y[0] + 0.5 * dir * h * k1[0], y[1] + 0.5 * dir * h * k1[1]};
    auto k2 = lax_rhs(c, w + 0.5 * dir * h, tmp);
    tmp = {y[0] + 0.5 * dir * h * k2[0], y[1] + 0.5 * dir * h * k2[1]};
    auto k3 = lax_rhs(c, w + 0.5 * dir * h, tmp);
    tmp = {y[0] + dir * h * k3[0], y[1] + dir * h * k3[1]};
    auto k4 = lax_rhs(c, w + dir * h, tmp);
    for (int j = 0; j < 2; ++j) y[j] += dir * h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    w = (h == dir * (target - w)) ? target : w + dir * h;
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
      fail(ErrorCode::range_error, "deformed_tw: overflow in the Lax ODE; reduce |w|");
    if (!marked && w == w_mark) {
      *f_at = y[0];
      marked = true;
    }
  }
  return y;
}

}  // namespace

double deformed_tw(const HmSolution& hm, double t, double w) {
  require(!std::isnan(t) && !std::isnan(w), "deformed_tw: NaN argument");
  if (std::isinf(w)) {
    require(w > 0.0, "deformed_tw: w = -inf is not a valid boundary parameter");
    return tw2_cdf(hm, t);
  }
  if (!hm.covers(t))
    fail(ErrorCode::range_error, "deformed_tw: t outside the Hastings-McLeod table");
  // The Lax ODE is stiff like w^2, so the cost of a solve grows like |w|^3.
  if (std::abs(w) > kMaxLaxW)
    fail(ErrorCode::range_error, "deformed_tw: |w| above " + std::to_string(kMaxLaxW) +
                                     "; the law is within about 0.45/|w| of its w = +inf or -inf limit");
  const auto p = hm.at(t);
  const double e = std::exp(p.log_e), big_f = std::exp(p.log_f);
  if (w == 0.0) return e * big_f;
  LaxCoeffs c{t, p.u, p.u_prime};
  double f;
  if (w < 0.0) {
    f = lax_integrate(c, 0.0, w, {e, e})[0];
  } else {
    double f_w = 0.0;
    auto y0 = lax_integrate(c, w + 6.0, 0.0, {1.0, 0.0}, &f_w, w);
    f = e * f_w / y0[0];
  }
  return std::clamp(f * big_f, 0.0, 1.0);
}

double deformed_tw(double t, double w) { return deformed_tw(default_hm(), t, w); }

}  // namespace rmtlab
