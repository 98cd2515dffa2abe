#include "core/airy.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "core/error.hpp"
#include "core/painleve.hpp"
#include "core/parallel.hpp"
#include "core/stochastics.hpp"

namespace rmtlab {

namespace {

void check_beta(double beta) { require(beta > 0.0 && !std::isnan(beta), "beta must be > 0"); }

void check_w(double w) {
  require(!std::isnan(w) && w != -std::numeric_limits<double>::infinity(),
          "boundary parameter w must be finite or +inf");
}

// Large stand-in for W = +inf; one Riccati step maps it to 1/h.
constexpr double kHuge = 1e300;

}  // namespace

SaoDiscretization discretize_sao(double beta, double w, double length, double h, RngStream& rng) {
  check_beta(beta);
  check_w(w);
  require(length > 0.0 && std::isfinite(length), "discretize_sao: L must be > 0");
  require(h > 0.0 && h <= 0.5 * length, "discretize_sao: need 0 < h <= L/2");
  const auto m = static_cast<std::size_t>(std::llround(length / h)) - 1;
  require(m >= 1, "discretize_sao: grid too coarse");

  SaoDiscretization d;
  d.grid_step = h;
  d.beta = beta;
  d.boundary_w = w;
  d.domain_length = static_cast<double>(m + 1) * h;
  d.seed = rng.seed();
  d.stream_id = rng.stream_id();

  const bool noisy = std::isfinite(beta);
  const double xi0 = noisy ? gaussian(rng, 0.0, 8.0 / (beta * h)) : 0.0;
  const bool robin = std::isfinite(w);
  const double inv_h2 = 1.0 / (h * h);
  if (robin) {
    d.node_times.push_back(0.0);
    d.noise.push_back(xi0);
    d.matrix.diag.push_back(2.0 * inv_h2 + 2.0 * w / h + xi0);
  }
  for (std::size_t j = 1; j <= m; ++j) {
    const double t = static_cast<double>(j) * h;
    const double xi = noisy ? gaussian(rng, 0.0, 4.0 / (beta * h)) : 0.0;
    d.node_times.push_back(t);
    d.noise.push_back(xi);
    d.matrix.diag.push_back(2.0 * inv_h2 + t + xi);
  }
  d.matrix.offdiag.assign(d.matrix.diag.size() - 1, -inv_h2);
  if (robin) d.matrix.offdiag[0] = -std::sqrt(2.0) * inv_h2;
  return d;
}

std::vector<double> sao_bottom_eigs(const SaoDiscretization& d, std::size_t k, double tol) {
  require(k >= 1 && k <= d.matrix.size(), "sao_bottom_eigs: k exceeds the matrix order");
  return eigenvalue_range(d.matrix, 0, k, tol);
}

std::size_t sao_riccati_count(const SaoDiscretization& d, double lambda) {
  const double h = d.grid_step;
  const std::size_t rows = d.matrix.size();
  std::size_t j = 0;
  double W;
  if (std::isfinite(d.boundary_w)) {
    W = d.boundary_w + 0.5 * h * (d.node_times[0] + d.noise[0] - lambda);
  } else {
    W = 1.0 / h + h * (d.node_times[0] + d.noise[0] - lambda);
  }
  std::size_t count = 0;
  for (;;) {
    const double den = 1.0 + h * W;
    if (den < 0.0) ++count;
    if (++j == rows) break;
    W = std::clamp(W / den, -kHuge, kHuge) + h * (d.node_times[j] + d.noise[j] - lambda);
  }
  return count;
}

ExplosionCounts riccati_explosion_counts(double beta, double w, const std::vector<double>& a_grid,
                                         std::size_t paths, const RngStream& rng,
                                         const RiccatiOptions& opts) {
  check_beta(beta);
  check_w(w);
  require(paths >= 1, "riccati: paths must be >= 1");
  require(!a_grid.empty(), "riccati: empty grid");
  for (std::size_t k = 0; k < a_grid.size(); ++k) {
    require(std::isfinite(a_grid[k]), "riccati: grid values must be finite");
    if (k > 0) require(a_grid[k] > a_grid[k - 1], "riccati: grid must be strictly increasing");
  }
  require(opts.step > 0.0 && opts.step <= 0.1, "riccati: step must be in (0, 0.1]");
  require(opts.t_safe > 0.0, "riccati: t_safe must be > 0");

  const double h = opts.step;
  const std::size_t kk = a_grid.size();
  const bool noisy = std::isfinite(beta);
  const double sd0 = noisy ? std::sqrt(8.0 / (beta * h)) : 0.0;
  const double hsd = noisy ? h * std::sqrt(4.0 / (beta * h)) : 0.0;
  const double t_limit = opts.t_safe - a_grid.front() + opts.max_extra;
  std::vector<double> ha(kk);
  for (std::size_t k = 0; k < kk; ++k) ha[k] = h * a_grid[k];

  ExplosionCounts out;
  out.a_grid = a_grid;
  out.counts.assign(paths, std::vector<int>(kk, 0));

  parallel_for(paths, [&](std::size_t p) {
    RngStream r = rng.child(p);
    std::vector<double> W(kk), cnt(kk, 0.0);
    const double xi0 = noisy ? sd0 * r.normal() : 0.0;
    for (std::size_t k = 0; k < kk; ++k)
      W[k] = std::isfinite(w) ? w + 0.5 * h * (a_grid[k] + xi0) : kHuge;
    std::size_t active = kk;
    for (std::size_t j = 1;; ++j) {
      const double t = static_cast<double>(j) * h;
      const double c = h * t + (noisy ? hsd * r.normal() : 0.0);
      for (std::size_t k = 0; k < active; ++k) {
        const double den = 1.0 + h * W[k];
        cnt[k] += (den < 0.0) ? 1.0 : 0.0;
        W[k] = std::clamp(W[k] / den, -kHuge, kHuge) + c + ha[k];
      }
      // Chains retire from the largest a down, so a smaller a always sees a
      // longer (nested) matrix and the counts stay monotone.
      while (active > 0) {
        const double s = t + a_grid[active - 1];
        if (s >= opts.t_safe && W[active - 1] > std::sqrt(s))
          --active;
        else
          break;
      }
      if (active == 0) break;
      if (t > t_limit)
        fail(ErrorCode::numerical_failure,
             "riccati: path " + std::to_string(p) + " not certified by t=" + std::to_string(t));
    }
    for (std::size_t k = 0; k < kk; ++k) out.counts[p][k] = static_cast<int>(cnt[k]);
  });
  return out;
}

std::vector<double> explosion_tail(const ExplosionCounts& c, int k) {
  std::vector<double> frac(c.a_grid.size(), 0.0);
  if (c.counts.empty()) return frac;
  for (const auto& row : c.counts)
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i] >= k + 1) frac[i] += 1.0;
  for (double& f : frac) f /= static_cast<double>(c.counts.size());
  return frac;
}

CdfTable riccati_tw_cdf(double beta, double w, const std::vector<double>& a_grid, std::size_t paths,
                        const RngStream& rng, const RiccatiOptions& opts) {
  auto counts = riccati_explosion_counts(beta, w, a_grid, paths, rng, opts);
  CdfTable t;
  t.grid = a_grid;
  t.meta.beta = beta;
  t.meta.w = w;
  t.meta.method = "riccati";
  t.meta.paths = static_cast<long long>(paths);
  t.meta.seed = rng.seed();
  t.meta.stream_id = rng.stream_id();
  t.meta.step = opts.step;
  for (std::size_t k = 0; k < a_grid.size(); ++k) {
    long long ok = 0;
    for (const auto& row : counts.counts) ok += (row[k] == 0);
    t.values.push_back(static_cast<double>(ok) / static_cast<double>(paths));
    auto iv = wilson_interval(ok, static_cast<long long>(paths));
    t.ci_halfwidth.push_back(0.5 * (iv.hi - iv.lo));
  }
  return t;
}

PdeTable tw_pde_solve(double beta, double t_lo, double t_hi, std::size_t nt, double w_lo, double w_hi,
                      std::size_t nw, const PdeOptions& opts) {
  require(beta > 0.0 && std::isfinite(beta), "tw_pde_solve: beta must be finite and > 0");
  require(std::isfinite(t_lo) && std::isfinite(t_hi) && t_lo <= t_hi, "tw_pde_solve: bad t range");
  const bool dirichlet = nw == 1 && w_lo == kDirichlet && w_hi == kDirichlet;
  require(dirichlet || (std::isfinite(w_lo) && std::isfinite(w_hi) && w_lo <= w_hi),
          "tw_pde_solve: bad w range");
  require(nt >= 1 && nw >= 1, "tw_pde_solve: need at least one output point per axis");
  require((nt == 1) == (t_lo == t_hi) && (nw == 1) == (w_lo == w_hi),
          "tw_pde_solve: a single output point needs a degenerate range");
  require(opts.n_theta >= 16, "tw_pde_solve: n_theta must be >= 16");
  require(opts.dt > 0.0 && opts.dt <= 0.05, "tw_pde_solve: dt must be in (0, 0.05]");
  const double t_term = opts.t_terminal != 0.0 ? opts.t_terminal : std::max(t_hi + 6.0, 8.0);
  require(t_term > t_hi && t_term > 0.0, "tw_pde_solve: terminal time must exceed t_hi and 0");

  const double sigma2 = 4.0 / beta;
  const std::size_t n = opts.n_theta;
  const double dth = std::numbers::pi / static_cast<double>(n);
  std::vector<double> s2(n + 1), c2(n + 1), s3c(n + 1), diff(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double th = static_cast<double>(i) * dth;
    const double s = (i == n) ? 0.0 : std::sin(th), c = std::cos(th);
    s2[i] = s * s;
    c2[i] = c * c;
    s3c[i] = s * s * s * c;
    diff[i] = 0.5 * sigma2 * s2[i] * s2[i];
  }

  // Terminal layer: escape probability from the repelling branch -sqrt(T).
  boost::math::normal_distribution<double> nd;
  std::vector<double> g(n + 1);
  const double rt = std::sqrt(t_term);
  const double scale = std::sqrt(beta * rt);
  g[0] = 1.0;
  g[n] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double th = static_cast<double>(i) * dth;
    const double w = std::cos(th) / std::sin(th);
    g[i] = boost::math::cdf(nd, std::clamp((w + rt) * scale, -40.0, 40.0));
  }

  PdeTable out;
  out.beta = beta;
  for (std::size_t i = 0; i < nt; ++i)
    out.t_grid.push_back(nt == 1 ? t_lo : t_lo + (t_hi - t_lo) * static_cast<double>(i) / static_cast<double>(nt - 1));
  for (std::size_t i = 0; i < nw; ++i)
    out.w_grid.push_back(nw == 1 ? w_lo : w_lo + (w_hi - w_lo) * static_cast<double>(i) / static_cast<double>(nw - 1));
  out.values.assign(nt, std::vector<double>(nw, 0.0));

  auto sample = [&](std::size_t it) {
    for (std::size_t k = 0; k < nw; ++k) {
      const double th = std::atan2(1.0, out.w_grid[k]);
      double x = th / dth;
      auto i = std::min(static_cast<std::size_t>(x), n - 1);
      double f = x - static_cast<double>(i);
      out.values[it][k] = std::clamp((1.0 - f) * g[i] + f * g[i + 1], 0.0, 1.0);
    }
  };

  std::vector<double> lo(n), di(n), up(n), cp(n), dp(n);
  double t = t_term;
  std::size_t next_out = nt;  // outputs are filled from the top index down
  while (next_out > 0) {
    const double target = out.t_grid[next_out - 1];
    if (t - target <= 1e-12) {
      sample(next_out - 1);
      --next_out;
      continue;
    }
    const double step = std::min(opts.dt, t - target);
    const double tn = (t - step - target <= 1e-12) ? target : t - step;
    const double dt = t - tn;
    for (std::size_t i = 0; i < n; ++i) {
      const double b = -(tn * s2[i] - c2[i]) + sigma2 * s3c[i];
      const double dd = diff[i] / (dth * dth);
      const double bp = std::max(b, 0.0) / dth, bm = std::max(-b, 0.0) / dth;
      lo[i] = -dt * (dd + bm);
      up[i] = -dt * (dd + bp);
      di[i] = 1.0 + dt * (2.0 * dd + bp + bm);
    }
    // Thomas sweep; rows are diagonally dominant so no pivoting is needed.
    cp[0] = up[0] / di[0];
    dp[0] = g[0] / di[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double den = di[i] - lo[i] * cp[i - 1];
      cp[i] = up[i] / den;
      dp[i] = (g[i] - lo[i] * dp[i - 1]) / den;
    }
    g[n - 1] = dp[n - 1];  // g[n] = 0 multiplies up[n-1]
    for (std::size_t i = n - 1; i-- > 0;) g[i] = dp[i] - cp[i] * g[i + 1];
    t = tn;
  }
  return out;
}

double TailFormulas::ledoux_rider_right(std::size_t n, double eps, double c) const {
  require(eps > 0.0 && eps <= 1.0 && c > 0.0, "ledoux_rider: need eps in (0,1] and C > 0");
  return beta * static_cast<double>(n) * std::pow(eps, 1.5) / c - std::log(c);
}

double TailFormulas::ledoux_rider_left(std::size_t n, double eps, double c) const {
  require(eps > 0.0 && eps <= 1.0 && c > 0.0, "ledoux_rider: need eps in (0,1] and C > 0");
  const double nn = static_cast<double>(n);
  return beta * nn * nn * eps * eps * eps / c - beta * std::log(c);
}

TailFormulas tail_formulas(double beta, double a) {
  check_beta(beta);
  require(a > 0.0 && std::isfinite(a), "tail_formulas: a must be > 0");
  return {beta * a * a * a / 24.0, 2.0 / 3.0 * beta * std::pow(a, 1.5), -0.75 * beta, beta};
}

double weyl_limit() { return std::pow(1.5 * std::numbers::pi, 2.0 / 3.0); }

double weyl_check(int k) {
  require(k >= 1, "weyl_check: k must be >= 1");
  return -airy_ai_zero(k + 1) / std::pow(static_cast<double>(k), 2.0 / 3.0);
}

namespace {

// Breakpoints of the trial function: x sqrt a = sqrt(a - x) and a - x = 1.
std::pair<double, double> trial_kinks(double a) {
  const double x1 = (-1.0 + std::sqrt(1.0 + 4.0 * a * a)) / (2.0 * a);
  return {std::min(x1, a), std::clamp(a - 1.0, x1, a)};
}

}  // namespace

double trial_function(double a, double x) {
  require(a > 0.0 && std::isfinite(a), "trial_function: a must be > 0");
  if (x <= 0.0 || x >= a) return 0.0;
  return std::min({x * std::sqrt(a), std::sqrt(a - x), a - x});
}

TrialNorms trial_norms(double a) {
  require(a > 0.0 && std::isfinite(a), "trial_norms: a must be > 0");
  using boost::math::quadrature::gauss_kronrod;
  const auto [x1, x2] = trial_kinks(a);
  auto integrate = [&](auto&& g) {
    double s = 0.0;
    const double knots[] = {0.0, x1, x2, a};
    for (int i = 0; i < 3; ++i)
      if (knots[i + 1] > knots[i]) s += gauss_kronrod<double, 31>::integrate(g, knots[i], knots[i + 1], 15, 1e-13);
    return s;
  };
  auto f = [&](double x) { return trial_function(a, x); };
  auto fp = [&](double x) {
    if (x < x1) return std::sqrt(a);
    if (x < x2) return -0.5 / std::sqrt(a - x);
    return -1.0;
  };
  TrialNorms n;
  n.a_l2 = a * integrate([&](double x) { return f(x) * f(x); });
  n.deriv_l2 = integrate([&](double x) { return fp(x) * fp(x); });
  n.sqrtx_l2 = integrate([&](double x) { return x * f(x) * f(x); });
  n.l4 = integrate([&](double x) { return std::pow(f(x), 4); });
  return n;
}

double form_bound_constant(double beta, double eps, const std::vector<double>& a_values, double h,
                           RngStream& rng) {
  check_beta(beta);
  require(eps > 0.0 && eps < 1.0, "form_bound_constant: eps must be in (0, 1)");
  require(h > 0.0 && !a_values.empty(), "form_bound_constant: need h > 0 and some a");
  const double a_max = *std::max_element(a_values.begin(), a_values.end());
  require(a_max > 0.0 && std::isfinite(a_max), "form_bound_constant: a must be > 0");
  const auto cells = static_cast<std::size_t>(std::ceil(a_max / h));
  std::vector<double> xi(cells);
  for (double& x : xi) x = gaussian(rng, 0.0, 4.0 / (beta * h));
  double c = 0.0;
  for (double a : a_values) {
    require(a > 0.0, "form_bound_constant: a must be > 0");
    const auto n = trial_norms(a);
    const double ao = n.deriv_l2 + n.sqrtx_l2;
    double noise = 0.0;
    for (std::size_t j = 0; j < cells; ++j) {
      const double f = trial_function(a, (static_cast<double>(j) + 0.5) * h);
      noise += f * f * xi[j] * h;
    }
    c = std::max(c, (1.0 - eps) * ao - (ao + noise));
  }
  return c;
}

}  // namespace rmtlab
