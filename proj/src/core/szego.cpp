#include "core/szego.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/stochastics.hpp"

namespace rmtlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Complex 2x2 matrix [[a, b], [c, d]] acting projectively as a Mobius map.
struct Mat2 {
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  std::pair<cplx, cplx> apply(cplx x, cplx y) const { return {a * x + b * y, c * x + d * y}; }
  cplx mobius(cplx w) const { return (a * w + b) / (c * w + d); }
  cplx inverse_mobius(cplx w) const { return (d * w - b) / (-c * w + a); }
  void normalize() {
    const cplx det = a * d - b * c;
    const cplx s = std::sqrt(det);
    a /= s;
    b /= s;
    c /= s;
    d /= s;
  }
};

Mat2 inverse_step(cplx alpha) { return {1.0, std::conj(alpha), alpha, 1.0}; }

void check_interior(const VerblunskyCoeffs& v, std::size_t upto) {
  for (std::size_t k = 0; k < upto; ++k)
    if (!(std::abs(v.alpha[k]) < 1.0))
      fail(ErrorCode::invalid_parameter, "szego: coefficient " + std::to_string(k) +
                                             " must lie in the open unit disk");
}

cplx checked_point(cplx b, std::size_t k) {
  if (!(std::abs(b) < 1.0 - 1e-14))
    fail(ErrorCode::degenerate_input,
         "b_path: b_" + std::to_string(k) + " reached the boundary of the disk");
  return b;
}

}  // namespace

std::vector<std::pair<cplx, cplx>> szego_recursion(const VerblunskyCoeffs& alpha, cplx z) {
  validate(alpha);
  std::vector<std::pair<cplx, cplx>> out;
  out.reserve(alpha.alpha.size() + 1);
  cplx p = 1.0, ps = 1.0;
  out.emplace_back(p, ps);
  for (const cplx a : alpha.alpha) {
    const cplx zp = z * p;
    p = zp - std::conj(a) * ps;
    ps = ps - a * zp;
    out.emplace_back(p, ps);
  }
  return out;
}

PolyPair szego_polynomials(const VerblunskyCoeffs& alpha) {
  validate(alpha);
  PolyPair pp{{1.0}, {1.0}};
  for (const cplx a : alpha.alpha) {
    const std::size_t k = pp.phi.size();
    std::vector<cplx> phi(k + 1, 0.0), star(k + 1, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      phi[j + 1] += pp.phi[j];
      phi[j] -= std::conj(a) * pp.phi_star[j];
      star[j] += pp.phi_star[j];
      star[j + 1] -= a * pp.phi[j];
    }
    pp.phi = std::move(phi);
    pp.phi_star = std::move(star);
  }
  return pp;
}

cplx poly_eval(const std::vector<cplx>& coeffs, cplx z) {
  cplx acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double lifted_phase(const VerblunskyCoeffs& alpha, double theta) {
  const std::size_t n = alpha.alpha.size();
  double phi = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k)
    phi = theta + phi - 2.0 * std::arg(1.0 - alpha.alpha[k] * std::polar(1.0, theta + phi));
  return theta + phi;
}

std::vector<double> eigenangles(const VerblunskyCoeffs& alpha, double tol) {
  validate(alpha);
  require(tol > 0.0, "eigenangles: tol must be > 0");
  const std::size_t n = alpha.alpha.size();
  require(n >= 1, "eigenangles: need at least one coefficient");
  check_interior(alpha, n - 1);
  const cplx last = alpha.alpha[n - 1];
  if (std::abs(std::abs(last) - 1.0) > 1e-12)
    fail(ErrorCode::invalid_parameter, "eigenangles: the last coefficient must be unimodular");
  const double target = std::arg(std::conj(last));

  // h is increasing with h(2 pi) - h(0) = n; roots sit at its integer crossings.
  auto h = [&](double th) { return (lifted_phase(alpha, th) - target) / kTwoPi; };
  const std::size_t grid = 8 * n;
  std::vector<double> roots;
  double th0 = 0.0, h0 = h(0.0);
  for (std::size_t j = 1; j <= grid; ++j) {
    const double th1 = kTwoPi * static_cast<double>(j) / static_cast<double>(grid);
    const double h1 = h(th1);
    for (double m = std::ceil(h0); m < h1; m += 1.0) {
      double lo = th0, hi = th1;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (h(mid) < m ? lo : hi) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    th0 = th1;
    h0 = h1;
  }
  if (roots.size() != n)
    fail(ErrorCode::numerical_failure, "eigenangles: found " + std::to_string(roots.size()) +
                                           " roots, winding number is " + std::to_string(n));
  for (double& r : roots) r = std::fmod(r, kTwoPi);
  std::sort(roots.begin(), roots.end());

  for (double r : roots) {
    // The defect is the phase error, so it inherits the phase speed at the root.
    // Coefficients near the circle make that speed large.
    const double speed = (lifted_phase(alpha, r + 1e-8) - lifted_phase(alpha, r - 1e-8)) / 2e-8;
    const double accept = std::max(1e-9, 1e3 * std::max(static_cast<double>(n), speed) * tol);
    const cplx z = std::polar(1.0, r);
    cplx p = 1.0, ps = 1.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const cplx zp = z * p;
      p = zp - std::conj(alpha.alpha[k]) * ps;
      ps = ps - alpha.alpha[k] * zp;
    }
    const cplx x = z * p, y = ps;
    const double defect = std::abs(x - std::conj(last) * y) / std::hypot(std::abs(x), std::abs(y));
    if (defect > accept)
      fail(ErrorCode::numerical_failure,
           "eigenangles: root at " + std::to_string(r) + " fails the parallelism check");
  }
  return roots;
}

BPath b_path(const VerblunskyCoeffs& alpha) {
  validate(alpha);
  const std::size_t n = alpha.alpha.size();
  require(n >= 1, "b_path: need at least one coefficient");
  check_interior(alpha, n - 1);
  BPath out;
  out.b.reserve(n);
  out.b.push_back(0.0);
  Mat2 g;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    g = g * inverse_step(alpha.alpha[k]);
    g.normalize();
    out.b.push_back(checked_point(g.mobius(0.0), k + 1));
  }
  out.b_star = g.mobius(std::conj(alpha.alpha[n - 1]));
  return out;
}

VerblunskyCoeffs alpha_from_bpath(const BPath& path) {
  const std::size_t n = path.b.size();
  require(n >= 1, "alpha_from_bpath: empty path");
  VerblunskyCoeffs v;
  v.alpha.resize(n);
  Mat2 g;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    v.alpha[k] = std::conj(g.inverse_mobius(path.b[k + 1]));
    g = g * inverse_step(v.alpha[k]);
    g.normalize();
  }
  v.alpha[n - 1] = std::conj(g.inverse_mobius(path.b_star));
  return v;
}

namespace {

struct DiracRun {
  double defect;
  double grid_error;
};

DiracRun run_dirac(const BPath& path, std::size_t n, double lambda) {
  const double omega = lambda / (2.0 * static_cast<double>(n));
  const cplx z = std::polar(1.0, lambda / static_cast<double>(n));
  const cplx i(0.0, 1.0);
  std::pair<cplx, cplx> cont{1.0, 1.0}, disc{1.0, 1.0};
  double grid_err = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx b = path.b[k];
    const double s = 1.0 / std::sqrt(1.0 - std::norm(b));
    const Mat2 x{s, s * b, s * std::conj(b), s};
    const Mat2 xinv{s, -s * b, -s * std::conj(b), s};
    const Mat2 xjx = x * Mat2{-i, 0.0, 0.0, i} * xinv;
    // exp(-omega X J X^{-1}) = cos(omega) I - sin(omega) X J X^{-1}, since (X J X^{-1})^2 = -I.
    const double co = std::cos(omega), si = std::sin(omega);
    const Mat2 cell{co - si * xjx.a, -si * xjx.b, -si * xjx.c, co - si * xjx.d};
    cont = cell.apply(cont.first, cont.second);
    disc = (x * Mat2{z, 0.0, 0.0, 1.0} * xinv).apply(disc.first, disc.second);
    const cplx phase = std::exp(-i * omega * static_cast<double>(k + 1));
    const double scale = std::hypot(std::abs(disc.first), std::abs(disc.second));
    grid_err = std::max(grid_err, std::hypot(std::abs(cont.first - phase * disc.first),
                                             std::abs(cont.second - phase * disc.second)) /
                                      scale);
  }
  const double norm = std::hypot(std::abs(cont.first), std::abs(cont.second));
  return {std::abs(cont.first - path.b_star * cont.second) / norm, grid_err};
}

}  // namespace

double dirac_defect(const BPath& path, std::size_t n, double lambda) {
  require(n >= 1 && path.b.size() == n, "dirac_defect: path length must equal n");
  return run_dirac(path, n, lambda).defect;
}

DiracReport dirac_spectrum_check(const BPath& path, std::size_t n, const std::vector<double>& lambdas,
                                 double tol) {
  require(n >= 1 && path.b.size() == n, "dirac_spectrum_check: path length must equal n");
  require(tol > 0.0, "dirac_spectrum_check: tol must be > 0");
  DiracReport rep;
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    const auto r = run_dirac(path, n, lambdas[j]);
    rep.defects.push_back(r.defect);
    rep.grid_identity_error = std::max(rep.grid_identity_error, r.grid_error);
    if (r.defect > rep.worst_defect || j == 0) {
      rep.worst_defect = r.defect;
      rep.worst_index = j;
    }
  }
  rep.passed = rep.worst_defect <= tol && rep.grid_identity_error <= tol;
  return rep;
}

std::vector<double> kn_radii(std::size_t n, double beta, RngStream& rng) {
  require(n >= 1, "kn_radii: n must be >= 1");
  require(beta > 0.0 && std::isfinite(beta), "kn_radii: beta must be > 0");
  std::vector<double> d;
  d.reserve(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double r = std::sqrt(beta_variate(rng, 1.0, 0.5 * static_cast<double>(n - k - 1) * beta));
    d.push_back(2.0 * std::atanh(std::min(r, 1.0 - 1e-16)));
  }
  return d;
}

KnWalk kn_coupling(const DiskPath& bm, const std::vector<double>& radii) {
  require(!bm.points.empty() && bm.points.size() == bm.times.size(),
          "kn_coupling: path must be nonempty with matching times");
  KnWalk w;
  std::size_t j = 0;
  w.b.push_back(bm.points[0]);
  w.times.push_back(bm.times[0]);
  w.path_index.push_back(0);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    require(radii[k] >= 0.0, "kn_coupling: radii must be >= 0");
    const cplx centre = w.b.back();
    while (j < bm.points.size() && hyperbolic_distance(bm.points[j], centre) < radii[k]) ++j;
    if (j == bm.points.size())
      fail(ErrorCode::range_error, "kn_coupling: path exhausted before hit " + std::to_string(k + 1));
    w.b.push_back(bm.points[j]);
    w.times.push_back(bm.times[j]);
    w.path_index.push_back(j);
  }
  return w;
}

double kn_excursion(const DiskPath& bm, const KnWalk& walk) {
  double sup = 0.0;
  for (std::size_t k = 0; k + 1 < walk.b.size(); ++k)
    for (std::size_t j = walk.path_index[k]; j <= walk.path_index[k + 1]; ++j)
      sup = std::max(sup, hyperbolic_distance(bm.points[j], walk.b[k]));
  return sup;
}

}  // namespace rmtlab
