#include "core/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "core/error.hpp"

namespace rmtlab {

void validate(const SymTridiagonal& t) {
  require(!t.diag.empty(), "tridiagonal: empty matrix");
  require(t.offdiag.size() + 1 == t.diag.size(), "tridiagonal: offdiag must have n-1 entries");
  for (double a : t.diag) require(std::isfinite(a), "tridiagonal: non-finite diagonal entry");
  for (double b : t.offdiag) require(std::isfinite(b), "tridiagonal: non-finite off-diagonal entry");
}

bool is_jacobi(const SymTridiagonal& t) {
  return std::all_of(t.offdiag.begin(), t.offdiag.end(), [](double b) { return b > 0.0; });
}

SymTridiagonal leading_minor(const SymTridiagonal& t, std::size_t k) {
  require(k >= 1 && k <= t.size(), "leading_minor: order out of range");
  SymTridiagonal m;
  m.diag.assign(t.diag.begin(), t.diag.begin() + static_cast<std::ptrdiff_t>(k));
  m.offdiag.assign(t.offdiag.begin(), t.offdiag.begin() + static_cast<std::ptrdiff_t>(k - 1));
  return m;
}

std::vector<double> matvec(const SymTridiagonal& t, const std::vector<double>& v) {
  const std::size_t n = t.size();
  require(v.size() == n, "apply: size mismatch");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = t.diag[i] * v[i];
    if (i > 0) s += t.offdiag[i - 1] * v[i - 1];
    if (i + 1 < n) s += t.offdiag[i] * v[i + 1];
    out[i] = s;
  }
  return out;
}

double norm_inf(const SymTridiagonal& t) {
  const std::size_t n = t.size();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = std::abs(t.diag[i]);
    if (i > 0) s += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) s += std::abs(t.offdiag[i]);
    m = std::max(m, s);
  }
  return m;
}

std::vector<double> root_moments(const SymTridiagonal& t, int kmax) {
  validate(t);
  require(kmax >= 0, "root_moments: kmax must be >= 0");
  std::vector<double> v(t.size(), 0.0);
  v[0] = 1.0;
  std::vector<double> m(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) {
    m[static_cast<std::size_t>(k)] = v[0];
    if (k < kmax) v = matvec(t, v);
  }
  return m;
}

std::size_t sturm_count(const SymTridiagonal& t, double x) {
  const std::size_t n = t.size();
  const double tiny = std::numeric_limits<double>::min();
  std::size_t count = 0;
  double d = t.diag[0] - x;
  for (std::size_t i = 0;;) {
    if (d == 0.0) d = tiny;  // an eigenvalue exactly at x is not "strictly below"
    if (d < 0.0) ++count;
    if (++i == n) break;
    const double b = t.offdiag[i - 1];
    d = (t.diag[i] - x) - b * b / d;
  }
  return count;
}

std::pair<double, double> gershgorin_bounds(const SymTridiagonal& t) {
  const std::size_t n = t.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) r += std::abs(t.offdiag[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  double pad = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  return {lo - pad, hi + pad};
}

namespace {

// Recursive bisection of [lo, hi] whose counts are clo, chi; fills out[k - first]
// for indices k in [clo, chi) that fall into [first, last).
void bisect(const SymTridiagonal& t, double lo, double hi, std::size_t clo, std::size_t chi,
            std::size_t first, std::size_t last, double tol, std::vector<double>& out) {
  while (true) {
    if (chi <= clo || chi <= first || clo >= last) return;
    double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol || mid <= lo || mid >= hi) {
      for (std::size_t k = std::max(clo, first); k < std::min(chi, last); ++k) out[k - first] = mid;
      return;
    }
    std::size_t cm = sturm_count(t, mid);
    // Recurse into the smaller-index half, loop on the other.
    bisect(t, lo, mid, clo, cm, first, last, tol, out);
    lo = mid;
    clo = cm;
  }
}

}  // namespace

std::vector<double> eigenvalue_range(const SymTridiagonal& t, std::size_t first, std::size_t last,
                                     double tol) {
  validate(t);
  require(tol > 0.0, "eigenvalues: tol must be > 0");
  require(first <= last && last <= t.size(), "eigenvalues: index range out of bounds");
  std::vector<double> out(last - first);
  if (first == last) return out;
  auto [lo, hi] = gershgorin_bounds(t);
  bisect(t, lo, hi, 0, t.size(), first, last, tol, out);
  return out;
}

std::vector<double> eigenvalues(const SymTridiagonal& t, double tol) {
  return eigenvalue_range(t, 0, t.size(), tol);
}

double largest_eigenvalue(const SymTridiagonal& t, double tol) {
  return eigenvalue_range(t, t.size() - 1, t.size(), tol)[0];
}

namespace {

// Solves (T - mu) x = rhs in place by Gaussian elimination with partial pivoting.
void solve_shifted(const SymTridiagonal& t, double mu, std::vector<double>& x) {
  const std::size_t n = t.size();
  // dl/d/du/du2 follow the layout of a general tridiagonal LU with one extra
  // superdiagonal of fill-in from row swaps.
  std::vector<double> d(n), du(n, 0.0), du2(n, 0.0), dl(n, 0.0);
  std::vector<char> swapped(n, 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - mu;
  for (std::size_t i = 0; i + 1 < n; ++i) du[i] = t.offdiag[i];
  std::vector<double> sub(t.offdiag);
  const double small = std::numeric_limits<double>::epsilon() * std::max(1.0, norm_inf(t));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(sub[i])) {
      if (d[i] == 0.0) d[i] = small;
      double f = sub[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
    } else {
      double f = d[i] / sub[i];
      d[i] = sub[i];
      dl[i] = f;
      double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - f * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = small;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (swapped[i]) {
      double tmp = x[i];
      x[i] = x[i + 1];
      x[i + 1] = tmp - dl[i] * x[i + 1];
    } else {
      x[i + 1] -= dl[i] * x[i];
    }
  }
  x[n - 1] /= d[n - 1];
  if (n >= 2) x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
  for (std::size_t k = n; k-- > 2;) {
    std::size_t i = k - 2;
    x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
  }
}

double normalize(std::vector<double>& v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  if (m == 0.0 || !std::isfinite(m)) return 0.0;
  double s = 0.0;
  for (double& a : v) {
    a /= m;
    s += a * a;
  }
  s = std::sqrt(s);
  for (double& a : v) a /= s;
  return s * m;
}

}  // namespace

EigenPair eigenvector(const SymTridiagonal& t, double lambda, double tol) {
  validate(t);
  require(tol > 0.0, "eigenvector: tol must be > 0");
  const std::size_t n = t.size();
  const double tnorm = std::max(norm_inf(t), std::numeric_limits<double>::min());
  double mu = lambda * (1.0 + 1e-12);
  if (lambda == 0.0) mu = 1e-12 * tnorm;
  const double target = 2.0 * tol + 1e3 * std::numeric_limits<double>::epsilon() * tnorm;

  std::vector<double> v(n);
  // Deterministic, non-symmetric start so no eigenvector is orthogonal to it.
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * std::sin(1.0 + static_cast<double>(i));
  normalize(v);
  double resid = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 50; ++it) {
    solve_shifted(t, mu, v);
    if (normalize(v) == 0.0)
      fail(ErrorCode::numerical_failure, "eigenvector: inverse iteration produced a zero vector");
    auto tv = matvec(t, v);
    resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) resid = std::max(resid, std::abs(tv[i] - lambda * v[i]));
    if (resid <= target) {
      for (double a : v) {
        if (a != 0.0) {
          if (a < 0.0)
            for (double& b : v) b = -b;
          break;
        }
      }
      return {lambda, std::move(v)};
    }
  }
  fail(ErrorCode::numerical_failure,
       "eigenvector: inverse iteration did not converge (residual " + std::to_string(resid) + ")");
}

WeightedPointMeasure spectral_measure(const SymTridiagonal& t, double tol) {
  auto eig = eigenvalues(t, tol);
  for (std::size_t i = 1; i < eig.size(); ++i) {
    if (eig[i] - eig[i - 1] <= tol)
      fail(ErrorCode::degenerate_input, "spectral_measure: eigenvalues closer than tol near " +
                                            std::to_string(eig[i]));
  }
  WeightedPointMeasure m;
  m.atoms.reserve(eig.size());
  double total = 0.0;
  for (double lam : eig) {
    auto ep = eigenvector(t, lam, tol);
    double q = ep.vector[0] * ep.vector[0];
    m.atoms.push_back({lam, q});
    total += q;
  }
  for (auto& a : m.atoms) a.weight /= total;
  return m;
}

std::vector<double> orthopoly_eval(const SymTridiagonal& t, double x) {
  validate(t);
  const std::size_t n = t.size();
  for (double b : t.offdiag)
    if (b == 0.0) fail(ErrorCode::degenerate_input, "orthopoly_eval: zero off-diagonal entry");
  std::vector<double> p(n + 1);
  p[0] = 1.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double bk = (k + 1 < n) ? t.offdiag[k] : 1.0;
    double bkm = (k > 0) ? t.offdiag[k - 1] : 0.0;
    double next = ((x - t.diag[k]) * p[k] - bkm * prev) / bk;
    prev = p[k];
    p[k + 1] = next;
  }
  return p;
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) +
         std::asin(0.5 * x) / std::numbers::pi;
}

SemicircleDiagnostics semicircle_diagnostics(const std::vector<double>& sorted_eigs) {
  require(!sorted_eigs.empty(), "semicircle_diagnostics: empty input");
  require(std::is_sorted(sorted_eigs.begin(), sorted_eigs.end()),
          "semicircle_diagnostics: input must be sorted");
  const double n = static_cast<double>(sorted_eigs.size());
  SemicircleDiagnostics d;
  double ks = 0.0;
  for (std::size_t i = 0; i < sorted_eigs.size(); ++i) {
    double f = semicircle_cdf(sorted_eigs[i]);
    ks = std::max({ks, std::abs(static_cast<double>(i + 1) / n - f),
                   std::abs(f - static_cast<double>(i) / n)});
  }
  d.ks_distance = ks;
  d.moments.assign(8, 0.0);
  for (double x : sorted_eigs) {
    double p = 1.0;
    for (int k = 0; k < 8; ++k) {
      p *= x;
      d.moments[static_cast<std::size_t>(k)] += p;
    }
  }
  for (double& m : d.moments) m /= n;
  return d;
}

}  // namespace rmtlab
