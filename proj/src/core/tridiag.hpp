#pragma once

#include <cstddef>
#include <vector>

namespace rmtlab {

/// Symmetric tridiagonal matrix: diag has n entries, offdiag n-1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::size_t size() const noexcept { return diag.size(); }
};

/// Checks shape and finiteness; throws invalid_parameter on failure.
void validate(const SymTridiagonal& t);
/// True when every off-diagonal entry is strictly positive.
bool is_jacobi(const SymTridiagonal& t);
/// Leading principal k x k block.
SymTridiagonal leading_minor(const SymTridiagonal& t, std::size_t k);
std::vector<double> matvec(const SymTridiagonal& t, const std::vector<double>& v);
/// Infinity norm (max absolute row sum).
double norm_inf(const SymTridiagonal& t);
/// (T^k)_{11} for k = 0..kmax.
std::vector<double> root_moments(const SymTridiagonal& t, int kmax);

struct PointAtom {
  double location;
  double weight;
};

struct WeightedPointMeasure {
  std::vector<PointAtom> atoms;
};

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

/// Number of eigenvalues strictly below x.
std::size_t sturm_count(const SymTridiagonal& t, double x);
/// Gershgorin enclosure [lo, hi] of the spectrum.
std::pair<double, double> gershgorin_bounds(const SymTridiagonal& t);
/// All eigenvalues ascending, each bracketed to width <= tol.
std::vector<double> eigenvalues(const SymTridiagonal& t, double tol);
/// Eigenvalues with ascending indices in [first, last).
std::vector<double> eigenvalue_range(const SymTridiagonal& t, std::size_t first, std::size_t last,
                                     double tol);
double largest_eigenvalue(const SymTridiagonal& t, double tol);
EigenPair eigenvector(const SymTridiagonal& t, double lambda, double tol);
WeightedPointMeasure spectral_measure(const SymTridiagonal& t, double tol);
/// p_0(x) .. p_n(x); the last step uses b_n := 1 so p_n vanishes on the spectrum.
std::vector<double> orthopoly_eval(const SymTridiagonal& t, double x);

struct SemicircleDiagnostics {
  double ks_distance = 0.0;
  std::vector<double> moments;  // m_1 .. m_8
};

double semicircle_cdf(double x);
SemicircleDiagnostics semicircle_diagnostics(const std::vector<double>& sorted_eigs);

}  // namespace rmtlab
