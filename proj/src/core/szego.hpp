#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "core/carousel.hpp"
#include "core/ensembles.hpp"
#include "core/rng.hpp"

namespace rmtlab {

using cplx = std::complex<double>;

/// Coefficients in ascending powers.
struct PolyPair {
  std::vector<cplx> phi;       // monic
  std::vector<cplx> phi_star;  // z^k conj(phi(1/conj z))
};

struct BPath {
  std::vector<cplx> b;  // b_0 .. b_{n-1}, b_0 = 0
  cplx b_star;          // image of the last coefficient's datum
};

/// (Phi_k(z), Phi*_k(z)) for k = 0..n.
std::vector<std::pair<cplx, cplx>> szego_recursion(const VerblunskyCoeffs& alpha, cplx z);

/// Coefficient form of Phi_n and Phi*_n.
PolyPair szego_polynomials(const VerblunskyCoeffs& alpha);

/// Horner evaluation, ascending coefficients.
cplx poly_eval(const std::vector<cplx>& coeffs, cplx z);

/**
 * Continuous lift of theta + arg(Phi_{n-1}(e^{i theta}) / Phi*_{n-1}(e^{i theta})),
 * built from phi_{k+1} = theta + phi_k - 2 arg(1 - alpha_k e^{i(theta + phi_k)}).
 * Increases by 2 pi n as theta runs over [0, 2 pi].
 */
double lifted_phase(const VerblunskyCoeffs& alpha, double theta);

/**
 * Roots of Phi_n on the unit circle (requires |alpha_{n-1}| = 1), sorted in
 * [0, 2 pi). Located where lifted_phase hits arg(conj alpha_{n-1}) + 2 pi Z,
 * bracketed on a grid of 8n points and bisected to tol; each root is checked
 * against the parallelism criterion.
 */
std::vector<double> eigenangles(const VerblunskyCoeffs& alpha, double tol = 1e-13);

BPath b_path(const VerblunskyCoeffs& alpha);

/// Inverse of b_path: replays the Mobius increments, tracking the frame rotation.
VerblunskyCoeffs alpha_from_bpath(const BPath& path);

struct DiracReport {
  std::vector<double> defects;  // |G1 - b_* G2| / |G| at t = 1 per eigenvalue
  double grid_identity_error = 0.0;
  std::size_t worst_index = 0;
  double worst_defect = 0.0;
  bool passed = false;
};

/**
 * For each lambda (n times an eigenangle lift) integrates
 *   d/dt G = -(lambda/2) X_t J X_t^{-1} G,   G(0) = (1, 1)
 * cell by cell in closed form, with X_t built from b_{floor(tn)}, and checks
 * G(1) parallel to (b_*, 1). Also compares G(k/n) to e^{-i lambda k/(2n)} G_k
 * from the discrete rotation product.
 */
DiracReport dirac_spectrum_check(const BPath& path, std::size_t n, const std::vector<double>& lambdas,
                                 double tol);

/// Boundary-condition defect for one spectral parameter.
double dirac_defect(const BPath& path, std::size_t n, double lambda);

/// Hyperbolic radii 2 artanh|alpha_k|, |alpha_k|^2 ~ Beta(1, (n-k-1) beta/2), k = 0..n-2.
std::vector<double> kn_radii(std::size_t n, double beta, RngStream& rng);

struct KnWalk {
  std::vector<cplx> b;
  std::vector<double> times;
  std::vector<std::size_t> path_index;
};

/// b_{k+1} = B(t_{k+1}), t_{k+1} the first path time at distance >= d_{k+1} from b_k.
KnWalk kn_coupling(const DiskPath& bm, const std::vector<double>& radii);

/// max_k sup over [t_k, t_{k+1}] of dist(B_t, b_k).
double kn_excursion(const DiskPath& bm, const KnWalk& walk);

}  // namespace rmtlab
