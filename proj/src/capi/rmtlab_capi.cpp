#include "rmtlab/rmtlab.h"

#include <cmath>
#include <cstring>
#include <new>
#include <numbers>
#include <string>

#include <json.hpp>

#include "core/acceptance.hpp"
#include "core/airy.hpp"
#include "core/carousel.hpp"
#include "core/ensembles.hpp"
#include "core/error.hpp"
#include "core/io.hpp"
#include "core/painleve.hpp"
#include "core/parallel.hpp"
#include "core/statkit.hpp"
#include "core/szego.hpp"
#include "core/tridiag.hpp"

struct rmtl_text {
  std::string s;
};
struct rmtl_tridiag {
  rmtlab::SymTridiagonal t;
};
struct rmtl_cdf {
  rmtlab::CdfTable c;
};
struct rmtl_verblunsky {
  rmtlab::VerblunskyCoeffs v;
};

namespace {

using namespace rmtlab;
using nlohmann::json;

thread_local std::string g_last_error;

rmtl_status set_error(rmtl_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

template <class F>
rmtl_status guarded(F&& f) {
  try {
    f();
    return RMTL_OK;
  } catch (const Error& e) {
    return set_error(static_cast<rmtl_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(RMTL_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(RMTL_E_INTERNAL, e.what());
  }
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::invalid_parameter, std::string(what) + " must not be NULL");
}

void emit(rmtl_text** out, std::string s) {
  need(out, "out");
  *out = new rmtl_text{std::move(s)};
}

void check_format(rmtl_format fmt) {
  require(fmt == RMTL_CSV || fmt == RMTL_JSON, "format must be csv or json");
}

// JSON cannot hold inf/nan; those are written as strings.
json num(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

std::string dump(const json& j) { return j.dump(1) + "\n"; }

std::vector<double> as_vector(const double* p, std::size_t n, const char* what) {
  require(n > 0, std::string(what) + " must not be empty");
  need(p, what);
  return {p, p + n};
}

OmegaDist parse_omega(const char* s) {
  const std::string v = s ? s : "gaussian";
  if (v == "gaussian") return OmegaDist::gaussian;
  if (v == "rademacher") return OmegaDist::rademacher;
  if (v == "uniform") return OmegaDist::uniform;
  fail(ErrorCode::invalid_parameter, "unknown omega distribution '" + v + "'");
}

}  // namespace

extern "C" {

const char* rmtl_version(void) { return "0.3.0"; }

const char* rmtl_status_string(int status) {
  if (status == RMTL_OK) return "ok";
  if (status == RMTL_E_INTERNAL) return "internal error";
  if (status >= 1 && status <= 5) return to_string(static_cast<ErrorCode>(status));
  return "unknown status";
}

const char* rmtl_last_error(void) { return g_last_error.c_str(); }

void rmtl_set_threads(unsigned n) { set_thread_count(n); }
unsigned rmtl_threads(void) { return thread_count(); }

const char* rmtl_text_data(const rmtl_text* text) { return text ? text->s.c_str() : ""; }
size_t rmtl_text_size(const rmtl_text* text) { return text ? text->s.size() : 0; }
void rmtl_text_free(rmtl_text* text) { delete text; }

// ---- tridiagonal ----

rmtl_status rmtl_tridiag_create(const double* diag, const double* offdiag, size_t n, rmtl_tridiag** out) {
  return guarded([&] {
    need(out, "out");
    SymTridiagonal t{as_vector(diag, n, "diag"), {}};
    if (n > 1) t.offdiag = as_vector(offdiag, n - 1, "offdiag");
    validate(t);
    *out = new rmtl_tridiag{std::move(t)};
  });
}

rmtl_status rmtl_tridiag_from_csv(const char* csv, rmtl_tridiag** out) {
  return guarded([&] {
    need(csv, "csv");
    need(out, "out");
    *out = new rmtl_tridiag{sym_tridiagonal_from_csv(csv)};
  });
}

rmtl_status rmtl_tridiag_sample(const rmtl_sample_params* p, rmtl_tridiag** out) {
  return guarded([&] {
    need(p, "params");
    need(out, "out");
    const std::string model = p->model ? p->model : "beta-hermite";
    RngStream rng(p->seed, 0);
    SymTridiagonal t;
    if (model == "beta-hermite") {
      t = sample_beta_hermite(p->n, p->beta, rng);
    } else if (model == "nested-jacobi") {
      t = sample_nested_jacobi(p->n, p->beta, rng);
    } else if (model == "goe-spiked") {
      require(p->n >= 1, "n must be >= 1");
      t = householder_tridiagonalize(sample_goe(p->n, p->spike, rng));
      const double s = 1.0 / std::sqrt(static_cast<double>(p->n));
      for (double& x : t.diag) x *= s;
      for (double& x : t.offdiag) x *= s;
    } else if (model == "schrodinger") {
      t = sample_schrodinger(p->n, p->sigma, parse_omega(p->omega), rng).t;
    } else {
      fail(ErrorCode::invalid_parameter, "unknown model '" + model + "'");
    }
    *out = new rmtl_tridiag{std::move(t)};
  });
}

size_t rmtl_tridiag_size(const rmtl_tridiag* t) { return t ? t->t.size() : 0; }

rmtl_status rmtl_tridiag_copy(const rmtl_tridiag* t, double* diag, double* offdiag) {
  return guarded([&] {
    need(t, "matrix");
    if (diag) std::copy(t->t.diag.begin(), t->t.diag.end(), diag);
    if (offdiag) std::copy(t->t.offdiag.begin(), t->t.offdiag.end(), offdiag);
  });
}

rmtl_status rmtl_tridiag_eigenvalues(const rmtl_tridiag* t, double tol, double* out) {
  return guarded([&] {
    need(t, "matrix");
    need(out, "out");
    const auto e = eigenvalues(t->t, tol);
    std::copy(e.begin(), e.end(), out);
  });
}

rmtl_status rmtl_tridiag_format(const rmtl_tridiag* t, rmtl_format fmt, rmtl_text** out) {
  return guarded([&] {
    need(t, "matrix");
    check_format(fmt);
    emit(out, fmt == RMTL_CSV ? to_csv(t->t) : to_json(t->t));
  });
}

rmtl_status rmtl_spectrum(const rmtl_tridiag* t, rmtl_format fmt, rmtl_text** out) {
  return guarded([&] {
    need(t, "matrix");
    check_format(fmt);
    const auto m = spectral_measure(t->t, 1e-12);
    if (fmt == RMTL_CSV) {
      emit(out, to_csv(m));
      return;
    }
    std::vector<double> eig;
    for (const auto& a : m.atoms) eig.push_back(a.location);
    const auto d = semicircle_diagnostics(eig);
    json j = json::parse(to_json(m));
    j["semicircle"] = {{"ks_distance", d.ks_distance}, {"moments_1_to_8", d.moments}};
    emit(out, dump(j));
  });
}

void rmtl_tridiag_free(rmtl_tridiag* t) { delete t; }

// ---- Tracy-Widom ----

rmtl_status rmtl_tw_riccati(double beta, double w, const double* grid, size_t n_grid, size_t paths,
                            uint64_t seed, double step, rmtl_cdf** out) {
  return guarded([&] {
    need(out, "out");
    RiccatiOptions opts;
    if (step > 0.0) opts.step = step;
    *out = new rmtl_cdf{riccati_tw_cdf(beta, w, as_vector(grid, n_grid, "grid"), paths, RngStream(seed, 0), opts)};
  });
}

rmtl_status rmtl_tw_painleve(double w, const double* grid, size_t n_grid, rmtl_cdf** out) {
  return guarded([&] {
    need(out, "out");
    CdfTable c;
    c.grid = as_vector(grid, n_grid, "grid");
    for (double t : c.grid) c.values.push_back(deformed_tw(t, w));
    c.meta.beta = 2.0;
    c.meta.w = w;
    c.meta.method = "painleve";
    validate(c);
    *out = new rmtl_cdf{std::move(c)};
  });
}

rmtl_status rmtl_tw_pde(double beta, double w, double t_lo, double t_hi, size_t nt, rmtl_cdf** out) {
  return guarded([&] {
    need(out, "out");
    const auto p = tw_pde_solve(beta, t_lo, t_hi, nt, w, w, 1);
    CdfTable c;
    c.grid = p.t_grid;
    for (const auto& row : p.values) c.values.push_back(row[0]);
    c.meta.beta = beta;
    c.meta.w = w;
    c.meta.method = "pde";
    validate(c);
    *out = new rmtl_cdf{std::move(c)};
  });
}

rmtl_status rmtl_cdf_from_csv(const char* csv, rmtl_cdf** out) {
  return guarded([&] {
    need(csv, "csv");
    need(out, "out");
    *out = new rmtl_cdf{cdf_table_from_csv(csv)};
  });
}

size_t rmtl_cdf_size(const rmtl_cdf* c) { return c ? c->c.grid.size() : 0; }

rmtl_status rmtl_cdf_copy(const rmtl_cdf* c, double* grid, double* values, double* ci) {
  return guarded([&] {
    need(c, "table");
    if (grid) std::copy(c->c.grid.begin(), c->c.grid.end(), grid);
    if (values) std::copy(c->c.values.begin(), c->c.values.end(), values);
    if (ci) {
      for (std::size_t i = 0; i < c->c.grid.size(); ++i)
        ci[i] = c->c.ci_halfwidth.empty() ? 0.0 : c->c.ci_halfwidth[i];
    }
  });
}

rmtl_status rmtl_cdf_format(const rmtl_cdf* c, rmtl_format fmt, rmtl_text** out) {
  return guarded([&] {
    need(c, "table");
    check_format(fmt);
    emit(out, fmt == RMTL_CSV ? to_csv(c->c) : to_json(c->c));
  });
}

void rmtl_cdf_free(rmtl_cdf* c) { delete c; }

rmtl_status rmtl_tw2_cdf(double t, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = tw2_cdf(t);
  });
}

rmtl_status rmtl_deformed_tw(double t, double w, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = deformed_tw(t, w);
  });
}

// ---- carousel ----

rmtl_status rmtl_sine_counts(double beta, const double* lambdas, size_t n_lambda, size_t paths,
                             uint64_t seed, rmtl_format fmt, rmtl_text** out) {
  return guarded([&] {
    check_format(fmt);
    require(paths >= 1, "paths must be >= 1");
    const auto lam = as_vector(lambdas, n_lambda, "lambdas");
    const auto drv = CarouselDriver::sine(beta);
    const RngStream root(seed, 0);
    std::vector<std::vector<long>> counts(paths);
    parallel_for(paths, [&](std::size_t p) {
      RngStream r = root.child(p);
      for (const auto& s : carousel_counts(lam, drv, r)) counts[p].push_back(s.count);
    });
    std::vector<double> m(lam.size()), v(lam.size()), expect(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
      std::vector<double> x(paths);
      for (std::size_t p = 0; p < paths; ++p) x[p] = static_cast<double>(counts[p][i]);
      m[i] = mean(x);
      v[i] = paths > 1 ? variance(x) : 0.0;
      expect[i] = std::abs(lam[i]) / (2.0 * std::numbers::pi);
    }
    if (fmt == RMTL_CSV) {
      emit(out, csv_table({"lambda", "mean_count", "var_count", "expected_mean"}, {lam, m, v, expect}));
      return;
    }
    json rows = json::array();
    for (std::size_t i = 0; i < lam.size(); ++i)
      rows.push_back({{"lambda", lam[i]}, {"mean_count", m[i]}, {"var_count", v[i]}, {"expected_mean", expect[i]}});
    emit(out, dump({{"beta", beta}, {"paths", paths}, {"seed", seed}, {"rows", rows}}));
  });
}

rmtl_status rmtl_gap(double beta, const double* lambdas, size_t n_lambda, long k, size_t paths, uint64_t seed,
                     rmtl_format fmt, rmtl_text** out) {
  return guarded([&] {
    check_format(fmt);
    const auto lam = as_vector(lambdas, n_lambda, "lambdas");
    const RngStream root(seed, 0);
    std::vector<double> p, lo, hi, ratio, expo;
    for (std::size_t i = 0; i < lam.size(); ++i) {
      const auto g = gap_probability(beta, lam[i], k, paths, root.child(i));
      p.push_back(g.mc_estimate);
      lo.push_back(g.ci.lo);
      hi.push_back(g.ci.hi);
      expo.push_back(g.theory.exponent);
      ratio.push_back(g.mc_estimate > 0.0 ? -std::log(g.mc_estimate) / (beta * lam[i] * lam[i] / 64.0) : INFINITY);
    }
    if (fmt == RMTL_CSV) {
      emit(out, csv_table({"lambda", "p_mc", "ci_lo", "ci_hi", "theory_exponent", "neglog_ratio"},
                          {lam, p, lo, hi, expo, ratio}));
      return;
    }
    const auto th = gap_theory(beta, lam[0]);
    json rows = json::array();
    for (std::size_t i = 0; i < lam.size(); ++i)
      rows.push_back({{"lambda", lam[i]}, {"p_mc", p[i]}, {"ci_lo", lo[i]}, {"ci_hi", hi[i]},
                      {"theory_exponent", expo[i]}, {"neglog_ratio", num(ratio[i])}});
    emit(out, dump({{"beta", beta},
                    {"k", k},
                    {"paths", paths},
                    {"seed", seed},
                    {"gamma_beta", th.gamma_beta},
                    {"f_norm_sq_over_8", th.f_norm_sq_over_8},
                    {"beta_over_64", th.beta_over_64},
                    {"rows", rows}}));
  });
}

rmtl_status rmtl_clt(double beta, double lambda, size_t reps, uint64_t seed, rmtl_format fmt, rmtl_text** out) {
  return guarded([&] {
    check_format(fmt);
    require(reps >= 2, "reps must be >= 2");
    const auto z = clt_statistic(beta, lambda, reps, RngStream(seed, 0));
    const double var = variance(z), theory = clt_variance(beta);
    if (fmt == RMTL_CSV) {
      std::vector<double> idx(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) idx[i] = static_cast<double>(i);
      emit(out, csv_table({"replica", "statistic"}, {idx, z}));
      return;
    }
    emit(out, dump({{"beta", beta},
                    {"lambda", lambda},
                    {"reps", reps},
                    {"seed", seed},
                    {"mean", mean(z)},
                    {"variance", var},
                    {"theory_variance", theory},
                    {"ratio", var / theory}}));
  });
}

rmtl_status rmtl_schrodinger(double tau, double lambda, double eps, size_t paths, uint64_t seed, rmtl_format fmt,
                             rmtl_text** out) {
  return guarded([&] {
    check_format(fmt);
    const RngStream root(seed, 0);
    const auto rec = sch_statistics(tau, lambda, eps, paths, root.child(0));
    const double gap = sch_gap_probability(tau, lambda, paths, root.child(1));
    std::vector<double> c(rec.counts.begin(), rec.counts.end());
    const double mc = mean(c);
    if (fmt == RMTL_CSV) {
      emit(out, csv_table({"tau", "lambda", "eps", "paths", "mean_count", "gap_probability", "repulsion_mc",
                           "repulsion_ci_lo", "repulsion_ci_hi", "repulsion_bound"},
                          {{tau}, {lambda}, {eps}, {static_cast<double>(paths)}, {mc}, {gap},
                           {rec.repulsion_mc}, {rec.repulsion_ci.lo}, {rec.repulsion_ci.hi}, {rec.repulsion_bound}}));
      return;
    }
    emit(out, dump({{"tau", tau},
                    {"lambda", lambda},
                    {"eps", eps},
                    {"paths", paths},
                    {"seed", seed},
                    {"mean_count", mc},
                    {"gap_probability", gap},
                    {"repulsion_mc", rec.repulsion_mc},
                    {"repulsion_ci", {rec.repulsion_ci.lo, rec.repulsion_ci.hi}},
                    {"repulsion_bound", rec.repulsion_bound}}));
  });
}

rmtl_status rmtl_eigenvector_profiles(size_t n, double sigma, size_t draws, uint64_t seed, rmtl_format fmt,
                                      rmtl_text** out) {
  return guarded([&] {
    check_format(fmt);
    require(draws >= 1, "draws must be >= 1");
    const RngStream root(seed, 0);
    std::vector<EigenvectorProfile> prof(draws);
    parallel_for(draws, [&](std::size_t d) {
      RngStream r = root.child(d);
      prof[d] = eigenvector_profile(n, sigma, r);
    });
    std::vector<double> e, peak, fit, theory;
    for (const auto& p : prof) {
      e.push_back(p.E_sample);
      peak.push_back(p.peak_position);
      fit.push_back(p.fitted_decay_rate);
      theory.push_back(p.theory_rate);
    }
    if (fmt == RMTL_CSV) {
      emit(out, csv_table({"energy", "peak_position", "fitted_rate", "theory_rate"}, {e, peak, fit, theory}));
      return;
    }
    std::vector<double> ratio;
    for (std::size_t i = 0; i < draws; ++i)
      if (std::isfinite(theory[i])) ratio.push_back(fit[i] / theory[i]);
    emit(out, dump({{"n", n},
                    {"sigma", sigma},
                    {"draws", draws},
                    {"seed", seed},
                    {"median_rate_ratio", ratio.empty() ? json(nullptr) : json(median(ratio))}}));
  });
}

// ---- unit circle ----

rmtl_status rmtl_verblunsky_create(const double* re, const double* im, size_t n, rmtl_verblunsky** out) {
  return guarded([&] {
    need(out, "out");
    const auto r = as_vector(re, n, "re"), i = as_vector(im, n, "im");
    VerblunskyCoeffs v;
    for (std::size_t k = 0; k < n; ++k) v.alpha.emplace_back(r[k], i[k]);
    validate(v);
    *out = new rmtl_verblunsky{std::move(v)};
  });
}

rmtl_status rmtl_verblunsky_sample(size_t n, double beta, uint64_t seed, rmtl_verblunsky** out) {
  return guarded([&] {
    need(out, "out");
    RngStream rng(seed, 0);
    *out = new rmtl_verblunsky{sample_circular_beta(n, beta, rng)};
  });
}

size_t rmtl_verblunsky_size(const rmtl_verblunsky* v) { return v ? v->v.alpha.size() : 0; }

rmtl_status rmtl_verblunsky_copy(const rmtl_verblunsky* v, double* re, double* im) {
  return guarded([&] {
    need(v, "coefficients");
    for (std::size_t k = 0; k < v->v.alpha.size(); ++k) {
      if (re) re[k] = v->v.alpha[k].real();
      if (im) im[k] = v->v.alpha[k].imag();
    }
  });
}

rmtl_status rmtl_eigenangles(const rmtl_verblunsky* v, double* out) {
  return guarded([&] {
    need(v, "coefficients");
    need(out, "out");
    const auto th = eigenangles(v->v);
    std::copy(th.begin(), th.end(), out);
  });
}

rmtl_status rmtl_szego_check(const rmtl_verblunsky* v, double tol, rmtl_format fmt, rmtl_text** out,
                             int* passed) {
  return guarded([&] {
    need(v, "coefficients");
    check_format(fmt);
    const std::size_t n = v->v.alpha.size();
    const auto th = eigenangles(v->v);
    std::vector<double> lam;
    for (double x : th) lam.push_back(static_cast<double>(n) * x);
    const auto path = b_path(v->v);
    const auto rep = dirac_spectrum_check(path, n, lam, tol);
    if (passed) *passed = rep.passed ? 1 : 0;
    if (fmt == RMTL_CSV) {
      emit(out, csv_table({"eigenangle", "lambda", "defect"}, {th, lam, rep.defects}));
      return;
    }
    json j = json::parse(to_json(rep));
    j["eigenangles"] = th;
    j["tolerance"] = tol;
    json b = json::array();
    for (const auto& z : path.b) b.push_back({z.real(), z.imag()});
    j["b_path"] = b;
    j["b_star"] = {path.b_star.real(), path.b_star.imag()};
    emit(out, dump(j));
  });
}

void rmtl_verblunsky_free(rmtl_verblunsky* v) { delete v; }

// ---- acceptance ----

const char* rmtl_criterion_name(int id) {
  if (id < 1 || id > kCriterionCount) return "";
  return criterion_name(id);
}

rmtl_status rmtl_acceptance_run(int id, uint64_t seed, double scale, int* passed, int* errored,
                                double* seconds, rmtl_text** detail, rmtl_text** digest) {
  return guarded([&] {
    need(passed, "passed");
    const auto r = run_criterion(id, AcceptanceConfig{seed, scale});
    *passed = r.passed ? 1 : 0;
    if (errored) *errored = r.errored ? 1 : 0;
    if (seconds) *seconds = r.seconds;
    if (detail) *detail = new rmtl_text{r.detail};
    if (digest) *digest = new rmtl_text{r.digest};
  });
}

}  // extern "C"
