// rmtlab command-line front end. Every subcommand goes through the C API.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmtlab/rmtlab.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr const char* kSchema = "rmtlab-output/1";

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(rmtl_status st) {
  switch (st) {
    case RMTL_E_INVALID_PARAMETER:
    case RMTL_E_RANGE:
    case RMTL_E_IO: return kExitConfig;
    default: return kExitNumerical;
  }
}

void check(rmtl_status st) {
  if (st != RMTL_OK)
    throw Failure{exit_code_for(st), std::string(rmtl_status_string(st)) + ": " + rmtl_last_error()};
}

[[noreturn]] void config_error(const std::string& msg) { throw Failure{kExitConfig, msg}; }

// Small RAII wrapper over the C handles.
template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
  T** out() { return &p; }
};
using Text = Handle<rmtl_text, rmtl_text_free>;
using Tridiag = Handle<rmtl_tridiag, rmtl_tridiag_free>;
using Cdf = Handle<rmtl_cdf, rmtl_cdf_free>;
using Verblunsky = Handle<rmtl_verblunsky, rmtl_verblunsky_free>;

std::string str(const Text& t) { return std::string(rmtl_text_data(t.p), rmtl_text_size(t.p)); }

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double parse_number(const std::string& s) {
  if (s == "inf" || s == "+inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  config_error("not a number: '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

// "lo:hi:step" or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const double lo = parse_number(parts[0]), hi = parse_number(parts[1]), step = parse_number(parts[2]);
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
      config_error("grid '" + text + "' needs finite lo <= hi and step > 0");
    const double count = std::floor((hi - lo) / step + 1e-9);
    if (count > 1e6) config_error("grid '" + text + "' has too many points");
    std::vector<double> g;
    for (long i = 0; i <= static_cast<long>(count); ++i) g.push_back(lo + static_cast<double>(i) * step);
    return g;
  }
  if (parts.size() != 1) config_error("grid must be lo:hi:step or a comma list");
  std::vector<double> g;
  for (const auto& p : split(text, ',')) g.push_back(parse_number(p));
  if (g.empty()) config_error("empty grid");
  return g;
}

std::string iso_time(std::chrono::system_clock::time_point tp) {
  const auto secs = std::chrono::time_point_cast<std::chrono::seconds>(tp);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(tp - secs).count();
  const std::time_t t = std::chrono::system_clock::to_time_t(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03lldZ", buf, static_cast<long long>(ms));
  return out;
}

struct Common {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
  std::string format = "csv";
  std::string manifest;
};

// What a subcommand hands back for the output file and the manifest.
struct Result {
  std::string payload;
  json params = json::object();
  std::string headline_name;
  json headline_value;
  std::string status = "ok";
  int exit_code = kExitOk;
};

rmtl_format fmt_of(const Common& c) { return c.format == "json" ? RMTL_JSON : RMTL_CSV; }

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// ---- subcommand bodies ----

struct SampleArgs {
  std::string model = "beta-hermite";
  std::size_t n = 100;
  double beta = 2.0, spike = 0.0, sigma = 1.0;
  std::string omega = "gaussian";
  std::string input;

  void add(CLI::App* sc, bool with_input) {
    sc->add_option("--model", model, "beta-hermite | nested-jacobi | goe-spiked | schrodinger")
        ->check(CLI::IsMember({"beta-hermite", "nested-jacobi", "goe-spiked", "schrodinger"}));
    sc->add_option("--n", n, "matrix size");
    sc->add_option("--beta", beta, "Dyson index");
    sc->add_option("--spike", spike, "rank-one spike strength (goe-spiked)");
    sc->add_option("--sigma", sigma, "disorder strength (schrodinger)");
    sc->add_option("--omega", omega, "noise law (schrodinger)")
        ->check(CLI::IsMember({"gaussian", "rademacher", "uniform"}));
    if (with_input) sc->add_option("--input", input, "matrix CSV (index,diag,offdiag) instead of sampling");
  }
  json params() const {
    return {{"model", model}, {"n", n}, {"beta", beta}, {"spike", spike}, {"sigma", sigma}, {"omega", omega}};
  }
  void make(const Common& c, Tridiag& t) const {
    if (!input.empty()) {
      check(rmtl_tridiag_from_csv(read_all(input).c_str(), t.out()));
      return;
    }
    rmtl_sample_params p{model.c_str(), n, beta, spike, sigma, omega.c_str(), c.seed};
    check(rmtl_tridiag_sample(&p, t.out()));
  }
};

Result run_sample(const Common& c, const SampleArgs& a) {
  Tridiag t;
  a.make(c, t);
  Text txt;
  check(rmtl_tridiag_format(t.p, fmt_of(c), txt.out()));
  Result r;
  r.payload = str(txt);
  r.params = a.params();
  r.headline_name = "n";
  r.headline_value = rmtl_tridiag_size(t.p);
  return r;
}

Result run_spectrum(const Common& c, const SampleArgs& a) {
  Tridiag t;
  a.make(c, t);
  Text txt;
  check(rmtl_spectrum(t.p, fmt_of(c), txt.out()));
  const std::size_t n = rmtl_tridiag_size(t.p);
  std::vector<double> e(n);
  check(rmtl_tridiag_eigenvalues(t.p, 1e-12, e.data()));
  Result r;
  r.payload = str(txt);
  r.params = a.params();
  if (!a.input.empty()) r.params = {{"input", a.input}};
  r.headline_name = "largest_eigenvalue";
  r.headline_value = e.back();
  return r;
}

struct TwArgs {
  double beta = 2.0;
  std::string method = "riccati";
  std::size_t paths = 100000;
  std::string grid = "-5:2:0.25";
  double step = 0.0;
  double w = INFINITY;
  std::string w_text;

  void add(CLI::App* sc, bool spiked) {
    sc->add_option("--beta", beta, "Dyson index");
    sc->add_option("--method", method, "riccati | painleve | pde")
        ->check(CLI::IsMember({"riccati", "painleve", "pde"}));
    sc->add_option("--paths", paths, "Monte Carlo paths (riccati)");
    sc->add_option("--grid", grid, "evaluation grid lo:hi:step or a comma list");
    sc->add_option("--step", step, "Riccati grid step (default 2e-3)");
    if (spiked) sc->add_option("--w", w_text, "boundary parameter w (inf for Dirichlet)")->required();
  }
};

Result run_tw(const Common& c, TwArgs a) {
  if (!a.w_text.empty()) a.w = parse_number(a.w_text);
  const auto g = parse_grid(a.grid);
  Cdf table;
  if (a.method == "riccati") {
    check(rmtl_tw_riccati(a.beta, a.w, g.data(), g.size(), a.paths, c.seed, a.step, table.out()));
  } else if (a.method == "painleve") {
    if (a.beta != 2.0) config_error("the painleve method is available for beta = 2 only");
    check(rmtl_tw_painleve(a.w, g.data(), g.size(), table.out()));
  } else {
    for (std::size_t i = 1; i < g.size(); ++i)
      if (std::abs((g[i] - g[i - 1]) - (g[1] - g[0])) > 1e-9)
        config_error("the pde method needs a uniform grid");
    check(rmtl_tw_pde(a.beta, a.w, g.front(), g.back(), g.size(), table.out()));
  }
  Text txt;
  check(rmtl_cdf_format(table.p, fmt_of(c), txt.out()));
  Result r;
  r.payload = str(txt);
  r.params = {{"beta", a.beta}, {"method", a.method}, {"grid", a.grid}, {"w", finite_or_null(a.w)}};
  if (a.method == "riccati") r.params["paths"] = a.paths;
  if (a.step > 0.0) r.params["step"] = a.step;

  // Against the Painleve evaluation when it exists (beta = 2).
  if (a.beta == 2.0 && a.method != "painleve") {
    std::vector<double> v(g.size());
    check(rmtl_cdf_copy(table.p, nullptr, v.data(), nullptr));
    double dev = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      double ref = 0.0;
      if (rmtl_deformed_tw(g[i], a.w, &ref) != RMTL_OK) continue;
      dev = std::max(dev, std::abs(v[i] - ref));
    }
    r.headline_name = "sup_deviation_vs_painleve";
    r.headline_value = dev;
  }
  return r;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  for (const auto& p : split(s, ',')) v.push_back(parse_number(p));
  if (v.empty()) config_error("empty list");
  return v;
}

json json_field(const std::string& payload, const char* key) {
  return json::parse(payload).at(key);
}

// -log(p_mc) / (beta lambda^2 / 64) on the row with the largest lambda.
json gap_headline(const std::string& payload, bool is_json) {
  double best_lambda = -INFINITY;
  json value;
  if (is_json) {
    const json doc = json::parse(payload);
    for (const auto& row : doc.at("rows"))
      if (row.at("lambda").get<double>() > best_lambda) {
        best_lambda = row.at("lambda").get<double>();
        value = row.at("neglog_ratio");
      }
    return value;
  }
  std::istringstream in(payload);
  std::string line;
  std::getline(in, line);  // header: lambda,...,neglog_ratio
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    const double lam = parse_number(cells.front());
    if (lam > best_lambda) {
      best_lambda = lam;
      value = parse_number(cells.back());
    }
  }
  return value;
}

// ---- manifest / report ----

json make_manifest(const std::string& command, const Common& c, const Result& r, double wall,
                   std::chrono::system_clock::time_point started) {
  return {{"command", command},
          {"parameters", r.params},
          {"seed", c.seed},
          {"threads", c.threads},
          {"format", c.format},
          {"output", c.out.empty() ? json(nullptr) : json(c.out)},
          {"schema", kSchema},
          {"version", rmtl_version()},
          {"timestamp", iso_time(started)},
          {"wall_time_s", wall},
          {"headline", {{"name", r.headline_name}, {"value", r.headline_value}}},
          {"status", r.status}};
}

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
    return buf;
  }
  return v.dump();
}

Result run_report(const Common& c, const std::vector<std::string>& files) {
  std::vector<json> rows;
  for (const auto& f : files) {
    json m;
    try {
      m = json::parse(read_all(f));
    } catch (const json::exception& e) {
      config_error("manifest '" + f + "' is not valid JSON: " + e.what());
    }
    if (!m.contains("command") || !m.contains("timestamp")) config_error("manifest '" + f + "' lacks command/timestamp");
    rows.push_back(m);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const json& a, const json& b) {
    return a.at("timestamp").get<std::string>() < b.at("timestamp").get<std::string>();
  });
  Result r;
  if (c.format == "json") {
    json arr = json::array();
    for (const auto& m : rows)
      arr.push_back({{"timestamp", m["timestamp"]},
                     {"command", m["command"]},
                     {"seed", m.value("seed", json(nullptr))},
                     {"headline", m.value("headline", json(nullptr))},
                     {"status", m.value("status", "")}});
    r.payload = arr.dump(1) + "\n";
  } else {
    std::string out = "timestamp,command,seed,headline,value,status\n";
    for (const auto& m : rows) {
      const json h = m.value("headline", json::object());
      out += cell(m["timestamp"]) + "," + cell(m["command"]) + "," + cell(m.value("seed", json(nullptr))) + "," +
             cell(h.value("name", json(nullptr))) + "," + cell(h.value("value", json(nullptr))) + "," +
             cell(m.value("status", json(nullptr))) + "\n";
    }
    r.payload = out;
  }
  r.headline_name = "runs";
  r.headline_value = rows.size();
  r.params = {{"manifests", files}};
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rmtlab: random matrix and random operator laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(rmtl_version()));

  Common common;
  app.add_option("--seed", common.seed, "64-bit random seed");
  app.add_option("--threads", common.threads, "worker threads (speed only, never results)");
  app.add_option("--out", common.out, "output file (default: stdout)");
  app.add_option("--format", common.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--manifest", common.manifest, "manifest path (default: <out>.manifest.json)");

  SampleArgs sample_args, spectrum_args;
  auto* sample = app.add_subcommand("sample", "sample a tridiagonal matrix model");
  sample_args.add(sample, false);
  auto* spectrum = app.add_subcommand("spectrum", "spectral measure of a sampled or given matrix");
  spectrum_args.add(spectrum, true);

  TwArgs tw_args, spiked_args;
  auto* tw = app.add_subcommand("tw", "Tracy-Widom distribution table");
  tw_args.add(tw, false);
  auto* spiked = app.add_subcommand("spiked-tw", "spiked (boundary w) Tracy-Widom table");
  spiked_args.add(spiked, true);

  double sine_beta = 2.0;
  std::string sine_lambdas = "10,50,100";
  std::size_t sine_paths = 2000;
  auto* sine = app.add_subcommand("sine", "Sine_beta counting statistics via the Brownian carousel");
  sine->add_option("--beta", sine_beta, "Dyson index");
  sine->add_option("--lambda", sine_lambdas, "comma list of interval lengths");
  sine->add_option("--paths", sine_paths, "Monte Carlo paths");

  double gap_beta = 2.0;
  std::string gap_lambdas = "8,12";
  long gap_k = 0;
  std::size_t gap_paths = 100000;
  auto* gap = app.add_subcommand("gap", "Sine_beta gap probabilities");
  gap->add_option("--beta", gap_beta, "Dyson index");
  gap->add_option("--lambda", gap_lambdas, "comma list of interval lengths");
  gap->add_option("--k", gap_k, "at most k points");
  gap->add_option("--paths", gap_paths, "Monte Carlo paths");

  double clt_beta = 2.0, clt_lambda = 1e4;
  std::size_t clt_reps = 2000;
  auto* clt = app.add_subcommand("clt", "counting-function CLT for Sine_beta");
  clt->add_option("--beta", clt_beta, "Dyson index");
  clt->add_option("--lambda", clt_lambda, "interval length");
  clt->add_option("--reps", clt_reps, "replicas");

  std::string sch_mode = "counts";
  double sch_tau = 1.0, sch_lambda = 6.0, sch_eps = 0.1, sch_sigma = 1.0;
  std::size_t sch_paths = 100000, sch_n = 4000, sch_draws = 200;
  auto* sch = app.add_subcommand("schrodinger", "Sch_tau counting and random Schrodinger eigenvectors");
  sch->add_option("--mode", sch_mode, "counts | eigenvector")->check(CLI::IsMember({"counts", "eigenvector"}));
  sch->add_option("--tau", sch_tau, "Sch_tau parameter (counts)");
  sch->add_option("--lambda", sch_lambda, "interval length (counts)");
  sch->add_option("--eps", sch_eps, "repulsion window (counts)");
  sch->add_option("--paths", sch_paths, "Monte Carlo paths (counts)");
  sch->add_option("--n", sch_n, "matrix size (eigenvector)");
  sch->add_option("--sigma", sch_sigma, "disorder strength (eigenvector)");
  sch->add_option("--draws", sch_draws, "matrices sampled (eigenvector)");

  std::size_t sz_n = 6;
  double sz_beta = 2.0, sz_tol = 1e-6;
  std::string sz_input;
  auto* szego = app.add_subcommand("szego-check", "finite-n Dirac operator check on the unit circle");
  szego->add_option("--n", sz_n, "number of Verblunsky coefficients");
  szego->add_option("--beta", sz_beta, "circular ensemble index");
  szego->add_option("--tol", sz_tol, "defect tolerance");
  szego->add_option("--input", sz_input, "CSV of Verblunsky coefficients (k,re,im) instead of sampling");

  std::string suite = "acceptance", criteria;
  double scale = 1.0;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--suite", suite, "suite name")->check(CLI::IsMember({"acceptance"}));
  verify->add_option("--criteria", criteria, "comma list of criterion ids (default: all)");
  verify->add_option("--scale", scale, "Monte Carlo size factor in (0, 1]");

  std::vector<std::string> manifests;
  auto* report = app.add_subcommand("report", "summarize run manifests");
  report->add_option("manifests", manifests, "manifest files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  rmtl_set_threads(common.threads);
  const auto started = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  CLI::App* used = app.get_subcommands().front();
  Result res;
  try {
    if (used == sample) {
      res = run_sample(common, sample_args);
    } else if (used == spectrum) {
      res = run_spectrum(common, spectrum_args);
    } else if (used == tw) {
      res = run_tw(common, tw_args);
    } else if (used == spiked) {
      res = run_tw(common, spiked_args);
    } else if (used == sine) {
      const auto lam = parse_list(sine_lambdas);
      Text txt;
      check(rmtl_sine_counts(sine_beta, lam.data(), lam.size(), sine_paths, common.seed, fmt_of(common), txt.out()));
      res.payload = str(txt);
      res.params = {{"beta", sine_beta}, {"lambda", lam}, {"paths", sine_paths}};
      res.headline_name = "lambda_max";
      res.headline_value = *std::max_element(lam.begin(), lam.end());
    } else if (used == gap) {
      const auto lam = parse_list(gap_lambdas);
      Text txt;
      check(rmtl_gap(gap_beta, lam.data(), lam.size(), gap_k, gap_paths, common.seed, fmt_of(common), txt.out()));
      res.payload = str(txt);
      res.params = {{"beta", gap_beta}, {"lambda", lam}, {"k", gap_k}, {"paths", gap_paths}};
      res.headline_name = "neglog_ratio_at_lambda_max";
      res.headline_value = gap_headline(res.payload, common.format == "json");
    } else if (used == clt) {
      Text txt;
      check(rmtl_clt(clt_beta, clt_lambda, clt_reps, common.seed, fmt_of(common), txt.out()));
      res.payload = str(txt);
      res.params = {{"beta", clt_beta}, {"lambda", clt_lambda}, {"reps", clt_reps}};
      if (common.format == "json") {
        res.headline_name = "variance_ratio";
        res.headline_value = json_field(res.payload, "ratio");
      }
    } else if (used == sch) {
      Text txt;
      if (sch_mode == "counts") {
        check(rmtl_schrodinger(sch_tau, sch_lambda, sch_eps, sch_paths, common.seed, fmt_of(common), txt.out()));
        res.params = {{"mode", sch_mode}, {"tau", sch_tau}, {"lambda", sch_lambda}, {"eps", sch_eps},
                      {"paths", sch_paths}};
        if (common.format == "json") {
          res.headline_name = "repulsion_mc";
          res.headline_value = json_field(str(txt), "repulsion_mc");
        }
      } else {
        check(rmtl_eigenvector_profiles(sch_n, sch_sigma, sch_draws, common.seed, fmt_of(common), txt.out()));
        res.params = {{"mode", sch_mode}, {"n", sch_n}, {"sigma", sch_sigma}, {"draws", sch_draws}};
        if (common.format == "json") {
          res.headline_name = "median_rate_ratio";
          res.headline_value = json_field(str(txt), "median_rate_ratio");
        }
      }
      res.payload = str(txt);
    } else if (used == szego) {
      Verblunsky v;
      if (!sz_input.empty()) {
        std::vector<double> re, im;
        std::istringstream in(read_all(sz_input));
        std::string line;
        bool header = true;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          if (header) {
            header = false;
            continue;
          }
          const auto cells = split(line, ',');
          if (cells.size() < 3) config_error("coefficient CSV rows need k,re,im");
          re.push_back(parse_number(cells[1]));
          im.push_back(parse_number(cells[2]));
        }
        check(rmtl_verblunsky_create(re.data(), im.data(), re.size(), v.out()));
        res.params = {{"input", sz_input}, {"tol", sz_tol}};
      } else {
        check(rmtl_verblunsky_sample(sz_n, sz_beta, common.seed, v.out()));
        res.params = {{"n", sz_n}, {"beta", sz_beta}, {"tol", sz_tol}};
      }
      Text txt;
      int passed = 0;
      check(rmtl_szego_check(v.p, sz_tol, fmt_of(common), txt.out(), &passed));
      res.payload = str(txt);
      res.headline_name = "all_defects_within_tol";
      res.headline_value = passed != 0;
      res.status = passed ? "pass" : "fail";
      if (!passed) res.exit_code = kExitCheckFailed;
    } else if (used == verify) {
      std::vector<int> ids;
      if (criteria.empty()) {
        for (int i = 1; i <= RMTL_CRITERION_COUNT; ++i) ids.push_back(i);
      } else {
        for (const auto& p : split(criteria, ',')) {
          const double x = parse_number(p);
          if (x != std::floor(x) || x < 1 || x > RMTL_CRITERION_COUNT) config_error("bad criterion id '" + p + "'");
          ids.push_back(static_cast<int>(x));
        }
      }
      if (!(scale > 0.0 && scale <= 1.0)) config_error("--scale must be in (0, 1]");
      int n_pass = 0;
      json rows = json::array();
      std::string csv = "id,name,passed,seconds,detail\n";
      for (int id : ids) {
        int passed = 0;
        double secs = 0.0;
        Text detail;
        check(rmtl_acceptance_run(id, common.seed, scale, &passed, nullptr, &secs, detail.out(), nullptr));
        n_pass += passed;
        const std::string d = str(detail);
        std::printf("[%s] %2d %-34s %7.1fs  %s\n", passed ? "PASS" : "FAIL", id, rmtl_criterion_name(id), secs,
                    d.c_str());
        std::fflush(stdout);
        rows.push_back({{"id", id}, {"name", rmtl_criterion_name(id)}, {"passed", passed != 0}, {"detail", d}});
        csv += std::to_string(id) + "," + rmtl_criterion_name(id) + "," + (passed ? "1" : "0") + "," +
               std::to_string(secs) + ",\"" + d + "\"\n";
      }
      std::printf("%d/%zu criteria passed\n", n_pass, ids.size());
      res.payload = common.format == "json" ? rows.dump(1) + "\n" : csv;
      res.params = {{"suite", suite}, {"criteria", ids}, {"scale", scale}};
      res.headline_name = "criteria_passed";
      res.headline_value = std::to_string(n_pass) + "/" + std::to_string(ids.size());
      res.status = n_pass == static_cast<int>(ids.size()) ? "pass" : "fail";
      if (res.status == "fail") res.exit_code = kExitCheckFailed;
      if (common.out.empty()) res.payload.clear();  // the summary already went to stdout
    } else if (used == report) {
      res = run_report(common, manifests);
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "rmtlab %s: %s\n", used->get_name().c_str(), f.message.c_str());
    return f.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rmtlab %s: %s\n", used->get_name().c_str(), e.what());
    return kExitNumerical;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (common.out.empty()) {
    std::fwrite(res.payload.data(), 1, res.payload.size(), stdout);
  } else {
    std::ofstream f(common.out, std::ios::binary);
    f << res.payload;
    if (!f) {
      std::fprintf(stderr, "rmtlab: cannot write '%s'\n", common.out.c_str());
      return kExitConfig;
    }
  }
  std::string mpath = common.manifest;
  if (mpath.empty() && !common.out.empty() && used != report) mpath = common.out + ".manifest.json";
  if (!mpath.empty()) {
    std::ofstream f(mpath, std::ios::binary);
    f << make_manifest(used->get_name(), common, res, wall, started).dump(1) << "\n";
    if (!f) {
      std::fprintf(stderr, "rmtlab: cannot write manifest '%s'\n", mpath.c_str());
      return kExitConfig;
    }
  }
  return res.exit_code;
}
