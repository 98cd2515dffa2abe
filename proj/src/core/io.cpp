#include "core/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/error.hpp"

namespace rmtlab {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text, std::size_t min_cols) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (header) {
      header = false;
      continue;
    }
    auto cells = split(line, ',');
    if (cells.size() < min_cols)
      fail(ErrorCode::io_error, "csv: expected " + std::to_string(min_cols) + " columns in row '" + line + "'");
    rows.push_back(std::move(cells));
  }
  return rows;
}

json finite_or_string(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "inf" || s == "+inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  double x = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  if (first < last && *first == '+') ++first;
  auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc() || res.ptr != last)
    fail(ErrorCode::io_error, "cannot parse number '" + s + "'");
  return x;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
  require(header.size() == columns.size(), "csv_table: header and column counts differ");
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) out += (c ? "," : "") + header[c];
  out += '\n';
  const std::size_t rows = columns.empty() ? 0 : columns[0].size();
  for (const auto& col : columns) require(col.size() == rows, "csv_table: ragged columns");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + format_double(columns[c][r]);
    out += '\n';
  }
  return out;
}

std::string to_csv(const SymTridiagonal& t) {
  std::string out = "index,diag,offdiag\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += std::to_string(i) + "," + format_double(t.diag[i]) + ",";
    if (i < t.offdiag.size()) out += format_double(t.offdiag[i]);
    out += '\n';
  }
  return out;
}

std::string to_json(const SymTridiagonal& t) {
  json j;
  j["n"] = t.size();
  j["diag"] = t.diag;
  j["offdiag"] = t.offdiag;
  return j.dump(1) + "\n";
}

SymTridiagonal sym_tridiagonal_from_csv(const std::string& text) {
  const auto rows = csv_rows(text, 2);
  SymTridiagonal t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (parse_double(rows[i][0]) != static_cast<double>(i))
      fail(ErrorCode::io_error, "matrix csv: rows must be indexed 0, 1, 2, ...");
    t.diag.push_back(parse_double(rows[i][1]));
    if (i + 1 < rows.size()) {
      if (rows[i].size() < 3 || rows[i][2].empty())
        fail(ErrorCode::io_error, "matrix csv: missing off-diagonal in row " + std::to_string(i));
      t.offdiag.push_back(parse_double(rows[i][2]));
    }
  }
  if (t.diag.empty()) fail(ErrorCode::io_error, "matrix csv: no rows");
  validate(t);
  return t;
}

std::string to_csv(const WeightedPointMeasure& m) {
  std::vector<double> loc, w;
  for (const auto& a : m.atoms) {
    loc.push_back(a.location);
    w.push_back(a.weight);
  }
  return csv_table({"location", "weight"}, {loc, w});
}

std::string to_json(const WeightedPointMeasure& m) {
  json atoms = json::array();
  for (const auto& a : m.atoms) atoms.push_back({{"location", a.location}, {"weight", a.weight}});
  return json{{"atoms", atoms}}.dump(1) + "\n";
}

std::string to_csv(const CdfTable& t) {
  std::vector<double> ci = t.ci_halfwidth;
  if (ci.empty()) ci.assign(t.grid.size(), 0.0);
  return csv_table({"a", "cdf", "ci_halfwidth"}, {t.grid, t.values, ci});
}

std::string to_json(const CdfTable& t) {
  json j;
  j["grid"] = t.grid;
  j["cdf"] = t.values;
  j["ci_halfwidth"] = t.ci_halfwidth;
  j["meta"] = {{"beta", finite_or_string(t.meta.beta)},
               {"w", finite_or_string(t.meta.w)},
               {"method", t.meta.method},
               {"paths", t.meta.paths},
               {"seed", t.meta.seed},
               {"stream_id", t.meta.stream_id},
               {"step", t.meta.step}};
  return j.dump(1) + "\n";
}

CdfTable cdf_table_from_csv(const std::string& text) {
  CdfTable t;
  for (const auto& r : csv_rows(text, 2)) {
    t.grid.push_back(parse_double(r[0]));
    t.values.push_back(parse_double(r[1]));
    if (r.size() >= 3 && !r[2].empty()) t.ci_halfwidth.push_back(parse_double(r[2]));
  }
  if (!t.ci_halfwidth.empty() && t.ci_halfwidth.size() != t.grid.size()) t.ci_halfwidth.clear();
  validate(t);
  return t;
}

std::string to_csv(const BPath& p) {
  std::string out = "k,re,im\n";
  for (std::size_t k = 0; k < p.b.size(); ++k)
    out += std::to_string(k) + "," + format_double(p.b[k].real()) + "," + format_double(p.b[k].imag()) + "\n";
  out += "star," + format_double(p.b_star.real()) + "," + format_double(p.b_star.imag()) + "\n";
  return out;
}

std::string to_json(const DiracReport& r) {
  json j;
  j["defects"] = r.defects;
  j["grid_identity_error"] = r.grid_identity_error;
  j["worst_index"] = r.worst_index;
  j["worst_defect"] = r.worst_defect;
  j["passed"] = r.passed;
  return j.dump(1) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(ErrorCode::io_error, "write to '" + path + "' failed");
}

}  // namespace rmtlab
