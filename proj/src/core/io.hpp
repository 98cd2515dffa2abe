#pragma once

#include <string>
#include <vector>

#include "core/statkit.hpp"
#include "core/szego.hpp"
#include "core/tridiag.hpp"

namespace rmtlab {

/// Shortest text that reads back to the same double ("inf", "-inf", "nan" for non-finite).
std::string format_double(double x);
double parse_double(const std::string& s);

/// Column-major numeric table with a header row.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns);

// index,diag,offdiag (offdiag empty on the last row)
std::string to_csv(const SymTridiagonal& t);
std::string to_json(const SymTridiagonal& t);
SymTridiagonal sym_tridiagonal_from_csv(const std::string& text);

// location,weight
std::string to_csv(const WeightedPointMeasure& m);
std::string to_json(const WeightedPointMeasure& m);

// a,cdf,ci_halfwidth
std::string to_csv(const CdfTable& t);
std::string to_json(const CdfTable& t);
CdfTable cdf_table_from_csv(const std::string& text);

// k,re,im with a final row "star"
std::string to_csv(const BPath& p);
std::string to_json(const DiracReport& r);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace rmtlab
