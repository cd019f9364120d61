#pragma once

#include <string>
#include <vector>

#include "fsph/continuation.hpp"
#include "fsph/defining_function.hpp"
#include "fsph/functionals.hpp"

namespace fsph {

// Formats a double with 17 significant digits, enough to round-trip the
// binary value exactly.
std::string format_full(double x);

// A rectangular numeric table with named columns.  All emitters below build
// one of these so CSV and JSON output stay consistent with each other.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Header line plus one line per row, comma separated, every value printed
// with format_full.
std::string to_csv(const CsvTable& table);

// JSON array of objects, one per row, keyed by the column names; key order
// follows the header so output is byte-stable.
std::string to_json_string(const CsvTable& table);

// Spectral multipliers mu_l of the order-2*gamma conformal operator on S^n
// for l = 0..L.  Columns: l, mu_l, multiplicity (dimension of the degree-l
// spherical-harmonic space).
CsvTable spectrum_table(int n, double gamma, int L);

// Radial profile of a solved boundary defining function.  Columns:
// r, F, T, t, rho_star, rho, rho_L, rho_0, J, P_rr, P_tt.
CsvTable defining_table(const DefiningFunctionSolution& sol);

// One row per continuation record.  Columns: gamma, A, B, targetA, targetB,
// gap (= B - A).
CsvTable continuation_table(const std::vector<ContinuationRecord>& records);

// Single-object JSON report for an inequality deficit.
std::string deficit_json(const DeficitReport& report);

// Single-object JSON report of the pointwise bounds of a solved profile.
std::string bound_report_json(const BoundReport& report, int n, double s);

}  // namespace fsph
