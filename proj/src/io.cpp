#include "fsph/io.hpp"

#include <cstdio>
#include <stdexcept>

#include "fsph/operators.hpp"
#include "json.hpp"

namespace fsph {

std::string format_full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j) out += ',';
    out += table.header[j];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      throw std::invalid_argument("to_csv: row width does not match header");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_full(row[j]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json_string(const CsvTable& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      throw std::invalid_argument("to_json_string: row width does not match header");
    }
    nlohmann::ordered_json obj;
    for (std::size_t j = 0; j < row.size(); ++j) {
      obj[table.header[j]] = row[j];
    }
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

CsvTable spectrum_table(int n, double gamma, int L) {
  if (L < 0) throw std::invalid_argument("spectrum_table: L must be nonnegative");
  CsvTable table;
  table.header = {"l", "mu_l", "multiplicity"};
  table.rows.reserve(static_cast<std::size_t>(L) + 1);
  for (int l = 0; l <= L; ++l) {
    // dim of degree-l spherical harmonics on S^n: (2l+n-1) (l+n-2)! / (l! (n-1)!)
    double mult = static_cast<double>(2 * l + n - 1) / (n - 1);
    for (int k = 1; k <= n - 2; ++k) {
      mult *= static_cast<double>(l + k) / k;
    }
    table.rows.push_back({static_cast<double>(l), multiplier_p2gamma(n, gamma, l), mult});
  }
  return table;
}

CsvTable defining_table(const DefiningFunctionSolution& sol) {
  if (sol.T.size() != sol.r.size() || sol.J.size() != sol.r.size()) {
    throw std::invalid_argument("defining_table: solution must be reconstructed");
  }
  CsvTable table;
  table.header = {"r",     "F",   "T", "t",    "rho_star", "rho",
                  "rho_L", "rho_0", "J", "P_rr", "P_tt"};
  table.rows.reserve(static_cast<std::size_t>(sol.r.size()));
  for (Eigen::Index i = 0; i < sol.r.size(); ++i) {
    const ClosedFormDefiners d = closed_form_definers(sol.r[i]);
    table.rows.push_back({sol.r[i], sol.F[i], sol.T[i], sol.t[i], sol.rho_star[i],
                          d.rho, d.rho_L, d.rho_0, sol.J[i], sol.P_rr[i],
                          sol.P_tt[i]});
  }
  return table;
}

CsvTable continuation_table(const std::vector<ContinuationRecord>& records) {
  CsvTable table;
  table.header = {"gamma", "A", "B", "targetA", "targetB", "gap"};
  table.rows.reserve(records.size());
  for (const auto& rec : records) {
    table.rows.push_back({rec.gamma, rec.A, rec.B, rec.targetA, rec.targetB, rec.gap()});
  }
  return table;
}

std::string deficit_json(const DeficitReport& report) {
  nlohmann::ordered_json obj;
  obj["name"] = report.name;
  obj["n"] = report.n;
  obj["gamma"] = report.gamma;
  obj["input"] = report.input;
  obj["lhs"] = report.lhs;
  obj["rhs"] = report.rhs;
  obj["deficit"] = report.deficit;
  return obj.dump(2) + "\n";
}

std::string bound_report_json(const BoundReport& report, int n, double s) {
  nlohmann::ordered_json obj;
  obj["n"] = n;
  obj["s"] = s;
  obj["gamma"] = s - 0.5 * n;
  obj["terminal_F_deviation"] = report.terminal_F_deviation;
  obj["monotone_violation"] = report.monotone_violation;
  obj["unit_interval"] = {{"applicable", report.unit_interval_applicable},
                          {"margin", report.unit_interval_margin}};
  obj["sandwich"] = {{"applicable", report.sandwich_applicable},
                     {"margin", report.sandwich_margin}};
  obj["ratio_bound"] = {{"applicable", report.ratio_bound_applicable},
                        {"C", report.ratio_bound_C}};
  obj["ratio_limit"] = {{"applicable", report.ratio_limit_applicable},
                        {"C", report.ratio_limit_C}};
  obj["terminal_slope"] = {{"applicable", report.terminal_slope_applicable},
                           {"C", report.terminal_slope_C}};
  obj["all_pass"] = report.all_pass;
  return obj.dump(2) + "\n";
}

}  // namespace fsph
