#include "battctrl/csv.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "battctrl/error.h"

namespace battctrl {

std::string FormatDouble(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string ToCsvString(const CsvTable& table) {
  std::string out;
  auto append_row = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      out += fields[i];
    }
    out += '\n';
  };
  append_row(table.header);
  for (const auto& row : table.rows) append_row(row);
  return out;
}

CsvTable ParseCsv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != table.header.size()) {
        throw Error(ErrorCode::kParseError,
                    "CSV row " + std::to_string(table.rows.size() + 1) + " has " +
                        std::to_string(fields.size()) + " fields, header has " +
                        std::to_string(table.header.size()));
      }
      table.rows.push_back(std::move(fields));
    }
  }
  if (first) throw Error(ErrorCode::kParseError, "CSV text has no header");
  return table;
}

void WriteCsv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << ToCsvString(table);
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

CsvTable ReadCsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseCsv(buffer.str());
}

CsvTable ProfileTable(const std::vector<ConditionProfile>& profiles) {
  CsvTable table{{"cell_id", "soc", "kappa", "log10_kappa"}, {}};
  for (const auto& p : profiles) {
    for (std::size_t k = 0; k < p.soc_grid.size(); ++k) {
      table.rows.push_back({p.cell_id, FormatDouble(p.soc_grid[k]),
                            FormatDouble(p.kappa[k]),
                            FormatDouble(std::log10(p.kappa[k]))});
    }
  }
  return table;
}

CsvTable BatchStatisticsTable(const std::vector<BatchStatistics>& stats) {
  CsvTable table{{"batch_id", "soc", "mean_log10_kappa", "std_log10_kappa"}, {}};
  for (const auto& s : stats) {
    for (std::size_t k = 0; k < s.soc_grid.size(); ++k) {
      table.rows.push_back({s.batch_id, FormatDouble(s.soc_grid[k]),
                            FormatDouble(s.mean_log10_kappa[k]),
                            FormatDouble(s.std_log10_kappa[k])});
    }
  }
  return table;
}

CsvTable BatchLogOfMeanTable(const std::vector<BatchStatistics>& stats) {
  CsvTable table{{"batch_id", "soc", "log10_mean_kappa"}, {}};
  for (const auto& s : stats) {
    for (std::size_t k = 0; k < s.soc_grid.size(); ++k) {
      table.rows.push_back({s.batch_id, FormatDouble(s.soc_grid[k]),
                            FormatDouble(s.log10_mean_kappa[k])});
    }
  }
  return table;
}

CsvTable SensitivityTable(const std::vector<SensitivityRecord>& records) {
  CsvTable table{{"cell_id", "target", "soc", "s_theta"}, {}};
  for (const auto& r : records) {
    for (std::size_t k = 0; k < r.soc_grid.size(); ++k) {
      table.rows.push_back({r.cell_id, r.target.Label(), FormatDouble(r.soc_grid[k]),
                            FormatDouble(r.s_theta[k])});
    }
  }
  return table;
}

CsvTable TrajectoryTable(const std::vector<SimResult>& results) {
  CsvTable table{{"cell_id", "t_s", "current_a", "soc", "v_v"}, {}};
  for (const auto& r : results) {
    for (const auto& s : r.trajectory) {
      table.rows.push_back({r.cell_id, FormatDouble(s.t), FormatDouble(s.current),
                            FormatDouble(s.soc), FormatDouble(s.v)});
    }
  }
  return table;
}

CsvTable SimSummaryTable(const std::vector<SimResult>& results) {
  CsvTable table{{"cell_id", "t_cv_start_s", "t_complete_s", "terminated_by"}, {}};
  auto optional_time = [](double t) { return t < 0.0 ? std::string() : FormatDouble(t); };
  for (const auto& r : results) {
    table.rows.push_back({r.cell_id, optional_time(r.t_cv_start),
                          optional_time(r.t_complete),
                          std::string(TerminationName(r.terminated_by))});
  }
  return table;
}

CsvTable DesignTable(const std::vector<PackDesign>& designs) {
  CsvTable table{{"design_id", "q1_avg_ah", "q2_avg_ah", "min_q_avg_ah", "kappa1_avg",
                  "kappa2_avg", "max_kappa_avg"},
                 {}};
  for (const auto& d : designs) {
    table.rows.push_back({std::to_string(d.design_id), FormatDouble(d.q1_avg_ah),
                          FormatDouble(d.q2_avg_ah), FormatDouble(d.min_q_avg_ah),
                          FormatDouble(d.kappa1_avg), FormatDouble(d.kappa2_avg),
                          FormatDouble(d.max_kappa_avg)});
  }
  return table;
}

CsvTable ScatterTable(const std::vector<ScatterRow>& rows) {
  CsvTable table{{"design_id", "max_kappa_avg", "min_q_avg_ah", "best_capacity_flag",
                  "best_kappa_flag"},
                 {}};
  for (const auto& r : rows) {
    table.rows.push_back({std::to_string(r.design_id), FormatDouble(r.max_kappa_avg),
                          FormatDouble(r.min_q_avg_ah), r.best_capacity ? "1" : "0",
                          r.best_kappa ? "1" : "0"});
  }
  return table;
}

CsvTable AgingFactorTable(const SecondLifePopulation& population) {
  CsvTable table{{"cell_index", "cell_id", "q_factor", "tau_factor"}, {}};
  for (const auto& a : population.aged) {
    table.rows.push_back({std::to_string(a.index), population.cells[a.index].cell_id,
                          FormatDouble(a.q_factor), FormatDouble(a.tau_factor)});
  }
  return table;
}

}  // namespace battctrl
