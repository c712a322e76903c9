#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "battctrl/cccv.h"
#include "battctrl/lie_ctrb.h"
#include "battctrl/pack_design.h"
#include "battctrl/sens_aging.h"

namespace battctrl {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const CsvTable&) const = default;
};

/// 17 significant digits, so that parsing the text recovers the exact double.
std::string FormatDouble(double value);

std::string ToCsvString(const CsvTable& table);
/// Plain comma-separated fields, no quoting (none of the emitted fields need
/// it). Throws kParseError on ragged rows.
CsvTable ParseCsv(const std::string& text);

void WriteCsv(const std::filesystem::path& path, const CsvTable& table);
CsvTable ReadCsv(const std::filesystem::path& path);

// cell_id,soc,kappa,log10_kappa
CsvTable ProfileTable(const std::vector<ConditionProfile>& profiles);
// batch_id,soc,mean_log10_kappa,std_log10_kappa
CsvTable BatchStatisticsTable(const std::vector<BatchStatistics>& stats);
// batch_id,soc,log10_mean_kappa
CsvTable BatchLogOfMeanTable(const std::vector<BatchStatistics>& stats);
// cell_id,target,soc,s_theta
CsvTable SensitivityTable(const std::vector<SensitivityRecord>& records);
// cell_id,t_s,current_a,soc,v_v
CsvTable TrajectoryTable(const std::vector<SimResult>& results);
// cell_id,t_cv_start_s,t_complete_s,terminated_by
CsvTable SimSummaryTable(const std::vector<SimResult>& results);
// design_id,q1_avg_ah,q2_avg_ah,min_q_avg_ah,kappa1_avg,kappa2_avg,max_kappa_avg
CsvTable DesignTable(const std::vector<PackDesign>& designs);
// design_id,max_kappa_avg,min_q_avg_ah,best_capacity_flag,best_kappa_flag
CsvTable ScatterTable(const std::vector<ScatterRow>& rows);
// cell_index,cell_id,q_factor,tau_factor
CsvTable AgingFactorTable(const SecondLifePopulation& population);

}  // namespace battctrl
