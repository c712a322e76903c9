#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "battctrl/cell_model.h"

namespace battctrl {

// Population files: a JSON array of objects with cell_id, batch_id,
// capacity_coulombs, n_rc, tau_coeffs, c_coeffs (arrays of arrays), r_coeffs
// and ocv_coeffs. Coefficients ascend in degree.

nlohmann::json CellToJson(const CellParameters& cell);
/// Throws kSchemaError on missing or mistyped fields.
CellParameters CellFromJson(const nlohmann::json& object);

std::string PopulationToJsonString(const std::vector<CellParameters>& cells);
/// Throws kParseError, kSchemaError, or kValidationError naming the first
/// cell whose validation report has errors.
std::vector<CellParameters> ParsePopulation(const std::string& text);

void SavePopulation(const std::filesystem::path& path,
                    const std::vector<CellParameters>& cells);
std::vector<CellParameters> LoadPopulation(const std::filesystem::path& path);

struct BatchNominal {
  std::string batch_id;
  int n_cells = 33;
  double capacity_coulombs = 3960.0;
  std::vector<std::vector<double>> tau_coeffs;
  std::vector<std::vector<double>> c_coeffs;
  std::vector<double> r_coeffs;
  std::vector<double> ocv_coeffs;
};

/// Synthetic stand-in for a measured two-batch population.
struct PopulationSpec {
  std::vector<BatchNominal> batches;
  double cov = 0.03;  // relative std of the Gaussian cell-to-cell scatter
  std::uint64_t seed = 1;

  /// Two batches of cubic maps with time constants between roughly 8 s and
  /// 290 s. Batch 1 has the larger time constants at low SOC. `n_rc` keeps
  /// the first n_rc of the three nominal RC pairs.
  static PopulationSpec Default(int n_per_batch = 33, double capacity_coulombs = 3960.0,
                                int n_rc = 3);

  /// Throws kInvalidArgument if cov < 0 or a nominal map is not positive.
  void Validate() const;
};

/// Each cell's capacity and every map coefficient is nominal * (1 + cov * z)
/// with z standard normal. A draw that fails validation is redrawn, up to 100
/// times (kGenerationFailed after that).
std::vector<CellParameters> GeneratePopulation(const PopulationSpec& spec);

}  // namespace battctrl
