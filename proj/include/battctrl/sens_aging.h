#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "battctrl/cell_model.h"
#include "battctrl/lie_ctrb.h"

namespace battctrl {

/// A parameter (or whole parameter map) that can be perturbed. Only the
/// capacity and the time-constant maps enter the controllability matrix, so
/// only those are accepted by NormalizedSensitivity.
struct SensitivityTarget {
  enum class Kind { kCapacity, kTau, kCapacitance, kResistance, kOcv };
  Kind kind = Kind::kCapacity;
  int index = 0;  // RC pair, zero-based, for kTau and kCapacitance

  static SensitivityTarget Capacity() { return {Kind::kCapacity, 0}; }
  static SensitivityTarget Tau(int i) { return {Kind::kTau, i}; }

  /// "Q", "tau1".., "C1".., "R", "OCV".
  std::string Label() const;
  /// Inverse of Label. Throws kInvalidArgument on anything else.
  static SensitivityTarget Parse(const std::string& label);

  bool operator==(const SensitivityTarget&) const = default;
};

struct SensitivityRecord {
  std::string cell_id;
  SensitivityTarget target;
  std::vector<double> soc_grid;
  std::vector<double> s_theta;
};

/// Copy of `params` with the target scaled by `factor` (all coefficients of a
/// map are scaled together).
CellParameters ScaleParameter(const CellParameters& params,
                              const SensitivityTarget& target, double factor);

/// Forward-difference normalized sensitivity (dkappa/dtheta) * theta at every
/// grid point: (kappa(theta (1 + rel_step)) - kappa(theta)) / rel_step.
///
/// Throws kNotAControllabilityParameter for C, R and OCV targets and
/// kInvalidArgument for rel_step <= 0 or an out-of-range RC index.
SensitivityRecord NormalizedSensitivity(const CellParameters& params,
                                        const SensitivityTarget& target,
                                        const std::vector<double>& soc_grid,
                                        double rel_step = 0.01);

/// Capacity plus every time-constant map of the cell.
std::vector<SensitivityTarget> ControllabilityTargets(const CellParameters& params);

struct AgingSpec {
  double q_factor = 0.8;
  double tau_factor = 3.0;
  double q_jitter = 0.05;
  double tau_jitter = 0.3;
  std::uint64_t seed = 0;

  /// Factors > 0, 0 <= jitter < factor.
  void Validate() const;
};

inline constexpr const char* kAgedSuffix = "-aged";

bool IsAged(const CellParameters& params);

/// Capacity times q_factor, every tau coefficient times tau_factor; C, R and
/// OCV are untouched. The cell id gains the aged suffix once.
CellParameters ApplyEol(const CellParameters& params, double q_factor,
                        double tau_factor);

struct AgedCell {
  int index;
  double q_factor;
  double tau_factor;
};

struct SecondLifePopulation {
  std::vector<CellParameters> cells;
  std::vector<AgedCell> aged;  // in selection order
};

/// Ages `count` cells chosen without replacement, each with its own factors
/// drawn uniformly from [factor - jitter, factor + jitter]. Cells not chosen
/// keep their beginning-of-life parameters.
///
/// Throws kCountExceedsPopulation.
SecondLifePopulation RandomizeSecondLife(const std::vector<CellParameters>& cells,
                                         int count, const AgingSpec& spec);

struct BatchStatistics {
  std::string batch_id;
  std::vector<double> soc_grid;
  std::vector<double> mean_log10_kappa;
  std::vector<double> std_log10_kappa;  // population standard deviation
  std::vector<double> log10_mean_kappa;
  int n_cells = 0;
};

/// Per batch (in order of first appearance), per grid point statistics of
/// log10 kappa. Throws kMixedGrids unless every profile shares one grid.
std::vector<BatchStatistics> ComputeBatchStatistics(
    const std::vector<ConditionProfile>& profiles);

}  // namespace battctrl
