#include "battctrl/sens_aging.h"

#include <cmath>
#include <map>
#include <optional>
#include <string_view>

#include "battctrl/error.h"
#include "battctrl/rng.h"

namespace battctrl {

std::string SensitivityTarget::Label() const {
  switch (kind) {
    case Kind::kCapacity: return "Q";
    case Kind::kTau: return "tau" + std::to_string(index + 1);
    case Kind::kCapacitance: return "C" + std::to_string(index + 1);
    case Kind::kResistance: return "R";
    case Kind::kOcv: return "OCV";
  }
  return "?";
}

SensitivityTarget SensitivityTarget::Parse(const std::string& label) {
  if (label == "Q") return Capacity();
  if (label == "R") return {Kind::kResistance, 0};
  if (label == "OCV") return {Kind::kOcv, 0};
  auto indexed = [&](const std::string& prefix, Kind kind) -> std::optional<SensitivityTarget> {
    if (label.size() <= prefix.size() || label.compare(0, prefix.size(), prefix) != 0) {
      return std::nullopt;
    }
    const std::string digits = label.substr(prefix.size());
    if (digits.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    const int one_based = std::stoi(digits);
    if (one_based < 1) return std::nullopt;
    return SensitivityTarget{kind, one_based - 1};
  };
  if (auto t = indexed("tau", Kind::kTau)) return *t;
  if (auto t = indexed("C", Kind::kCapacitance)) return *t;
  throw Error(ErrorCode::kInvalidArgument, "unknown parameter '" + label + "'");
}

CellParameters ScaleParameter(const CellParameters& params,
                              const SensitivityTarget& target, double factor) {
  CellParameters scaled = params;
  auto check_index = [&](int size) {
    if (target.index < 0 || target.index >= size) {
      throw Error(ErrorCode::kInvalidArgument,
                  target.Label() + " does not exist on cell '" + params.cell_id + "'");
    }
  };
  switch (target.kind) {
    case SensitivityTarget::Kind::kCapacity:
      scaled.capacity_coulombs *= factor;
      break;
    case SensitivityTarget::Kind::kTau:
      check_index(params.n_rc());
      scaled.tau_maps[target.index] = params.tau_maps[target.index].Scaled(factor);
      break;
    case SensitivityTarget::Kind::kCapacitance:
      check_index(static_cast<int>(params.c_maps.size()));
      scaled.c_maps[target.index] = params.c_maps[target.index].Scaled(factor);
      break;
    case SensitivityTarget::Kind::kResistance:
      scaled.r_map = params.r_map.Scaled(factor);
      break;
    case SensitivityTarget::Kind::kOcv:
      scaled.ocv_map = params.ocv_map.Scaled(factor);
      break;
  }
  return scaled;
}

SensitivityRecord NormalizedSensitivity(const CellParameters& params,
                                        const SensitivityTarget& target,
                                        const std::vector<double>& soc_grid,
                                        double rel_step) {
  if (target.kind != SensitivityTarget::Kind::kCapacity &&
      target.kind != SensitivityTarget::Kind::kTau) {
    throw Error(ErrorCode::kNotAControllabilityParameter,
                target.Label() + " does not appear in the controllability matrix");
  }
  if (!(rel_step > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rel_step must be positive");
  }
  const CellParameters perturbed = ScaleParameter(params, target, 1.0 + rel_step);
  const ConditionProfile nominal = KappaProfile(params, soc_grid);
  const ConditionProfile bumped = KappaProfile(perturbed, soc_grid);

  SensitivityRecord record{params.cell_id, target, soc_grid, {}};
  record.s_theta.reserve(soc_grid.size());
  for (std::size_t k = 0; k < soc_grid.size(); ++k) {
    record.s_theta.push_back((bumped.kappa[k] - nominal.kappa[k]) / rel_step);
  }
  return record;
}

std::vector<SensitivityTarget> ControllabilityTargets(const CellParameters& params) {
  std::vector<SensitivityTarget> targets{SensitivityTarget::Capacity()};
  for (int i = 0; i < params.n_rc(); ++i) targets.push_back(SensitivityTarget::Tau(i));
  return targets;
}

void AgingSpec::Validate() const {
  auto check = [](double factor, double jitter, const char* name) {
    if (!(factor > 0.0) || !(jitter >= 0.0) || !(jitter < factor)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(name) + " factor must be > 0 with 0 <= jitter < factor");
    }
  };
  check(q_factor, q_jitter, "capacity");
  check(tau_factor, tau_jitter, "time-constant");
}

bool IsAged(const CellParameters& params) {
  const std::string_view id = params.cell_id;
  const std::string_view suffix = kAgedSuffix;
  return id.size() >= suffix.size() && id.substr(id.size() - suffix.size()) == suffix;
}

CellParameters ApplyEol(const CellParameters& params, double q_factor,
                        double tau_factor) {
  CellParameters aged = params;
  aged.capacity_coulombs *= q_factor;
  for (ParameterMap& tau : aged.tau_maps) tau = tau.Scaled(tau_factor);
  if (!IsAged(aged)) aged.cell_id += kAgedSuffix;
  return aged;
}

SecondLifePopulation RandomizeSecondLife(const std::vector<CellParameters>& cells,
                                         int count, const AgingSpec& spec) {
  spec.Validate();
  if (count < 0 || count > static_cast<int>(cells.size())) {
    throw Error(ErrorCode::kCountExceedsPopulation,
                "cannot age " + std::to_string(count) + " of " +
                    std::to_string(cells.size()) + " cells");
  }
  SeededRng rng(spec.seed);
  const std::vector<int> order = rng.Permutation(static_cast<int>(cells.size()));

  SecondLifePopulation out{cells, {}};
  for (int k = 0; k < count; ++k) {
    const int index = order[k];
    const double q_factor =
        rng.Uniform(spec.q_factor - spec.q_jitter, spec.q_factor + spec.q_jitter);
    const double tau_factor = rng.Uniform(spec.tau_factor - spec.tau_jitter,
                                          spec.tau_factor + spec.tau_jitter);
    out.cells[index] = ApplyEol(cells[index], q_factor, tau_factor);
    out.aged.push_back({index, q_factor, tau_factor});
  }
  return out;
}

std::vector<BatchStatistics> ComputeBatchStatistics(
    const std::vector<ConditionProfile>& profiles) {
  if (profiles.empty()) return {};
  const std::vector<double>& grid = profiles.front().soc_grid;
  for (const auto& profile : profiles) {
    if (profile.soc_grid != grid) {
      throw Error(ErrorCode::kMixedGrids,
                  "profile for cell '" + profile.cell_id + "' uses a different grid");
    }
  }

  std::vector<BatchStatistics> stats;
  std::map<std::string, std::vector<const ConditionProfile*>> members;
  for (const auto& profile : profiles) {
    auto& group = members[profile.batch_id];
    if (group.empty()) stats.push_back({profile.batch_id, grid, {}, {}, {}, 0});
    group.push_back(&profile);
  }

  for (auto& batch : stats) {
    const auto& group = members[batch.batch_id];
    batch.n_cells = static_cast<int>(group.size());
    const double n = double(group.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      double sum_log = 0.0;
      double sum_kappa = 0.0;
      for (const auto* p : group) {
        sum_log += std::log10(p->kappa[k]);
        sum_kappa += p->kappa[k];
      }
      const double mean = sum_log / n;
      double sum_sq = 0.0;
      for (const auto* p : group) {
        const double d = std::log10(p->kappa[k]) - mean;
        sum_sq += d * d;
      }
      batch.mean_log10_kappa.push_back(mean);
      batch.std_log10_kappa.push_back(std::sqrt(sum_sq / n));
      batch.log10_mean_kappa.push_back(std::log10(sum_kappa / n));
    }
  }
  return stats;
}

}  // namespace battctrl
