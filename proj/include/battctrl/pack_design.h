#pragma once

#include <cstdint>
#include <vector>

#include "battctrl/cell_model.h"

namespace battctrl {

struct Partition {
  std::vector<int> pack1;
  std::vector<int> pack2;

  bool operator==(const Partition&) const = default;
};

/// Each design is a seeded uniform permutation of the population split at
/// `pack_size`. Duplicate designs are kept.
///
/// Throws kOddPopulation unless n_cells == 2 * pack_size.
std::vector<Partition> GeneratePartitions(int n_cells, int pack_size,
                                          int n_designs, std::uint64_t seed);

/// True when the packs are equal-sized, disjoint and cover 0 .. n_cells-1.
bool IsValidPartition(const Partition& partition, int n_cells);

struct PackDesign {
  int design_id = 0;
  Partition partition;
  double q1_avg_ah = 0.0;
  double q2_avg_ah = 0.0;
  double min_q_avg_ah = 0.0;
  double kappa1_avg = 0.0;
  double kappa2_avg = 0.0;
  double max_kappa_avg = 0.0;
};

/// How a cell's condition profile is reduced to one number.
struct KappaSummary {
  enum class Mode { kGridAverage, kSingleSoc };
  Mode mode = Mode::kGridAverage;
  std::vector<double> soc_grid;  // kGridAverage
  double soc = 0.5;              // kSingleSoc

  static KappaSummary GridAverage(std::vector<double> grid) {
    return {Mode::kGridAverage, std::move(grid), 0.0};
  }
  static KappaSummary AtSoc(double soc) { return {Mode::kSingleSoc, {}, soc}; }
};

/// Equilibrium kappa of each cell reduced per `summary`. A cell whose
/// controllability matrix is singular anywhere on the grid gets +infinity.
std::vector<double> CellKappaSummaries(const std::vector<CellParameters>& cells,
                                       const KappaSummary& summary);

/// Pack means of capacity (converted to ampere-hours) and of the per-cell
/// kappa summaries.
PackDesign EvaluateDesign(int design_id, const Partition& partition,
                          const std::vector<double>& capacities_coulombs,
                          const std::vector<double>& cell_kappa);

PackDesign PackMetrics(int design_id, const Partition& partition,
                       const std::vector<CellParameters>& population,
                       const KappaSummary& summary);

/// Evaluates every partition; design ids are the partition indices.
std::vector<PackDesign> EvaluateDesigns(const std::vector<Partition>& partitions,
                                        const std::vector<CellParameters>& population,
                                        const KappaSummary& summary);

struct BestDesigns {
  int best_by_capacity;  // argmax of min_q_avg
  int best_by_kappa;     // argmin of max_kappa_avg
};

/// Ties go to the smallest design_id. Throws kEmptyDesignSet.
BestDesigns SelectBest(const std::vector<PackDesign>& designs);

struct ScatterRow {
  int design_id;
  double max_kappa_avg;
  double min_q_avg_ah;
  bool best_capacity;
  bool best_kappa;
};

/// One row per design, in input order, with the two best designs flagged.
std::vector<ScatterRow> ExportScatter(const std::vector<PackDesign>& designs);

/// Spearman rank correlation between min_q_avg and -max_kappa_avg (average
/// ranks for ties). Reported for inspection only.
double CapacityKappaRankCorrelation(const std::vector<PackDesign>& designs);

}  // namespace battctrl
