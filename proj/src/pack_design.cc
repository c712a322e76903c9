#include "battctrl/pack_design.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "battctrl/error.h"
#include "battctrl/lie_ctrb.h"
#include "battctrl/parallel.h"
#include "battctrl/rng.h"

namespace battctrl {

namespace {

constexpr double kCoulombsPerAmpereHour = 3600.0;

std::vector<double> AverageRanks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * double(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::vector<Partition> GeneratePartitions(int n_cells, int pack_size,
                                          int n_designs, std::uint64_t seed) {
  if (pack_size < 1 || n_cells != 2 * pack_size) {
    throw Error(ErrorCode::kOddPopulation,
                std::to_string(n_cells) + " cells cannot form two packs of " +
                    std::to_string(pack_size));
  }
  if (n_designs < 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_designs must be >= 0");
  }
  SeededRng rng(seed);
  std::vector<Partition> partitions;
  partitions.reserve(n_designs);
  for (int d = 0; d < n_designs; ++d) {
    const std::vector<int> perm = rng.Permutation(n_cells);
    partitions.push_back({std::vector<int>(perm.begin(), perm.begin() + pack_size),
                          std::vector<int>(perm.begin() + pack_size, perm.end())});
  }
  return partitions;
}

bool IsValidPartition(const Partition& partition, int n_cells) {
  if (partition.pack1.size() != partition.pack2.size() ||
      partition.pack1.size() + partition.pack2.size() != std::size_t(n_cells)) {
    return false;
  }
  std::vector<bool> seen(n_cells, false);
  for (const auto* pack : {&partition.pack1, &partition.pack2}) {
    for (int index : *pack) {
      if (index < 0 || index >= n_cells || seen[index]) return false;
      seen[index] = true;
    }
  }
  return true;
}

std::vector<double> CellKappaSummaries(const std::vector<CellParameters>& cells,
                                       const KappaSummary& summary) {
  return ParallelMap(cells.size(), [&](std::size_t i) {
    if (summary.mode == KappaSummary::Mode::kSingleSoc) {
      return ConditionNumber(EquilibriumCtrb(cells[i], summary.soc).entries);
    }
    const ConditionProfile profile = KappaProfile(cells[i], summary.soc_grid);
    double sum = 0.0;
    for (double kappa : profile.kappa) sum += kappa;
    return sum / double(profile.kappa.size());
  });
}

PackDesign EvaluateDesign(int design_id, const Partition& partition,
                          const std::vector<double>& capacities_coulombs,
                          const std::vector<double>& cell_kappa) {
  auto mean_over = [](const std::vector<int>& pack, const std::vector<double>& values) {
    double sum = 0.0;
    for (int index : pack) sum += values.at(index);
    return sum / double(pack.size());
  };
  PackDesign design;
  design.design_id = design_id;
  design.partition = partition;
  design.q1_avg_ah = mean_over(partition.pack1, capacities_coulombs) / kCoulombsPerAmpereHour;
  design.q2_avg_ah = mean_over(partition.pack2, capacities_coulombs) / kCoulombsPerAmpereHour;
  design.min_q_avg_ah = std::min(design.q1_avg_ah, design.q2_avg_ah);
  design.kappa1_avg = mean_over(partition.pack1, cell_kappa);
  design.kappa2_avg = mean_over(partition.pack2, cell_kappa);
  design.max_kappa_avg = std::max(design.kappa1_avg, design.kappa2_avg);
  return design;
}

namespace {
std::vector<double> Capacities(const std::vector<CellParameters>& population) {
  std::vector<double> capacities;
  capacities.reserve(population.size());
  for (const auto& cell : population) capacities.push_back(cell.capacity_coulombs);
  return capacities;
}
}  // namespace

PackDesign PackMetrics(int design_id, const Partition& partition,
                       const std::vector<CellParameters>& population,
                       const KappaSummary& summary) {
  if (!IsValidPartition(partition, static_cast<int>(population.size()))) {
    throw Error(ErrorCode::kInvalidArgument, "partition does not split the population");
  }
  return EvaluateDesign(design_id, partition, Capacities(population),
                        CellKappaSummaries(population, summary));
}

std::vector<PackDesign> EvaluateDesigns(const std::vector<Partition>& partitions,
                                        const std::vector<CellParameters>& population,
                                        const KappaSummary& summary) {
  const int n = static_cast<int>(population.size());
  for (const auto& partition : partitions) {
    if (!IsValidPartition(partition, n)) {
      throw Error(ErrorCode::kInvalidArgument, "partition does not split the population");
    }
  }
  const std::vector<double> capacities = Capacities(population);
  const std::vector<double> cell_kappa = CellKappaSummaries(population, summary);
  return ParallelMap(partitions.size(), [&](std::size_t d) {
    return EvaluateDesign(static_cast<int>(d), partitions[d], capacities, cell_kappa);
  });
}

BestDesigns SelectBest(const std::vector<PackDesign>& designs) {
  if (designs.empty()) {
    throw Error(ErrorCode::kEmptyDesignSet, "no designs to select from");
  }
  const PackDesign* by_capacity = &designs.front();
  const PackDesign* by_kappa = &designs.front();
  for (const auto& d : designs) {
    if (d.min_q_avg_ah > by_capacity->min_q_avg_ah ||
        (d.min_q_avg_ah == by_capacity->min_q_avg_ah &&
         d.design_id < by_capacity->design_id)) {
      by_capacity = &d;
    }
    if (d.max_kappa_avg < by_kappa->max_kappa_avg ||
        (d.max_kappa_avg == by_kappa->max_kappa_avg && d.design_id < by_kappa->design_id)) {
      by_kappa = &d;
    }
  }
  return {by_capacity->design_id, by_kappa->design_id};
}

std::vector<ScatterRow> ExportScatter(const std::vector<PackDesign>& designs) {
  const BestDesigns best = SelectBest(designs);
  std::vector<ScatterRow> rows;
  rows.reserve(designs.size());
  bool capacity_flagged = false;
  bool kappa_flagged = false;
  for (const auto& d : designs) {
    // Only the first row carrying a best id is flagged, so duplicate ids in
    // the input cannot produce two markers.
    const bool best_capacity = !capacity_flagged && d.design_id == best.best_by_capacity;
    const bool best_kappa = !kappa_flagged && d.design_id == best.best_by_kappa;
    capacity_flagged |= best_capacity;
    kappa_flagged |= best_kappa;
    rows.push_back({d.design_id, d.max_kappa_avg, d.min_q_avg_ah, best_capacity, best_kappa});
  }
  return rows;
}

double CapacityKappaRankCorrelation(const std::vector<PackDesign>& designs) {
  const std::size_t n = designs.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> capacity(n), neg_kappa(n);
  for (std::size_t i = 0; i < n; ++i) {
    capacity[i] = designs[i].min_q_avg_ah;
    neg_kappa[i] = -designs[i].max_kappa_avg;
  }
  const std::vector<double> ra = AverageRanks(capacity);
  const std::vector<double> rb = AverageRanks(neg_kappa);
  const double mean = 0.5 * double(n + 1);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (ra[i] - mean) * (rb[i] - mean);
    saa += (ra[i] - mean) * (ra[i] - mean);
    sbb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

}  // namespace battctrl
