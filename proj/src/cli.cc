#include "battctrl/cli.h"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "battctrl/cccv.h"
#include "battctrl/csv.h"
#include "battctrl/error.h"
#include "battctrl/lie_ctrb.h"
#include "battctrl/pack_design.h"
#include "battctrl/population.h"
#include "battctrl/sens_aging.h"

namespace battctrl {

namespace {

struct GridFlags {
  double min = 0.05;
  double max = 0.95;
  double step = 0.01;

  void Attach(CLI::App* cmd) {
    cmd->add_option("--grid-min", min, "First SOC grid point")->capture_default_str();
    cmd->add_option("--grid-max", max, "Last SOC grid point")->capture_default_str();
    cmd->add_option("--grid-step", step, "SOC grid spacing")->capture_default_str();
  }
  std::vector<double> Grid() const { return SocGrid(min, max, step); }
};

struct EolFlags {
  bool enabled = false;
  double q_factor = 0.8;
  double tau_factor = 3.0;

  void Attach(CLI::App* cmd, bool with_switch) {
    if (with_switch) {
      cmd->add_flag("--eol", enabled, "Scale parameters to end of life first");
    }
    cmd->add_option("--eol-q-factor", q_factor, "Capacity multiplier at end of life")
        ->capture_default_str();
    cmd->add_option("--eol-tau-factor", tau_factor, "Time-constant multiplier at end of life")
        ->capture_default_str();
  }
  std::vector<CellParameters> Apply(std::vector<CellParameters> cells) const {
    if (!enabled) return cells;
    for (auto& cell : cells) cell = ApplyEol(cell, q_factor, tau_factor);
    return cells;
  }
};

std::string Sci(double value, int digits = 3) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*e", digits - 1, value);
  return buffer;
}

std::string Fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

int RunScenario(std::ostream& out) {
  const CellParameters cell_a = TwoStateScenarioCell(10.0, "cell_A");
  const CellParameters cell_b = TwoStateScenarioCell(200.0, "cell_B");
  const CccvProtocol protocol;  // 1 A, 3.5 V, 10 mA, dt 0.1 s
  const auto results = RunCccv({cell_a, cell_b}, protocol,
                               {CellState::Equilibrium(1, 0.0), CellState::Equilibrium(1, 0.0)});
  out << "two-state CCCV scenario (Q = 4320 C, C = 5000 F, OCV = 3 + 0.5 soc, R = 0)\n";
  const CellParameters* cells[] = {&cell_a, &cell_b};
  for (int i = 0; i < 2; ++i) {
    const double kappa = ConditionNumber(EquilibriumCtrb(*cells[i], 0.0).entries);
    const SimResult& r = results[i];
    out << cells[i]->cell_id << ": tau = " << Fixed(cells[i]->tau_maps[0].Evaluate(0.0), 0)
        << " s, kappa = " << Sci(kappa) << ", t_cv_start = " << Fixed(r.t_cv_start, 1)
        << " s, t_complete = " << Fixed(r.t_complete, 1)
        << " s, terminated_by = " << TerminationName(r.terminated_by) << "\n";
  }
  out << "extra time for cell_B: " << Fixed(results[1].t_complete - results[0].t_complete, 1)
      << " s\n";
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Controllability and conditioning analysis of battery ECM cells"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "battctrl 1.0.0");

  // gen-population
  auto* gen = app.add_subcommand("gen-population", "Write a synthetic two-batch population");
  int n_per_batch = 33;
  double capacity = 3960.0;
  int n_rc = 3;
  double cov = 0.03;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "population.json";
  gen->add_option("--n-per-batch", n_per_batch, "Cells per batch")->capture_default_str();
  gen->add_option("--capacity", capacity, "Nominal capacity in coulombs")->capture_default_str();
  gen->add_option("--n-rc", n_rc, "RC pairs per cell (1-3)")->capture_default_str();
  gen->add_option("--cov", cov, "Relative std of cell-to-cell scatter")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_option("-o,--output", gen_out, "Population JSON path")->capture_default_str();

  // analyze-kappa
  auto* analyze = app.add_subcommand("analyze-kappa", "Condition-number profiles over SOC");
  std::string population_path;
  GridFlags grid_flags;
  EolFlags eol_flags;
  std::string profile_out = "kappa_profiles.csv";
  std::string stats_out = "kappa_batch_stats.csv";
  std::string log_mean_out = "kappa_batch_log_of_mean.csv";
  analyze->add_option("-p,--population", population_path, "Population JSON")->required();
  grid_flags.Attach(analyze);
  eol_flags.Attach(analyze, true);
  analyze->add_option("--profile-out", profile_out)->capture_default_str();
  analyze->add_option("--stats-out", stats_out)->capture_default_str();
  analyze->add_option("--log-of-mean-out", log_mean_out)->capture_default_str();

  // sensitivity
  auto* sens = app.add_subcommand("sensitivity", "Normalized condition-number sensitivities");
  std::vector<std::string> target_labels;
  double rel_step = 0.01;
  std::string sens_out = "sensitivity.csv";
  sens->add_option("-p,--population", population_path, "Population JSON")->required();
  sens->add_option("--target", target_labels,
                   "Q, tau1, tau2, ... (repeatable; default: all)");
  sens->add_option("--rel-step", rel_step, "Relative perturbation")->capture_default_str();
  grid_flags.Attach(sens);
  eol_flags.Attach(sens, true);
  sens->add_option("-o,--output", sens_out)->capture_default_str();

  // age
  auto* age = app.add_subcommand("age", "Randomized second-life aging of a population");
  AgingSpec aging;
  aging.seed = 1;
  int aged_count = 32;
  std::string aged_out = "aged_population.json";
  std::string factors_out = "aging_factors.csv";
  age->add_option("-p,--population", population_path, "Population JSON")->required();
  age->add_option("--eol-q-factor", aging.q_factor)->capture_default_str();
  age->add_option("--eol-tau-factor", aging.tau_factor)->capture_default_str();
  age->add_option("--jitter-q", aging.q_jitter)->capture_default_str();
  age->add_option("--jitter-tau", aging.tau_jitter)->capture_default_str();
  age->add_option("--aged-count", aged_count)->capture_default_str();
  age->add_option("--seed", aging.seed)->capture_default_str();
  age->add_option("-o,--output", aged_out)->capture_default_str();
  age->add_option("--factors-out", factors_out)->capture_default_str();

  // simulate-cccv
  auto* sim = app.add_subcommand("simulate-cccv", "CCCV charge simulation per cell");
  CccvProtocol protocol;
  double initial_soc = 0.0;
  std::string traj_out = "cccv_trajectory.csv";
  std::string summary_out = "cccv_summary.csv";
  sim->add_option("-p,--population", population_path, "Population JSON")->required();
  sim->add_option("--i-cc", protocol.i_cc, "Charge current, A")->capture_default_str();
  sim->add_option("--v-limit", protocol.v_limit, "Voltage limit, V")->capture_default_str();
  sim->add_option("--i-cutoff", protocol.i_cutoff, "CV cutoff current, A")->capture_default_str();
  sim->add_option("--dt", protocol.dt, "Euler step, s")->capture_default_str();
  sim->add_option("--t-max", protocol.t_max, "Simulation cap, s")->capture_default_str();
  sim->add_option("--initial-soc", initial_soc)->capture_default_str();
  sim->add_option("--trajectory-out", traj_out)->capture_default_str();
  sim->add_option("--summary-out", summary_out)->capture_default_str();

  // design-packs
  auto* design = app.add_subcommand("design-packs", "Randomized two-pack design search");
  int n_designs = 10000;
  std::uint64_t design_seed = 7;
  std::optional<double> kappa_soc;
  std::string table_out = "pack_designs.csv";
  std::string scatter_out = "pack_scatter.csv";
  design->add_option("-p,--population", population_path, "Population JSON")->required();
  design->add_option("--n-designs", n_designs)->capture_default_str();
  design->add_option("--seed", design_seed)->capture_default_str();
  design->add_option("--kappa-soc", kappa_soc,
                     "Summarize each cell by kappa at this SOC instead of the grid average");
  grid_flags.Attach(design);
  design->add_option("--table-out", table_out)->capture_default_str();
  design->add_option("--scatter-out", scatter_out)->capture_default_str();

  auto* scenario = app.add_subcommand("scenario-3-2", "Built-in two-cell control-effort study");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsageError;
  }

  try {
    if (gen->parsed()) {
      PopulationSpec spec = PopulationSpec::Default(n_per_batch, capacity, n_rc);
      spec.cov = cov;
      spec.seed = gen_seed;
      const auto cells = GeneratePopulation(spec);
      SavePopulation(gen_out, cells);
      out << "wrote " << cells.size() << " cells to " << gen_out << "\n";
    } else if (analyze->parsed()) {
      const auto cells = eol_flags.Apply(LoadPopulation(population_path));
      const auto profiles = KappaProfiles(cells, grid_flags.Grid());
      const auto stats = ComputeBatchStatistics(profiles);
      WriteCsv(profile_out, ProfileTable(profiles));
      WriteCsv(stats_out, BatchStatisticsTable(stats));
      WriteCsv(log_mean_out, BatchLogOfMeanTable(stats));
      for (const auto& s : stats) {
        double lo = s.mean_log10_kappa.front(), hi = lo;
        for (double v : s.mean_log10_kappa) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        out << s.batch_id << " (" << s.n_cells << " cells): mean log10 kappa in ["
            << Fixed(lo, 3) << ", " << Fixed(hi, 3) << "]\n";
      }
    } else if (sens->parsed()) {
      for (const auto& label : target_labels) {
        const auto kind = SensitivityTarget::Parse(label).kind;
        if (kind != SensitivityTarget::Kind::kCapacity && kind != SensitivityTarget::Kind::kTau) {
          throw Error(ErrorCode::kInvalidArgument,
                      "--target " + label + " is not a controllability parameter");
        }
      }
      const auto cells = eol_flags.Apply(LoadPopulation(population_path));
      const auto grid = grid_flags.Grid();
      std::vector<SensitivityRecord> records;
      for (const auto& cell : cells) {
        std::vector<SensitivityTarget> targets;
        if (target_labels.empty()) {
          targets = ControllabilityTargets(cell);
        } else {
          for (const auto& label : target_labels) targets.push_back(SensitivityTarget::Parse(label));
        }
        for (const auto& target : targets) {
          records.push_back(NormalizedSensitivity(cell, target, grid, rel_step));
        }
      }
      WriteCsv(sens_out, SensitivityTable(records));
      out << "wrote " << records.size() << " sensitivity records to " << sens_out << "\n";
    } else if (age->parsed()) {
      const auto cells = LoadPopulation(population_path);
      const auto second_life = RandomizeSecondLife(cells, aged_count, aging);
      SavePopulation(aged_out, second_life.cells);
      WriteCsv(factors_out, AgingFactorTable(second_life));
      out << "aged " << second_life.aged.size() << " of " << cells.size() << " cells -> "
          << aged_out << "\n";
    } else if (sim->parsed()) {
      const auto cells = LoadPopulation(population_path);
      std::vector<CellState> initial;
      for (const auto& cell : cells) initial.push_back(CellState::Equilibrium(cell.n_rc(), initial_soc));
      const auto results = RunCccv(cells, protocol, initial);
      WriteCsv(traj_out, TrajectoryTable(results));
      WriteCsv(summary_out, SimSummaryTable(results));
      int completed = 0;
      for (const auto& r : results) completed += r.terminated_by == Termination::kCompleted;
      out << completed << " of " << results.size() << " cells completed the CCCV profile\n";
    } else if (design->parsed()) {
      const auto cells = LoadPopulation(population_path);
      const int n = static_cast<int>(cells.size());
      const auto partitions = GeneratePartitions(n, n / 2, n_designs, design_seed);
      const KappaSummary summary = kappa_soc ? KappaSummary::AtSoc(*kappa_soc)
                                             : KappaSummary::GridAverage(grid_flags.Grid());
      const auto designs = EvaluateDesigns(partitions, cells, summary);
      const auto rows = ExportScatter(designs);
      WriteCsv(table_out, DesignTable(designs));
      WriteCsv(scatter_out, ScatterTable(rows));
      const BestDesigns best = SelectBest(designs);
      const PackDesign& by_q = designs[best.best_by_capacity];
      const PackDesign& by_k = designs[best.best_by_kappa];
      out << "best by capacity: design " << by_q.design_id << " (min Q_avg "
          << Fixed(by_q.min_q_avg_ah, 4) << " Ah, max kappa_avg " << Sci(by_q.max_kappa_avg)
          << ")\n";
      out << "best by kappa:    design " << by_k.design_id << " (min Q_avg "
          << Fixed(by_k.min_q_avg_ah, 4) << " Ah, max kappa_avg " << Sci(by_k.max_kappa_avg)
          << ")\n";
      out << "rank correlation(min Q_avg, -max kappa_avg) = "
          << Fixed(CapacityKappaRankCorrelation(designs), 4) << "\n";
    } else if (scenario->parsed()) {
      return RunScenario(out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidArgument ? kExitUsageError : kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace battctrl
