#include "doctest.h"

#include <fstream>
#include <sstream>

#include "battctrl/cli.h"
#include "battctrl/csv.h"
#include "battctrl/error.h"
#include "battctrl/population.h"
#include "test_support.h"

namespace battctrl {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("battctrl_io_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& file) const { return (path / file).string(); }
};

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Run(std::vector<std::string> args) {
  args.insert(args.begin(), "battctrl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

ErrorCode ParseErrorCode(const std::string& text) {
  try {
    ParsePopulation(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

TEST_CASE("population json round trip") {
  SeededRng rng(2);
  std::vector<CellParameters> cells;
  for (int n_rc = 1; n_rc <= 3; ++n_rc) {
    CellParameters c = testing::RandomCell(rng, n_rc, {}, "cell" + std::to_string(n_rc));
    c.batch_id = "b";
    cells.push_back(c);
  }
  const auto back = ParsePopulation(PopulationToJsonString(cells));
  CHECK(back == cells);

  TempDir dir("roundtrip");
  SavePopulation(dir / "pop.json", cells);
  CHECK(LoadPopulation(dir / "pop.json") == cells);
  CHECK_THROWS_AS(LoadPopulation(dir / "missing.json"), Error);
}

TEST_CASE("population loading errors") {
  CellParameters bad = TwoStateScenarioCell(10.0, "bad_cell");
  bad.capacity_coulombs = -5.0;
  const std::string text =
      PopulationToJsonString({TwoStateScenarioCell(10.0, "good"), bad});
  try {
    ParsePopulation(text);
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidationError);
    CHECK(std::string(e.what()).find("bad_cell") != std::string::npos);
  }

  CHECK(ParseErrorCode("[{") == ErrorCode::kParseError);
  CHECK(ParseErrorCode("{}") == ErrorCode::kSchemaError);
  CHECK(ParseErrorCode(R"([{"cell_id": "x"}])") == ErrorCode::kSchemaError);

  nlohmann::json j = CellToJson(TwoStateScenarioCell(10.0, "a"));
  j["tau_coeffs"] = "ten";
  CHECK(ParseErrorCode("[" + j.dump() + "]") == ErrorCode::kSchemaError);
}

TEST_CASE("generated population") {
  const auto cells = GeneratePopulation(PopulationSpec::Default());
  REQUIRE(cells.size() == 66);
  int batch1 = 0;
  for (const auto& c : cells) {
    CHECK_FALSE(HasErrors(ValidateCell(c)));
    CHECK(c.n_rc() == 3);
    batch1 += c.batch_id == cells.front().batch_id;
  }
  CHECK(batch1 == 33);
  CHECK(GeneratePopulation(PopulationSpec::Default()) == cells);

  PopulationSpec flat = PopulationSpec::Default(4);
  flat.cov = 0.0;
  const auto same = GeneratePopulation(flat);
  REQUIRE(same.size() == 8);
  for (int i = 1; i < 4; ++i) {
    CHECK(same[i].tau_maps == same[0].tau_maps);
    CHECK(same[i].capacity_coulombs == same[0].capacity_coulombs);
    CHECK(same[4 + i].c_maps == same[4].c_maps);
  }

  PopulationSpec bad = PopulationSpec::Default();
  bad.cov = -0.1;
  CHECK_THROWS_AS(GeneratePopulation(bad), Error);
  CHECK_THROWS_AS(PopulationSpec::Default(33, 3960.0, 4), Error);

  // Batch 1 needs more control effort at low SOC.
  auto mean_kappa = [&](const std::string& batch) {
    double total = 0.0;
    for (const auto& c : cells) {
      if (c.batch_id == batch) total += ConditionNumber(EquilibriumCtrb(c, 0.1).entries);
    }
    return total;
  };
  CHECK(mean_kappa(cells.front().batch_id) > mean_kappa(cells.back().batch_id));
}

TEST_CASE("csv round trip") {
  CHECK(std::stod(FormatDouble(0.1)) == 0.1);
  CHECK(std::stod(FormatDouble(1.0 / 3.0)) == 1.0 / 3.0);

  const std::vector<ConditionProfile> profiles{
      KappaProfile(TwoStateScenarioCell(10.0, "A"), SocGrid(0.1, 0.5, 0.1))};
  const CsvTable table = ProfileTable(profiles);
  CHECK(table.header == std::vector<std::string>{"cell_id", "soc", "kappa", "log10_kappa"});
  CHECK(table.rows.size() == 5);
  const std::string text = ToCsvString(table);
  CHECK(ParseCsv(text) == table);
  CHECK(ToCsvString(ParseCsv(text)) == text);
  CHECK_THROWS_AS(ParseCsv("a,b\n1\n"), Error);

  TempDir dir("csv");
  WriteCsv(dir / "t.csv", table);
  CHECK(ReadCsv(dir / "t.csv") == table);
  CHECK(Slurp(dir / "t.csv") == text);
}

TEST_CASE("cli exit codes") {
  TempDir dir("exit");
  CHECK(Run({}).code == kExitUsageError);
  CHECK(Run({"no-such-command"}).code == kExitUsageError);
  CHECK(Run({"analyze-kappa"}).code == kExitUsageError);
  CHECK(Run({"gen-population", "--n-rc", "7", "-o", dir / "p.json"}).code == kExitUsageError);
  CHECK(Run({"analyze-kappa", "-p", dir / "missing.json"}).code == kExitDataError);

  std::ofstream(dir / "garbage.json") << "not json";
  const CliRun bad = Run({"analyze-kappa", "-p", dir / "garbage.json"});
  CHECK(bad.code == kExitDataError);
  CHECK_FALSE(bad.err.empty());

  const CliRun scenario = Run({"scenario-3-2"});
  CHECK(scenario.code == kExitOk);
  CHECK(scenario.out.find("4.36e+04") != std::string::npos);
  CHECK(scenario.out.find("8.64e+05") != std::string::npos);
  CHECK(scenario.out.find("completed") != std::string::npos);
}

TEST_CASE("cli pipeline") {
  TempDir dir("pipeline");
  const std::string pop = dir / "pop.json";
  REQUIRE(Run({"gen-population", "-o", pop}).code == kExitOk);
  REQUIRE(LoadPopulation(pop).size() == 66);

  SUBCASE("analyze-kappa") {
    REQUIRE(Run({"analyze-kappa", "-p", pop, "--profile-out", dir / "profile.csv", "--stats-out",
                 dir / "stats.csv", "--log-of-mean-out", dir / "logmean.csv"})
                .code == kExitOk);
    const CsvTable profile = ReadCsv(dir / "profile.csv");
    const CsvTable stats = ReadCsv(dir / "stats.csv");
    CHECK(profile.rows.size() == 66 * 91);
    CHECK(stats.rows.size() == 2 * 91);
    CHECK(stats.header ==
          std::vector<std::string>{"batch_id", "soc", "mean_log10_kappa", "std_log10_kappa"});
    CHECK(ReadCsv(dir / "logmean.csv").rows.size() == 2 * 91);
    bool spread = false;
    for (const auto& row : stats.rows) spread |= std::stod(row[3]) > 0.0;
    CHECK(spread);
    CHECK(ToCsvString(profile) == Slurp(dir / "profile.csv"));
  }

  SUBCASE("sensitivity") {
    REQUIRE(Run({"sensitivity", "-p", pop, "--target", "Q", "--target", "tau2", "--grid-step",
                 "0.1", "--eol", "-o", dir / "sens.csv"})
                .code == kExitOk);
    const CsvTable sens = ReadCsv(dir / "sens.csv");
    CHECK(sens.header == std::vector<std::string>{"cell_id", "target", "soc", "s_theta"});
    CHECK(sens.rows.size() == 66 * 2 * 10);
    CHECK(Run({"sensitivity", "-p", pop, "--target", "C1", "-o", dir / "s2.csv"}).code ==
          kExitUsageError);
  }

  SUBCASE("age") {
    REQUIRE(Run({"age", "-p", pop, "-o", dir / "aged.json", "--factors-out", dir / "f.csv"})
                .code == kExitOk);
    const auto aged = LoadPopulation(dir / "aged.json");
    int n_aged = 0;
    for (const auto& c : aged) n_aged += IsAged(c);
    CHECK(n_aged == 32);
    CHECK(ReadCsv(dir / "f.csv").rows.size() == 32);
    CHECK(Run({"age", "-p", pop, "--aged-count", "67", "-o", dir / "x.json"}).code !=
          kExitOk);
  }

  SUBCASE("simulate-cccv") {
    REQUIRE(Run({"gen-population", "--n-per-batch", "2", "-o", dir / "small.json"}).code ==
            kExitOk);
    REQUIRE(Run({"simulate-cccv", "-p", dir / "small.json", "--trajectory-out",
                 dir / "traj.csv", "--summary-out", dir / "sum.csv"})
                .code == kExitOk);
    const CsvTable summary = ReadCsv(dir / "sum.csv");
    CHECK(summary.rows.size() == 4);
    CHECK(summary.header ==
          std::vector<std::string>{"cell_id", "t_cv_start_s", "t_complete_s", "terminated_by"});
    CHECK(ReadCsv(dir / "traj.csv").rows.size() > 4);
  }

  SUBCASE("design-packs") {
    REQUIRE(Run({"design-packs", "-p", pop, "--n-designs", "200", "--table-out",
                 dir / "table.csv", "--scatter-out", dir / "scatter.csv"})
                .code == kExitOk);
    const CsvTable scatter = ReadCsv(dir / "scatter.csv");
    CHECK(scatter.rows.size() == 200);
    int cap = 0, kap = 0;
    for (const auto& row : scatter.rows) {
      cap += row[3] == "1";
      kap += row[4] == "1";
    }
    CHECK(cap == 1);
    CHECK(kap == 1);
    CHECK(ReadCsv(dir / "table.csv").rows.size() == 200);
  }
}

TEST_CASE("seeded subcommands are deterministic") {
  TempDir dir("determinism");
  for (const char* run : {"1", "2"}) {
    const std::string r = run;
    REQUIRE(Run({"gen-population", "--seed", "5", "--n-per-batch", "6", "-o",
                 dir / ("pop" + r + ".json")})
                .code == kExitOk);
    REQUIRE(Run({"age", "-p", dir / "pop1.json", "--aged-count", "5", "--seed", "3", "-o",
                 dir / ("aged" + r + ".json"), "--factors-out", dir / ("f" + r + ".csv")})
                .code == kExitOk);
    REQUIRE(Run({"design-packs", "-p", dir / "pop1.json", "--n-designs", "300", "--seed", "7",
                 "--table-out", dir / ("t" + r + ".csv"), "--scatter-out",
                 dir / ("s" + r + ".csv")})
                .code == kExitOk);
  }
  for (const char* stem : {"pop", "aged"}) {
    CHECK(Slurp(dir / (std::string(stem) + "1.json")) ==
          Slurp(dir / (std::string(stem) + "2.json")));
  }
  for (const char* stem : {"f", "t", "s"}) {
    CHECK(Slurp(dir / (std::string(stem) + "1.csv")) ==
          Slurp(dir / (std::string(stem) + "2.csv")));
  }
  CHECK(Slurp(dir / "pop1.json").size() > 100);
}

}  // namespace
}  // namespace battctrl
