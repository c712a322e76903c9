#include "battctrl/population.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "battctrl/error.h"
#include "battctrl/rng.h"

namespace battctrl {

namespace {

using nlohmann::json;

std::vector<double> CoefficientsOf(const ParameterMap& map) {
  return {map.coefficients().begin(), map.coefficients().end()};
}

const json& Field(const json& object, const char* name) {
  if (!object.is_object() || !object.contains(name)) {
    throw Error(ErrorCode::kSchemaError, std::string("missing field '") + name + "'");
  }
  return object.at(name);
}

std::vector<double> NumberArray(const json& value, const std::string& what) {
  if (!value.is_array() || value.empty()) {
    throw Error(ErrorCode::kSchemaError, what + " must be a non-empty array");
  }
  std::vector<double> out;
  for (const auto& v : value) {
    if (!v.is_number()) throw Error(ErrorCode::kSchemaError, what + " holds a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<ParameterMap> MapArray(const json& value, const std::string& what, Unit unit) {
  if (!value.is_array()) throw Error(ErrorCode::kSchemaError, what + " must be an array");
  std::vector<ParameterMap> maps;
  for (std::size_t i = 0; i < value.size(); ++i) {
    maps.emplace_back(NumberArray(value[i], what + "[" + std::to_string(i) + "]"), unit);
  }
  return maps;
}

std::string Label(const json& value, const char* name) {
  const json& field = Field(value, name);
  if (field.is_string()) return field.get<std::string>();
  if (field.is_number_integer()) return std::to_string(field.get<long long>());
  throw Error(ErrorCode::kSchemaError, std::string(name) + " must be a string");
}

}  // namespace

json CellToJson(const CellParameters& cell) {
  json tau = json::array();
  json c = json::array();
  for (const auto& m : cell.tau_maps) tau.push_back(CoefficientsOf(m));
  for (const auto& m : cell.c_maps) c.push_back(CoefficientsOf(m));
  return json{{"cell_id", cell.cell_id},
              {"batch_id", cell.batch_id},
              {"capacity_coulombs", cell.capacity_coulombs},
              {"n_rc", cell.n_rc()},
              {"tau_coeffs", tau},
              {"c_coeffs", c},
              {"r_coeffs", CoefficientsOf(cell.r_map)},
              {"ocv_coeffs", CoefficientsOf(cell.ocv_map)}};
}

CellParameters CellFromJson(const json& object) {
  CellParameters cell;
  cell.cell_id = Label(object, "cell_id");
  cell.batch_id = Label(object, "batch_id");
  const json& capacity = Field(object, "capacity_coulombs");
  if (!capacity.is_number()) {
    throw Error(ErrorCode::kSchemaError, "capacity_coulombs must be a number");
  }
  cell.capacity_coulombs = capacity.get<double>();
  const json& n_rc = Field(object, "n_rc");
  if (!n_rc.is_number_integer()) throw Error(ErrorCode::kSchemaError, "n_rc must be an integer");

  try {
    cell.tau_maps = MapArray(Field(object, "tau_coeffs"), "tau_coeffs", Unit::kSeconds);
    cell.c_maps = MapArray(Field(object, "c_coeffs"), "c_coeffs", Unit::kFarads);
    cell.r_map = ParameterMap(NumberArray(Field(object, "r_coeffs"), "r_coeffs"), Unit::kOhms);
    cell.ocv_map =
        ParameterMap(NumberArray(Field(object, "ocv_coeffs"), "ocv_coeffs"), Unit::kVolts);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchemaError) throw;
    throw Error(ErrorCode::kSchemaError, e.what());
  }
  if (n_rc.get<long long>() != cell.n_rc() || cell.c_maps.size() != cell.tau_maps.size()) {
    throw Error(ErrorCode::kSchemaError,
                "cell '" + cell.cell_id + "': n_rc disagrees with the map lists");
  }
  return cell;
}

std::string PopulationToJsonString(const std::vector<CellParameters>& cells) {
  json array = json::array();
  for (const auto& cell : cells) array.push_back(CellToJson(cell));
  return array.dump(2) + "\n";
}

std::vector<CellParameters> ParsePopulation(const std::string& text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!document.is_array()) {
    throw Error(ErrorCode::kSchemaError, "population file must hold a JSON array");
  }
  std::vector<CellParameters> cells;
  for (std::size_t i = 0; i < document.size(); ++i) {
    try {
      cells.push_back(CellFromJson(document[i]));
    } catch (const Error& e) {
      throw Error(e.code(), "entry " + std::to_string(i) + ": " + e.what());
    }
    const auto report = ValidateCell(cells.back());
    if (HasErrors(report)) {
      std::string message = "cell '" + cells.back().cell_id + "':";
      for (const auto& v : report) {
        if (!v.warning_only) message += " " + v.message + ";";
      }
      throw Error(ErrorCode::kValidationError, message);
    }
  }
  return cells;
}

void SavePopulation(const std::filesystem::path& path,
                    const std::vector<CellParameters>& cells) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << PopulationToJsonString(cells);
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

std::vector<CellParameters> LoadPopulation(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParsePopulation(buffer.str());
}

PopulationSpec PopulationSpec::Default(int n_per_batch, double capacity_coulombs,
                                       int n_rc) {
  if (n_rc < 1 || n_rc > 3) {
    throw Error(ErrorCode::kInvalidArgument, "default population supports 1 to 3 RC pairs");
  }
  BatchNominal batch1{
      "batch1",
      n_per_batch,
      capacity_coulombs,
      {{14.0, -12.0, 8.0, -1.0}, {70.0, -40.0, 25.0, -4.0}, {290.0, -150.0, 80.0, -10.0}},
      {{2000.0, 300.0, -200.0, 50.0},
       {9000.0, 1500.0, -800.0, 200.0},
       {30000.0, 4000.0, -2000.0, 500.0}},
      {0.025, -0.01, 0.008, -0.001},
      {3.2, 0.35, -0.25, 0.08},
  };
  BatchNominal batch2{
      "batch2",
      n_per_batch,
      capacity_coulombs,
      {{8.0, 4.0, -2.0, 0.5}, {40.0, 10.0, 5.0, -1.0}, {160.0, 40.0, 10.0, -2.0}},
      {{1800.0, 250.0, -150.0, 40.0},
       {8000.0, 1200.0, -600.0, 150.0},
       {26000.0, 3500.0, -1800.0, 400.0}},
      {0.022, -0.008, 0.006, -0.001},
      {3.22, 0.3, -0.2, 0.07},
  };
  for (BatchNominal* b : {&batch1, &batch2}) {
    b->tau_coeffs.resize(n_rc);
    b->c_coeffs.resize(n_rc);
  }
  return PopulationSpec{{batch1, batch2}, 0.03, 1};
}

namespace {
CellParameters NominalCell(const BatchNominal& batch) {
  CellParameters cell;
  cell.capacity_coulombs = batch.capacity_coulombs;
  for (const auto& c : batch.tau_coeffs) cell.tau_maps.emplace_back(c, Unit::kSeconds);
  for (const auto& c : batch.c_coeffs) cell.c_maps.emplace_back(c, Unit::kFarads);
  cell.r_map = ParameterMap(batch.r_coeffs, Unit::kOhms);
  cell.ocv_map = ParameterMap(batch.ocv_coeffs, Unit::kVolts);
  cell.batch_id = batch.batch_id;
  cell.cell_id = batch.batch_id + "-nominal";
  return cell;
}
}  // namespace

void PopulationSpec::Validate() const {
  if (!(cov >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "cov must be >= 0");
  for (const auto& batch : batches) {
    if (batch.n_cells < 0) throw Error(ErrorCode::kInvalidArgument, "negative batch size");
    if (HasErrors(ValidateCell(NominalCell(batch)))) {
      throw Error(ErrorCode::kInvalidArgument,
                  "nominal maps of " + batch.batch_id + " fail validation");
    }
  }
}

std::vector<CellParameters> GeneratePopulation(const PopulationSpec& spec) {
  spec.Validate();
  SeededRng rng(spec.seed);
  constexpr int kMaxAttempts = 100;

  std::vector<CellParameters> cells;
  for (const auto& batch : spec.batches) {
    const CellParameters nominal = NominalCell(batch);
    for (int c = 0; c < batch.n_cells; ++c) {
      auto jitter = [&](double value) { return value * (1.0 + spec.cov * rng.Normal()); };
      auto jitter_map = [&](const ParameterMap& map) {
        std::vector<double> coeffs = CoefficientsOf(map);
        for (double& x : coeffs) x = jitter(x);
        return ParameterMap(std::move(coeffs), map.unit());
      };
      bool accepted = false;
      for (int attempt = 0; attempt < kMaxAttempts && !accepted; ++attempt) {
        CellParameters cell = nominal;
        char id[64];
        std::snprintf(id, sizeof(id), "%s-%02d", batch.batch_id.c_str(), c + 1);
        cell.cell_id = id;
        cell.capacity_coulombs = jitter(nominal.capacity_coulombs);
        for (auto& m : cell.tau_maps) m = jitter_map(m);
        for (auto& m : cell.c_maps) m = jitter_map(m);
        cell.r_map = jitter_map(cell.r_map);
        cell.ocv_map = jitter_map(cell.ocv_map);
        if (!HasErrors(ValidateCell(cell))) {
          cells.push_back(std::move(cell));
          accepted = true;
        }
      }
      if (!accepted) {
        throw Error(ErrorCode::kGenerationFailed,
                    "no valid draw for cell " + std::to_string(c + 1) + " of " +
                        batch.batch_id + " after 100 attempts");
      }
    }
  }
  return cells;
}

}  // namespace battctrl
