#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdlp/config.hpp"
#include "rdlp/runner.hpp"

namespace rdlp {

// Results directory layout:
//   config.yaml           resolved experiment config (absolute paths)
//   index.csv             one line per run, grid order
//   runs/<run_id>.json    RunRecord without labels
//   labels/<run_id>.csv   global cluster id per dataset row (-1 = not clustered)
//   report.json           two-stage selection report

inline constexpr int kResultSchemaVersion = 1;

nlohmann::json to_json(const RunRecord& record);
/// Inverse of to_json; labels are left empty. Throws DataError.
RunRecord run_record_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SetQualScores& scores);
nlohmann::json to_json(const FinalReport& report);

/// Serialised run record, two-space indented, trailing newline.
std::string dump_record(const RunRecord& record);

void write_results(const std::filesystem::path& dir, const std::vector<RunRecord>& records,
                   const ExperimentConfig& config);
void write_report(const std::filesystem::path& dir, const FinalReport& report);

/// Records in index order, labels included.
std::vector<RunRecord> read_results(const std::filesystem::path& dir);
RunRecord read_run(const std::filesystem::path& dir, const std::string& run_id);
ExperimentConfig read_results_config(const std::filesystem::path& dir);

}  // namespace rdlp
