#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "counterfactual.hpp"
#include "engine.hpp"
#include "records.hpp"
#include "synth.hpp"

namespace chargeaudit {

struct ConfigPaths {
  std::string catalog;
  std::string dmf;
  std::string weights;
  std::string disposition;

  /// catalog.csv, dmf.json, weights.json and disposition.json under `dir`.
  static ConfigPaths in_dir(const std::string& dir);
};

struct LoadedConfig {
  ConfigPaths paths;
  EngineConfig engine;
  DispositionPolicy policy;
};

LoadedConfig load_config(const ConfigPaths& paths, const CatalogOptions* overrides = nullptr);

struct RunReport {
  std::vector<std::pair<std::string, long long>> counts;  // in reporting order
  std::vector<RowError> row_errors;
  std::vector<std::string> outputs;  // file names written, relative to the output directory
  bool empty_result = false;
  std::string message;

  void count(const std::string& name, long long value) { counts.emplace_back(name, value); }
  std::optional<long long> get(const std::string& name) const;
};

/// Scores every PSA row. Sub-scores come from the record unless
/// `from_factors`, in which case FTA/NCA/NVCA are computed from the weights.
RunReport run_score(const std::string& psa_path, const LoadedConfig& config,
                    const std::string& out_dir, bool from_factors);

struct AuditRunOptions {
  std::string psa_path;
  std::string court_path;
  std::string out_dir;
  bool sensitivity = false;
  GroupRule group_rule = GroupRule::AnyB;
  BookingSource booking_source = BookingSource::CourtRecords;
};

RunReport run_audit(const AuditRunOptions& options, const LoadedConfig& config);

/// Agreement of a re-run of the engine with the recorded PSA columns.
/// `court_path` may be empty.
RunReport run_validate(const std::string& psa_path, const std::string& court_path,
                       const LoadedConfig& config, const std::string& out_dir);

RunReport run_dedupe(const std::string& psa_path, const LoadedConfig& config,
                     const std::string& out_dir);

RunReport run_link(const std::string& psa_path, const std::string& court_path,
                   const LoadedConfig& config, const std::string& out_dir);

RunReport run_consistency(const std::string& court_path, const LoadedConfig& config,
                          const std::string& out_dir);

RunReport run_simulate(const GeneratorConfig& generator, const LoadedConfig& config,
                       const std::string& out_dir);

/// Column-by-column description of every input and output file.
std::string schema_text();

}  // namespace chargeaudit
