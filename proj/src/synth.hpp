#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "counterfactual.hpp"
#include "engine.hpp"
#include "records.hpp"

namespace chargeaudit {

// Rates are exact-count targets: each planted event occurs round(rate * base)
// times, where the base is the population the rate is measured against.
struct GeneratorConfig {
  int n_records = 2450;           // PSA rows ingested, duplicates included
  std::uint64_t seed = 1;
  double incomplete_rate = 0.026;   // of all rows
  double duplicate_rate = 0.176;    // of complete rows
  double unmatched_rate = 0.016;    // of unique complete records
  double disposed_rate = 0.883;     // of matched records
  double overbooking_rate = 0.40;   // of audited records: some component lost
  double affected_rate = 0.27;      // of audited records: final strictly higher at booking
  double plea_other_rate = 0.03;    // of audited records: plea to charges outside the case
  double companion_rate = 0.10;     // convictions recorded as code 0 next to a code 72
  double decoy_rate = 0.10;         // matched records with a second in-window case
  double extradited_rate = 0.01;
  double black_fraction = 0.45;
  double black_history_shift = 1.5;  // multiplier on prior-history probabilities
  double black_label_stability = 0.98;
  double other_label_stability = 0.75;
  std::string start_date = "2016-07-01";

  static GeneratorConfig from_json_text(std::string_view text, std::string_view source = "generator");
  static GeneratorConfig load(const std::string& path);
  /// Throws ConfigError on rates outside [0,1] or affected_rate > overbooking_rate.
  void validate() const;
  std::string to_json() const;
};

enum class TruthStatus { Audit, NotDisposed, Unmatched, Incomplete, Duplicate };
enum class Scenario { None, Clean, Affected, Saturated };

std::string_view to_string(TruthStatus s);
std::string_view to_string(Scenario s);

struct TruthRow {
  std::string record_id;
  std::string sfid;
  TruthStatus status = TruthStatus::Audit;
  std::string duplicate_of;
  std::string court_number;
  Scenario scenario = Scenario::None;
  bool plea_other_only = false;
  std::string group;  // "B" / "non-B" under the any-B rule
  std::optional<SupervisionLevel> booking_final;
  std::optional<SupervisionLevel> conviction_final;
  std::vector<ChargeCode> conviction_charges;
};

struct PlantedCounts {
  std::size_t rows = 0;
  std::size_t incomplete = 0;
  std::size_t duplicates = 0;
  std::size_t unique = 0;
  std::size_t unmatched = 0;
  std::size_t matched = 0;
  std::size_t disposed = 0;
  std::size_t affected = 0;
  std::size_t saturated = 0;
  std::size_t plea_other = 0;
};

struct SyntheticData {
  std::vector<PsaRecord> psa;
  std::vector<CourtCase> court;
  std::vector<TruthRow> truth;
  PlantedCounts planted;
};

/// Recorded PSA columns are labelled with the independent oracle.
SyntheticData generate(const GeneratorConfig& config, const EngineConfig& engine,
                       const DispositionPolicy& policy = {});

void write_truth(std::ostream& out, const std::vector<TruthRow>& truth);

/// psa.csv, court.csv and truth.csv in `dir` (created if needed).
void write_synthetic(const SyntheticData& data, const std::string& dir);

}  // namespace chargeaudit
