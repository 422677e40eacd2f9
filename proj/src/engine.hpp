#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "catalog.hpp"
#include "charge.hpp"

namespace chargeaudit {

// Ordinal supervision recommendation; numeric value is the rank.
enum class SupervisionLevel : int {
  OrNas = 1,
  OrMinimum = 2,
  SfpdpAcm = 3,
  ReleaseNotRecommended = 4,
};

constexpr int rank(SupervisionLevel l) { return static_cast<int>(l); }
std::string_view to_label(SupervisionLevel l);
/// Accepts the labels ("OR-NAS", "SFPDP-ACM", ...) case-insensitively, or a rank 1-4.
std::optional<SupervisionLevel> parse_level(std::string_view text);
SupervisionLevel level_from_rank(int r);

struct RiskFactors {
  std::optional<int> age_at_arrest;  // unknown age never counts as young
  bool pending_charge = false;
  bool prior_misdemeanor_conviction = false;
  bool prior_felony_conviction = false;
  bool prior_conviction = false;
  int prior_violent_convictions = 0;
  int ftas_past_two_years = 0;
  bool fta_older_than_two_years = false;
  bool prior_incarceration = false;
  bool current_offense_violent = false;

  /// Checks ranges and the prior-conviction implication.
  bool valid() const;
};

enum class Factor {
  YoungAtArrest,  // age_at_arrest <= WeightConfig::young_age_max
  PendingCharge,
  PriorMisdemeanorConviction,
  PriorFelonyConviction,
  PriorConviction,
  PriorViolentConvictions,
  FtasPastTwoYears,
  FtaOlderThanTwoYears,
  PriorIncarceration,
  CurrentOffenseViolent,
};

std::optional<Factor> parse_factor(std::string_view name);

struct WeightTerm {
  Factor factor = Factor::PendingCharge;
  int weight = 0;
  std::optional<int> cap;  // count factors are clamped to cap before weighting
};

struct ScaledPrediction {
  std::vector<WeightTerm> terms;
  // breakpoints[k] is the smallest raw score mapped to scaled score k+1.
  std::array<int, 6> breakpoints{};
  int max_raw = 0;
};

struct WeightConfig {
  std::string label;
  int young_age_max = 22;
  ScaledPrediction fta;
  ScaledPrediction nca;
  std::vector<WeightTerm> nvca;
  int nvca_threshold = 1;

  static WeightConfig from_json_text(std::string_view text, std::string_view source = "weights");
  static WeightConfig load(const std::string& path);
  /// Throws ConfigError when breakpoints are not monotone or miss reachable scores.
  void validate() const;
};

struct SubScores {
  int fta = 1;
  int nca = 1;
  bool nvca_flag = false;
  bool operator==(const SubScores&) const = default;
};

int raw_score(std::span<const WeightTerm> terms, const RiskFactors& f, int young_age_max);

/// Throws ConfigError when a raw score falls outside a breakpoint table.
SubScores compute_subscores(const RiskFactors& factors, const WeightConfig& weights);

bool compute_nvca_flag(const RiskFactors& factors, const WeightConfig& weights);

struct DmfCell {
  std::optional<SupervisionLevel> level;  // empty when the cell is missing
  bool split = false;
};

// FTA (rows) x NCA (columns) decision matrix, both indexed 1..6.
class DmfConfig {
 public:
  static DmfConfig from_json_text(std::string_view text, std::string_view source = "dmf");
  static DmfConfig load(const std::string& path);

  const DmfCell& cell(int fta, int nca) const;
  void set_cell(int fta, int nca, DmfCell c);
  bool complete() const;
  /// Split cells count as spanning SFPDP-ACM..Release Not Recommended.
  bool monotone() const;
  const std::string& label() const { return label_; }

 private:
  std::array<std::array<DmfCell, 6>, 6> cells_{};
  std::string label_;
};

struct RuleHit {
  bool fired = false;
  std::string reason;
};

struct PsaResult {
  SubScores subscores;
  bool exclusion = false;
  std::string exclusion_reason;
  bool bumpup = false;
  std::string bumpup_reason;
  SupervisionLevel initial = SupervisionLevel::OrNas;
  SupervisionLevel final_level = SupervisionLevel::OrNas;

  bool operator==(const PsaResult&) const = default;
};

/// Charges ordered by normalized text; reasons report the first hit in this order.
std::vector<ChargeCode> ordered_charges(std::span<const ChargeCode> charges);

RuleHit check_exclusion(std::span<const ChargeCode> charges, bool extradited, bool nvca_flag,
                        const ChargeCatalog& catalog);

SupervisionLevel initial_recommendation(const SubScores& s, std::span<const ChargeCode> charges,
                                        const DmfConfig& dmf, const ChargeCatalog& catalog);

RuleHit check_bumpup(std::span<const ChargeCode> charges, bool nvca_flag,
                     const ChargeCatalog& catalog);

/// Full four-step assessment. The initial recommendation and bump-up are
/// evaluated even under an exclusion so both charge sources stay comparable.
PsaResult assess(const SubScores& s, std::span<const ChargeCode> charges, bool extradited,
                 const DmfConfig& dmf, const ChargeCatalog& catalog);

struct EngineConfig {
  ChargeCatalog catalog;
  DmfConfig dmf;
  WeightConfig weights;
};

/// Assessment with FTA/NCA held fixed and the NVCA flag recomputed from
/// `factors`, whose current-offense-violence is re-derived from `charges`.
PsaResult assess_with_factors(int fta, int nca, RiskFactors factors,
                              std::span<const ChargeCode> charges, bool extradited,
                              const EngineConfig& engine);

}  // namespace chargeaudit
