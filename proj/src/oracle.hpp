#pragma once

#include <span>

#include "catalog.hpp"
#include "engine.hpp"

// Straight-line re-implementation of the assessment used to cross-check the
// engine and to label synthetic data. It reads the same configuration
// objects but shares no rule logic with engine.cpp or the catalog lookups.
namespace chargeaudit::oracle {

bool violent(const ChargeCode& c, const ChargeCatalog& catalog);
bool exclusion_listed(const ChargeCode& c, const ChargeCatalog& catalog);
bool bumpup_listed(const ChargeCode& c, const ChargeCatalog& catalog);

bool nvca_flag(const RiskFactors& f, const WeightConfig& w);
SubScores subscores(const RiskFactors& f, const WeightConfig& w);

PsaResult assess(const SubScores& s, std::span<const ChargeCode> charges, bool extradited,
                 const DmfConfig& dmf, const ChargeCatalog& catalog);

PsaResult assess_with_factors(int fta, int nca, RiskFactors f, std::span<const ChargeCode> charges,
                              bool extradited, const EngineConfig& engine);

}  // namespace chargeaudit::oracle
