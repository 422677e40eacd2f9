#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "charge.hpp"

namespace chargeaudit {

enum class ChargeCategory { Violent, Exclusion, Bumpup };

std::string_view to_string(ChargeCategory c);

struct CatalogPattern {
  ChargeCategory category = ChargeCategory::Violent;
  ChargeCode pattern;
  std::string offense;
  // Set only for weapon-use patterns whose bump-up status is ambiguous;
  // the value is the documented default policy.
  std::optional<bool> ambiguous_policy;
};

// Maps a standalone statute onto a derivative form of another offense,
// e.g. solicitation-of-murder statute 653F(B) -> Solicitation of 187 PC.
struct DerivativeAlias {
  ChargeCode pattern;
  Derivative form = Derivative::None;
  ChargeCode base;
};

struct CatalogOptions {
  // Violent-list membership of a derivative charge follows its base offense.
  bool violent_includes_derivatives = false;
  // Replaces every per-pattern ambiguous weapon-use policy when set.
  std::optional<bool> ambiguous_override;
};

/// True when `charge` is an instance of `pattern`. Statute, subdivisions
/// (pattern subdivisions are a prefix), derivative form and prefix must agree.
/// Class must agree when the pattern states one. Code body and degree must
/// agree when both sides state them.
bool pattern_matches(const ChargeCode& pattern, const ChargeCode& charge);

// Violent, exclusion and bump-up charge lists plus derivative-form aliases.
// Immutable after load; concurrent reads need no synchronization.
class ChargeCatalog {
 public:
  ChargeCatalog() = default;

  // Columns: category,pattern,policy,derivative,base,offense,note
  static ChargeCatalog from_csv(std::istream& in, std::string_view source = "catalog");
  static ChargeCatalog load(const std::string& path);

  /// Parses with this catalog's prefix table.
  ChargeCode parse(std::string_view text) const;

  bool is_violent(const ChargeCode& charge) const;
  bool is_exclusion_charge(const ChargeCode& charge) const;
  bool is_bumpup_charge(const ChargeCode& charge) const;

  /// Base offense of a derivative charge (prefix form or alias), if any.
  std::optional<ChargeCode> base_offense(const ChargeCode& charge) const;

  /// Effective policy of an ambiguous weapon-use pattern.
  bool ambiguous_bumps(const CatalogPattern& p) const;

  void set_options(const CatalogOptions& options) { options_ = options; }
  const CatalogOptions& options() const { return options_; }
  const std::vector<CatalogPattern>& patterns() const { return patterns_; }
  const std::vector<DerivativeAlias>& aliases() const { return aliases_; }
  const PrefixTable& prefixes() const { return prefixes_; }

 private:
  bool matches_category(ChargeCategory category, const ChargeCode& charge) const;
  bool member(ChargeCategory category, const ChargeCode& charge, int depth) const;

  std::vector<CatalogPattern> patterns_;
  std::vector<DerivativeAlias> aliases_;
  PrefixTable prefixes_ = default_prefixes();
  CatalogOptions options_;
};

inline bool is_violent(const ChargeCode& c, const ChargeCatalog& catalog) {
  return catalog.is_violent(c);
}
inline bool is_exclusion_charge(const ChargeCode& c, const ChargeCatalog& catalog) {
  return catalog.is_exclusion_charge(c);
}
inline bool is_bumpup_charge(const ChargeCode& c, const ChargeCatalog& catalog) {
  return catalog.is_bumpup_charge(c);
}

}  // namespace chargeaudit
