#include "catalog.hpp"

#include <algorithm>
#include <fstream>

#include "csv.hpp"
#include "errors.hpp"

namespace chargeaudit {

namespace {

constexpr int kMaxDerivativeDepth = 4;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<bool> parse_bool(std::string_view s) {
  auto t = lower(s);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ChargeCategory c) {
  switch (c) {
    case ChargeCategory::Violent: return "violent";
    case ChargeCategory::Exclusion: return "exclusion";
    case ChargeCategory::Bumpup: return "bumpup";
  }
  return "violent";
}

bool pattern_matches(const ChargeCode& p, const ChargeCode& c) {
  if (p.statute != c.statute || p.derivative != c.derivative) return false;
  if (p.derivative == Derivative::None && p.prefix != c.prefix) return false;
  if (p.subdivisions.size() > c.subdivisions.size() ||
      !std::equal(p.subdivisions.begin(), p.subdivisions.end(), c.subdivisions.begin())) {
    return false;
  }
  if (p.body != CodeBody::Unspecified && c.body != CodeBody::Unspecified &&
      p.body_text != c.body_text) {
    return false;
  }
  if (p.charge_class != ChargeClass::Unspecified && p.charge_class != c.charge_class) {
    return false;
  }
  if (p.degree && c.degree && p.degree != c.degree) return false;
  return true;
}

ChargeCatalog ChargeCatalog::from_csv(std::istream& in, std::string_view source) {
  const auto table = csv::Table::read(in);
  table.require({"category", "pattern"}, source);

  ChargeCatalog cat;
  auto where = [&](std::size_t i) {
    return std::string(source) + ":" + std::to_string(table.line(i));
  };

  // Prefix and option rows first so that patterns parse with the full table.
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto category = lower(table.get(i, "category"));
    const auto pattern = table.get(i, "pattern");
    if (category == "prefix") {
      auto form = parse_derivative(table.get(i, "derivative"));
      if (!form || *form == Derivative::None) {
        throw ConfigError(where(i) + ": prefix row needs a derivative form");
      }
      cat.prefixes_[normalize_charge_text(pattern)] = *form;
    } else if (category == "option") {
      auto value = parse_bool(table.get(i, "policy"));
      if (!value) throw ConfigError(where(i) + ": option value must be true or false");
      if (pattern == "violent_includes_derivatives") {
        cat.options_.violent_includes_derivatives = *value;
      } else {
        throw ConfigError(where(i) + ": unknown option '" + std::string(pattern) + "'");
      }
    }
  }

  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto category = lower(table.get(i, "category"));
    if (category == "prefix" || category == "option") continue;
    ChargeCode code;
    try {
      code = cat.parse(table.get(i, "pattern"));
    } catch (const ParseError& e) {
      throw ConfigError(where(i) + ": " + e.what());
    }

    if (category == "alias") {
      auto form = parse_derivative(table.get(i, "derivative"));
      if (!form || *form == Derivative::None) {
        throw ConfigError(where(i) + ": alias row needs a derivative form");
      }
      DerivativeAlias alias{code, *form, {}};
      try {
        alias.base = cat.parse(table.get(i, "base"));
      } catch (const ParseError& e) {
        throw ConfigError(where(i) + ": alias base: " + e.what());
      }
      cat.aliases_.push_back(std::move(alias));
      continue;
    }

    CatalogPattern entry;
    if (category == "violent") {
      entry.category = ChargeCategory::Violent;
    } else if (category == "exclusion") {
      entry.category = ChargeCategory::Exclusion;
    } else if (category == "bumpup") {
      entry.category = ChargeCategory::Bumpup;
    } else {
      throw ConfigError(where(i) + ": unknown category '" + category + "'");
    }
    if (entry.category != ChargeCategory::Violent &&
        (code.derivative != Derivative::None || !code.prefix.empty())) {
      throw ConfigError(where(i) +
                        ": exclusion and bump-up patterns must name base offenses; "
                        "derivative forms are implied");
    }
    const auto policy = lower(table.get(i, "policy"));
    if (!policy.empty()) {
      if (entry.category != ChargeCategory::Bumpup || policy.rfind("ambiguous", 0) != 0) {
        throw ConfigError(where(i) + ": policy '" + policy + "' not valid here");
      }
      if (policy == "ambiguous" || policy == "ambiguous=false") {
        entry.ambiguous_policy = false;
      } else if (policy == "ambiguous=true") {
        entry.ambiguous_policy = true;
      } else {
        throw ConfigError(where(i) + ": malformed policy '" + policy + "'");
      }
    }
    entry.pattern = std::move(code);
    entry.offense = std::string(table.get(i, "offense"));
    cat.patterns_.push_back(std::move(entry));
  }
  return cat;
}

ChargeCatalog ChargeCatalog::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open catalog '" + path + "'");
  return from_csv(in, path);
}

ChargeCode ChargeCatalog::parse(std::string_view text) const {
  return parse_charge_code(text, prefixes_);
}

std::optional<ChargeCode> ChargeCatalog::base_offense(const ChargeCode& charge) const {
  if (charge.derivative != Derivative::None) {
    ChargeCode base = charge;
    base.derivative = Derivative::None;
    base.prefix.clear();
    return base;
  }
  for (const auto& alias : aliases_) {
    if (!pattern_matches(alias.pattern, charge)) continue;
    ChargeCode base = alias.base;
    if (base.charge_class == ChargeClass::Unspecified) base.charge_class = charge.charge_class;
    if (!base.degree) base.degree = charge.degree;
    return base;
  }
  return std::nullopt;
}

bool ChargeCatalog::ambiguous_bumps(const CatalogPattern& p) const {
  if (!p.ambiguous_policy) return true;
  return options_.ambiguous_override.value_or(*p.ambiguous_policy);
}

bool ChargeCatalog::matches_category(ChargeCategory category, const ChargeCode& charge) const {
  for (const auto& p : patterns_) {
    if (p.category != category) continue;
    if (category == ChargeCategory::Bumpup && !ambiguous_bumps(p)) continue;
    if (pattern_matches(p.pattern, charge)) return true;
  }
  return false;
}

bool ChargeCatalog::member(ChargeCategory category, const ChargeCode& charge, int depth) const {
  if (matches_category(category, charge)) return true;
  if (depth >= kMaxDerivativeDepth) return false;
  if (category == ChargeCategory::Violent && !options_.violent_includes_derivatives) return false;
  auto base = base_offense(charge);
  return base && member(category, *base, depth + 1);
}

bool ChargeCatalog::is_violent(const ChargeCode& charge) const {
  return member(ChargeCategory::Violent, charge, 0);
}

bool ChargeCatalog::is_exclusion_charge(const ChargeCode& charge) const {
  return member(ChargeCategory::Exclusion, charge, 0);
}

bool ChargeCatalog::is_bumpup_charge(const ChargeCode& charge) const {
  return member(ChargeCategory::Bumpup, charge, 0);
}

}  // namespace chargeaudit
