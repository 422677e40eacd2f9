#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chargeaudit {

enum class CodeBody { Unspecified, PC, VC, HS, Other };

enum class ChargeClass { Unspecified, Felony, Misdemeanor };

// Inchoate or procedural wrapper around a base offense.
enum class Derivative { None, Attempt, Conspiracy, Solicitation, FailureToAppearOf };

std::string_view to_string(Derivative d);
std::optional<Derivative> parse_derivative(std::string_view text);

/// A parsed statute reference such as "187(A) PC F 1" or "664/288 (A) PC F".
struct ChargeCode {
  std::string statute;                    // "187", "273.5", "653F"
  std::vector<std::string> subdivisions;  // "(A)(1)" -> {"A", "1"}
  CodeBody body = CodeBody::Unspecified;
  std::string body_text;                  // "PC", or the literal for Other
  ChargeClass charge_class = ChargeClass::Unspecified;
  std::optional<int> degree;
  Derivative derivative = Derivative::None;
  std::string prefix;                     // statute before '/', e.g. "664"
  std::vector<std::string> trailing;      // unrecognized tokens, in order
  std::string raw;                        // text as ingested

  /// Canonical text form; parse_charge_code(canonical()) == *this.
  std::string canonical() const;

  /// Structural equality; `raw` is not compared.
  bool operator==(const ChargeCode& other) const;
};

// Maps a derivative prefix statute (e.g. "664") to the form it denotes.
using PrefixTable = std::map<std::string, Derivative, std::less<>>;

/// The prefix table every parser starts from: "664/" marks an attempt.
const PrefixTable& default_prefixes();

/// Text-level normalization: ASCII upper case, whitespace runs collapsed,
/// leading/trailing whitespace trimmed, no space before '(' or around '/'.
std::string normalize_charge_text(std::string_view text);

/// Throws ParseError when no leading statute number can be found.
ChargeCode parse_charge_code(std::string_view text,
                             const PrefixTable& prefixes = default_prefixes());

/// Splits a ';'-separated charge list field. Empty items are skipped.
std::vector<std::string> split_charge_list(std::string_view field);

std::string join_charge_list(const std::vector<ChargeCode>& charges);

}  // namespace chargeaudit
