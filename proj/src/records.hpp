#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "catalog.hpp"
#include "charge.hpp"
#include "csv.hpp"
#include "dates.hpp"
#include "engine.hpp"

namespace chargeaudit {

// One administered assessment as transcribed from the form. Optional fields
// are blank in the source; records missing required inputs are filtered
// before linkage.
struct PsaRecord {
  std::string record_id;
  std::string sfid;
  std::string name;
  std::optional<Date> dob;
  std::optional<Date> arrest_date;
  std::optional<Date> psa_date;
  std::optional<int> fta;
  std::optional<int> nca;
  std::optional<bool> nvca;
  std::vector<ChargeCode> booking_charges;
  std::optional<bool> recorded_exclusion;
  std::optional<bool> recorded_bumpup;
  std::optional<SupervisionLevel> recorded_recommendation;
  bool extradited = false;
  RiskFactors factors;
  std::size_t source_line = 0;

  /// Arrest date, administration date and all three predictions present.
  bool complete() const;
  SubScores subscores() const;
};

enum class Race { B, C, F, H, I, J, O, U, W, Missing };

std::string_view to_string(Race r);
std::optional<Race> parse_race(std::string_view text);

struct CourtCharge {
  ChargeCode code;
  bool booked = true;
  bool filed = false;
  std::optional<int> disposition;  // empty while pending
};

struct CourtCase {
  std::string court_number;
  std::string sfid;
  std::string name;
  std::optional<Date> dob;
  Date arrest_date;
  Race race = Race::Missing;
  std::vector<CourtCharge> charges;

  std::vector<ChargeCode> booking_charges() const;
  std::vector<ChargeCode> filed_charges() const;
  /// True when any charge (booked or filed) is the same offense as `code`.
  bool contains_offense(const ChargeCode& code) const;
};

/// Same statute, subdivisions, derivative form and compatible code body;
/// charge class and degree are ignored.
bool same_offense(const ChargeCode& a, const ChargeCode& b);

struct RowError {
  std::string source;
  std::size_t line = 0;
  std::string message;
};

template <typename T>
struct Loaded {
  std::vector<T> items;
  std::vector<RowError> errors;
};

extern const std::vector<std::string> kPsaColumns;
extern const std::vector<std::string> kPsaRequiredColumns;
extern const std::vector<std::string> kCourtColumns;
extern const std::vector<std::string> kCourtRequiredColumns;

/// Throws SchemaError when required columns are missing; malformed rows are
/// reported in `errors` and skipped.
Loaded<PsaRecord> read_psa_records(const csv::Table& table, std::string_view source,
                                   const ChargeCatalog& catalog);
Loaded<PsaRecord> read_psa_file(const std::string& path, const ChargeCatalog& catalog);

/// Rows are grouped into cases by court_number in order of first appearance.
Loaded<CourtCase> read_court_cases(const csv::Table& table, std::string_view source,
                                   const ChargeCatalog& catalog);
Loaded<CourtCase> read_court_file(const std::string& path, const ChargeCatalog& catalog);

void write_psa_records(std::ostream& out, const std::vector<PsaRecord>& records);
void write_court_cases(std::ostream& out, const std::vector<CourtCase>& cases);

std::string format_bool(bool b);
std::optional<bool> parse_bool_field(std::string_view s);

}  // namespace chargeaudit
