#include "records.hpp"

#include <charconv>
#include <fstream>
#include <unordered_map>

#include "errors.hpp"

namespace chargeaudit {

const std::vector<std::string> kPsaColumns = {
    "record_id", "sfid", "name", "dob", "arrest_date", "psa_date", "fta", "nca", "nvca",
    "booking_charges", "recorded_exclusion", "recorded_bumpup", "recorded_recommendation",
    "extradited", "age_at_arrest", "pending_charge", "prior_misdemeanor_conviction",
    "prior_felony_conviction", "prior_conviction", "prior_violent_convictions",
    "ftas_past_two_years", "fta_older_than_two_years", "prior_incarceration"};

const std::vector<std::string> kPsaRequiredColumns = {
    "record_id", "sfid", "arrest_date", "psa_date", "fta", "nca", "nvca", "booking_charges"};

const std::vector<std::string> kCourtColumns = {
    "court_number", "sfid", "name", "dob", "arrest_date", "race", "charge", "stage", "disposition"};

const std::vector<std::string> kCourtRequiredColumns = {
    "court_number", "sfid", "arrest_date", "charge", "disposition"};

namespace {

// Thrown inside row parsing; converted to a RowError.
struct RowProblem {
  std::string message;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<int> opt_int(std::string_view field, std::string_view column) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  int v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw RowProblem{std::string(column) + ": expected an integer, got '" + std::string(field) + "'"};
  }
  return v;
}

std::optional<Date> opt_date(std::string_view field, std::string_view column) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  auto d = parse_date(field);
  if (!d) {
    throw RowProblem{std::string(column) + ": expected YYYY-MM-DD, got '" + std::string(field) + "'"};
  }
  return d;
}

std::optional<bool> opt_bool(std::string_view field, std::string_view column) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  auto b = parse_bool_field(field);
  if (!b) {
    throw RowProblem{std::string(column) + ": expected true/false, got '" + std::string(field) + "'"};
  }
  return b;
}

std::vector<ChargeCode> charge_list(std::string_view field, const ChargeCatalog& catalog) {
  std::vector<ChargeCode> out;
  for (const auto& item : split_charge_list(field)) {
    try {
      out.push_back(catalog.parse(item));
    } catch (const ParseError& e) {
      throw RowProblem{e.what()};
    }
  }
  return out;
}

std::string opt_to_string(const std::optional<int>& v) {
  return v ? std::to_string(*v) : std::string();
}

std::string opt_to_string(const std::optional<bool>& v) {
  return v ? format_bool(*v) : std::string();
}

std::string opt_to_string(const std::optional<Date>& v) {
  return v ? format_date(*v) : std::string();
}

}  // namespace

std::string format_bool(bool b) { return b ? "true" : "false"; }

std::optional<bool> parse_bool_field(std::string_view s) {
  std::string t;
  for (char c : trim(s)) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "true" || t == "1" || t == "yes" || t == "y" || t == "t") return true;
  if (t == "false" || t == "0" || t == "no" || t == "n" || t == "f") return false;
  return std::nullopt;
}

bool PsaRecord::complete() const {
  return !sfid.empty() && arrest_date && psa_date && fta && nca && nvca;
}

SubScores PsaRecord::subscores() const {
  return SubScores{fta.value_or(0), nca.value_or(0), nvca.value_or(false)};
}

std::string_view to_string(Race r) {
  switch (r) {
    case Race::B: return "B";
    case Race::C: return "C";
    case Race::F: return "F";
    case Race::H: return "H";
    case Race::I: return "I";
    case Race::J: return "J";
    case Race::O: return "O";
    case Race::U: return "U";
    case Race::W: return "W";
    case Race::Missing: return "";
  }
  return "";
}

std::optional<Race> parse_race(std::string_view text) {
  text = trim(text);
  if (text.empty() || text == "NA") return Race::Missing;
  if (text.size() != 1) return std::nullopt;
  switch (std::toupper(static_cast<unsigned char>(text[0]))) {
    case 'B': return Race::B;
    case 'C': return Race::C;
    case 'F': return Race::F;
    case 'H': return Race::H;
    case 'I': return Race::I;
    case 'J': return Race::J;
    case 'O': return Race::O;
    case 'U': return Race::U;
    case 'W': return Race::W;
  }
  return std::nullopt;
}

bool same_offense(const ChargeCode& a, const ChargeCode& b) {
  if (a.statute != b.statute || a.subdivisions != b.subdivisions) return false;
  if (a.derivative != b.derivative || a.prefix != b.prefix) return false;
  if (a.body != CodeBody::Unspecified && b.body != CodeBody::Unspecified &&
      a.body_text != b.body_text) {
    return false;
  }
  return true;
}

std::vector<ChargeCode> CourtCase::booking_charges() const {
  std::vector<ChargeCode> out;
  for (const auto& c : charges) {
    if (c.booked) out.push_back(c.code);
  }
  return out;
}

std::vector<ChargeCode> CourtCase::filed_charges() const {
  std::vector<ChargeCode> out;
  for (const auto& c : charges) {
    if (c.filed) out.push_back(c.code);
  }
  return out;
}

bool CourtCase::contains_offense(const ChargeCode& code) const {
  for (const auto& c : charges) {
    if (same_offense(c.code, code)) return true;
  }
  return false;
}

Loaded<PsaRecord> read_psa_records(const csv::Table& table, std::string_view source,
                                   const ChargeCatalog& catalog) {
  table.require(kPsaRequiredColumns, source);
  Loaded<PsaRecord> out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    auto get = [&](std::string_view col) { return table.get(i, col); };
    try {
      PsaRecord r;
      r.source_line = table.line(i);
      r.record_id = std::string(trim(get("record_id")));
      r.sfid = std::string(trim(get("sfid")));
      r.name = std::string(get("name"));
      r.dob = opt_date(get("dob"), "dob");
      r.arrest_date = opt_date(get("arrest_date"), "arrest_date");
      r.psa_date = opt_date(get("psa_date"), "psa_date");
      r.fta = opt_int(get("fta"), "fta");
      r.nca = opt_int(get("nca"), "nca");
      r.nvca = opt_bool(get("nvca"), "nvca");
      r.booking_charges = charge_list(get("booking_charges"), catalog);
      r.recorded_exclusion = opt_bool(get("recorded_exclusion"), "recorded_exclusion");
      r.recorded_bumpup = opt_bool(get("recorded_bumpup"), "recorded_bumpup");
      if (auto rec = trim(get("recorded_recommendation")); !rec.empty()) {
        r.recorded_recommendation = parse_level(rec);
        if (!r.recorded_recommendation) {
          throw RowProblem{"recorded_recommendation: unknown level '" + std::string(rec) + "'"};
        }
      }
      r.extradited = opt_bool(get("extradited"), "extradited").value_or(false);
      auto& f = r.factors;
      f.age_at_arrest = opt_int(get("age_at_arrest"), "age_at_arrest");
      f.pending_charge = opt_bool(get("pending_charge"), "pending_charge").value_or(false);
      f.prior_misdemeanor_conviction =
          opt_bool(get("prior_misdemeanor_conviction"), "prior_misdemeanor_conviction").value_or(false);
      f.prior_felony_conviction =
          opt_bool(get("prior_felony_conviction"), "prior_felony_conviction").value_or(false);
      f.prior_conviction = opt_bool(get("prior_conviction"), "prior_conviction").value_or(false) ||
                           f.prior_misdemeanor_conviction || f.prior_felony_conviction;
      f.prior_violent_convictions =
          opt_int(get("prior_violent_convictions"), "prior_violent_convictions").value_or(0);
      f.ftas_past_two_years = opt_int(get("ftas_past_two_years"), "ftas_past_two_years").value_or(0);
      f.fta_older_than_two_years =
          opt_bool(get("fta_older_than_two_years"), "fta_older_than_two_years").value_or(false);
      f.prior_incarceration = opt_bool(get("prior_incarceration"), "prior_incarceration").value_or(false);
      if (!f.valid()) throw RowProblem{"risk factors out of range"};
      if (r.record_id.empty()) throw RowProblem{"record_id is empty"};
      out.items.push_back(std::move(r));
    } catch (const RowProblem& p) {
      out.errors.push_back({std::string(source), table.line(i), p.message});
    }
  }
  return out;
}

Loaded<PsaRecord> read_psa_file(const std::string& path, const ChargeCatalog& catalog) {
  return read_psa_records(csv::Table::read_file(path), path, catalog);
}

Loaded<CourtCase> read_court_cases(const csv::Table& table, std::string_view source,
                                   const ChargeCatalog& catalog) {
  Loaded<CourtCase> out;
  if (table.header().empty() && table.size() == 0) return out;
  table.require(kCourtRequiredColumns, source);

  std::unordered_map<std::string, std::size_t> by_number;
  for (std::size_t i = 0; i < table.size(); ++i) {
    auto get = [&](std::string_view col) { return table.get(i, col); };
    try {
      const std::string number(trim(get("court_number")));
      const std::string sfid(trim(get("sfid")));
      if (number.empty()) throw RowProblem{"court_number is empty"};
      if (sfid.empty()) throw RowProblem{"sfid is empty"};
      auto arrest = opt_date(get("arrest_date"), "arrest_date");
      if (!arrest) throw RowProblem{"arrest_date is empty"};
      auto race = parse_race(get("race"));
      if (!race) throw RowProblem{"race: unknown designation '" + std::string(get("race")) + "'"};

      CourtCharge charge;
      try {
        charge.code = catalog.parse(get("charge"));
      } catch (const ParseError& e) {
        throw RowProblem{e.what()};
      }
      const auto stage = std::string(trim(get("stage")));
      if (stage.empty() || stage == "booking" || stage == "B") {
        charge.booked = true;
      } else if (stage == "filed" || stage == "F") {
        charge.booked = false;
        charge.filed = true;
      } else if (stage == "both") {
        charge.booked = charge.filed = true;
      } else {
        throw RowProblem{"stage: expected booking, filed or both, got '" + stage + "'"};
      }
      charge.disposition = opt_int(get("disposition"), "disposition");

      auto [it, inserted] = by_number.emplace(number, out.items.size());
      if (inserted) {
        CourtCase c;
        c.court_number = number;
        c.sfid = sfid;
        c.name = std::string(get("name"));
        c.dob = opt_date(get("dob"), "dob");
        c.arrest_date = *arrest;
        c.race = *race;
        out.items.push_back(std::move(c));
      } else {
        const CourtCase& c = out.items[it->second];
        if (c.sfid != sfid || c.arrest_date != *arrest) {
          throw RowProblem{"case " + number + " disagrees with its earlier rows on sfid or arrest_date"};
        }
      }
      out.items[it->second].charges.push_back(std::move(charge));
    } catch (const RowProblem& p) {
      out.errors.push_back({std::string(source), table.line(i), p.message});
    }
  }
  return out;
}

Loaded<CourtCase> read_court_file(const std::string& path, const ChargeCatalog& catalog) {
  return read_court_cases(csv::Table::read_file(path), path, catalog);
}

void write_psa_records(std::ostream& out, const std::vector<PsaRecord>& records) {
  csv::write_row(out, kPsaColumns);
  for (const auto& r : records) {
    const auto& f = r.factors;
    csv::write_row(out, {
        r.record_id, r.sfid, r.name, opt_to_string(r.dob), opt_to_string(r.arrest_date),
        opt_to_string(r.psa_date), opt_to_string(r.fta), opt_to_string(r.nca),
        opt_to_string(r.nvca), join_charge_list(r.booking_charges),
        opt_to_string(r.recorded_exclusion), opt_to_string(r.recorded_bumpup),
        r.recorded_recommendation ? std::string(to_label(*r.recorded_recommendation)) : std::string(),
        format_bool(r.extradited), opt_to_string(f.age_at_arrest), format_bool(f.pending_charge),
        format_bool(f.prior_misdemeanor_conviction), format_bool(f.prior_felony_conviction),
        format_bool(f.prior_conviction), std::to_string(f.prior_violent_convictions),
        std::to_string(f.ftas_past_two_years), format_bool(f.fta_older_than_two_years),
        format_bool(f.prior_incarceration)});
  }
}

void write_court_cases(std::ostream& out, const std::vector<CourtCase>& cases) {
  csv::write_row(out, kCourtColumns);
  for (const auto& c : cases) {
    for (const auto& ch : c.charges) {
      const char* stage = ch.booked && ch.filed ? "both" : (ch.filed ? "filed" : "booking");
      csv::write_row(out, {c.court_number, c.sfid, c.name, opt_to_string(c.dob),
                           format_date(c.arrest_date), std::string(to_string(c.race)),
                           normalize_charge_text(ch.code.raw.empty() ? ch.code.canonical() : ch.code.raw),
                           stage, opt_to_string(ch.disposition)});
    }
  }
}

}  // namespace chargeaudit
