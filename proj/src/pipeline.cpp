#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "errors.hpp"
#include "fileio.hpp"
#include "linkage.hpp"
#include "stats.hpp"

namespace chargeaudit {

using ordered_json = nlohmann::ordered_json;

ConfigPaths ConfigPaths::in_dir(const std::string& dir) {
  const std::filesystem::path base(dir);
  return {(base / "catalog.csv").string(), (base / "dmf.json").string(),
          (base / "weights.json").string(), (base / "disposition.json").string()};
}

LoadedConfig load_config(const ConfigPaths& paths, const CatalogOptions* overrides) {
  LoadedConfig c;
  c.paths = paths;
  c.engine.catalog = ChargeCatalog::load(paths.catalog);
  if (overrides) c.engine.catalog.set_options(*overrides);
  c.engine.dmf = DmfConfig::load(paths.dmf);
  c.engine.weights = WeightConfig::load(paths.weights);
  c.policy = DispositionPolicy::load(paths.disposition);
  return c;
}

std::optional<long long> RunReport::get(const std::string& name) const {
  for (const auto& [k, v] : counts) {
    if (k == name) return v;
  }
  return std::nullopt;
}

namespace {

class OutDir {
 public:
  OutDir(const std::string& dir, RunReport& report) : base_(dir), report_(report) {
    std::error_code ec;
    std::filesystem::create_directories(base_, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  }
  void write(const std::string& name, const std::string& content) {
    write_text_file((base_ / name).string(), content);
    report_.outputs.push_back(name);
  }

 private:
  std::filesystem::path base_;
  RunReport& report_;
};

std::string fixed(double v) {
  if (std::isnan(v)) return "";
  return fmt::format("{:.6f}", v);
}

std::string sci(const std::optional<double>& v) {
  if (!v || std::isnan(*v)) return "";
  return fmt::format("{:.6e}", *v);
}

std::string b(bool v) { return format_bool(v); }

std::string charges_text(const std::vector<ChargeCode>& c) { return join_charge_list(c); }

std::string level_label(SupervisionLevel l) { return std::string(to_label(l)); }

std::string errors_csv(const std::vector<RowError>& errors) {
  std::ostringstream out;
  csv::write_row(out, {"source", "line", "message"});
  for (const auto& e : errors) csv::write_row(out, {e.source, std::to_string(e.line), e.message});
  return out.str();
}

std::string matches_csv(const LinkageOutcome& link) {
  std::ostringstream out;
  csv::write_row(out, {"record_id", "sfid", "status", "candidates", "court_numbers", "note"});
  auto row = [&](const MatchResult& m) {
    std::string numbers;
    for (const auto& c : m.matched_cases) {
      if (!numbers.empty()) numbers += ";";
      numbers += c.court_number;
    }
    csv::write_row(out, {m.psa.record_id, m.psa.sfid, std::string(to_string(m.status)),
                         std::to_string(m.candidate_count), numbers, m.note});
  };
  for (const auto& m : link.matched) row(m);
  for (const auto& m : link.unresolved) row(m);
  return out.str();
}

std::string review_csv(const LinkageOutcome& link) {
  std::ostringstream out;
  csv::write_row(out, {"record_id", "sfid", "arrest_date", "psa_date", "booking_charges",
                       "candidates", "note"});
  for (const auto& m : link.unresolved) {
    csv::write_row(out, {m.psa.record_id, m.psa.sfid,
                         m.psa.arrest_date ? format_date(*m.psa.arrest_date) : "",
                         m.psa.psa_date ? format_date(*m.psa.psa_date) : "",
                         charges_text(m.psa.booking_charges), std::to_string(m.candidate_count),
                         m.note});
  }
  return out.str();
}

void count_linkage(RunReport& report, std::size_t rows, const LinkageOutcome& link) {
  report.count("psa_rows", static_cast<long long>(rows));
  report.count("incomplete", static_cast<long long>(link.incomplete.size()));
  report.count("duplicates", static_cast<long long>(link.duplicates.size()));
  report.count("unique", static_cast<long long>(link.matched.size() + link.unresolved.size()));
  report.count("unresolved", static_cast<long long>(link.unresolved.size()));
  report.count("matched", static_cast<long long>(link.matched.size()));
}

std::string pairs_csv(const std::vector<AuditPair>& pairs) {
  std::ostringstream out;
  csv::write_row(out, {"record_id", "sfid", "group", "court_numbers", "booking_charges",
                       "conviction_charges", "booking_exclusion", "booking_bumpup", "booking_nvca",
                       "booking_initial", "booking_final", "conviction_exclusion",
                       "conviction_bumpup", "conviction_nvca", "conviction_initial",
                       "conviction_final", "exclusion_lost", "bumpup_lost", "nvca_lost",
                       "recommendation_delta", "plea_other_only", "booking_exclusion_reason",
                       "booking_bumpup_reason", "conviction_exclusion_reason",
                       "conviction_bumpup_reason"});
  for (const auto& p : pairs) {
    std::string numbers;
    for (const auto& n : p.court_numbers) {
      if (!numbers.empty()) numbers += ";";
      numbers += n;
    }
    csv::write_row(out, {p.record_id,
                         p.sfid,
                         p.group,
                         numbers,
                         charges_text(p.booking_charges),
                         charges_text(p.conviction_charges),
                         b(p.booking.exclusion),
                         b(p.booking.bumpup),
                         b(p.booking.subscores.nvca_flag),
                         level_label(p.booking.initial),
                         level_label(p.booking.final_level),
                         b(p.conviction.exclusion),
                         b(p.conviction.bumpup),
                         b(p.conviction.subscores.nvca_flag),
                         level_label(p.conviction.initial),
                         level_label(p.conviction.final_level),
                         b(p.deltas.exclusion_lost),
                         b(p.deltas.bumpup_lost),
                         b(p.deltas.nvca_lost),
                         std::to_string(p.deltas.recommendation_delta),
                         b(p.plea_other_only),
                         p.booking.exclusion_reason,
                         p.booking.bumpup_reason,
                         p.conviction.exclusion_reason,
                         p.conviction.bumpup_reason});
  }
  return out.str();
}

const ComponentTest* find_test(const RateTable& t, const std::string& component) {
  for (const auto& c : t.tests) {
    if (c.component == component) return &c;
  }
  return nullptr;
}

std::string rates_csv(const std::vector<RateTable>& tables) {
  std::ostringstream out;
  csv::write_row(out, {"group", "charges", "n", "exclusion", "bumpup", "nvca",
                       "mean_recommendation", "exclusion_sig", "bumpup_sig", "nvca_sig",
                       "recommendation_sig"});
  for (const auto& t : tables) {
    auto row = [&](const std::string& label, const SourceRates& r) {
      csv::write_row(out, {t.group, label, std::to_string(r.n), fixed(r.exclusion),
                           fixed(r.bumpup), fixed(r.nvca), fixed(r.mean_recommendation), "", "",
                           "", ""});
    };
    row("Booking", t.booking);
    row("Conviction", t.conviction);
    auto mark = [&](const std::string& component) {
      const ComponentTest* c = find_test(t, component);
      if (!c || !c->p_value) return std::string("na");
      return std::string(c->significant ? "*" : "") + (c->bonferroni_significant ? "+" : "");
    };
    csv::write_row(out, {t.group, "Difference", std::to_string(t.booking.n),
                         fixed(t.booking.exclusion - t.conviction.exclusion),
                         fixed(t.booking.bumpup - t.conviction.bumpup),
                         fixed(t.booking.nvca - t.conviction.nvca),
                         fixed(t.booking.mean_recommendation - t.conviction.mean_recommendation),
                         mark("exclusion"), mark("bumpup"), mark("nvca"), mark("recommendation")});
  }
  return out.str();
}

std::string rates_header_only() { return rates_csv({}); }

std::string tests_csv(const std::vector<RateTable>& tables) {
  std::ostringstream out;
  csv::write_row(out, {"group", "component", "test", "statistic", "p_value", "significant",
                       "bonferroni_significant", "note"});
  for (const auto& t : tables) {
    for (const auto& c : t.tests) {
      csv::write_row(out, {t.group, c.component, c.test, sci(c.statistic), sci(c.p_value),
                           b(c.significant), b(c.bonferroni_significant), c.note});
    }
  }
  return out.str();
}

std::string affected_csv(const std::vector<AffectedTable>& tables) {
  std::ostringstream out;
  csv::write_row(out, {"group", "n", "exclusion", "bumpup", "nvca", "recommendation"});
  for (const auto& t : tables) {
    csv::write_row(out, {t.group, std::to_string(t.n), fixed(t.exclusion), fixed(t.bumpup),
                         fixed(t.nvca), fixed(t.recommendation)});
  }
  return out.str();
}

std::string distribution_csv(const std::vector<Histogram>& hs) {
  std::ostringstream out;
  csv::write_row(out, {"group", "level", "rank", "count", "fraction", "empty_group"});
  for (const auto& h : hs) {
    for (int r = 1; r <= 4; ++r) {
      csv::write_row(out, {h.group, level_label(level_from_rank(r)), std::to_string(r),
                           std::to_string(h.counts[static_cast<std::size_t>(r - 1)]),
                           fixed(h.fraction(r)), b(h.empty)});
    }
  }
  return out.str();
}

ordered_json tests_json(const std::vector<RateTable>& tables) {
  ordered_json arr = ordered_json::array();
  for (const auto& t : tables) {
    ordered_json g;
    g["group"] = t.group;
    g["n"] = t.booking.n;
    for (const auto& c : t.tests) {
      ordered_json j;
      j["test"] = c.test;
      j["statistic"] = c.statistic ? ordered_json(*c.statistic) : ordered_json(nullptr);
      j["p_value"] = c.p_value ? ordered_json(*c.p_value) : ordered_json(nullptr);
      j["significant"] = c.significant;
      j["bonferroni_significant"] = c.bonferroni_significant;
      if (!c.note.empty()) j["note"] = c.note;
      g[c.component] = j;
    }
    arr.push_back(g);
  }
  return arr;
}

ordered_json affected_json(const std::vector<AffectedTable>& tables) {
  ordered_json arr = ordered_json::array();
  for (const auto& t : tables) {
    arr.push_back({{"group", t.group},
                   {"n", t.n},
                   {"exclusion", t.exclusion},
                   {"bumpup", t.bumpup},
                   {"nvca", t.nvca},
                   {"recommendation", t.recommendation}});
  }
  return arr;
}

struct TableSet {
  std::vector<RateTable> rates;
  std::vector<AffectedTable> affected;
};

// Empty tables when there are no pairs.
TableSet build_tables(const std::vector<AuditPair>& pairs, bool by_group) {
  TableSet t;
  if (pairs.empty()) return t;
  t.rates = rate_tables(pairs, by_group);
  t.affected = affected_tables(pairs, by_group);
  return t;
}

std::string excluded_csv(const LinkageOutcome& link, const AuditBuild& build) {
  std::ostringstream out;
  csv::write_row(out, {"record_id", "sfid", "reason"});
  for (const auto& r : link.incomplete) csv::write_row(out, {r.record_id, r.sfid, "incomplete"});
  for (const auto& r : link.duplicates) csv::write_row(out, {r.record_id, r.sfid, "duplicate"});
  for (const auto& m : link.unresolved) {
    csv::write_row(out, {m.psa.record_id, m.psa.sfid, "unresolved"});
  }
  for (const auto& m : build.not_disposed) {
    csv::write_row(out, {m.psa.record_id, m.psa.sfid, "not_disposed"});
  }
  return out.str();
}

}  // namespace

RunReport run_score(const std::string& psa_path, const LoadedConfig& config,
                    const std::string& out_dir, bool from_factors) {
  RunReport report;
  auto loaded = read_psa_file(psa_path, config.engine.catalog);
  report.row_errors = loaded.errors;

  std::ostringstream out;
  csv::write_row(out, {"record_id", "fta", "nca", "nvca", "exclusion", "exclusion_reason",
                       "initial", "bumpup", "bumpup_reason", "final"});
  std::size_t scored = 0;
  for (const auto& r : loaded.items) {
    try {
      SubScores s;
      if (from_factors) {
        s = compute_subscores(r.factors, config.engine.weights);
        RiskFactors f = r.factors;
        f.current_offense_violent =
            std::any_of(r.booking_charges.begin(), r.booking_charges.end(),
                        [&](const ChargeCode& c) { return config.engine.catalog.is_violent(c); });
        s.nvca_flag = compute_nvca_flag(f, config.engine.weights);
      } else {
        if (!r.fta || !r.nca || !r.nvca) throw SchemaError("missing fta/nca/nvca");
        s = {*r.fta, *r.nca, *r.nvca};
      }
      const PsaResult res =
          assess(s, r.booking_charges, r.extradited, config.engine.dmf, config.engine.catalog);
      csv::write_row(out, {r.record_id, std::to_string(res.subscores.fta),
                           std::to_string(res.subscores.nca), b(res.subscores.nvca_flag),
                           b(res.exclusion), res.exclusion_reason, level_label(res.initial),
                           b(res.bumpup), res.bumpup_reason, level_label(res.final_level)});
      ++scored;
    } catch (const Error& e) {
      report.row_errors.push_back({psa_path, r.source_line, r.record_id + ": " + e.what()});
    }
  }
  report.count("psa_rows", static_cast<long long>(loaded.items.size() + loaded.errors.size()));
  report.count("scored", static_cast<long long>(scored));
  report.count("row_errors", static_cast<long long>(report.row_errors.size()));
  report.empty_result = scored == 0;

  OutDir dir(out_dir, report);
  dir.write("scores.csv", out.str());
  dir.write("errors.csv", errors_csv(report.row_errors));
  return report;
}

RunReport run_audit(const AuditRunOptions& o, const LoadedConfig& config) {
  RunReport report;
  auto psa = read_psa_file(o.psa_path, config.engine.catalog);
  auto court = read_court_file(o.court_path, config.engine.catalog);
  report.row_errors = psa.errors;
  report.row_errors.insert(report.row_errors.end(), court.errors.begin(), court.errors.end());

  const std::size_t rows = psa.items.size() + psa.errors.size();
  auto link = link_records(std::move(psa.items), court.items);

  AuditOptions ao;
  ao.policy = config.policy;
  ao.booking_source = o.booking_source;
  ao.group_rule = o.group_rule;
  const auto groups = group_labels(court.items);
  auto build = build_audit_pairs(link.matched, config.engine, ao, groups);
  report.row_errors.insert(report.row_errors.end(), build.errors.begin(), build.errors.end());

  const bool by_group = o.group_rule == GroupRule::AnyB;
  const TableSet tables = build_tables(build.pairs, by_group);
  std::vector<std::string> hist_groups = {"all"};
  if (by_group) hist_groups = {"all", "B", "non-B"};
  const auto hist = initial_distribution(build.pairs, hist_groups);

  count_linkage(report, rows, link);
  report.count("court_cases", static_cast<long long>(court.items.size()));
  report.count("not_disposed", static_cast<long long>(build.not_disposed.size()));
  report.count("audited", static_cast<long long>(build.pairs.size()));
  long long plea = 0;
  for (const auto& p : build.pairs) plea += p.plea_other_only;
  report.count("plea_other_only", plea);
  report.count("row_errors", static_cast<long long>(report.row_errors.size()));
  report.empty_result = build.pairs.empty();
  if (report.empty_result) report.message = "no audit pairs: nothing matched and disposed";

  ordered_json summary;
  summary["counts"] = ordered_json::object();
  for (const auto& [k, v] : report.counts) summary["counts"][k] = v;
  summary["group_rule"] = std::string(to_string(o.group_rule));
  summary["booking_source"] = std::string(to_string(o.booking_source));
  summary["alpha"] = kDefaultAlpha;
  summary["tests"] = tests_json(tables.rates);
  summary["affected"] = affected_json(tables.affected);

  OutDir dir(o.out_dir, report);
  dir.write("audit_pairs.csv", pairs_csv(build.pairs));
  dir.write("rates.csv", tables.rates.empty() ? rates_header_only() : rates_csv(tables.rates));
  dir.write("tests.csv", tests_csv(tables.rates));
  dir.write("affected.csv", affected_csv(tables.affected));
  dir.write("initial_distribution.csv", distribution_csv(hist));
  dir.write("matches.csv", matches_csv(link));
  dir.write("review.csv", review_csv(link));
  dir.write("excluded.csv", excluded_csv(link, build));

  if (o.sensitivity) {
    const auto kept = sensitivity_subset(build.pairs);
    const TableSet st = build_tables(kept, by_group);
    dir.write("rates_sensitivity.csv", st.rates.empty() ? rates_header_only() : rates_csv(st.rates));
    dir.write("tests_sensitivity.csv", tests_csv(st.rates));
    dir.write("affected_sensitivity.csv", affected_csv(st.affected));
    summary["sensitivity"] = {{"audited", kept.size()},
                              {"tests", tests_json(st.rates)},
                              {"affected", affected_json(st.affected)}};
  }
  dir.write("summary.json", summary.dump(2) + "\n");
  dir.write("errors.csv", errors_csv(report.row_errors));
  return report;
}

RunReport run_validate(const std::string& psa_path, const std::string& court_path,
                       const LoadedConfig& config, const std::string& out_dir) {
  RunReport report;
  auto psa = read_psa_file(psa_path, config.engine.catalog);
  report.row_errors = psa.errors;
  const std::size_t rows = psa.items.size() + psa.errors.size();
  auto complete = filter_complete(std::move(psa.items));
  auto dedup = deduplicate(std::move(complete.kept));

  struct Column {
    std::string name;
    std::vector<int> reproduced, recorded;
    std::vector<bool> mask;
  };
  std::vector<Column> cols = {{"fta", {}, {}, {}},       {"nca", {}, {}, {}},
                              {"nvca", {}, {}, {}},      {"exclusion", {}, {}, {}},
                              {"bumpup", {}, {}, {}},    {"recommendation", {}, {}, {}}};
  std::ostringstream mismatches;
  csv::write_row(mismatches, {"record_id", "component", "reproduced", "recorded"});

  auto add = [&](Column& c, const PsaRecord& r, std::optional<int> repro, std::optional<int> rec,
                 bool in_mask) {
    c.reproduced.push_back(repro.value_or(-1));
    c.recorded.push_back(rec.value_or(-1));
    const bool use = in_mask && repro && rec;
    c.mask.push_back(use);
    if (use && *repro != *rec) {
      csv::write_row(mismatches, {r.record_id, c.name, std::to_string(*repro), std::to_string(*rec)});
    }
  };

  for (const auto& r : dedup.unique) {
    try {
      const SubScores computed = compute_subscores(r.factors, config.engine.weights);
      RiskFactors f = r.factors;
      f.current_offense_violent =
          std::any_of(r.booking_charges.begin(), r.booking_charges.end(),
                      [&](const ChargeCode& c) { return config.engine.catalog.is_violent(c); });
      const bool nvca = compute_nvca_flag(f, config.engine.weights);
      const SubScores recorded{*r.fta, *r.nca, *r.nvca};
      const PsaResult res =
          assess(recorded, r.booking_charges, r.extradited, config.engine.dmf, config.engine.catalog);
      auto opt_int = [](const std::optional<bool>& v) -> std::optional<int> {
        if (!v) return std::nullopt;
        return *v ? 1 : 0;
      };
      std::optional<int> rec_level;
      if (r.recorded_recommendation) rec_level = rank(*r.recorded_recommendation);
      add(cols[0], r, computed.fta, r.fta, true);
      add(cols[1], r, computed.nca, r.nca, true);
      add(cols[2], r, nvca ? 1 : 0, opt_int(r.nvca), true);
      add(cols[3], r, res.exclusion ? 1 : 0, opt_int(r.recorded_exclusion), true);
      // Bump-ups are compared only where the form shows no exclusion.
      add(cols[4], r, res.bumpup ? 1 : 0, opt_int(r.recorded_bumpup),
          r.recorded_exclusion.has_value() && !*r.recorded_exclusion);
      add(cols[5], r, rank(res.final_level), rec_level, true);
    } catch (const Error& e) {
      report.row_errors.push_back({psa_path, r.source_line, r.record_id + ": " + e.what()});
    }
  }

  std::ostringstream table;
  csv::write_row(table, {"component", "compared", "agreed", "agreement_rate"});
  std::size_t compared_any = 0;
  for (const auto& c : cols) {
    std::size_t n = 0, agreed = 0;
    for (std::size_t i = 0; i < c.mask.size(); ++i) {
      if (!c.mask[i]) continue;
      ++n;
      agreed += c.reproduced[i] == c.recorded[i];
    }
    compared_any += n;
    std::string rate;
    if (n > 0) {
      auto m = std::make_unique<bool[]>(c.mask.size());
      for (std::size_t i = 0; i < c.mask.size(); ++i) m[i] = c.mask[i];
      rate = fixed(agreement_rate(c.reproduced, c.recorded,
                                  std::span<const bool>(m.get(), c.mask.size())));
    }
    csv::write_row(table, {c.name, std::to_string(n), std::to_string(agreed), rate});
  }

  report.count("psa_rows", static_cast<long long>(rows));
  report.count("incomplete", static_cast<long long>(complete.dropped.size()));
  report.count("duplicates", static_cast<long long>(dedup.duplicates.size()));
  report.count("validated", static_cast<long long>(dedup.unique.size()));
  if (!court_path.empty()) {
    auto court = read_court_file(court_path, config.engine.catalog);
    report.row_errors.insert(report.row_errors.end(), court.errors.begin(), court.errors.end());
    auto link = link_records(dedup.unique, court.items);
    report.count("matched", static_cast<long long>(link.matched.size()));
    report.count("unresolved", static_cast<long long>(link.unresolved.size()));
  }
  report.count("row_errors", static_cast<long long>(report.row_errors.size()));
  report.empty_result = compared_any == 0;

  OutDir dir(out_dir, report);
  dir.write("validation.csv", table.str());
  dir.write("mismatches.csv", mismatches.str());
  dir.write("errors.csv", errors_csv(report.row_errors));
  return report;
}

RunReport run_dedupe(const std::string& psa_path, const LoadedConfig& config,
                     const std::string& out_dir) {
  RunReport report;
  auto psa = read_psa_file(psa_path, config.engine.catalog);
  report.row_errors = psa.errors;
  const std::size_t rows = psa.items.size() + psa.errors.size();
  auto complete = filter_complete(std::move(psa.items));
  auto dedup = deduplicate(std::move(complete.kept));

  std::ostringstream unique, dropped;
  write_psa_records(unique, dedup.unique);
  csv::write_row(dropped, {"record_id", "sfid", "reason"});
  for (const auto& r : complete.dropped) csv::write_row(dropped, {r.record_id, r.sfid, "incomplete"});
  for (const auto& r : dedup.duplicates) csv::write_row(dropped, {r.record_id, r.sfid, "duplicate"});

  report.count("psa_rows", static_cast<long long>(rows));
  report.count("incomplete", static_cast<long long>(complete.dropped.size()));
  report.count("duplicates", static_cast<long long>(dedup.duplicates.size()));
  report.count("unique", static_cast<long long>(dedup.unique.size()));
  report.count("row_errors", static_cast<long long>(report.row_errors.size()));
  report.empty_result = dedup.unique.empty();

  OutDir dir(out_dir, report);
  dir.write("psa_unique.csv", unique.str());
  dir.write("dropped.csv", dropped.str());
  dir.write("errors.csv", errors_csv(report.row_errors));
  return report;
}

RunReport run_link(const std::string& psa_path, const std::string& court_path,
                   const LoadedConfig& config, const std::string& out_dir) {
  RunReport report;
  auto psa = read_psa_file(psa_path, config.engine.catalog);
  auto court = read_court_file(court_path, config.engine.catalog);
  report.row_errors = psa.errors;
  report.row_errors.insert(report.row_errors.end(), court.errors.begin(), court.errors.end());
  const std::size_t rows = psa.items.size() + psa.errors.size();
  auto link = link_records(std::move(psa.items), court.items);

  count_linkage(report, rows, link);
  report.count("court_cases", static_cast<long long>(court.items.size()));
  report.count("row_errors", static_cast<long long>(report.row_errors.size()));
  report.empty_result = link.matched.empty();

  OutDir dir(out_dir, report);
  dir.write("matches.csv", matches_csv(link));
  dir.write("review.csv", review_csv(link));
  dir.write("errors.csv", errors_csv(report.row_errors));
  return report;
}

RunReport run_consistency(const std::string& court_path, const LoadedConfig& config,
                          const std::string& out_dir) {
  RunReport report;
  auto court = read_court_file(court_path, config.engine.catalog);
  report.row_errors = court.errors;
  const auto m = race_consistency(court.items);

  std::ostringstream out;
  csv::Row header = {"race", "individuals"};
  for (Race r : m.categories) header.push_back(std::string(to_string(r)));
  csv::write_row(out, header);
  for (std::size_t i = 0; i < m.categories.size(); ++i) {
    csv::Row row = {std::string(to_string(m.categories[i])), std::to_string(m.row_individuals[i])};
    for (double v : m.values[i]) row.push_back(fixed(v));
    csv::write_row(out, row);
  }

  report.count("court_cases", static_cast<long long>(court.items.size()));
  report.count("individuals_with_repeat_records", static_cast<long long>(m.individuals));
  report.count("row_errors", static_cast<long long>(report.row_errors.size()));
  report.empty_result = m.individuals == 0;

  OutDir dir(out_dir, report);
  dir.write("consistency.csv", out.str());
  dir.write("errors.csv", errors_csv(report.row_errors));
  return report;
}

RunReport run_simulate(const GeneratorConfig& generator, const LoadedConfig& config,
                       const std::string& out_dir) {
  RunReport report;
  const SyntheticData data = generate(generator, config.engine, config.policy);
  write_synthetic(data, out_dir);
  report.outputs = {"psa.csv", "court.csv", "truth.csv"};
  const PlantedCounts& n = data.planted;
  report.count("psa_rows", static_cast<long long>(n.rows));
  report.count("incomplete", static_cast<long long>(n.incomplete));
  report.count("duplicates", static_cast<long long>(n.duplicates));
  report.count("unique", static_cast<long long>(n.unique));
  report.count("unmatched", static_cast<long long>(n.unmatched));
  report.count("matched", static_cast<long long>(n.matched));
  report.count("disposed", static_cast<long long>(n.disposed));
  report.count("affected", static_cast<long long>(n.affected));
  report.count("saturated", static_cast<long long>(n.saturated));
  report.count("plea_other_only", static_cast<long long>(n.plea_other));
  report.count("court_cases", static_cast<long long>(data.court.size()));
  OutDir dir(out_dir, report);
  dir.write("generator.json", generator.to_json() + "\n");
  report.empty_result = n.rows == 0;
  return report;
}

std::string schema_text() {
  return R"(psa.csv  (one row per administered assessment)
  record_id                    required  unique row identifier
  sfid                         required  person identifier shared with the court file
  name, dob                    optional  dob as YYYY-MM-DD
  arrest_date, psa_date        required  YYYY-MM-DD
  fta, nca                     required  scaled sub-scores 1-6
  nvca                         required  true/false (also 1/0, yes/no)
  booking_charges              required  ';'-separated charge codes, e.g. 187(A) PC F;240 PC M
  recorded_exclusion           optional  true/false as printed on the form
  recorded_bumpup              optional  true/false as printed on the form
  recorded_recommendation      optional  OR-NAS | OR-Minimum | SFPDP-ACM | Release Not Recommended (or 1-4)
  extradited                   optional  true/false, default false
  age_at_arrest                optional  integer years; blank never counts as young
  pending_charge, prior_misdemeanor_conviction, prior_felony_conviction, prior_conviction,
  fta_older_than_two_years, prior_incarceration
                               optional  true/false, default false
  prior_violent_convictions, ftas_past_two_years
                               optional  non-negative counts, default 0

court.csv  (one row per charge; rows sharing court_number form one case)
  court_number                 required
  sfid                         required  must agree across a case's rows
  name, dob                    optional
  arrest_date                  required  YYYY-MM-DD, must agree across a case's rows
  race                         optional  B C F H I J O U W, blank or NA when missing
  charge                       required  charge code
  stage                        optional  booking | filed | both (default booking)
  disposition                  required column; blank while pending, else an integer code

truth.csv  (written by simulate)
  record_id, sfid, status (audit|not_disposed|unmatched|incomplete|duplicate), duplicate_of,
  court_number, scenario (clean|affected|saturated), plea_other_only, group,
  booking_final, conviction_final, conviction_charges

score:        scores.csv  record_id, fta, nca, nvca, exclusion, exclusion_reason, initial,
                          bumpup, bumpup_reason, final
audit:        audit_pairs.csv  one row per linked, fully disposed record with both results
              rates.csv        group, charges (Booking|Conviction|Difference), n, exclusion,
                               bumpup, nvca, mean_recommendation, *_sig
                               (* p < 0.001, + significant after Bonferroni, na untestable)
              tests.csv        group, component, test, statistic, p_value, significant,
                               bonferroni_significant, note
              affected.csv     group, n, exclusion, bumpup, nvca, recommendation
              initial_distribution.csv  group, level, rank, count, fraction, empty_group
              matches.csv, review.csv, excluded.csv, summary.json, errors.csv
              *_sensitivity.csv with --sensitivity (plea-to-other-case-only records removed)
validate:     validation.csv   component, compared, agreed, agreement_rate
              mismatches.csv   record_id, component, reproduced, recorded
dedupe:       psa_unique.csv, dropped.csv
link:         matches.csv, review.csv
consistency:  consistency.csv  race, individuals, then one percent column per race label
errors.csv:   source, line, message
)";
}

}  // namespace chargeaudit
