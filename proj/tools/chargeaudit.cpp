// chargeaudit: command-line front end over the C interface.

#include <chargeaudit/chargeaudit.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef CHARGEAUDIT_DEFAULT_CONFIG_DIR
#define CHARGEAUDIT_DEFAULT_CONFIG_DIR "data"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode {
  kExitOk = 0,
  kExitFailure = 1,  // usage, configuration, I/O
  kExitSchema = 2,
  kExitPartial = 3,  // some rows failed, the rest were processed
  kExitEmpty = 4,
};

constexpr std::size_t kShownRowErrors = 20;

struct Invocation {
  std::string subcommand;
  std::string config_dir;
  std::string ambiguous_bumpup = "catalog";  // catalog | on | off
  std::string psa;
  std::string court;
  std::string out;
  bool from_factors = false;
  bool sensitivity = false;
  std::string group_by = "race";
  std::string booking_source = "court";
  std::string generator_file;  // simulate only, as given
  std::optional<long long> seed;
  std::optional<long long> n;
  json generator;  // effective generator settings, filled after simulate
};

struct EngineDeleter {
  void operator()(ca_engine* e) const { ca_engine_free(e); }
};
struct ReportDeleter {
  void operator()(ca_report* r) const { ca_report_free(r); }
};
using EnginePtr = std::unique_ptr<ca_engine, EngineDeleter>;
using ReportPtr = std::unique_ptr<ca_report, ReportDeleter>;

class CliFailure : public std::runtime_error {
 public:
  CliFailure(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

int exit_code_for(ca_status s) {
  switch (s) {
    case CA_OK: return kExitOk;
    case CA_ERR_SCHEMA:
    case CA_ERR_PARSE: return kExitSchema;
    case CA_ERR_EMPTY_INPUT: return kExitEmpty;
    default: return kExitFailure;
  }
}

void check(ca_status s) {
  if (s != CA_OK) {
    throw CliFailure(exit_code_for(s),
                     std::string(ca_status_name(s)) + ": " + ca_last_error_message());
  }
}

std::string absolute(const std::string& p) {
  if (p.empty()) return p;
  return fs::weakly_canonical(fs::absolute(p)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure(kExitFailure, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json config_block(const Invocation& inv) {
  const fs::path dir(inv.config_dir);
  return json{{"dir", inv.config_dir},
              {"catalog", (dir / "catalog.csv").string()},
              {"dmf", (dir / "dmf.json").string()},
              {"weights", (dir / "weights.json").string()},
              {"disposition", (dir / "disposition.json").string()},
              {"ambiguous_bumpup", inv.ambiguous_bumpup}};
}

json manifest_for(const Invocation& inv, const ca_report* report, int exit_code) {
  json m;
  m["tool"] = "chargeaudit";
  m["version"] = ca_version();
  m["subcommand"] = inv.subcommand;
  m["config"] = config_block(inv);
  json inputs = json::object();
  if (!inv.psa.empty()) inputs["psa"] = inv.psa;
  if (!inv.court.empty()) inputs["court"] = inv.court;
  if (!inv.generator_file.empty()) inputs["generator_config"] = inv.generator_file;
  m["inputs"] = inputs;
  m["out"] = inv.out;

  json opts = json::object();
  if (inv.subcommand == "score") opts["from_factors"] = inv.from_factors;
  if (inv.subcommand == "audit") {
    opts["sensitivity"] = inv.sensitivity;
    opts["group_by"] = inv.group_by;
    opts["booking_source"] = inv.booking_source;
  }
  m["options"] = opts;
  if (inv.subcommand == "simulate") {
    m["seed"] = inv.generator.value("seed", 0LL);
    m["generator"] = inv.generator;
  }

  json outputs = json::array();
  if (report != nullptr) {
    for (std::size_t i = 0; i < ca_report_output_size(report); ++i) {
      outputs.push_back(ca_report_output_at(report, i));
    }
  }
  m["outputs"] = outputs;
  m["exit_code"] = exit_code;
  return m;
}

Invocation from_manifest(const json& m) {
  Invocation inv;
  inv.subcommand = m.at("subcommand").get<std::string>();
  const json& cfg = m.at("config");
  inv.config_dir = cfg.at("dir").get<std::string>();
  inv.ambiguous_bumpup = cfg.value("ambiguous_bumpup", std::string("catalog"));
  const json& in = m.at("inputs");
  inv.psa = in.value("psa", std::string());
  inv.court = in.value("court", std::string());
  inv.generator_file = in.value("generator_config", std::string());
  inv.out = m.at("out").get<std::string>();
  const json& o = m.at("options");
  inv.from_factors = o.value("from_factors", false);
  inv.sensitivity = o.value("sensitivity", false);
  inv.group_by = o.value("group_by", std::string("race"));
  inv.booking_source = o.value("booking_source", std::string("court"));
  if (m.contains("generator")) inv.generator = m.at("generator");
  return inv;
}

EnginePtr load_engine(const Invocation& inv) {
  ca_engine_options opts{-1, -1};
  if (inv.ambiguous_bumpup == "on") opts.ambiguous_bumpup = 1;
  if (inv.ambiguous_bumpup == "off") opts.ambiguous_bumpup = 0;
  ca_engine* raw = nullptr;
  check(ca_engine_load(inv.config_dir.c_str(), &opts, &raw));
  return EnginePtr(raw);
}

// Settings passed to the generator: the manifest's full set on replay,
// otherwise the --config file overlaid with --seed and --n.
json generator_request(const Invocation& inv) {
  if (!inv.generator.is_null()) return inv.generator;
  json g = json::object();
  if (!inv.generator_file.empty()) {
    try {
      g = json::parse(slurp(inv.generator_file));
    } catch (const json::parse_error& e) {
      throw CliFailure(kExitFailure, inv.generator_file + ": " + e.what());
    }
  }
  if (inv.seed) g["seed"] = *inv.seed;
  if (inv.n) g["n_records"] = *inv.n;
  return g;
}

ReportPtr execute(Invocation& inv, const ca_engine* engine) {
  ca_report* raw = nullptr;
  const std::string& cmd = inv.subcommand;
  if (cmd == "score") {
    check(ca_run_score(engine, inv.psa.c_str(), inv.out.c_str(), inv.from_factors, &raw));
  } else if (cmd == "audit") {
    ca_audit_options o{};
    o.psa_path = inv.psa.c_str();
    o.court_path = inv.court.c_str();
    o.out_dir = inv.out.c_str();
    o.sensitivity = inv.sensitivity;
    o.group_by_race = inv.group_by == "race";
    o.booking_from_psa = inv.booking_source == "psa";
    check(ca_run_audit(engine, &o, &raw));
  } else if (cmd == "validate") {
    const char* court = inv.court.empty() ? nullptr : inv.court.c_str();
    check(ca_run_validate(engine, inv.psa.c_str(), court, inv.out.c_str(), &raw));
  } else if (cmd == "dedupe") {
    check(ca_run_dedupe(engine, inv.psa.c_str(), inv.out.c_str(), &raw));
  } else if (cmd == "link") {
    check(ca_run_link(engine, inv.psa.c_str(), inv.court.c_str(), inv.out.c_str(), &raw));
  } else if (cmd == "consistency") {
    check(ca_run_consistency(engine, inv.court.c_str(), inv.out.c_str(), &raw));
  } else if (cmd == "simulate") {
    const std::string request = generator_request(inv).dump();
    check(ca_run_simulate(engine, request.c_str(), inv.out.c_str(), &raw));
    ReportPtr report(raw);
    inv.generator = json::parse(slurp((fs::path(inv.out) / "generator.json").string()));
    return report;
  } else {
    throw CliFailure(kExitFailure, "unknown subcommand " + cmd);
  }
  return ReportPtr(raw);
}

void print_report(const ca_report* r) {
  for (std::size_t i = 0; i < ca_report_count_size(r); ++i) {
    const char* name = nullptr;
    long long value = 0;
    if (ca_report_count_at(r, i, &name, &value) == CA_OK) {
      std::printf("%-16s %lld\n", name, value);
    }
  }
  const std::size_t n_err = ca_report_row_error_size(r);
  for (std::size_t i = 0; i < n_err && i < kShownRowErrors; ++i) {
    const char* source = nullptr;
    const char* message = nullptr;
    std::size_t line = 0;
    if (ca_report_row_error_at(r, i, &source, &line, &message) == CA_OK) {
      std::fprintf(stderr, "%s:%zu: %s\n", source, line, message);
    }
  }
  if (n_err > kShownRowErrors) {
    std::fprintf(stderr, "... %zu more row errors in errors.csv\n", n_err - kShownRowErrors);
  }
  const char* msg = ca_report_message(r);
  if (msg != nullptr && *msg != '\0') std::fprintf(stderr, "%s\n", msg);
}

int run(Invocation& inv) {
  inv.config_dir = absolute(inv.config_dir);
  inv.psa = absolute(inv.psa);
  inv.court = absolute(inv.court);
  inv.generator_file = absolute(inv.generator_file);
  inv.out = absolute(inv.out);

  EnginePtr engine = load_engine(inv);
  ReportPtr report = execute(inv, engine.get());
  print_report(report.get());

  int code = kExitOk;
  if (ca_report_empty_result(report.get())) {
    code = kExitEmpty;
  } else if (ca_report_row_error_size(report.get()) > 0) {
    code = kExitPartial;
  }

  const std::string manifest = manifest_for(inv, report.get(), code).dump(2) + "\n";
  std::ofstream out(fs::path(inv.out) / "manifest.json", std::ios::binary);
  if (!out) throw CliFailure(kExitFailure, "cannot write manifest in " + inv.out);
  out << manifest;
  return code;
}

int replay(const std::string& manifest_path, const std::string& out_override) {
  json m;
  try {
    m = json::parse(slurp(manifest_path));
  } catch (const json::exception& e) {
    throw CliFailure(kExitFailure, manifest_path + ": " + e.what());
  }
  Invocation inv;
  try {
    inv = from_manifest(m);
  } catch (const json::exception& e) {
    throw CliFailure(kExitFailure, manifest_path + ": malformed manifest: " + e.what());
  }
  if (m.value("version", std::string()) != ca_version()) {
    std::fprintf(stderr, "warning: manifest written by version %s, running %s\n",
                 m.value("version", std::string("?")).c_str(), ca_version());
  }
  if (!out_override.empty()) inv.out = out_override;
  return run(inv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Booking-charge versus conviction-charge audit of pre-trial risk assessments"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  Invocation inv;
  inv.config_dir = CHARGEAUDIT_DEFAULT_CONFIG_DIR;
  bool schema = false;
  bool version = false;
  app.add_flag("--schema", schema, "Print the input and output file schemas");
  app.add_flag("--version", version, "Print the tool version");
  app.add_option("--config-dir", inv.config_dir,
                 "Directory holding catalog.csv, dmf.json, weights.json, disposition.json")
      ->capture_default_str();
  app.add_option("--ambiguous-bumpup", inv.ambiguous_bumpup,
                 "Count bump-up patterns marked ambiguous: catalog, on, off")
      ->check(CLI::IsMember({"catalog", "on", "off"}))
      ->capture_default_str();

  auto* score = app.add_subcommand("score", "Score every PSA record");
  score->add_option("--psa", inv.psa, "PSA records file")->required()->check(CLI::ExistingFile);
  score->add_option("--out", inv.out, "Output directory")->required();
  score->add_flag("--from-factors", inv.from_factors,
                  "Compute FTA/NCA/NVCA from the risk factors instead of the recorded scores");

  auto* audit = app.add_subcommand("audit", "Booking vs conviction audit, end to end");
  audit->add_option("--psa", inv.psa, "PSA records file")->required()->check(CLI::ExistingFile);
  audit->add_option("--court", inv.court, "Court cases file")->required()->check(CLI::ExistingFile);
  audit->add_option("--out", inv.out, "Output directory")->required();
  audit->add_flag("--sensitivity", inv.sensitivity,
                  "Also write tables without plea-to-other-case-only records");
  audit->add_option("--group-by", inv.group_by, "Group disaggregation: race or none")
      ->check(CLI::IsMember({"race", "none"}))
      ->capture_default_str();
  audit->add_option("--booking-source", inv.booking_source,
                    "Where booking charges come from: court or psa")
      ->check(CLI::IsMember({"court", "psa"}))
      ->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic PSA/court dataset");
  simulate->add_option("--out", inv.out, "Output directory")->required();
  simulate->add_option("--config", inv.generator_file, "Generator settings (JSON)")
      ->check(CLI::ExistingFile);
  simulate->add_option("--seed", inv.seed, "Random seed");
  simulate->add_option("--n", inv.n, "Number of PSA rows")->check(CLI::NonNegativeNumber);

  auto* consistency = app.add_subcommand("consistency", "Race label consistency matrix");
  consistency->add_option("--court", inv.court, "Court cases file")
      ->required()
      ->check(CLI::ExistingFile);
  consistency->add_option("--out", inv.out, "Output directory")->required();

  auto* validate = app.add_subcommand("validate", "Agreement of the engine with recorded columns");
  validate->add_option("--psa", inv.psa, "PSA records file")->required()->check(CLI::ExistingFile);
  validate->add_option("--court", inv.court, "Court cases file")->check(CLI::ExistingFile);
  validate->add_option("--out", inv.out, "Output directory")->required();

  auto* dedupe = app.add_subcommand("dedupe", "Drop incomplete and duplicate PSA records");
  dedupe->add_option("--psa", inv.psa, "PSA records file")->required()->check(CLI::ExistingFile);
  dedupe->add_option("--out", inv.out, "Output directory")->required();

  auto* link = app.add_subcommand("link", "Match PSA records to court cases");
  link->add_option("--psa", inv.psa, "PSA records file")->required()->check(CLI::ExistingFile);
  link->add_option("--court", inv.court, "Court cases file")->required()->check(CLI::ExistingFile);
  link->add_option("--out", inv.out, "Output directory")->required();

  std::string manifest_path;
  std::string replay_out;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay_cmd->add_option("manifest", manifest_path, "manifest.json of an earlier run")
      ->required()
      ->check(CLI::ExistingFile);
  replay_cmd->add_option("--out", replay_out, "Output directory (default: the recorded one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitFailure;
  }

  if (version) {
    std::printf("chargeaudit %s\n", ca_version());
    return kExitOk;
  }
  if (schema) {
    std::fputs(ca_schema_text(), stdout);
    return kExitOk;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitFailure;
  }

  try {
    if (replay_cmd->parsed()) return replay(manifest_path, replay_out);
    inv.subcommand = app.get_subcommands().front()->get_name();
    return run(inv);
  } catch (const CliFailure& e) {
    std::fprintf(stderr, "chargeaudit: %s\n", e.what());
    return e.code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "chargeaudit: %s\n", e.what());
    return kExitFailure;
  }
}
