#include "chargeaudit/chargeaudit.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "errors.hpp"
#include "pipeline.hpp"
#include "stats.hpp"

using namespace chargeaudit;

struct ca_engine {
  LoadedConfig config;
};

struct ca_report {
  RunReport report;
};

namespace {

thread_local std::string g_last_error;

ca_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return CA_ERR_PARSE;
    case ErrorKind::Config: return CA_ERR_CONFIG;
    case ErrorKind::Schema: return CA_ERR_SCHEMA;
    case ErrorKind::Io: return CA_ERR_IO;
    case ErrorKind::EmptyInput: return CA_ERR_EMPTY_INPUT;
    case ErrorKind::DegenerateInput: return CA_ERR_DEGENERATE_INPUT;
    case ErrorKind::LengthMismatch: return CA_ERR_LENGTH_MISMATCH;
    case ErrorKind::NotDisposed: return CA_ERR_NOT_DISPOSED;
  }
  return CA_ERR_INTERNAL;
}

ca_status fail(ca_status s, std::string message) {
  g_last_error = std::move(message);
  return s;
}

template <typename F>
ca_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return CA_OK;
  } catch (const Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CA_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CA_ERR_INTERNAL, "unknown error");
  }
}

CatalogOptions options_for(const ChargeCatalog& catalog, const ca_engine_options* o) {
  CatalogOptions opts = catalog.options();
  if (!o) return opts;
  if (o->ambiguous_bumpup >= 0) opts.ambiguous_override = o->ambiguous_bumpup != 0;
  if (o->violent_includes_derivatives >= 0) {
    opts.violent_includes_derivatives = o->violent_includes_derivatives != 0;
  }
  return opts;
}

ca_status load(const ConfigPaths& paths, const ca_engine_options* options, ca_engine** out) {
  if (!out) return fail(CA_ERR_INVALID_ARGUMENT, "output handle pointer is null");
  *out = nullptr;
  return guarded([&] {
    auto engine = std::make_unique<ca_engine>();
    engine->config = load_config(paths);
    engine->config.engine.catalog.set_options(options_for(engine->config.engine.catalog, options));
    *out = engine.release();
  });
}

void copy_reason(char* dst, const std::string& src) {
  const std::size_t n = std::min(src.size(), static_cast<std::size_t>(CA_REASON_LEN - 1));
  std::memcpy(dst, src.data(), n);
  dst[n] = '\0';
}

template <typename F>
ca_status run(const ca_engine* engine, ca_report** report, F&& f) {
  if (!engine) return fail(CA_ERR_INVALID_ARGUMENT, "engine is null");
  if (!report) return fail(CA_ERR_INVALID_ARGUMENT, "report pointer is null");
  *report = nullptr;
  return guarded([&] {
    auto r = std::make_unique<ca_report>();
    r->report = f();
    *report = r.release();
  });
}

std::string str(const char* s) { return s ? std::string(s) : std::string(); }

}  // namespace

extern "C" {

const char* ca_version(void) { return "0.1.0"; }

const char* ca_status_name(ca_status status) {
  switch (status) {
    case CA_OK: return "ok";
    case CA_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CA_ERR_PARSE: return "parse_error";
    case CA_ERR_CONFIG: return "config_error";
    case CA_ERR_SCHEMA: return "schema_error";
    case CA_ERR_IO: return "io_error";
    case CA_ERR_EMPTY_INPUT: return "empty_input";
    case CA_ERR_DEGENERATE_INPUT: return "degenerate_input";
    case CA_ERR_LENGTH_MISMATCH: return "length_mismatch";
    case CA_ERR_NOT_DISPOSED: return "not_disposed";
    case CA_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* ca_last_error_message(void) { return g_last_error.c_str(); }

const char* ca_schema_text(void) {
  static const std::string text = schema_text();
  return text.c_str();
}

ca_status ca_engine_load(const char* config_dir, const ca_engine_options* options,
                         ca_engine** out) {
  if (!config_dir) return fail(CA_ERR_INVALID_ARGUMENT, "config_dir is null");
  return load(ConfigPaths::in_dir(config_dir), options, out);
}

ca_status ca_engine_load_files(const char* catalog, const char* dmf, const char* weights,
                               const char* disposition, const ca_engine_options* options,
                               ca_engine** out) {
  if (!catalog || !dmf || !weights || !disposition) {
    return fail(CA_ERR_INVALID_ARGUMENT, "every configuration path is required");
  }
  return load({catalog, dmf, weights, disposition}, options, out);
}

void ca_engine_free(ca_engine* engine) { delete engine; }

ca_status ca_charge_normalize(const char* text, char* buf, size_t buf_len, size_t* needed) {
  if (!text) return fail(CA_ERR_INVALID_ARGUMENT, "text is null");
  std::string n;
  if (ca_status s = guarded([&] { n = normalize_charge_text(text); }); s != CA_OK) return s;
  if (needed) *needed = n.size() + 1;
  if (!buf) return CA_OK;
  if (buf_len <= n.size()) return fail(CA_ERR_INVALID_ARGUMENT, "buffer too small");
  std::memcpy(buf, n.c_str(), n.size() + 1);
  return CA_OK;
}

ca_status ca_charge_flags(const ca_engine* engine, const char* charge, int* violent,
                          int* exclusion, int* bumpup) {
  if (!engine || !charge) return fail(CA_ERR_INVALID_ARGUMENT, "engine and charge are required");
  return guarded([&] {
    const auto& cat = engine->config.engine.catalog;
    const ChargeCode c = cat.parse(charge);
    if (violent) *violent = cat.is_violent(c);
    if (exclusion) *exclusion = cat.is_exclusion_charge(c);
    if (bumpup) *bumpup = cat.is_bumpup_charge(c);
  });
}

ca_status ca_assess(const ca_engine* engine, const ca_assess_input* input,
                    ca_assess_output* output) {
  if (!engine || !input || !output) return fail(CA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& cfg = engine->config.engine;
    std::vector<ChargeCode> charges;
    for (const auto& text : split_charge_list(str(input->charges))) {
      charges.push_back(cfg.catalog.parse(text));
    }
    if (input->fta < 1 || input->fta > 6 || input->nca < 1 || input->nca > 6) {
      throw ConfigError("fta and nca must lie in 1..6");
    }
    const SubScores s{input->fta, input->nca, input->nvca_flag != 0};
    const PsaResult r = assess(s, charges, input->extradited != 0, cfg.dmf, cfg.catalog);
    output->exclusion = r.exclusion;
    output->bumpup = r.bumpup;
    output->initial_level = rank(r.initial);
    output->final_level = rank(r.final_level);
    copy_reason(output->exclusion_reason, r.exclusion_reason);
    copy_reason(output->bumpup_reason, r.bumpup_reason);
  });
}

ca_status ca_compute_subscores(const ca_engine* engine, const ca_risk_factors* f, int* fta,
                               int* nca, int* nvca_flag) {
  if (!engine || !f) return fail(CA_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    RiskFactors r;
    if (f->age_at_arrest >= 0) r.age_at_arrest = f->age_at_arrest;
    r.pending_charge = f->pending_charge != 0;
    r.prior_misdemeanor_conviction = f->prior_misdemeanor_conviction != 0;
    r.prior_felony_conviction = f->prior_felony_conviction != 0;
    r.prior_conviction = f->prior_conviction != 0;
    r.prior_violent_convictions = f->prior_violent_convictions;
    r.ftas_past_two_years = f->ftas_past_two_years;
    r.fta_older_than_two_years = f->fta_older_than_two_years != 0;
    r.prior_incarceration = f->prior_incarceration != 0;
    r.current_offense_violent = f->current_offense_violent != 0;
    if (!r.valid()) throw ConfigError("risk factors out of range");
    const SubScores s = compute_subscores(r, engine->config.engine.weights);
    if (fta) *fta = s.fta;
    if (nca) *nca = s.nca;
    if (nvca_flag) *nvca_flag = s.nvca_flag;
  });
}

ca_status ca_two_proportion_test(long x1, long n1, long x2, long n2, double* z, double* p) {
  return guarded([&] {
    const TestResult r = two_proportion_test(x1, n1, x2, n2);
    if (z) *z = r.statistic;
    if (p) *p = r.p_value;
  });
}

ca_status ca_wilcoxon_rank_sum(const double* a, size_t na, const double* b, size_t nb,
                               double* rank_sum, double* z, double* p) {
  if ((!a && na) || (!b && nb)) return fail(CA_ERR_INVALID_ARGUMENT, "null sample");
  return guarded([&] {
    const WilcoxonResult r = wilcoxon_rank_sum(std::span<const double>(a, na),
                                               std::span<const double>(b, nb));
    if (rank_sum) *rank_sum = r.rank_sum;
    if (z) *z = r.z;
    if (p) *p = r.p_value;
  });
}

ca_status ca_run_score(const ca_engine* engine, const char* psa_path, const char* out_dir,
                       int from_factors, ca_report** report) {
  if (!psa_path || !out_dir) return fail(CA_ERR_INVALID_ARGUMENT, "paths are required");
  return run(engine, report, [&] {
    return run_score(psa_path, engine->config, out_dir, from_factors != 0);
  });
}

ca_status ca_run_audit(const ca_engine* engine, const ca_audit_options* options,
                       ca_report** report) {
  if (!options || !options->psa_path || !options->court_path || !options->out_dir) {
    return fail(CA_ERR_INVALID_ARGUMENT, "psa, court and output paths are required");
  }
  return run(engine, report, [&] {
    AuditRunOptions o;
    o.psa_path = options->psa_path;
    o.court_path = options->court_path;
    o.out_dir = options->out_dir;
    o.sensitivity = options->sensitivity != 0;
    o.group_rule = options->group_by_race ? GroupRule::AnyB : GroupRule::None;
    o.booking_source =
        options->booking_from_psa ? BookingSource::PsaForm : BookingSource::CourtRecords;
    return run_audit(o, engine->config);
  });
}

ca_status ca_run_validate(const ca_engine* engine, const char* psa_path, const char* court_path,
                          const char* out_dir, ca_report** report) {
  if (!psa_path || !out_dir) return fail(CA_ERR_INVALID_ARGUMENT, "paths are required");
  return run(engine, report, [&] {
    return run_validate(psa_path, str(court_path), engine->config, out_dir);
  });
}

ca_status ca_run_dedupe(const ca_engine* engine, const char* psa_path, const char* out_dir,
                        ca_report** report) {
  if (!psa_path || !out_dir) return fail(CA_ERR_INVALID_ARGUMENT, "paths are required");
  return run(engine, report, [&] { return run_dedupe(psa_path, engine->config, out_dir); });
}

ca_status ca_run_link(const ca_engine* engine, const char* psa_path, const char* court_path,
                      const char* out_dir, ca_report** report) {
  if (!psa_path || !court_path || !out_dir) {
    return fail(CA_ERR_INVALID_ARGUMENT, "paths are required");
  }
  return run(engine, report,
             [&] { return run_link(psa_path, court_path, engine->config, out_dir); });
}

ca_status ca_run_consistency(const ca_engine* engine, const char* court_path, const char* out_dir,
                             ca_report** report) {
  if (!court_path || !out_dir) return fail(CA_ERR_INVALID_ARGUMENT, "paths are required");
  return run(engine, report,
             [&] { return run_consistency(court_path, engine->config, out_dir); });
}

ca_status ca_run_simulate(const ca_engine* engine, const char* generator_json,
                          const char* out_dir, ca_report** report) {
  if (!out_dir) return fail(CA_ERR_INVALID_ARGUMENT, "out_dir is required");
  return run(engine, report, [&] {
    const GeneratorConfig g = generator_json ? GeneratorConfig::from_json_text(generator_json)
                                             : GeneratorConfig{};
    return run_simulate(g, engine->config, out_dir);
  });
}

size_t ca_report_count_size(const ca_report* report) {
  return report ? report->report.counts.size() : 0;
}

ca_status ca_report_count_at(const ca_report* report, size_t index, const char** name,
                             long long* value) {
  if (!report || index >= report->report.counts.size()) {
    return fail(CA_ERR_INVALID_ARGUMENT, "count index out of range");
  }
  const auto& [k, v] = report->report.counts[index];
  if (name) *name = k.c_str();
  if (value) *value = v;
  return CA_OK;
}

size_t ca_report_row_error_size(const ca_report* report) {
  return report ? report->report.row_errors.size() : 0;
}

ca_status ca_report_row_error_at(const ca_report* report, size_t index, const char** source,
                                 size_t* line, const char** message) {
  if (!report || index >= report->report.row_errors.size()) {
    return fail(CA_ERR_INVALID_ARGUMENT, "row error index out of range");
  }
  const RowError& e = report->report.row_errors[index];
  if (source) *source = e.source.c_str();
  if (line) *line = e.line;
  if (message) *message = e.message.c_str();
  return CA_OK;
}

size_t ca_report_output_size(const ca_report* report) {
  return report ? report->report.outputs.size() : 0;
}

const char* ca_report_output_at(const ca_report* report, size_t index) {
  if (!report || index >= report->report.outputs.size()) return nullptr;
  return report->report.outputs[index].c_str();
}

int ca_report_empty_result(const ca_report* report) {
  return report && report->report.empty_result ? 1 : 0;
}

const char* ca_report_message(const ca_report* report) {
  return report ? report->report.message.c_str() : "";
}

void ca_report_free(ca_report* report) { delete report; }

}  // extern "C"
