#include "dph/dph.h"

#include <cstring>
#include <exception>
#include <string>

#include "core/common.hpp"
#include "core/config.hpp"
#include "core/experiments.hpp"
#include "core/model.hpp"

struct dph_config {
  dph::Config raw;
};

struct dph_record {
  dph::RunRecord rec;
};

namespace {

std::string& tls_error() {
  thread_local std::string msg;
  return msg;
}

template <class F>
dph_status guarded(F&& body) {
  try {
    body();
    return DPH_OK;
  } catch (const dph::Error& e) {
    tls_error() = e.what();
    return dph_status(int(e.code()));
  } catch (const std::exception& e) {
    tls_error() = e.what();
    return DPH_ERR_NUMERIC;
  }
}

dph_status copy_out(const std::string& s, char* buf, size_t buflen) {
  if (!buf || buflen == 0) {
    tls_error() = "output buffer must have room for at least one byte";
    return DPH_ERR_CONFIG;
  }
  const size_t n = s.size() < buflen - 1 ? s.size() : buflen - 1;
  std::memcpy(buf, s.data(), n);
  buf[n] = '\0';
  return DPH_OK;
}

dph_status require(bool ok, const char* msg) {
  if (ok) return DPH_OK;
  tls_error() = msg;
  return DPH_ERR_CONFIG;
}

}  // namespace

extern "C" {

const char* dph_version(void) { return "0.1.0"; }

const char* dph_last_error(void) { return tls_error().c_str(); }

dph_status dph_experiment_names(char* buf, size_t buflen) {
  std::string joined;
  for (const auto& name : dph::experiment_names()) {
    if (!joined.empty()) joined += ',';
    joined += name;
  }
  return copy_out(joined, buf, buflen);
}

dph_status dph_config_load(const char* path, dph_config** out) {
  if (auto st = require(path && out, "dph_config_load needs a path and an output slot"))
    return st;
  *out = nullptr;
  return guarded([&] { *out = new dph_config{dph::Config::parse_file(path)}; });
}

dph_status dph_config_parse(const char* text, dph_config** out) {
  if (auto st = require(text && out, "dph_config_parse needs text and an output slot"))
    return st;
  *out = nullptr;
  return guarded([&] { *out = new dph_config{dph::Config::parse_text(text)}; });
}

dph_status dph_config_set(dph_config* c, const char* key, const char* value) {
  if (auto st = require(c && key && value, "dph_config_set needs a config, key, and value"))
    return st;
  return guarded([&] { c->raw.set(key, value); });
}

dph_status dph_config_get(const dph_config* c, const char* key, char* buf, size_t buflen) {
  if (auto st = require(c && key, "dph_config_get needs a config and key")) return st;
  std::string value;
  if (auto st = guarded([&] { value = c->raw.get_str(key); })) return st;
  return copy_out(value, buf, buflen);
}

dph_status dph_config_hash(const dph_config* c, char* buf, size_t buflen) {
  if (auto st = require(c != nullptr, "dph_config_hash needs a config")) return st;
  return copy_out(c->raw.hash(), buf, buflen);
}

void dph_config_free(dph_config* c) { delete c; }

dph_status dph_run(const dph_config* c, dph_record** out) {
  if (auto st = require(c && out, "dph_run needs a config and an output slot")) return st;
  *out = nullptr;
  return guarded([&] {
    const dph::RunConfig cfg = dph::parse_run_config(c->raw);
    *out = new dph_record{dph::run_experiment(cfg)};
  });
}

dph_status dph_validate_model(const dph_config* c, int* pass) {
  if (auto st = require(c && pass, "dph_validate_model needs a config and an output slot"))
    return st;
  *pass = 0;
  return guarded([&] {
    const dph::RunConfig cfg = dph::parse_run_config(c->raw);
    const dph::ModelSpec m = dph::make_model(cfg.model);
    const auto report = dph::validate_hypotheses(m, int(cfg.num("hypotheses.samples", 64)));
    *pass = report.all_pass() ? 1 : 0;
  });
}

dph_status dph_replay(const dph_config* c, const char* reference_dir, const char* scratch_dir,
                      int* match) {
  if (auto st = require(c && reference_dir && scratch_dir && match,
                        "dph_replay needs a config, two directories, and an output slot"))
    return st;
  *match = 0;
  return guarded([&] {
    const dph::RunConfig cfg = dph::parse_run_config(c->raw);
    std::string detail;
    *match = dph::replay_matches(cfg, reference_dir, scratch_dir, &detail) ? 1 : 0;
    if (*match == 0) tls_error() = detail;
  });
}

int dph_record_pass(const dph_record* r) { return r && r->rec.pass ? 1 : 0; }

const char* dph_record_experiment(const dph_record* r) {
  return r ? r->rec.experiment.c_str() : "";
}

const char* dph_record_hash(const dph_record* r) { return r ? r->rec.config_hash.c_str() : ""; }

double dph_record_wall_seconds(const dph_record* r) { return r ? r->rec.wall_seconds : 0.0; }

size_t dph_record_rows(const dph_record* r) { return r ? r->rec.rows.size() : 0; }

dph_status dph_record_cell(const dph_record* r, size_t row, const char* key, char* buf,
                           size_t buflen) {
  if (auto st = require(r && key, "dph_record_cell needs a record and key")) return st;
  if (auto st = require(row < r->rec.rows.size(), "row index out of range")) return st;
  const auto& cells = r->rec.rows[row].cells;
  const auto it = cells.find(key);
  return copy_out(it == cells.end() ? std::string() : it->second, buf, buflen);
}

dph_status dph_record_row(const dph_record* r, size_t row, char* buf, size_t buflen) {
  if (auto st = require(r != nullptr, "dph_record_row needs a record")) return st;
  if (auto st = require(row < r->rec.rows.size(), "row index out of range")) return st;
  std::string joined;
  for (const auto& kv : r->rec.rows[row].cells) {
    if (!joined.empty()) joined += "; ";
    joined += kv.first + "=" + kv.second;
  }
  return copy_out(joined, buf, buflen);
}

void dph_record_free(dph_record* r) { delete r; }

}  // extern "C"
