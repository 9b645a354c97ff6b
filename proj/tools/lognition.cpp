// Copyright 2026 The Lognition Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// lognition: operator command line for import, synthesis, offline analytics
// and the HTTP service.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "lognition/catalog.hpp"
#include "lognition/error.hpp"
#include "lognition/ingest.hpp"
#include "lognition/json_io.hpp"
#include "lognition/service.hpp"
#include "lognition/store.hpp"
#include "lognition/synth.hpp"

namespace {

using namespace lognition;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

/// Bad input that the caller can fix; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string store = "lognition-data";
  std::string catalog;
  bool json = false;
};

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : std::move(fallback);
}

PatternCatalog load_catalog(const Common& c) {
  return c.catalog.empty() ? PatternCatalog::builtin() : PatternCatalog::load(c.catalog);
}


std::unique_ptr<EventStore> open_store(const Common& c) {
  StoreOptions opts;
  opts.directory = c.store;
  return std::make_unique<EventStore>(opts);
}

/// Accepts inline JSON or "@path".
Json parse_json_arg(const std::string& text, const char* what) {
  std::string body = text;
  if (!text.empty() && text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw UsageError(std::string("cannot read ") + what + " file '" + text.substr(1) + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return Json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

/// Flattens a JSON object into query parameters; arrays become
/// comma-separated lists.
std::map<std::string, std::string> to_params(const Json& j) {
  if (!j.is_object()) throw UsageError("parameters must be a JSON object");
  std::map<std::string, std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    if (v.is_string()) {
      out[it.key()] = v.get<std::string>();
    } else if (v.is_array()) {
      std::string joined;
      for (const auto& e : v) {
        if (!joined.empty()) joined += ',';
        joined += e.is_string() ? e.get<std::string>() : e.dump();
      }
      out[it.key()] = joined;
    } else {
      out[it.key()] = v.dump();
    }
  }
  return out;
}

void print(const Json& j, bool json) { std::cout << (json ? j.dump() : j.dump(2)) << '\n'; }

/// Runs one request through the service handler against the local store.
int run_api(const Common& c, ApiRequest req) {
  auto store = open_store(c);
  ServiceConfig cfg;
  ApiHandler handler(*store, load_catalog(c), cfg);
  ApiResponse resp = handler.dispatch(req);
  if (resp.status >= 200 && resp.status < 300) {
    print(resp.body.at("data"), c.json);
    return 0;
  }
  const Json& err = resp.body.at("error");
  std::cerr << "lognition: " << err.value("code", "error") << ": "
            << err.value("message", "") << '\n';
  return resp.status == 400 ? kExitUsage : kExitRuntime;
}

int cmd_import(const Common& c, const std::string& dir, unsigned threads,
               const std::string& quarantine) {
  auto sources = ImportSources::discover(dir);
  auto store = open_store(c);
  ImportOptions opts;
  opts.threads = threads;
  if (!quarantine.empty()) opts.quarantine_path = quarantine;
  ImportStats stats = batch_import(load_catalog(c), sources, *store, opts);
  store->flush();
  if (c.json) {
    Json j = to_json(stats);
    j.erase("quarantine");
    print(j, true);
  } else {
    std::cout << "lines read       " << stats.lines_read << '\n'
              << "lines matched    " << stats.lines_matched << '\n'
              << "lines unmatched  " << stats.lines_unmatched << '\n'
              << "quarantined      " << stats.lines_quarantined << '\n'
              << "records written  " << stats.records_written << '\n'
              << "apps written     " << stats.apps_written << '\n';
    for (const auto& e : stats.file_errors) std::cout << "error: " << e << '\n';
  }
  return stats.file_errors.empty() ? 0 : kExitRuntime;
}

int cmd_synth(const Common& c, const std::string& spec_arg, const std::string& out_dir) {
  SynthSpec spec;
  if (spec_arg == "demo") {
    spec = SynthSpec::demo();
  } else {
    try {
      spec = SynthSpec::from_json(parse_json_arg("@" + spec_arg, "spec"));
    } catch (const ArgumentError& e) {
      throw UsageError(e.what());
    }
  }
  try {
    spec.validate();
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  Json truth = synth_generate(spec, out_dir);
  if (c.json) {
    print(truth, true);
  } else {
    std::cout << "wrote " << truth["totals"]["lines"].get<std::uint64_t>() << " log lines and "
              << truth["apps"]["runs"].get<std::uint64_t>() << " runs to " << out_dir << '\n';
  }
  return 0;
}

int cmd_serve(const std::string& config_path) {
  ServiceConfig cfg;
  try {
    cfg = config_path.empty() ? ServiceConfig{} : ServiceConfig::load(config_path);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  cfg.apply_env();

  // Block the termination signals before any thread starts so that only
  // sigwait below sees them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  Service service(cfg);
  int port = service.start();
  spdlog::info("serving on {}:{}", cfg.host, port);
  int sig = 0;
  sigwait(&set, &sig);
  spdlog::info("signal {} received, shutting down", sig);
  service.stop();
  return 0;
}

int cmd_stats(const Common& c) {
  auto store = open_store(c);
  StoreStats s = store->stats();
  if (c.json) {
    print(to_json(s), true);
    return 0;
  }
  std::cout << "event records      " << s.event_records << '\n'
            << "event occurrences  " << s.event_occurrences << '\n'
            << "applications       " << s.applications << '\n'
            << "event types        " << s.event_types << '\n'
            << "partitions         " << s.total_partitions << '\n'
            << "rows               " << s.total_rows << '\n'
            << "bytes              " << s.total_bytes << '\n';
  return 0;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("lognition");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(env_or("LOGNITION_LOG_LEVEL", "info")));
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"HPC log analytics: import, synthesize, query and serve"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  common.store = env_or("LOGNITION_STORE", common.store);
  common.catalog = env_or("LOGNITION_CATALOG", "");
  app.add_option("--store", common.store, "Store directory")->capture_default_str();
  app.add_option("--catalog", common.catalog, "Pattern catalog (built-in when omitted)");
  app.add_flag("--json", common.json, "Machine-readable output");

  std::string import_dir, quarantine;
  unsigned threads = 0;
  auto* import_cmd = app.add_subcommand("import", "Batch-import *.log and apps*.jsonl files");
  import_cmd->add_option("dir", import_dir, "Corpus directory")->required();
  import_cmd->add_option("--threads", threads, "Parser threads (0 = hardware)");
  import_cmd->add_option("--quarantine", quarantine, "Append malformed lines to this file");

  std::string spec_path, out_dir = "corpus";
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  synth_cmd->add_option("spec", spec_path, "Spec JSON file, or 'demo'")->required();
  synth_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();

  std::string config_path;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("config", config_path, "Service config JSON");

  std::string context_arg;
  std::size_t limit = 0;
  auto* query_cmd = app.add_subcommand("query", "Evaluate a context");
  query_cmd->add_option("context", context_arg, "Context JSON (or @file)")->required();
  query_cmd->add_option("--limit", limit, "Maximum events returned");

  std::string params_arg;
  std::map<std::string, CLI::App*> analytics;
  for (const char* name : {"te", "topterms", "tfidf", "heatmap", "distribution", "histogram"}) {
    auto* sub = app.add_subcommand(name, std::string("Run /") + name + " against the store");
    sub->add_option("params", params_arg, "Parameters JSON: context fields plus options (or @file)")
        ->required();
    analytics[name] = sub;
  }

  auto* stats_cmd = app.add_subcommand("stats", "Store statistics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*import_cmd) return cmd_import(common, import_dir, threads, quarantine);
    if (*synth_cmd) return cmd_synth(common, spec_path, out_dir);
    if (*serve_cmd) return cmd_serve(config_path);
    if (*stats_cmd) return cmd_stats(common);
    if (*query_cmd) {
      Json ctx = parse_json_arg(context_arg, "context");
      if (!ctx.is_object()) throw UsageError("context must be a JSON object");
      if (limit > 0) ctx["limit"] = limit;
      return run_api(common, {"POST", "/query", {}, ctx.dump()});
    }
    for (const auto& [name, sub] : analytics) {
      if (*sub) {
        return run_api(common, {"GET", "/" + name, to_params(parse_json_arg(params_arg, "params")), ""});
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "lognition: " << e.what() << '\n' << app.help();
    return kExitUsage;
  } catch (const ArgumentError& e) {
    std::cerr << "lognition: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "lognition: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
