// mcpforge: umbrella CLI for the MCP red-team testbed.
//
// Subcommands land here as their modules are built:
//   generate  — write a labeled corpus of server manifests
//   serve     — become the server described by a manifest (stdio/http)
//   host      — run the simulated agent host against a config
//   sink      — run the loopback capture sink
//   scan      — scan a manifest and report findings
//   campaign  — run manifests x policies x trials and aggregate
//   report    — render a saved campaign result
#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "mcpforge/attack/seed_pool.hpp"
#include "mcpforge/gen/corpus.hpp"
#include "mcpforge/gen/counting.hpp"
#include "mcpforge/server/manifest.hpp"
#include "mcpforge/server/runtime.hpp"
#include "mcpforge/sink/server.hpp"
#include "mcpforge/util/fs.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;   // operation ran and reported a problem
constexpr int kExitUsage = 2;     // bad invocation / bad input files

std::string env_or(const char* name, const std::string& fallback) {
  const char* value = std::getenv(name);
  return value != nullptr ? std::string(value) : fallback;
}

// --- serve -----------------------------------------------------------------

struct ServeArgs {
  std::string manifest_path;
  bool stdio = false;
  std::string http_addr;  // "host:port"
  std::string sandbox;
  std::string sink_url;
  std::string trial_id;
};

int run_serve(const ServeArgs& args) {
  std::vector<std::string> errors;
  auto manifest = mcpforge::server::ServerManifest::load(args.manifest_path,
                                                         &errors);
  if (!manifest) {
    std::cerr << "manifest rejected: " << args.manifest_path << "\n";
    for (const auto& error : errors) std::cerr << "  " << error << "\n";
    return kExitUsage;
  }

  mcpforge::server::RuntimeOptions options;
  options.sandbox_root =
      args.sandbox.empty()
          ? mcpforge::util::make_temp_dir("mcpforge-sandbox-")
          : std::filesystem::path(args.sandbox);
  mcpforge::util::ensure_dir(options.sandbox_root);
  options.sink_url = args.sink_url;
  options.trial_id = args.trial_id;

  mcpforge::server::ServerRuntime runtime(std::move(*manifest),
                                          std::move(options));
  if (!args.http_addr.empty()) {
    const auto colon = args.http_addr.rfind(':');
    if (colon == std::string::npos) {
      std::cerr << "--http expects host:port\n";
      return kExitUsage;
    }
    const std::string host = args.http_addr.substr(0, colon);
    int port = 0;
    try {
      port = std::stoi(args.http_addr.substr(colon + 1));
    } catch (...) {
      std::cerr << "--http expects host:port\n";
      return kExitUsage;
    }
    return runtime.run_http(host, port);
  }
  return runtime.run_stdio();
}

// --- generate ----------------------------------------------------------------

struct GenerateArgs {
  std::string pool_dir;
  std::string out_dir;
  std::size_t per_category = 10;
  std::uint64_t seed = 1;
  bool benign = false;
  std::size_t benign_count = 120;
  bool print_count = false;
};

int run_generate(const GenerateArgs& args) {
  std::vector<std::string> errors;
  auto pool = mcpforge::attack::SeedPool::load(args.pool_dir, &errors);
  if (!pool) {
    std::cerr << "seed pool rejected: " << args.pool_dir << "\n";
    for (const auto& error : errors) std::cerr << "  " << error << "\n";
    return kExitUsage;
  }

  if (args.print_count) {
    const auto shape = mcpforge::gen::PoolShape::of(*pool);
    using mcpforge::gen::CountConvention;
    std::cout << "tool-resource pairs: "
              << mcpforge::gen::enumerate_count(
                     shape, CountConvention::kToolResourcePairs)
              << "\n";
    try {
      std::cout << "full product: "
                << mcpforge::gen::enumerate_count(
                       shape, CountConvention::kFullProduct)
                << "\n";
    } catch (const std::overflow_error&) {
      std::cout << "full product: exceeds 64-bit range\n";
    }
    if (args.out_dir.empty()) return kExitOk;
  }

  if (args.out_dir.empty()) {
    std::cerr << "--out is required to write a corpus\n";
    return kExitUsage;
  }

  mcpforge::gen::CorpusOptions options;
  options.per_category = args.per_category;
  options.rng_seed = args.seed;
  options.benign = args.benign;
  options.benign_count = args.benign_count;

  const auto outcome =
      mcpforge::gen::generate_corpus(*pool, options, args.out_dir);
  if (!outcome.ok) {
    std::cerr << "corpus generation failed:\n";
    for (const auto& error : outcome.errors) std::cerr << "  " << error << "\n";
    return kExitFailure;
  }
  std::cout << "wrote " << outcome.entries.size() << " manifests + "
            << outcome.index_path.filename().string() << " to " << args.out_dir
            << "\n";
  return kExitOk;
}

// --- sink ------------------------------------------------------------------

struct SinkArgs {
  std::string bind = "127.0.0.1:0";
  std::string store;
};

volatile std::sig_atomic_t g_sink_stop = 0;

int run_sink(const SinkArgs& args) {
  const auto colon = args.bind.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "--bind expects host:port\n";
    return kExitUsage;
  }
  const std::string host = args.bind.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(args.bind.substr(colon + 1));
  } catch (...) {
    std::cerr << "--bind expects host:port\n";
    return kExitUsage;
  }

  mcpforge::sink::SinkServer sink;
  try {
    sink.start(host, port, args.store);
  } catch (const std::exception& e) {
    std::cerr << "sink failed to start: " << e.what() << "\n";
    return kExitFailure;
  }
  std::cout << "mcpforge-sink-listening " << sink.url() << "\n" << std::flush;

  std::signal(SIGINT, [](int) { g_sink_stop = 1; });
  std::signal(SIGTERM, [](int) { g_sink_stop = 1; });
  while (g_sink_stop == 0 && sink.running())
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  sink.stop();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mcpforge: MCP attack-corpus generator, host simulator, "
               "scanner, and campaign harness"};
  app.require_subcommand(1);

  ServeArgs serve_args;
  CLI::App* serve = app.add_subcommand(
      "serve", "Become the MCP server described by a manifest");
  serve->add_option("manifest", serve_args.manifest_path, "manifest file")
      ->required();
  CLI::Option* opt_stdio =
      serve->add_flag("--stdio", serve_args.stdio,
                      "serve over stdin/stdout (default)");
  serve->add_option("--http", serve_args.http_addr,
                    "serve over HTTP on host:port (loopback only)")
      ->excludes(opt_stdio);
  serve->add_option("--sandbox", serve_args.sandbox,
                    "sandbox root for file-writing effects (default: fresh "
                    "temp dir)");
  serve->add_option("--sink", serve_args.sink_url,
                    "capture sink URL (default: $MCPFORGE_SINK)");
  serve->add_option("--trial", serve_args.trial_id,
                    "trial id stamped on sink records (default: "
                    "$MCPFORGE_TRIAL)");

  GenerateArgs gen_args;
  CLI::App* generate = app.add_subcommand(
      "generate", "Write a labeled corpus of server manifests");
  generate->add_option("--pool", gen_args.pool_dir, "seed pool directory")
      ->required();
  generate->add_option("--out", gen_args.out_dir, "corpus output directory");
  generate
      ->add_option("--per-category", gen_args.per_category,
                   "manifests per taxonomy category")
      ->capture_default_str();
  generate->add_option("--seed", gen_args.seed, "corpus rng seed")
      ->capture_default_str();
  generate->add_flag("--benign", gen_args.benign,
                     "generate an unlabeled benign corpus instead");
  generate
      ->add_option("--benign-count", gen_args.benign_count,
                   "benign corpus size (with --benign)")
      ->capture_default_str();
  generate->add_flag("--print-count", gen_args.print_count,
                     "print the composition-space size");

  SinkArgs sink_args;
  CLI::App* sink = app.add_subcommand(
      "sink", "Run the loopback capture sink");
  CLI::App* sink_start = sink->add_subcommand("start", "start the sink");
  sink_start->add_option("--bind", sink_args.bind,
                         "bind address host:port (port 0 = pick free)")
      ->capture_default_str();
  sink_start->add_option("--store", sink_args.store,
                         "append-only record file")
      ->required();
  sink->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (generate->parsed()) return run_generate(gen_args);
  if (serve->parsed()) {
    if (serve_args.sink_url.empty())
      serve_args.sink_url = env_or("MCPFORGE_SINK", "");
    if (serve_args.trial_id.empty())
      serve_args.trial_id = env_or("MCPFORGE_TRIAL", "");
    return run_serve(serve_args);
  }
  if (sink->parsed() && sink_start->parsed()) return run_sink(sink_args);

  std::fputs("subcommand not implemented yet\n", stderr);
  return kExitFailure;
}
