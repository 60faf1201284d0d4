// f1admin: operator tool for the favor-exchange service.
//
//   f1admin serve            run the HTTP service
//   f1admin seed             write a deterministic demo population
//   f1admin wordlist-check   validate a keyword list
//   f1admin scenario         replay a scripted API session against a server
//
// Exit codes: 0 success, 1 validation/assertion failure, 2 environment failure.

#include <CLI11.hpp>
#include <httplib.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "f1/admin/scenario.hpp"
#include "f1/admin/seed.hpp"
#include "f1/challenge.hpp"
#include "f1/http_api.hpp"
#include "f1/persistence.hpp"
#include "f1/platform.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kEnvironment = 2;

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "./data";
  std::string wordlist = F1_DEFAULT_WORDLIST;
  double nearby_radius_m = f1::geo::kDefaultNearbyRadiusMeters;
  double sos_radius_m = f1::emergency::kDefaultSosRadiusMeters;
  int rating_window_days = 14;
  std::string admin_token;
  int sweep_interval_s = 60;
  int threads = 8;
};

int cmd_serve(const ServeOptions& o) {
  std::string text;
  if (!read_file(o.wordlist, text)) {
    std::cerr << "error: cannot read wordlist " << o.wordlist << '\n';
    return kEnvironment;
  }

  std::unique_ptr<f1::FileBackend> backend;
  try {
    backend = std::make_unique<f1::FileBackend>(o.data_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEnvironment;
  }

  f1::SystemClock clock;
  std::unique_ptr<f1::Platform> platform;
  try {
    auto words = f1::challenge::load_wordlist(text, o.wordlist);
    f1::PlatformConfig config;
    config.default_nearby_radius_m = o.nearby_radius_m;
    config.sos_radius_m = o.sos_radius_m;
    config.rating_window_days = o.rating_window_days;
    platform = std::make_unique<f1::Platform>(*backend, clock, std::move(words), config);
  } catch (const f1::CorruptStore& e) {
    std::cerr << "error: refusing to start, corrupt store: " << e.what() << '\n';
    return kEnvironment;
  } catch (const f1::DomainError& e) {
    std::cerr << "error: bad configuration: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEnvironment;
  }

  httplib::Server server;
  server.new_task_queue = [n = o.threads] { return new httplib::ThreadPool(static_cast<std::size_t>(n)); };
  f1::HttpApi api(*platform, f1::HttpApiOptions{o.admin_token});
  api.install(server);

  int port = o.port;
  if (port == 0) {
    port = server.bind_to_any_port(o.host);
  } else if (!server.bind_to_port(o.host, port)) {
    port = -1;
  }
  if (port < 0) {
    std::cerr << "error: cannot bind " << o.host << ':' << o.port << '\n';
    return kEnvironment;
  }

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  std::thread listener([&] { server.listen_after_bind(); });
  std::cout << "listening on http://" << o.host << ':' << port << std::endl;

  auto last_sweep = std::chrono::steady_clock::now();
  while (!g_stop.load()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    if (std::chrono::steady_clock::now() - last_sweep >= std::chrono::seconds(o.sweep_interval_s)) {
      try {
        platform->sweep();
      } catch (const std::exception& e) {
        std::cerr << "warning: sweep failed: " << e.what() << '\n';
      }
      last_sweep = std::chrono::steady_clock::now();
    }
  }

  server.stop();
  listener.join();
  // Every acknowledged write is already on disk; persist the full snapshot
  // once more so the files reflect the final state.
  try {
    f1::CollectionSet all;
    all.set();
    backend->save(platform->snapshot(), all);
  } catch (const std::exception& e) {
    std::cerr << "error: final flush failed: " << e.what() << '\n';
    return kEnvironment;
  }
  std::cout << "stopped" << std::endl;
  return kOk;
}

int cmd_seed(const std::string& data_dir, const f1::admin::SeedOptions& options) {
  try {
    f1::FileBackend backend(data_dir);
    const auto s = f1::admin::seed_store(backend, options);
    std::cout << "seeded " << s.users.size() << " users and " << s.requests.size()
              << " requests into " << data_dir << '\n';
    return kOk;
  } catch (const f1::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEnvironment;
  }
}

int cmd_wordlist_check(const std::string& path) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read " << path << '\n';
    return kEnvironment;
  }
  const auto report = f1::challenge::inspect_wordlist(text);
  std::cout << "words: " << report.words.size() << '\n';
  std::cout << "duplicates: " << report.duplicates << '\n';
  std::cout << "rejects: " << report.rejects.size() << '\n';
  for (const auto& r : report.rejects) {
    std::cout << "  MalformedWord line " << r.line << ": \"" << r.raw << "\"\n";
  }
  bool ok = report.rejects.empty();
  if (report.words.size() < f1::challenge::kMinWords) {
    std::cout << "TooFewWords: " << report.words.size() << " < " << f1::challenge::kMinWords << '\n';
    ok = false;
  }
  std::cout << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kOk : kInvalid;
}

int cmd_scenario(const std::string& path, const std::string& base_url) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read " << path << '\n';
    return kEnvironment;
  }
  f1::admin::ScenarioScript script;
  try {
    script = f1::admin::ScenarioScript::parse(text);
  } catch (const f1::admin::ScriptError& e) {
    std::cerr << "error: " << path << ": " << e.what() << '\n';
    return kInvalid;
  }
  const auto result = f1::admin::run_scenario(script, base_url, std::cout);
  return static_cast<int>(result);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator tool for the F1 favor-exchange service"};
  app.require_subcommand(1);

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service until interrupted");
  serve_cmd->add_option("--host", serve.host, "Listen address")->envname("F1_HOST")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Listen port, 0 for an ephemeral port")
      ->envname("F1_PORT")->capture_default_str();
  serve_cmd->add_option("--data-dir", serve.data_dir, "Store directory")->envname("F1_DATA_DIR")->capture_default_str();
  serve_cmd->add_option("--wordlist", serve.wordlist, "Keyword list file")->envname("F1_WORDLIST")->capture_default_str();
  serve_cmd->add_option("--nearby-radius", serve.nearby_radius_m, "Default nearby search radius (m)")
      ->envname("F1_NEARBY_RADIUS_M")->capture_default_str();
  serve_cmd->add_option("--sos-radius", serve.sos_radius_m, "S.O.S dispatch radius (m)")
      ->envname("F1_SOS_RADIUS_M")->capture_default_str();
  serve_cmd->add_option("--rating-window-days", serve.rating_window_days, "Days to rate after completion")
      ->envname("F1_RATING_WINDOW_DAYS")->check(CLI::PositiveNumber)->capture_default_str();
  serve_cmd->add_option("--admin-token", serve.admin_token, "Operator bearer token (empty disables admin endpoints)")
      ->envname("F1_ADMIN_TOKEN");
  serve_cmd->add_option("--sweep-interval", serve.sweep_interval_s, "Seconds between expiry sweeps")
      ->check(CLI::PositiveNumber)->capture_default_str();
  serve_cmd->add_option("--threads", serve.threads, "HTTP worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  std::string seed_dir = "./data";
  f1::admin::SeedOptions seed;
  std::string seed_now;
  auto* seed_cmd = app.add_subcommand("seed", "Populate an empty store with deterministic demo data");
  seed_cmd->add_option("--data-dir", seed_dir, "Store directory")->envname("F1_DATA_DIR")->capture_default_str();
  seed_cmd->add_option("--users", seed.users, "Number of users")->capture_default_str();
  seed_cmd->add_option("--requests", seed.requests, "Number of favor requests")->capture_default_str();
  seed_cmd->add_option("--seed", seed.seed, "Random seed")->capture_default_str();
  seed_cmd->add_option("--center-lat", seed.center_latitude, "Population center latitude")->capture_default_str();
  seed_cmd->add_option("--center-lon", seed.center_longitude, "Population center longitude")->capture_default_str();
  seed_cmd->add_option("--spread", seed.spread_m, "Half-width of the scatter box (m)")->capture_default_str();
  seed_cmd->add_option("--now", seed_now, "Creation timestamp, e.g. 2026-01-01T00:00:00Z");
  seed_cmd->add_flag("--force", seed.force, "Overwrite a non-empty store");

  std::string wordlist_path;
  auto* wl_cmd = app.add_subcommand("wordlist-check", "Validate a keyword list file");
  wl_cmd->add_option("path", wordlist_path, "Wordlist file")->required();

  std::string script_path;
  std::string base_url = "http://127.0.0.1:8080";
  auto* sc_cmd = app.add_subcommand("scenario", "Run a scenario script against a live server");
  sc_cmd->add_option("script", script_path, "Scenario file")->required();
  sc_cmd->add_option("--base-url", base_url, "Server base URL")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  if (*serve_cmd) return cmd_serve(serve);
  if (*seed_cmd) {
    if (!seed_now.empty()) {
      const auto t = f1::parse_timestamp(seed_now);
      if (!t) {
        std::cerr << "error: bad --now timestamp\n";
        return kInvalid;
      }
      seed.now = *t;
    }
    return cmd_seed(seed_dir, seed);
  }
  if (*wl_cmd) return cmd_wordlist_check(wordlist_path);
  if (*sc_cmd) return cmd_scenario(script_path, base_url);
  return kInvalid;
}
