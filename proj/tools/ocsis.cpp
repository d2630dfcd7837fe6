// ocsis: validate procedure sets, run and replay scenarios, serve the feed.
//
// Exit status: 0 success, 1 diagnostics or divergence, 2 usage error,
// 3 runtime failure (unreadable input, bind failure, bad port).

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <sstream>
#include <thread>

#include "ocsis/dsl.hpp"
#include "ocsis/error.hpp"
#include "ocsis/scenario.hpp"
#include "ocsis/server.hpp"

namespace {

using namespace ocsis;

constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kUsage = 2;
constexpr int kRuntime = 3;

struct Failure {
  int status;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kRuntime, "cannot read " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Parses and lints; prints every diagnostic. Returns the set, or throws
// Failure(1) when any error was reported.
std::shared_ptr<const ProcedureSet> load_set(const std::vector<std::string>& paths, bool print_warnings) {
  std::vector<Source> sources;
  for (const auto& p : paths) {
    try {
      auto more = read_sources(p);
      sources.insert(sources.end(), more.begin(), more.end());
    } catch (const Error& e) {
      throw Failure{kRuntime, e.what()};
    }
  }
  auto result = parse(sources);
  for (const auto& d : result.diagnostics) std::cerr << render(d) << "\n";
  if (!result.ok()) throw Failure{kDiagnostics, ""};
  if (print_warnings) {
    for (const auto& d : lint(*result.set)) std::cerr << render(d) << "\n";
  }
  return std::make_shared<const ProcedureSet>(std::move(*result.set));
}

struct PerfFlags {
  std::string corrections;
  double vref = 0;
  double reference_distance = 0;

  void add(CLI::App* app) {
    app->add_option("--corrections", corrections, "Correction table for {VAPP} and {LDG_DIST} placeholders");
    app->add_option("--vref", vref, "Reference approach speed (kt)");
    app->add_option("--ref-landing-distance", reference_distance, "Reference landing distance (m)");
  }

  SessionConfig config() const {
    SessionConfig c;
    if (corrections.empty()) return c;
    if (!(vref > 0) || !(reference_distance > 0)) {
      throw Failure{kUsage, "--corrections needs positive --vref and --ref-landing-distance"};
    }
    try {
      c.perf = PerfSettings{vref, reference_distance, load_correction_table(corrections)};
    } catch (const Error& e) {
      throw Failure{e.code() == ErrorCode::Io ? kRuntime : kDiagnostics, e.what()};
    }
    return c;
  }
};

Scenario load_scenario_or_fail(const std::string& path, const Registry& registry) {
  try {
    return load_scenario(path, registry);
  } catch (const Error& e) {
    throw Failure{e.code() == ErrorCode::Io ? kRuntime : kDiagnostics, e.what()};
  }
}

int cmd_validate(const std::vector<std::string>& paths) {
  load_set(paths, true);
  return kOk;
}

int cmd_run(const std::string& scenario_path, const std::string& procedures, const std::string& trace_path,
            const PerfFlags& perf) {
  auto set = load_set({procedures}, false);
  auto scenario = load_scenario_or_fail(scenario_path, set->registry);
  auto config = perf.config();
  auto trace = run_headless(scenario, set, config);
  auto text = format_trace(trace);
  if (trace_path.empty()) {
    std::cout << text << std::flush;
  } else {
    std::ofstream out(trace_path, std::ios::binary);
    if (!(out << text)) throw Failure{kRuntime, "cannot write " + trace_path};
  }
  if (!trace.empty() && trace.back().dir == TraceDir::Error) {
    std::cerr << "ocsis: run stopped at tick " << trace.back().tick << ": " << trace.back().payload << "\n";
    return kDiagnostics;
  }
  return kOk;
}

int cmd_replay(const std::string& trace_path, const std::string& procedures, const PerfFlags& perf) {
  auto set = load_set({procedures}, false);
  std::vector<TraceRecord> trace;
  try {
    trace = parse_trace(read_file(trace_path), trace_path);
  } catch (const Error& e) {
    throw Failure{kDiagnostics, e.what()};
  }
  auto report = replay(trace, set, perf.config());
  if (!report.ok) {
    std::cerr << "ocsis: divergence";
    if (report.divergence_seq) std::cerr << " at seq " << *report.divergence_seq;
    std::cerr << ": " << report.message << "\n";
    return kDiagnostics;
  }
  std::cerr << "ocsis: replay ok, " << report.inputs << " inputs, " << report.events << " events\n";
  return kOk;
}

std::uint16_t parse_port(const std::string& text) {
  try {
    std::size_t used = 0;
    long v = std::stol(text, &used);
    if (used == text.size() && v >= 0 && v <= 65535) return static_cast<std::uint16_t>(v);
  } catch (const std::exception&) {
  }
  throw Failure{kRuntime, "bad port " + text};
}

int cmd_serve(const std::string& procedures, const std::string& scenario_path, const std::string& host,
              const std::string& port_text, double tick_rate, const std::string& record_path,
              const PerfFlags& perf) {
  auto port = parse_port(port_text);
  if (tick_rate < 0) throw Failure{kUsage, "--tick-rate must be >= 0"};
  auto set = load_set({procedures}, false);
  Session session(set, perf.config());

  ServerOptions options;
  options.host = host;
  options.port = port;
  options.tick_rate = tick_rate;
  if (!scenario_path.empty()) options.scenario = load_scenario_or_fail(scenario_path, set->registry);
  std::ofstream record;
  if (!record_path.empty()) {
    record.open(record_path, std::ios::binary);
    if (!record) throw Failure{kRuntime, "cannot write " + record_path};
    options.record = [&record](const TraceRecord& r) { record << format_trace({r}) << std::flush; };
  }
  options.log = [](const std::string& s) { std::cerr << "ocsis: " << s << "\n"; };

  // Handle SIGINT/SIGTERM on a dedicated thread; every other thread
  // inherits the blocked mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  FeedServer server(session, std::move(options));
  try {
    server.bind();
  } catch (const Error& e) {
    throw Failure{kRuntime, e.what()};
  }
  std::cerr << "ocsis: listening on " << host << ":" << server.port() << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.run();
  // run() only returns after stop(); wake the waiter if stop came from elsewhere.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-sensitive cockpit procedure engine"};
  app.set_config("--config", "", "Read option defaults from a TOML/INI file; flags win");
  app.require_subcommand(1);

  std::vector<std::string> validate_paths;
  auto* validate = app.add_subcommand("validate", "Parse and lint procedure files");
  validate->add_option("paths", validate_paths, "Files or directories")->required();

  std::string scenario, procedures, trace, host = "127.0.0.1", port = "7878", record;
  double tick_rate = 1.0;
  PerfFlags perf;

  auto* run = app.add_subcommand("run", "Run a scenario headless and print its trace");
  run->add_option("--scenario", scenario, "Scenario file (.ocss)")->required();
  run->add_option("--procedures", procedures, "Procedure directory or file")->required();
  run->add_option("--trace", trace, "Write the trace here instead of standard output");
  perf.add(run);

  auto* rep = app.add_subcommand("replay", "Re-execute a trace and check its events");
  rep->add_option("--trace", trace, "Trace file")->required();
  rep->add_option("--procedures", procedures, "Procedure directory or file")->required();
  perf.add(rep);

  auto* serve = app.add_subcommand("serve", "Serve the feed protocol");
  serve->add_option("--procedures", procedures, "Procedure directory or file")->required();
  serve->add_option("--scenario", scenario, "Scenario to play to connected clients");
  serve->add_option("--host", host, "Listen address")->capture_default_str();
  serve->add_option("--port", port, "Listen port (0 picks one)")->envname("OCSIS_PORT")->capture_default_str();
  serve->add_option("--tick-rate", tick_rate, "Scenario ticks per second; 0 waits for step messages")
      ->capture_default_str();
  serve->add_option("--record", record, "Append every input and event to this trace file");
  perf.add(serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(validate_paths);
    if (*run) return cmd_run(scenario, procedures, trace, perf);
    if (*rep) return cmd_replay(trace, procedures, perf);
    if (*serve) return cmd_serve(procedures, scenario, host, port, tick_rate, record, perf);
  } catch (const Failure& f) {
    if (!f.message.empty()) std::cerr << "ocsis: " << f.message << "\n";
    return f.status;
  } catch (const Error& e) {
    std::cerr << "ocsis: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
