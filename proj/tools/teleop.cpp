#include "teleop/service/expert.hpp"
#include "teleop/service/plots.hpp"
#include "teleop/service/run.hpp"
#include "teleop/service/schema.hpp"
#include "teleop/service/serve.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace teleop;

namespace {

std::string default_fixtures() {
  if (const char* env = std::getenv("TELEOP_FIXTURES")) return env;
  return TELEOP_FIXTURE_DIR;
}

void print(const KeyValues& kv) {
  for (const auto& [k, v] : kv) std::cout << k << "=" << v << "\n";
}

// Creates the directory an output file will land in.
const std::string& with_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  return path;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

// Hold-still pilot for scenarios run without a trace.
PilotSource idle_pilot(const Scenario& sc) {
  PilotInput in;
  in.q_aH = sc.arm_q;
  return [in](const Session& s) -> std::optional<PilotInput> {
    PilotInput p = in;
    p.timestamp = s.tick() * s.config().timing.control_dt;
    return p;
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Whole-body bilateral teleoperation: sessions, logs and the live bridge"};
  app.require_subcommand(1);
  std::string fixtures = default_fixtures();
  std::string config_path;
  app.add_option("--fixtures", fixtures, "fixture directory (scenarios/, traces/)");
  app.add_option("--config", config_path, "parameter file (default: $TELEOP_CONFIG)");

  auto* run = app.add_subcommand("run", "run a scenario with a scripted pilot and write its log");
  std::string scenario_arg, trace_arg, log_out;
  run->add_option("--scenario", scenario_arg, "scenario name or path")->required();
  run->add_option("--trace", trace_arg, "pilot trace (default: the scenario's own)");
  run->add_option("--log", log_out, "output log path (default: <scenario>.log)");

  auto* rep = app.add_subcommand("replay", "re-simulate a log from its pilot columns");
  std::string log_in, rep_out;
  bool check = false;
  rep->add_option("--log", log_in, "input log")->required();
  rep->add_option("--out", rep_out, "write the replayed log here");
  rep->add_flag("--check", check, "exit 1 if the state columns differ");

  auto* ev = app.add_subcommand("eval", "evaluate a log against its scenario");
  ev->add_option("--log", log_in, "input log")->required();

  auto* exp = app.add_subcommand("export-plot-data", "write per-panel CSVs from a log");
  std::string out_dir;
  exp->add_option("--log", log_in, "input log")->required();
  exp->add_option("--out", out_dir, "output directory")->required();

  auto* author = app.add_subcommand("author-trace", "record the expert pilot on a box scenario");
  std::string trace_out;
  author->add_option("--scenario", scenario_arg, "scenario name or path")->required();
  author->add_option("--out", trace_out, "output trace path")->required();

  auto* serve = app.add_subcommand("serve", "live bridge for the operator console");
  ServeOptions so;
  serve->add_option("--host", so.host, "bind address");
  serve->add_option("--port", so.port, "wire stream port");
  serve->add_option("--http-port", so.http_port, "schema endpoint port (-1 disables)");
  serve->add_option("--log-dir", so.log_dir, "write one log per session here");
  serve->add_option("--sessions", so.max_sessions, "exit after this many sessions (0: never)");

  auto* docs = app.add_subcommand("docs", "regenerate the format documents");
  docs->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const TeleopConfig cfg = load_config(config_path);

    if (*run) {
      const Scenario sc = load_scenario(find_scenario(scenario_arg, fixtures));
      std::string trace_path = trace_arg.empty() ? sc.trace : trace_arg;
      PilotSource pilot = trace_path.empty() ? idle_pilot(sc) : trace_pilot(read_trace(trace_path));
      const RunLog log = run_scenario(sc, cfg, pilot);
      const std::string path = log_out.empty() ? sc.name + ".log" : log_out;
      write_log(log, with_parent(path));
      std::cout << "log=" << path << "\n";
      print(evaluation_to_key_values(evaluate_scenario(log)));
      return 0;
    }
    if (*rep) {
      const RunLog log = read_log(log_in);
      const RunLog again = replay(log);
      if (!rep_out.empty()) write_log(again, with_parent(rep_out));
      const LogMismatch m = compare_state_columns(log, again);
      std::cout << "identical=" << (m.identical ? "true" : "false") << "\n";
      if (!m.identical) std::cout << "first_mismatch_tick=" << m.row << "\nfirst_mismatch_column=" << m.column << "\n";
      return check && !m.identical ? 1 : 0;
    }
    if (*ev) {
      print(evaluation_to_key_values(evaluate_scenario(read_log(log_in))));
      return 0;
    }
    if (*exp) {
      const RunLog log = read_log(log_in);
      fs::create_directories(out_dir);
      for (const PlotTable& t : plot_tables(log)) {
        const fs::path p = fs::path(out_dir) / (t.name + ".csv");
        write_text(p, format_plot_table(t));
        std::cout << p.string() << "\n";
      }
      return 0;
    }
    if (*author) {
      const Scenario sc = load_scenario(find_scenario(scenario_arg, fixtures));
      Session session(sc, cfg);
      ExpertPilot expert(sc, cfg);
      PilotTrace trace;
      const RunLog log = run_session(session, [&](const Session& s) -> std::optional<PilotInput> {
        trace.rows.push_back(expert.next(s));
        return trace.rows.back();
      });
      write_trace(trace, with_parent(trace_out));
      std::cout << "trace=" << trace_out << "\n";
      print(evaluation_to_key_values(evaluate_scenario(log)));
      return 0;
    }
    if (*serve) {
      so.fixture_dir = fixtures;
      so.config = cfg;
      Server server(so);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "wire=" << so.host << ":" << server.port() << "\n";
      if (server.http_port() >= 0) {
        std::cout << "schema=http://" << so.host << ":" << server.http_port() << "/schema\n";
      }
      std::cout.flush();
      server.run();
      const ServeStats st = server.stats();
      std::cout << "sessions=" << st.sessions << "\nticks=" << st.ticks << "\nrejected=" << st.rejected
                << "\njitter_p99_ms=" << st.jitter_p99_ms << "\n";
      for (const std::string& l : st.logs) std::cout << "log=" << l << "\n";
      g_server = nullptr;
      return 0;
    }
    if (*docs) {
      fs::create_directories(out_dir);
      write_text(fs::path(out_dir) / "log-columns.md", log_column_dictionary());
      write_text(fs::path(out_dir) / "plot-data.md", plot_data_dictionary());
      write_text(fs::path(out_dir) / "wire-layout.md", wire_protocol_markdown());
      write_text(fs::path(out_dir) / "wire-schema.json", wire_schema_json());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
