// hybcav: design and validation runs for diamond-air microcavities.
//
//   hybcav sweep-thickness --config fixtures/fig2.conf --out fig2.csv
//   hybcav optimize --config fixtures/fig5.conf --format json --jobs 4
//
// Exit codes: 0 ok, 2 configuration error, 3 numeric failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hybcav/commands.hpp"
#include "hybcav/config.hpp"
#include "hybcav/errors.hpp"
#include "hybcav/output.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericError = 3;

struct Options {
  std::string config;
  std::string out;
  std::string format = "csv";
  int jobs = 1;
  long long seed = 0;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "Run configuration (key = value), or an earlier output")
      ->required();
  cmd->add_option("--out", o.out, "Output file (default: stdout)");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Reserved; every model is deterministic");
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hybcav::ConfigError("cannot write '" + path + "'");
  out << text;
}

// A previous run's CSV or JSON output works as a configuration too.
hybcav::RunConfig load_any(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hybcav::ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (text.rfind("# {", 0) == 0 || text.rfind("{", 0) == 0) return hybcav::config_from_output(text);
  return hybcav::parse_config(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid diamond-air microcavity design toolkit"};
  app.set_version_flag("--version", std::string(HYBCAV_TOOL_VERSION));
  app.require_subcommand(1);

  Options o;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"sweep-thickness", "Linewidth and ZPL emission versus diamond thickness"},
      {"losses", "Effective losses versus thickness, or the mode trade-off versus roughness"},
      {"modes", "Gaussian mode solutions, g0 and clipping"},
      {"optimize", "Optimal outcoupler transmission versus vibration level"},
      {"field-profile", "Standing-wave field through the stack"},
      {"validate", "Check a configuration and print its canonical form"},
  };
  for (const auto& s : subs) add_common(app.add_subcommand(s.name, s.help), o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const auto cfg = load_any(o.config);
    if (command == "validate") {
      emit("# config_hash " + hybcav::config_hash(cfg) + "\n" + hybcav::canonical_text(cfg), o.out);
      return 0;
    }
    hybcav::Table table;
    if (command == "sweep-thickness") {
      table = hybcav::cmd_sweep_thickness(cfg, o.jobs);
    } else if (command == "losses") {
      table = hybcav::cmd_losses(cfg, o.jobs);
    } else if (command == "modes") {
      table = hybcav::cmd_modes(cfg, o.jobs);
    } else if (command == "optimize") {
      table = hybcav::cmd_optimize(cfg, o.jobs);
    } else {
      table = hybcav::cmd_field_profile(cfg);
    }
    const auto fmt = o.format == "json" ? hybcav::Format::Json : hybcav::Format::Csv;
    emit(hybcav::render(table, {command, cfg}, fmt), o.out);
    return 0;
  } catch (const hybcav::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const hybcav::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const hybcav::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericError;
  }
}
