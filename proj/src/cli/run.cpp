#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "config.hpp"
#include "schroflow/cli.hpp"

namespace schroflow::cli {

namespace {

using Command = std::function<int(RunContext&, Block&, std::ostream&)>;

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{{"spectrum", cmd_spectrum}, {"evolve", cmd_evolve},
                                                    {"decay", cmd_decay},       {"kernel", cmd_kernel},
                                                    {"heat", cmd_heat},         {"compare", cmd_compare}};
  return table;
}

json load_json_file(const std::string& path, const std::string& what) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + what + " '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + " '" + path + "' is not valid JSON: " + e.what());
  }
}

/// --expect accepts inline JSON or a path to a JSON file.
json load_expect(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && arg[first] == '{') {
    try {
      return json::parse(arg);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("--expect is not valid JSON: ") + e.what());
    }
  }
  return load_json_file(arg, "expectation file");
}

int parse_threads(const std::string& s, const std::string& source) {
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || n < 1) throw ConfigError(source + " must be a positive integer");
  return n;
}

int execute(const std::string& name, const std::string& config_path, const std::string& out_dir,
            const std::string& expect_arg, const std::string& threads_arg, std::ostream& out) {
  RunContext ctx;
  ctx.command = name;
  ctx.config = load_json_file(config_path, "config");
  if (!ctx.config.is_object()) throw ConfigError("config must be a JSON object");
  ctx.prov.command = name;
  ctx.prov.config_hash = config_hash(ctx.config);

  if (!threads_arg.empty()) {
    ctx.threads = parse_threads(threads_arg, "--threads");
  } else if (const char* env = std::getenv("SCHROFLOW_THREADS"); env != nullptr && *env != '\0') {
    ctx.threads = parse_threads(env, "SCHROFLOW_THREADS");
  }
  if (!expect_arg.empty()) ctx.expect = load_expect(expect_arg);

  Block root(&ctx.config, "", &ctx.prov);
  ctx.seed = root.get<std::uint64_t>("seed", 1);
  Block ob = root.child("output");
  const std::string dir = ob.get<std::string>("directory", ".");
  ob.finish();
  ctx.out_dir = out_dir.empty() ? std::filesystem::path(dir) : std::filesystem::path(out_dir);
  return commands().at(name)(ctx, root, out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inverse-square Schroedinger flows: spectra, evolution, kernels, decay and heat checks"};
  app.name("schroflow");
  app.require_subcommand(1, 1);
  std::string config, out_dir, expect, threads;
  for (const auto& [name, fn] : commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--expect", expect, "expectations as inline JSON or a JSON file");
    sub->add_option("--threads", threads, "worker threads (fallback: SCHROFLOW_THREADS)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    return execute(name, config, out_dir, expect, threads, out);
  } catch (const HardyViolation& e) {
    err << "hardy: " << e.what() << "\n";
    return kHardyInvalid;
  } catch (const ExpectationMiss& e) {
    err << "expectation miss: " << e.what() << "\n";
    return kExpectationMiss;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const BoundsError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace schroflow::cli
