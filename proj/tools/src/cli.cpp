#include "tsdantzig_cli/cli.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tsdantzig/error.hpp"
#include "tsdantzig/parallel.hpp"
#include "tsdantzig_cli/commands.hpp"
#include "tsdantzig_cli/config.hpp"
#include "tsdantzig_cli/table.hpp"

namespace tsdantzig::cli {

namespace {

struct Invocation {
  std::string config_path;
  std::size_t workers = 0;
  std::string out_path;
  std::string format = "csv";
  std::map<std::string, std::optional<std::string>> flags;
};

/// List keys also accept comma-separated flag values ("sfso,ar", "0,0.1,21").
Json flag_value(KeyKind kind, const std::string& text) {
  Json v = parse_override_value(text);
  if ((kind != KeyKind::number_list && kind != KeyKind::string_list) || v.is_array()) return v;
  Json list = Json::array();
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    if (kind == KeyKind::number_list) {
      list.push_back(parse_override_value(item));
    } else {
      list.push_back(item);
    }
    start = end + 1;
  }
  return list;
}

/// A JSON object, or the output of an earlier run whose first line is a
/// provenance header.
Json load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::string first;
  std::getline(in, first);
  if (first.rfind("# command=", 0) == 0) {
    const Provenance p = parse_provenance(first);
    if (p.command != command) throw ConfigError("--config", "'" + path + "' was produced by '" + p.command + "'");
    return p.config;
  }
  return load_config_file(path);
}

int execute(const std::string& command, const Invocation& inv, std::ostream& out, std::ostream& err) {
  const Schema& schema = schema_for(command);
  const Json file_config = inv.config_path.empty() ? Json() : load_config(inv.config_path, command);
  std::vector<std::pair<std::string, Json>> overrides;
  for (const auto& k : schema) {
    const auto& flag = inv.flags.at(k.name);
    if (flag) overrides.emplace_back(k.name, flag_value(k.kind, *flag));
  }
  const Json config = resolve_config(command, file_config, overrides);
  const OutputFormat format = parse_format(inv.format);
  const std::size_t workers = inv.workers == 0 ? tsdantzig::default_workers() : inv.workers;

  const Table table = run_command(command, config, workers, err);
  const Provenance provenance{command, get_seed(config), config_hash(config), config};
  emit_table(table, format, provenance, inv.out_path, out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse precision-functional estimation experiments", "tsdantzig"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::map<std::string, Invocation> invocations;
  for (const auto& name : command_names()) {
    Invocation& inv = invocations[name];
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", inv.config_path, "JSON config file or an earlier output with a provenance header");
    sub->add_option("--workers", inv.workers, "worker threads (0 = all cores)");
    sub->add_option("--out", inv.out_path, "output file (default stdout)");
    sub->add_option("--format", inv.format, "csv | json");
    for (const auto& k : schema_for(name)) {
      auto& slot = inv.flags[k.name];
      sub->add_option_function<std::string>("--" + k.name, [&slot](const std::string& v) { slot = v; },
                                            k.help + " (default " + k.default_value.dump() + ")");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return execute(command, invocations.at(command), out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const tsdantzig::InvalidArgument& e) {
    err << "error: invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const tsdantzig::NumericalError& e) {
    err << "error: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tsdantzig::cli
