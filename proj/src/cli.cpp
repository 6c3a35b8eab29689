#include "coopsafe/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "coopsafe/report.hpp"

namespace coopsafe {

namespace {

struct Options {
  std::vector<std::string> models;
  std::string catalog;
  std::string out;
  std::string format = "json";
  std::string fail_on = "unfulfilled";
  bool timestamps = false;
};

void add_shared(CLI::App& cmd, Options& o) {
  cmd.add_option("--model,-m", o.models, "model file or directory of .coop files (repeatable)")->required();
  cmd.add_option("--catalog", o.catalog, "tactic catalog file (default: $COOP_SAFETY_CATALOG, else bundled)");
  cmd.add_option("--out,-o", o.out, "write the report to this file instead of standard output");
  cmd.add_option("--format,-f", o.format, "report format")->check(CLI::IsMember({"json", "markdown"}));
  cmd.add_option("--fail-on", o.fail_on, "exit non-zero on conflicts, unfulfilled FSRs, or never")
      ->check(CLI::IsMember({"conflicts", "unfulfilled", "none"}));
  cmd.add_flag("--timestamps", o.timestamps, "record the generation time in the report");
}

void print_diagnostics(const Diagnostics& diagnostics, std::ostream& err) {
  for (const Diagnostic& d : diagnostics) err << format_diagnostic(d) << "\n";
}

int exit_code_for(const Counts& counts, const std::string& fail_on) {
  if (fail_on == "none") return kExitOk;
  if (counts.conflicts > 0) return kExitConflicts;
  if (fail_on == "unfulfilled" && counts.unfulfilled.total() > 0) return kExitUnfulfilled;
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Derive functional safety requirements and check their fulfillment by a technical architecture",
               std::string(kToolName)};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Options options;
  const std::pair<const char*, Stage> stages[] = {
      {"validate", Stage::Validate}, {"hara", Stage::Hara},         {"goals", Stage::Goals},
      {"fsrs", Stage::Fsrs},         {"conflicts", Stage::Conflicts}, {"assess", Stage::Assess},
      {"report", Stage::Report},
  };
  const char* descriptions[] = {
      "parse and validate the model",
      "generate hazards and hazardous events",
      "derive ASIL-rated safety goals",
      "derive FSRs from fault trees",
      "check FSRs for conflicts",
      "check FSR fulfillment against the technical architecture",
      "run the full pipeline",
  };
  std::vector<std::pair<CLI::App*, Stage>> commands;
  for (std::size_t i = 0; i < std::size(stages); ++i) {
    CLI::App* cmd = app.add_subcommand(stages[i].first, descriptions[i]);
    add_shared(*cmd, options);
    commands.emplace_back(cmd, stages[i].second);
  }

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsageError;
  }
  PipelineConfig config;
  for (const auto& [cmd, stage] : commands) {
    if (cmd->parsed()) config.stage = stage;
  }
  for (const auto& m : options.models) config.model_paths.emplace_back(m);
  if (!options.catalog.empty()) {
    config.catalog_path = options.catalog;
  } else if (const char* env = std::getenv("COOP_SAFETY_CATALOG"); env != nullptr && *env != '\0') {
    config.catalog_path = env;
  }
  config.timestamps = options.timestamps;

  try {
    const AssessmentReport report = run_pipeline(config);
    print_diagnostics(report.analysis.warnings, err);
    const std::string text = render(report, options.format);
    if (options.out.empty()) {
      out << text;
    } else {
      std::ofstream file(options.out, std::ios::binary);
      if (!file || !(file << text)) {
        err << "error[IO]: cannot write '" << options.out << "'\n";
        return kExitInputError;
      }
    }
    return exit_code_for(report.counts, options.fail_on);
  } catch (const InputError& e) {
    print_diagnostics(e.diagnostics(), err);
    return kExitInputError;
  } catch (const AnalysisError& e) {
    for (const std::string& d : e.details()) err << "error[" << e.code() << "]: " << d << "\n";
    if (e.details().empty()) err << "error[" << e.code() << "]: " << e.what() << "\n";
    return kExitInputError;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsageError;
  }
}

}  // namespace coopsafe
