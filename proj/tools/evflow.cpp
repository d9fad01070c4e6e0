// evflow: possibly-uninitialized variable analysis for EVL programs, with and
// without event-ordering filtering.
//
//   evflow [ifds|ide|diff] [options] file.evl...
//   evflow [--seed n] [--schedules n] oracle [--corpus dir] [--random n]

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evflow/driver.hpp"

int main(int argc, char** argv) {
  // A leading mode word is shorthand for --mode.
  std::vector<std::string> args(argv, argv + argc);
  if (args.size() > 1 && evflow::parse_mode(args[1])) {
    const std::string m = args[1];
    args[1] = "--mode=" + m;
  }
  std::vector<char*> cargs;
  for (auto& a : args) cargs.push_back(a.data());

  evflow::RunConfig cfg;
  std::string mode = "diff";
  std::string format = "text";
  std::vector<std::string> inputs;
  std::string event_model, dump_sg, dump_x;

  CLI::App app{"evflow: event-aware possibly-uninitialized variable analysis"};
  app.require_subcommand(0, 1);
  app.add_option("files", inputs, "EVL source files (analyzed as one program)");
  app.add_option("--mode", mode, "ifds, ide or diff")
      ->check(CLI::IsMember({"ifds", "ide", "diff"}));
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--event-model", event_model, "JSON event model config");
  app.add_option("--dump-supergraph", dump_sg, "write the supergraph as DOT");
  app.add_option("--dump-exploded", dump_x, "write the exploded supergraph as DOT");
  // Only the oracle uses these; accepted anywhere so they can precede it.
  app.add_option("--seed", cfg.seed, "seed for generated programs");
  app.add_option("--schedules", cfg.schedules, "dispatch decisions to enumerate");

  std::string corpus;
  auto* oracle = app.add_subcommand("oracle", "run the soundness and precision property checks");
  oracle->add_option("--corpus", corpus, "directory of .evl programs");
  oracle->fallthrough();
  oracle->add_option("--random", cfg.random_programs, "number of generated programs");

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return evflow::kExitError;
  }

  if (oracle->parsed()) {
    cfg.corpus_dir = corpus;
    return evflow::run_oracle(cfg, std::cout, std::cerr);
  }
  if (inputs.empty()) {
    std::cerr << app.help();
    return evflow::kExitError;
  }
  for (const auto& f : inputs) cfg.inputs.emplace_back(f);
  cfg.mode = *evflow::parse_mode(mode);
  cfg.format = format == "json" ? evflow::Format::Json : evflow::Format::Text;
  cfg.event_model = event_model;
  cfg.dump_supergraph = dump_sg;
  cfg.dump_exploded = dump_x;
  return evflow::run(cfg, std::cout, std::cerr).exit_code;
}
