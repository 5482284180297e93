// mel: command-line front end for the entropic polymatroids of algebraic matroids.

#include <cstdlib>
#include <iostream>

#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "mel/cli.hpp"
#include "mel/parallel.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("mel");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("MEL_LOG")) spdlog::cfg::helpers::load_levels(env);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  using mel::cli::Command;
  using mel::cli::Format;

  mel::cli::RunConfig config;
  config.workers = mel::default_workers();
  std::string format = "csv";
  std::string ext_range;
  std::string out;

  CLI::App app{"Entropic polymatroids of algebraic matroids over finite fields"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json", "jsonl"}));
  app.add_option("--out", out, "Write results to this file");
  app.add_option("--seed", config.seed, "Seed for the Jacobian trials");
  app.add_option("--workers", config.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--grid-guard", config.grid_guard, "Maximum enumerated grid points")->check(CLI::PositiveNumber);
  app.add_flag("--force", config.force, "Accept instances whose source grid exceeds the guard");
  app.add_flag("--allow-loops", config.allow_loops, "Accept zero or constant coordinates");

  struct Sub {
    Command command;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {Command::info, "info", "Derived parameters n, d, m, delta and thresholds"},
      {Command::rank, "rank", "Rank table"},
      {Command::circuits, "circuits", "All circuits"},
      {Command::annihilator, "annihilator", "Circuit annihilator or annihilator space"},
      {Command::points, "points", "Points of V(F) (or Im Phi(F) with --image)"},
      {Command::entropy, "entropy", "Entropic polymatroid of V(F)"},
      {Command::verify, "verify", "Check every bound at the given extension degrees"},
      {Command::sweep, "sweep", "verify over a range of extension degrees"},
  };
  for (const auto& sub : subs) {
    CLI::App* s = app.add_subcommand(sub.name, sub.help);
    s->add_option("instance", config.instance_path, "Instance file")->required()->check(CLI::ExistingFile);
    s->callback([&config, c = sub.command] { config.command = c; });
    switch (sub.command) {
      case Command::annihilator:
        s->add_option("--circuit", config.circuit, "Circuit as 1,2,3");
        s->add_option("--subset", config.subset, "Subset as 1,2,3");
        s->add_option("--degree", config.degree, "Degree bound");
        break;
      case Command::points:
        s->add_option("--ext", config.extensions, "Extension degree")->required()->expected(1);
        s->add_flag("--image", config.image, "Enumerate the image of the parametrization");
        break;
      case Command::entropy:
        s->add_option("--ext", config.extensions, "Extension degree")->required()->expected(1);
        break;
      case Command::verify:
        s->add_option("--ext", config.extensions, "Extension degrees")->required()->delimiter(',');
        break;
      case Command::sweep:
        s->add_option("--ext-range", ext_range, "Extension degrees a..b")->required();
        break;
      default:
        break;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mel::cli::kExitError;
  }

  config.format = format == "json" ? Format::json : format == "jsonl" ? Format::jsonl : Format::csv;
  if (!out.empty()) config.out = out;
  if (config.command == Command::sweep) {
    try {
      config.extensions = mel::cli::parse_ext_range(ext_range);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return mel::cli::kExitError;
    }
  }
  return mel::cli::run(config, std::cout, std::cerr);
}
