#pragma once

// Subcommand dispatch shared by the `mel` executable and the tests.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mel/instance.hpp"

namespace mel::cli {

enum class Command { info, rank, circuits, annihilator, points, entropy, verify, sweep };
enum class Format { csv, json, jsonl };

struct RunConfig {
  std::filesystem::path instance_path;
  Command command = Command::info;
  std::vector<std::uint32_t> extensions;
  std::string circuit;                  // annihilator --circuit
  std::string subset;                   // annihilator --subset
  std::optional<std::uint32_t> degree;  // annihilator --degree
  bool image = false;                   // points: Im Phi(F) instead of V(F)
  Format format = Format::csv;
  std::optional<std::filesystem::path> out;
  std::uint64_t seed = 0;
  std::uint32_t jacobian_trials = 8;
  unsigned workers = 1;
  std::uint64_t grid_guard = kDefaultGridGuard;
  bool force = false;
  bool allow_loops = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBoundFailure = 2;

/// `a..b` with 1 <= a <= b.
std::vector<std::uint32_t> parse_ext_range(const std::string& text);

/// Runs one subcommand, writing results to `out` (or config.out) and diagnostics to `err`.
/// Returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mel::cli
