#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mel/gf.hpp"
#include "mel/mpoly.hpp"

namespace mel {

inline constexpr std::uint64_t kDefaultGridGuard = std::uint64_t{1} << 26;

struct ParseOptions {
  std::uint64_t grid_guard = kDefaultGridGuard;
  std::uint64_t field_guard = gf::kDefaultFieldGuard;
  bool force = false;        // accept instances whose source grid q0^s exceeds grid_guard
  bool allow_loops = false;  // accept zero or constant coordinates
};

/// A parametrization x -> (f_1(x), ..., f_n(x)) over the base field, defining the
/// algebraic matroid on {1..n} and the variety V (closure of the image).
struct Instance {
  std::string name;
  gf::FieldRef base;
  std::size_t s = 0;
  std::vector<mpoly::MPoly> polys;
  std::optional<std::uint32_t> declared_delta;

  std::size_t n() const { return polys.size(); }
  /// Maximum total degree of the coordinates (0 when all are constant).
  std::uint32_t d() const;
  std::uint64_t q0() const { return base->size(); }
};

/// Instance grammar:
///   field p=<prime> k=<int>
///   vars <s>
///   delta <int>                      (optional)
///   poly <term> (+ <term>)*          (one line per ground-set element)
/// `#` starts a comment. Coefficients are integers reduced mod p, or `[c0,c1,...]`
/// F_p vectors for k > 1. Errors are ParseError with line and column.
Instance parse_instance(std::string_view text, const ParseOptions& options = {}, std::string name = "instance");

Instance load_instance(const std::filesystem::path& path, const ParseOptions& options = {});

/// Canonical text form; parse_instance(render_instance(x)) reproduces x.
std::string render_instance(const Instance& instance);

enum class DeltaSource { declared, hypersurface, upper_bound };

std::string to_string(DeltaSource source);

struct Delta {
  std::uint32_t value = 1;
  DeltaSource source = DeltaSource::upper_bound;
};

/// Degree of V used by every bound: the declared value if present, else the exact
/// minimal annihilator degree for hypersurfaces (n = m + 1), else the upper bound d^m.
Delta delta_of(const Instance& instance, std::uint32_t m, std::optional<std::uint32_t> hypersurface_delta);

}  // namespace mel
