#pragma once

// Closed-form thresholds and deviation bounds, and the verification pipeline that compares
// them with exact entropies of V(F).

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mel/entropy.hpp"
#include "mel/implicit.hpp"
#include "mel/instance.hpp"
#include "mel/matroid.hpp"
#include "mel/pointset.hpp"

namespace mel::bounds {

enum class Variant { MAIN_INTRO, SEC4_FINAL, CONCLUSIONS, BASE_THM, INDEP_COR, CIRCUIT_COR, DEP_LEMMA, COND_ENTROPY };

std::string to_string(Variant v);

struct Thresholds {
  double nonempty = 0;  // 2 delta^4
  double langweil = 0;  // (5 delta^{7/3} + 1)^2
};

Thresholds thresholds(std::uint32_t delta);

/// q > (5 delta^{7/3} + 1)^2. Every variant is gated on this.
bool above_langweil(std::uint32_t delta, std::uint64_t q);

struct LangWeil {
  double lower = 0;  // q^m - 5 delta^{7/3} q^{m-1/2}
  double upper = 0;  // delta q^m
};

LangWeil langweil_bounds(std::uint32_t m, std::uint32_t delta, std::uint64_t q);

/// nullopt when q is at or below the Lang-Weil threshold. COND_ENTROPY is in nats, the
/// others in units of h.
std::optional<double> deviation_bound(Variant v, std::size_t n, std::uint32_t m, std::uint32_t delta,
                                      std::uint64_t q);

struct AnalysisOptions {
  std::uint64_t grid_guard = kDefaultGridGuard;
  std::uint64_t monomial_guard = mpoly::kDefaultMonomialGuard;
  unsigned workers = 1;

  matroid::OracleOptions oracle() const { return {grid_guard, monomial_guard, workers}; }
  pointset::PointOptions points() const { return {grid_guard, workers}; }
};

/// Everything about an instance that does not depend on the extension degree.
struct Analysis {
  const Instance* instance = nullptr;
  std::unique_ptr<matroid::Matroid> matroid;
  std::optional<matroid::RankTable> ranks;
  std::vector<SubsetMask> circuits;
  std::uint32_t m = 0;
  std::optional<std::uint32_t> hypersurface_delta;
  Delta delta;
  /// Relations of degree <= delta among all coordinates; empty for a free matroid.
  implicit::AnnihilatorBasis variety_basis;

  bool free() const { return m == instance->n(); }
};

Analysis analyze(const Instance& instance, const AnalysisOptions& options = {});

enum class SubsetClass { base, independent, circuit, dependent };

std::string to_string(SubsetClass c);

SubsetClass classify(const Analysis& analysis, SubsetMask A);

struct SubsetRow {
  SubsetMask subset;
  SubsetClass cls = SubsetClass::independent;
  std::uint32_t r = 0;
  double h = 0;
  double dev = 0;
  std::optional<double> main, sec4, concl, base, circ, dep;
  bool pass = true;
  std::string failure;
};

struct CondRow {
  SubsetMask circuit;
  std::size_t j = 0;
  double H = 0;  // H(P_j | P_{C - j}) in nats
  std::optional<double> bound;
  bool pass = true;
};

struct ExtensionReport {
  std::uint32_t k = 0;
  std::uint64_t q = 0;
  std::uint64_t N = 0;  // |V(F)|
  LangWeil langweil;
  Thresholds thresholds;
  bool applicable = false;
  bool nonempty_ok = true;
  bool lower_ok = true;
  bool upper_ok = true;
  double max_dev = 0;
  std::vector<SubsetRow> rows;
  std::vector<CondRow> cond;
  entropy::PolymatroidAxiomReport axioms;

  bool pass() const;
};

struct RateFit {
  double a = 0;  // coefficient of 1 / ln q
  double b = 0;  // coefficient of 1 / sqrt q
  double rms = 0;  // root-mean-square residual
  bool nonnegative() const { return a >= 0 && b >= 0; }
  friend bool operator==(const RateFit&, const RateFit&) = default;
};

/// Unconstrained least squares of dev ~ a / ln q + b / sqrt q; needs two distinct q.
std::optional<RateFit> fit_rate(std::span<const std::uint64_t> qs, std::span<const double> devs);

/// The same fit with a, b >= 0 (a boundary solution when the free fit has a negative coefficient).
std::optional<RateFit> fit_rate_nonnegative(std::span<const std::uint64_t> qs, std::span<const double> devs);

struct BoundReport {
  std::string instance;
  std::size_t n = 0;
  std::uint32_t m = 0;
  Delta delta;
  std::vector<ExtensionReport> extensions;
  bool max_dev_nonincreasing = true;
  std::optional<RateFit> fit;
  std::optional<RateFit> fit_nonnegative;

  bool pass() const;
};

ExtensionReport verify_extension(const Analysis& analysis, std::uint32_t k, const AnalysisOptions& options = {});

BoundReport verify(const Analysis& analysis, std::span<const std::uint32_t> extensions,
                   const AnalysisOptions& options = {});

/// %.15g
std::string format_number(double x);

inline constexpr const char* kCsvHeader =
    "instance,k,q,subset,r,h,dev,bound_main,bound_sec4,bound_concl,bound_base,bound_circ,bound_dep,applicable,pass";

void write_csv(std::ostream& out, const BoundReport& report, bool header = true);

nlohmann::ordered_json to_json(const BoundReport& report);

}  // namespace mel::bounds
