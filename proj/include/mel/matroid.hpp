#pragma once

// The algebraic matroid of an instance: independence by the annihilator oracle, ranks,
// circuits, fundamental circuits, and two cross-check oracles (point-count slope and
// Jacobian rank).

#include <cstdint>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "mel/implicit.hpp"
#include "mel/instance.hpp"
#include "mel/subset.hpp"

namespace mel::matroid {

struct OracleOptions {
  std::uint64_t grid_guard = kDefaultGridGuard;
  std::uint64_t monomial_guard = mpoly::kDefaultMonomialGuard;
  unsigned workers = 1;

  implicit::ImplicitOptions implicit() const { return {grid_guard, monomial_guard, workers}; }
};

class Matroid {
 public:
  Matroid(const Instance& instance, OracleOptions options = {});

  const Instance& instance() const { return instance_; }
  const OracleOptions& options() const { return options_; }
  std::size_t n() const { return instance_.n(); }

  /// Exact and memoized. A is independent iff no nonzero relation of degree <= degree_cap(A).
  bool independent(SubsetMask A) const;

  /// Largest degree a minimal relation among f_A can need: d^min(|A|-1, s).
  std::uint32_t degree_cap(SubsetMask A) const;

  /// Size of a greedily built maximal independent subset of A.
  std::uint32_t rank(SubsetMask A) const;

 private:
  bool annihilator_free(SubsetMask A) const;

  const Instance& instance_;
  OracleOptions options_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::uint32_t, bool> memo_;
};

struct RankAxiomReport {
  bool r1 = true;  // 0 <= r(A) <= |A|
  bool r2 = true;  // monotone
  bool r3 = true;  // submodular
  std::string violation;

  bool ok() const { return r1 && r2 && r3; }
};

class RankTable {
 public:
  RankTable(std::size_t n, std::vector<std::uint32_t> ranks);

  std::size_t n() const { return n_; }
  std::uint32_t operator()(SubsetMask A) const { return ranks_[A.bits()]; }
  std::uint32_t m() const { return ranks_.back(); }
  const std::vector<std::uint32_t>& values() const { return ranks_; }

  /// Exhaustive over all pairs for n <= 12, over the equivalent local form beyond.
  RankAxiomReport check_axioms() const;

 private:
  std::size_t n_;
  std::vector<std::uint32_t> ranks_;
};

/// Built level by level; r(A) = |A| when A is independent, else max_j r(A - j).
/// Throws SoundnessError if the axioms fail.
RankTable rank_table(const Matroid& matroid);

/// All circuits in (size, bits) order; each re-verified as minimally dependent.
std::vector<SubsetMask> circuits(const Matroid& matroid);

/// The unique circuit inside I + j for a base I and j outside I.
SubsetMask fundamental_circuit(const Matroid& matroid, SubsetMask I, std::size_t j);

struct PointcountOptions {
  std::uint64_t grid_guard = kDefaultGridGuard;
  unsigned workers = 1;
};

/// round(ln|pi_A(Im Phi(F_{q0^k}))| / (k ln q0)) at k1 and k2; throws DomainError when the
/// two disagree.
std::uint32_t rank_pointcount(const Instance& instance, SubsetMask A, std::uint32_t k1, std::uint32_t k2,
                              const PointcountOptions& options = {});

/// Number of distinct projections pi_A(Im Phi(F_{q0^k})) for every A, indexed by mask.
std::vector<std::uint64_t> projection_counts(const Instance& instance, std::uint32_t k,
                                             const PointcountOptions& options = {});

/// rank_pointcount for every subset, sharing one pass over each source grid.
std::vector<std::uint32_t> rank_pointcount_table(const Instance& instance, std::uint32_t k1, std::uint32_t k2,
                                                 const PointcountOptions& options = {});

/// Max over `trials` seeded random points of F_{q0^K} (q0^K > 2 d |A|) of the rank of
/// [d f_i / d X_t]_{i in A}. Never exceeds rank(A); smaller means inseparable.
std::uint32_t jacobian_rank(const Instance& instance, SubsetMask A, std::uint32_t trials = 8,
                            std::uint64_t seed = 0);

}  // namespace mel::matroid
