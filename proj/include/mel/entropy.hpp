#pragma once

// Shannon entropies of coordinate projections of the uniform distribution on a point set.
// All logarithms are natural; h = H / ln|F|.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mel/pointset.hpp"
#include "mel/subset.hpp"

namespace mel::entropy {

inline constexpr double kEpsNum = 1e-9;

struct ProjectionHistogram {
  SubsetMask subset;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> counts;  // fiber sizes, descending

  std::size_t fibers() const { return counts.size(); }
};

ProjectionHistogram histogram(const pointset::PointSet& points, SubsetMask A);

/// ln N - (1/N) sum c ln c from integer counts (sorted descending, compensated sum).
double entropy_from_counts(std::uint64_t total, std::span<const std::uint64_t> counts);

/// H(S_A) in nats. Throws DomainError on an empty point set.
double subset_entropy(const pointset::PointSet& points, SubsetMask A);

struct PolymatroidTable {
  std::size_t n = 0;
  std::uint64_t q = 0;
  std::uint64_t N = 0;
  std::vector<double> h;               // indexed by mask
  std::vector<double> H;               // nats
  std::vector<std::uint64_t> fibers;   // distinct projected values

  double operator()(SubsetMask A) const { return h[A.bits()]; }
};

/// h(A) = H(S_A) / ln q for all A. Uniform projections onto q^e values give h = e exactly.
PolymatroidTable polymatroid(const pointset::PointSet& points, unsigned workers = 1);

/// H(S_{J+j}) - H(S_J) in nats; j must lie outside J.
double conditional_entropy(const pointset::PointSet& points, std::size_t j, SubsetMask J);

struct AxiomCheck {
  bool pass = true;
  double worst_slack = 0;  // smallest margin over all checked instances
  std::uint64_t checked = 0;
  std::string witness;     // first violation
};

struct PolymatroidAxiomReport {
  AxiomCheck normalized;
  AxiomCheck bounded;  // 0 <= h(A) <= |A|
  AxiomCheck monotone;
  AxiomCheck submodular;

  bool ok() const { return normalized.pass && bounded.pass && monotone.pass && submodular.pass; }
};

/// Monotonicity over covering pairs, submodularity over all pairs for n <= 12 and over the
/// equivalent local form beyond.
PolymatroidAxiomReport check_polymatroid_axioms(const PolymatroidTable& table, double eps = kEpsNum);

}  // namespace mel::entropy
