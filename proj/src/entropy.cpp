#include "mel/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "mel/error.hpp"
#include "mel/parallel.hpp"

namespace mel::entropy {

namespace {

// Neumaier's compensated summation.
class Sum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

bool fits_packed(std::uint64_t q, std::size_t size) {
  unsigned __int128 r = 1;
  for (std::size_t i = 0; i < size; ++i) {
    r *= q;
    if (r > std::numeric_limits<std::uint64_t>::max()) return false;
  }
  return true;
}

// Exponent e with q^e == value, if any.
std::optional<std::uint32_t> exact_log(std::uint64_t value, std::uint64_t q) {
  std::uint32_t e = 0;
  while (value > 1) {
    if (value % q != 0) return std::nullopt;
    value /= q;
    ++e;
  }
  return value == 1 ? std::optional<std::uint32_t>(e) : std::nullopt;
}

bool uniform(const ProjectionHistogram& hist) { return hist.counts.front() == hist.counts.back(); }

template <class Witness>
void note(AxiomCheck& check, double slack, double eps, Witness&& witness) {
  if (check.checked == 0 || slack < check.worst_slack) check.worst_slack = slack;
  ++check.checked;
  if (slack < -eps && check.pass) {
    check.pass = false;
    check.witness = witness();
  }
}

}  // namespace

ProjectionHistogram histogram(const pointset::PointSet& points, SubsetMask A) {
  if (!SubsetMask::full(points.n).contains(A)) throw DomainError("subset outside the ground set");
  ProjectionHistogram hist;
  hist.subset = A;
  hist.total = points.size();
  if (hist.total == 0) return hist;
  const auto elems = A.elements();
  const std::uint64_t q = points.field->size();
  std::vector<std::uint64_t> runs;
  if (fits_packed(q, elems.size())) {
    std::vector<std::uint64_t> keys(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::uint64_t key = 0;
      for (auto e : elems) key = key * q + points.point(i)[e];
      keys[i] = key;
    }
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 0; i < keys.size();) {
      std::size_t j = i;
      while (j < keys.size() && keys[j] == keys[i]) ++j;
      runs.push_back(j - i);
      i = j;
    }
  } else {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    auto less = [&](std::size_t a, std::size_t b) {
      for (auto e : elems)
        if (points.point(a)[e] != points.point(b)[e]) return points.point(a)[e] < points.point(b)[e];
      return false;
    };
    std::sort(order.begin(), order.end(), less);
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j < order.size() && !less(order[i], order[j])) ++j;
      runs.push_back(j - i);
      i = j;
    }
  }
  std::sort(runs.begin(), runs.end(), std::greater<>());
  hist.counts = std::move(runs);
  return hist;
}

double entropy_from_counts(std::uint64_t total, std::span<const std::uint64_t> counts) {
  if (total == 0) throw DomainError("entropy of an empty point set");
  std::vector<std::uint64_t> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  if (sorted.front() == sorted.back()) return std::log(static_cast<double>(sorted.size()));
  // Equal counts are grouped so each distinct c contributes mult * c ln c once.
  Sum s;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double c = static_cast<double>(sorted[i]);
    if (sorted[i] > 1) s.add(static_cast<double>(j - i) * c * std::log(c));
    i = j;
  }
  const double N = static_cast<double>(total);
  return std::log(N) - s.value() / N;
}

double subset_entropy(const pointset::PointSet& points, SubsetMask A) {
  if (points.size() == 0) throw DomainError("entropy of an empty point set");
  const auto hist = histogram(points, A);
  return entropy_from_counts(hist.total, hist.counts);
}

PolymatroidTable polymatroid(const pointset::PointSet& points, unsigned workers) {
  if (points.size() == 0) throw DomainError("entropy of an empty point set");
  if (points.n > kMaxGroundSet) throw DomainError("ground set larger than " + std::to_string(kMaxGroundSet));
  PolymatroidTable t;
  t.n = points.n;
  t.q = points.field->size();
  t.N = points.size();
  const std::size_t subsets = std::size_t{1} << points.n;
  t.h.assign(subsets, 0);
  t.H.assign(subsets, 0);
  t.fibers.assign(subsets, 0);
  const double ln_q = std::log(static_cast<double>(t.q));
  parallel_chunks(subsets, workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      const auto hist = histogram(points, SubsetMask(static_cast<std::uint32_t>(a)));
      t.fibers[a] = hist.fibers();
      t.H[a] = entropy_from_counts(hist.total, hist.counts);
      const auto e = uniform(hist) ? exact_log(hist.fibers(), t.q) : std::nullopt;
      t.h[a] = e ? static_cast<double>(*e) : t.H[a] / ln_q;
    }
  });
  return t;
}

double conditional_entropy(const pointset::PointSet& points, std::size_t j, SubsetMask J) {
  if (J.contains(j)) throw DomainError("element " + std::to_string(j + 1) + " lies in " + to_string(J));
  return subset_entropy(points, J.with(j)) - subset_entropy(points, J);
}

PolymatroidAxiomReport check_polymatroid_axioms(const PolymatroidTable& table, double eps) {
  PolymatroidAxiomReport rep;
  const std::size_t n = table.n;
  const std::uint32_t total = 1u << n;
  const auto& h = table.h;
  note(rep.normalized, -std::fabs(h[0]), eps, [] { return std::string("h({}) != 0"); });
  for (std::uint32_t a = 0; a < total; ++a) {
    const SubsetMask A(a);
    note(rep.bounded, std::min(h[a], static_cast<double>(A.size()) - h[a]), eps,
         [&] { return "h" + to_string(A) + " outside [0, |A|]"; });
    for (std::size_t j = 0; j < n; ++j)
      if (!A.contains(j))
        note(rep.monotone, h[A.with(j).bits()] - h[a], eps,
             [&] { return "h" + to_string(A.with(j)) + " < h" + to_string(A); });
  }
  if (n <= 12) {
    for (std::uint32_t a = 0; a < total; ++a)
      for (std::uint32_t b = a; b < total; ++b)
        note(rep.submodular, (h[a] + h[b]) - (h[a | b] + h[a & b]), eps, [&] {
          return "submodularity fails for " + to_string(SubsetMask(a)) + ", " + to_string(SubsetMask(b));
        });
  } else {
    for (std::uint32_t a = 0; a < total; ++a)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          const SubsetMask A(a);
          if (A.contains(i) || A.contains(j)) continue;
          note(rep.submodular,
               (h[A.with(i).bits()] + h[A.with(j).bits()]) - (h[A.with(i).with(j).bits()] + h[a]), eps, [&] {
                 return "submodularity fails at " + to_string(A) + " + " + std::to_string(i + 1) + ", " +
                        std::to_string(j + 1);
               });
        }
  }
  return rep;
}

}  // namespace mel::entropy
