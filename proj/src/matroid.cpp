#include "mel/matroid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mel/error.hpp"
#include "mel/linalg.hpp"
#include "mel/parallel.hpp"
#include "mel/pointset.hpp"

namespace mel::matroid {

namespace {

std::uint64_t saturating_power(std::uint64_t base, std::uint64_t exp) {
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    r *= base;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

std::vector<SubsetMask> masks_of_size(std::size_t n, std::size_t size) {
  std::vector<SubsetMask> out;
  for (std::uint32_t b = 0; b < (1u << n); ++b)
    if (static_cast<std::size_t>(std::popcount(b)) == size) out.emplace_back(b);
  return out;
}

}  // namespace

Matroid::Matroid(const Instance& instance, OracleOptions options) : instance_(instance), options_(options) {
  if (instance.n() > kMaxGroundSet) throw DomainError("ground set larger than " + std::to_string(kMaxGroundSet));
}

std::uint32_t Matroid::degree_cap(SubsetMask A) const {
  if (A.empty()) return 0;
  const std::uint64_t e = std::min<std::uint64_t>(A.size() - 1, instance_.s);
  const std::uint64_t cap = saturating_power(std::max<std::uint32_t>(instance_.d(), 1), e);
  return static_cast<std::uint32_t>(std::min<std::uint64_t>(cap, std::numeric_limits<std::uint32_t>::max()));
}

bool Matroid::annihilator_free(SubsetMask A) const {
  // Relations of degree D are relations of every larger degree, so doubling D finds a
  // dependency at most twice its minimal degree.
  const std::uint32_t cap = degree_cap(A);
  for (std::uint32_t D = 1;; D = std::min(cap, 2 * D)) {
    if (!implicit::annihilator_space(instance_, A, D, options_.implicit()).empty()) return false;
    if (D == cap) return true;
  }
}

bool Matroid::independent(SubsetMask A) const {
  if (!SubsetMask::full(n()).contains(A)) throw DomainError("subset outside the ground set");
  if (A.empty()) return true;
  if (A.size() > instance_.s) return false;
  {
    std::shared_lock lock(mutex_);
    if (auto it = memo_.find(A.bits()); it != memo_.end()) return it->second;
  }
  bool result = true;
  for (auto i : A.elements())
    if (!independent(A.without(i))) {
      result = false;
      break;
    }
  if (result) result = annihilator_free(A);
  std::unique_lock lock(mutex_);
  memo_.emplace(A.bits(), result);
  return result;
}

std::uint32_t Matroid::rank(SubsetMask A) const {
  SubsetMask I;
  for (auto j : A.elements())
    if (independent(I.with(j))) I = I.with(j);
  return static_cast<std::uint32_t>(I.size());
}

RankTable::RankTable(std::size_t n, std::vector<std::uint32_t> ranks) : n_(n), ranks_(std::move(ranks)) {
  if (ranks_.size() != (std::size_t{1} << n)) throw DomainError("rank table size does not match 2^n");
}

RankAxiomReport RankTable::check_axioms() const {
  RankAxiomReport rep;
  const std::uint32_t total = 1u << n_;
  auto fail = [&](bool& flag, const std::string& what) {
    if (flag && rep.violation.empty()) rep.violation = what;
    flag = false;
  };
  for (std::uint32_t a = 0; a < total; ++a) {
    const SubsetMask A(a);
    if (ranks_[a] > A.size()) fail(rep.r1, "r" + to_string(A) + " > |A|");
    for (std::size_t j = 0; j < n_; ++j)
      if (!A.contains(j) && ranks_[A.with(j).bits()] < ranks_[a])
        fail(rep.r2, "r decreases from " + to_string(A) + " to " + to_string(A.with(j)));
  }
  if (ranks_[0] != 0) fail(rep.r1, "r({}) != 0");
  if (n_ <= 12) {
    for (std::uint32_t a = 0; a < total; ++a)
      for (std::uint32_t b = a; b < total; ++b)
        if (ranks_[a | b] + ranks_[a & b] > ranks_[a] + ranks_[b])
          fail(rep.r3, "submodularity fails for " + to_string(SubsetMask(a)) + ", " + to_string(SubsetMask(b)));
  } else {
    for (std::uint32_t a = 0; a < total; ++a)
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) {
          const SubsetMask A(a);
          if (A.contains(i) || A.contains(j)) continue;
          if (ranks_[A.with(i).with(j).bits()] + ranks_[a] > ranks_[A.with(i).bits()] + ranks_[A.with(j).bits()])
            fail(rep.r3, "submodularity fails at " + to_string(A) + " + " + std::to_string(i + 1) + ", " +
                             std::to_string(j + 1));
        }
  }
  return rep;
}

RankTable rank_table(const Matroid& matroid) {
  const std::size_t n = matroid.n();
  std::vector<std::uint32_t> ranks(std::size_t{1} << n, 0);
  for (std::size_t level = 1; level <= n; ++level) {
    const auto masks = masks_of_size(n, level);
    std::vector<char> indep(masks.size());
    parallel_chunks(masks.size(), matroid.options().workers, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) indep[i] = matroid.independent(masks[i]);
    });
    for (std::size_t i = 0; i < masks.size(); ++i) {
      const SubsetMask A = masks[i];
      std::uint32_t r = 0;
      if (indep[i]) {
        r = static_cast<std::uint32_t>(level);
      } else {
        for (auto j : A.elements()) r = std::max(r, ranks[A.without(j).bits()]);
      }
      ranks[A.bits()] = r;
    }
  }
  RankTable table(n, std::move(ranks));
  if (const auto rep = table.check_axioms(); !rep.ok())
    throw SoundnessError("rank table violates the matroid axioms: " + rep.violation);
  return table;
}

std::vector<SubsetMask> circuits(const Matroid& matroid) {
  const std::size_t n = matroid.n();
  const std::size_t max_size = std::min(n, matroid.instance().s + 1);
  std::vector<SubsetMask> found;
  for (std::size_t size = 1; size <= max_size; ++size) {
    for (const SubsetMask A : masks_of_size(n, size)) {
      if (std::any_of(found.begin(), found.end(), [&](SubsetMask c) { return A.contains(c); })) continue;
      if (!matroid.independent(A)) found.push_back(A);
    }
  }
  for (const SubsetMask C : found) {
    if (matroid.independent(C)) throw SoundnessError("circuit " + to_string(C) + " is independent");
    for (auto i : C.elements())
      if (!matroid.independent(C.without(i)))
        throw SoundnessError("circuit " + to_string(C) + " is not minimal");
  }
  return found;
}

SubsetMask fundamental_circuit(const Matroid& matroid, SubsetMask I, std::size_t j) {
  const SubsetMask E = SubsetMask::full(matroid.n());
  if (!E.contains(I) || j >= matroid.n()) throw DomainError("subset outside the ground set");
  if (I.contains(j)) throw DomainError("element " + std::to_string(j + 1) + " lies in " + to_string(I));
  if (!matroid.independent(I) || I.size() != matroid.rank(E)) throw DomainError(to_string(I) + " is not a base");
  const SubsetMask U = I.with(j);
  SubsetMask C = SubsetMask::singleton(j);
  for (auto i : I.elements())
    if (matroid.independent(U.without(i))) C = C.with(i);
  if (matroid.independent(C)) throw SoundnessError("no circuit inside " + to_string(U));
  for (auto i : C.elements())
    if (!matroid.independent(C.without(i))) throw SoundnessError(to_string(C) + " is not minimally dependent");
  // Any circuit inside I + j contains j; check no other one exists.
  const auto rest = I.elements();
  for (std::uint32_t bits = 0; bits < (1u << rest.size()); ++bits) {
    SubsetMask S = SubsetMask::singleton(j);
    for (std::size_t t = 0; t < rest.size(); ++t)
      if ((bits >> t) & 1u) S = S.with(rest[t]);
    if (S == C || matroid.independent(S)) continue;
    bool minimal = true;
    for (auto i : S.elements()) minimal = minimal && matroid.independent(S.without(i));
    if (minimal) throw SoundnessError("circuits " + to_string(C) + " and " + to_string(S) + " inside " + to_string(U));
  }
  return C;
}

std::vector<std::uint64_t> projection_counts(const Instance& instance, std::uint32_t k,
                                             const PointcountOptions& options) {
  const gf::FieldRef F = pointset::extension_field(instance, k);
  const std::uint64_t q = F->size();
  const std::size_t n = instance.n();
  const std::uint64_t total = saturating_power(q, instance.s);
  if (total > options.grid_guard)
    throw GuardError("source grid " + std::to_string(q) + "^" + std::to_string(instance.s) +
                     " exceeds the grid guard of " + std::to_string(options.grid_guard));
  const std::uint32_t subsets = 1u << n;
  // Small projections go to a bitmap over F^A, larger ones to a sorted key list.
  constexpr std::uint64_t kBitmapLimit = std::uint64_t{1} << 27;
  std::vector<std::uint64_t> space(subsets);
  std::vector<bool> use_bitmap(subsets);
  for (std::uint32_t a = 0; a < subsets; ++a) {
    const std::uint64_t size = saturating_power(q, SubsetMask(a).size());
    if (size > std::numeric_limits<std::uint64_t>::max() / 2)
      throw GuardError("projection keys do not fit in 64 bits");
    space[a] = size;
    use_bitmap[a] = size <= kBitmapLimit;
  }
  std::vector<mpoly::CompiledPoly> coords;
  for (const auto& f : instance.polys) coords.emplace_back(f, F);

  const unsigned workers = std::max(1u, options.workers);
  struct Part {
    std::vector<std::vector<std::uint64_t>> bitmaps;
    std::vector<std::vector<std::uint64_t>> keys;
  };
  std::vector<Part> parts(workers);
  parallel_chunks(total, workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    Part& part = parts[chunk];
    part.bitmaps.resize(subsets);
    part.keys.resize(subsets);
    for (std::uint32_t a = 1; a < subsets; ++a)
      if (use_bitmap[a]) part.bitmaps[a].assign((space[a] + 63) / 64, 0);
    std::vector<gf::Code> x(instance.s), y(n);
    std::uint64_t idx = begin;
    for (std::size_t i = instance.s; i-- > 0;) {
      x[i] = static_cast<gf::Code>(idx % q);
      idx /= q;
    }
    std::vector<std::uint64_t> key(subsets, 0);
    for (std::size_t p = begin; p < end; ++p) {
      for (std::size_t i = 0; i < n; ++i) y[i] = coords[i](x);
      for (std::uint32_t a = 1; a < subsets; ++a) {
        const std::size_t low = static_cast<std::size_t>(std::countr_zero(a));
        key[a] = key[a & (a - 1)] * q + y[low];
        if (use_bitmap[a])
          part.bitmaps[a][key[a] >> 6] |= std::uint64_t{1} << (key[a] & 63);
        else
          part.keys[a].push_back(key[a]);
      }
      for (std::size_t i = instance.s; i-- > 0;) {
        if (++x[i] < q) break;
        x[i] = 0;
      }
    }
    for (auto& ks : part.keys) {
      std::sort(ks.begin(), ks.end());
      ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    }
  });
  std::vector<std::uint64_t> counts(subsets, 0);
  counts[0] = total > 0 ? 1 : 0;
  for (std::uint32_t a = 1; a < subsets; ++a) {
    if (use_bitmap[a]) {
      std::vector<std::uint64_t> merged(parts[0].bitmaps[a].size(), 0);
      for (const auto& part : parts)
        for (std::size_t w = 0; w < part.bitmaps[a].size(); ++w) merged[w] |= part.bitmaps[a][w];
      for (auto w : merged) counts[a] += static_cast<std::uint64_t>(std::popcount(w));
    } else {
      std::vector<std::uint64_t> merged;
      for (const auto& part : parts) merged.insert(merged.end(), part.keys[a].begin(), part.keys[a].end());
      std::sort(merged.begin(), merged.end());
      counts[a] = static_cast<std::uint64_t>(std::unique(merged.begin(), merged.end()) - merged.begin());
    }
  }
  return counts;
}

std::vector<std::uint32_t> rank_pointcount_table(const Instance& instance, std::uint32_t k1, std::uint32_t k2,
                                                 const PointcountOptions& options) {
  if (k1 < 1 || k2 <= k1) throw DomainError("rank_pointcount needs 1 <= k1 < k2");
  const double ln_q0 = std::log(static_cast<double>(instance.q0()));
  auto slopes = [&](std::uint32_t k) {
    const auto counts = projection_counts(instance, k, options);
    std::vector<std::uint32_t> out(counts.size());
    for (std::size_t a = 0; a < counts.size(); ++a)
      out[a] = static_cast<std::uint32_t>(std::lround(std::log(static_cast<double>(counts[a])) / (k * ln_q0)));
    return out;
  };
  const auto r1 = slopes(k1);
  const auto r2 = slopes(k2);
  for (std::size_t a = 0; a < r1.size(); ++a)
    if (r1[a] != r2[a])
      throw DomainError("point-count slope of " + to_string(SubsetMask(static_cast<std::uint32_t>(a))) +
                        " unstable: " + std::to_string(r1[a]) + " at k=" + std::to_string(k1) + ", " +
                        std::to_string(r2[a]) + " at k=" + std::to_string(k2));
  return r1;
}

std::uint32_t rank_pointcount(const Instance& instance, SubsetMask A, std::uint32_t k1, std::uint32_t k2,
                              const PointcountOptions& options) {
  if (!SubsetMask::full(instance.n()).contains(A)) throw DomainError("subset outside the ground set");
  if (k1 < 1 || k2 <= k1) throw DomainError("rank_pointcount needs 1 <= k1 < k2");
  const double ln_q0 = std::log(static_cast<double>(instance.q0()));
  const auto elems = A.elements();
  auto slope = [&](std::uint32_t k) {
    const auto image = pointset::image_points(instance, k, {options.grid_guard, options.workers});
    std::vector<std::uint64_t> keys(image.size());
    const std::uint64_t q = image.field->size();
    for (std::size_t i = 0; i < image.size(); ++i) {
      std::uint64_t key = 0;
      for (auto e : elems) key = key * q + image.point(i)[e];
      keys[i] = key;
    }
    std::sort(keys.begin(), keys.end());
    const auto count = static_cast<double>(std::unique(keys.begin(), keys.end()) - keys.begin());
    return static_cast<std::uint32_t>(std::lround(std::log(count) / (k * ln_q0)));
  };
  const std::uint32_t a = slope(k1);
  const std::uint32_t b = slope(k2);
  if (a != b)
    throw DomainError("point-count slope of " + to_string(A) + " unstable: " + std::to_string(a) + " at k=" +
                      std::to_string(k1) + ", " + std::to_string(b) + " at k=" + std::to_string(k2));
  return a;
}

std::uint32_t jacobian_rank(const Instance& instance, SubsetMask A, std::uint32_t trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("jacobian_rank needs at least one trial");
  if (!SubsetMask::full(instance.n()).contains(A)) throw DomainError("subset outside the ground set");
  if (A.empty()) return 0;
  const std::uint64_t need = 2ull * instance.d() * A.size();
  std::uint32_t K = 1;
  for (std::uint64_t size = instance.q0(); size <= need; size *= instance.q0()) ++K;
  const gf::FieldRef F = pointset::extension_field(instance, K);
  std::vector<std::vector<mpoly::CompiledPoly>> partials;
  for (auto i : A.elements()) {
    std::vector<mpoly::CompiledPoly> row;
    for (std::size_t t = 0; t < instance.s; ++t)
      row.emplace_back(mpoly::partial_derivative(instance.polys[i], t), F);
    partials.push_back(std::move(row));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> dist(0, F->size() - 1);
  std::uint32_t best = 0;
  std::vector<gf::Code> x(instance.s);
  for (std::uint32_t t = 0; t < trials; ++t) {
    for (auto& c : x) c = static_cast<gf::Code>(dist(rng));
    std::vector<linalg::Row> rows;
    for (const auto& row : partials) {
      linalg::Row r;
      for (const auto& dp : row) r.push_back(dp(x));
      rows.push_back(std::move(r));
    }
    best = std::max(best, static_cast<std::uint32_t>(linalg::rank(F, rows, instance.s)));
  }
  return best;
}

}  // namespace mel::matroid
