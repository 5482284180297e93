#include "mel/pointset.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>

#include "mel/error.hpp"
#include "mel/parallel.hpp"

namespace mel::pointset {

namespace {

std::uint64_t saturating_power(std::uint64_t base, std::uint64_t exp) {
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    r *= base;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

bool tuple_less(std::span<const gf::Code> a, std::span<const gf::Code> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Sorts and deduplicates row-major tuples. Packs each tuple into one integer when q^n fits.
std::vector<gf::Code> canonicalize(std::uint64_t q, std::size_t n, std::vector<gf::Code> coords) {
  if (n == 0) return {};
  const std::size_t rows = coords.size() / n;
  if (saturating_power(q, n) < std::numeric_limits<std::uint64_t>::max()) {
    std::vector<std::uint64_t> keys(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < n; ++i) key = key * q + coords[r * n + i];
      keys[r] = key;
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<gf::Code> out(keys.size() * n);
    for (std::size_t r = 0; r < keys.size(); ++r) {
      std::uint64_t key = keys[r];
      for (std::size_t i = n; i-- > 0;) {
        out[r * n + i] = static_cast<gf::Code>(key % q);
        key /= q;
      }
    }
    return out;
  }
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  auto row = [&](std::size_t r) { return std::span<const gf::Code>(coords.data() + r * n, n); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return tuple_less(row(a), row(b)); });
  std::vector<gf::Code> out;
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    if (idx > 0 && std::ranges::equal(row(order[idx]), row(order[idx - 1]))) continue;
    const auto r = row(order[idx]);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

// Advances x through F^len in odometer order (last coordinate fastest).
void increment(std::span<gf::Code> x, std::uint64_t q) {
  for (std::size_t i = x.size(); i-- > 0;) {
    if (++x[i] < q) return;
    x[i] = 0;
  }
}

void decode(std::uint64_t index, std::span<gf::Code> x, std::uint64_t q) {
  for (std::size_t i = x.size(); i-- > 0;) {
    x[i] = static_cast<gf::Code>(index % q);
    index /= q;
  }
}

// g restricted to fixed values of the variables in `fixed`, as a dense univariate
// polynomial in the single remaining variable `free_var`.
class Specializer {
 public:
  Specializer(const mpoly::MPoly& g, std::span<const std::size_t> fixed, std::size_t free_var,
              const gf::FieldRef& target)
      : target_(target) {
    const auto emb = gf::get_embedding(g.field(), target);
    for (const auto& [m, c] : g.terms()) {
      Term t{(*emb)(c), m.exps[free_var], {}};
      for (std::size_t slot = 0; slot < fixed.size(); ++slot)
        if (m.exps[fixed[slot]] > 0) t.factors.emplace_back(slot, m.exps[fixed[slot]]);
      degree_ = std::max(degree_, t.free_exp);
      terms_.push_back(std::move(t));
    }
  }

  void operator()(std::span<const gf::Code> values, std::vector<gf::Code>& coef) const {
    const gf::Field& F = *target_;
    coef.assign(degree_ + 1, 0);
    for (const auto& t : terms_) {
      gf::Code v = t.coeff;
      for (const auto& [slot, e] : t.factors) {
        if (v == 0) break;
        v = F.mul(v, F.pow(values[slot], e));
      }
      coef[t.free_exp] = F.add(coef[t.free_exp], v);
    }
  }

 private:
  struct Term {
    gf::Code coeff;
    std::uint32_t free_exp;
    std::vector<std::pair<std::size_t, std::uint32_t>> factors;
  };
  gf::FieldRef target_;
  std::vector<Term> terms_;
  std::uint32_t degree_ = 0;
};

// Roots in F of a dense univariate polynomial; nullopt means it vanishes identically.
std::optional<std::vector<gf::Code>> roots(const gf::Field& F, const std::vector<gf::Code>& coef) {
  std::size_t deg = coef.size();
  while (deg > 0 && coef[deg - 1] == 0) --deg;
  if (deg == 0) return std::nullopt;
  if (deg == 1) return std::vector<gf::Code>{};
  if (deg == 2) return std::vector<gf::Code>{F.neg(F.div(coef[0], coef[1]))};
  std::vector<gf::Code> out;
  for (gf::Code x = 0; x < F.size(); ++x) {
    gf::Code acc = 0;
    for (std::size_t i = deg; i-- > 0;) acc = F.add(F.mul(acc, x), coef[i]);
    if (acc == 0) out.push_back(x);
  }
  return out;
}

PointSet all_points(const gf::FieldRef& F, std::size_t n, std::uint64_t guard) {
  const std::uint64_t q = F->size();
  const std::uint64_t total = saturating_power(q, n);
  if (total > guard)
    throw GuardError("enumerating F^n needs " + std::to_string(q) + "^" + std::to_string(n) +
                     " points, above the grid guard of " + std::to_string(guard));
  PointSet ps{F, n, std::vector<gf::Code>(total * n), Provenance::variety};
  std::vector<gf::Code> x(n, 0);
  for (std::uint64_t r = 0; r < total; ++r) {
    std::copy(x.begin(), x.end(), ps.coords.begin() + static_cast<std::ptrdiff_t>(r * n));
    increment(x, q);
  }
  return ps;
}

}  // namespace

std::string to_string(Provenance p) { return p == Provenance::image ? "image" : "variety"; }

gf::FieldRef extension_field(const Instance& instance, std::uint32_t ext_k) {
  if (ext_k < 1) throw DomainError("extension degree must be at least 1");
  return gf::get_field(instance.base->characteristic(), instance.base->degree() * ext_k);
}

PointSet image_points(const Instance& instance, std::uint32_t ext_k, const PointOptions& options) {
  const gf::FieldRef F = extension_field(instance, ext_k);
  const std::uint64_t q = F->size();
  const std::uint64_t total = saturating_power(q, instance.s);
  if (total > options.grid_guard)
    throw GuardError("source grid " + std::to_string(q) + "^" + std::to_string(instance.s) +
                     " exceeds the grid guard of " + std::to_string(options.grid_guard));
  const std::size_t n = instance.n();
  std::vector<mpoly::CompiledPoly> coords;
  for (const auto& f : instance.polys) coords.emplace_back(f, F);

  const unsigned workers = std::max(1u, options.workers);
  std::vector<std::vector<gf::Code>> parts(workers);
  parallel_chunks(total, workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    std::vector<gf::Code> x(instance.s);
    decode(begin, x, q);
    auto& out = parts[chunk];
    out.reserve((end - begin) * n);
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& f : coords) out.push_back(f(x));
      increment(x, q);
    }
    out = canonicalize(q, n, std::move(out));
  });
  std::vector<gf::Code> merged;
  for (auto& part : parts) merged.insert(merged.end(), part.begin(), part.end());
  return PointSet{F, n, canonicalize(q, n, std::move(merged)), Provenance::image};
}

PointSet variety_points(const Instance& instance, std::uint32_t ext_k, const implicit::AnnihilatorBasis& basis,
                        const PointOptions& options) {
  const std::size_t n = instance.n();
  if (basis.varsubset != SubsetMask::full(n)) throw DomainError("variety needs a basis over the full ground set");
  const gf::FieldRef F = extension_field(instance, ext_k);
  const std::uint64_t q = F->size();

  PointSet result;
  if (basis.empty()) {
    result = all_points(F, n, options.grid_guard);
  } else {
    // Greedy base of the relation matroid; each other coordinate is then constrained by
    // the relations among the base variables and itself.
    std::vector<std::size_t> base_vars, other_vars;
    SubsetMask B;
    for (std::size_t j = 0; j < n; ++j) {
      if (implicit::restrict_to(basis.basis, B.with(j)).empty()) {
        B = B.with(j);
        base_vars.push_back(j);
      } else {
        other_vars.push_back(j);
      }
    }
    std::vector<std::vector<Specializer>> constraints;
    for (auto j : other_vars) {
      std::vector<Specializer> cs;
      for (const auto& g : implicit::restrict_to(basis.basis, B.with(j))) cs.emplace_back(g, base_vars, j, F);
      constraints.push_back(std::move(cs));
    }
    std::vector<mpoly::CompiledPoly> checks;
    for (const auto& g : basis.basis) checks.emplace_back(g, F);

    const std::uint64_t total = saturating_power(q, base_vars.size());
    if (total > options.grid_guard)
      throw GuardError("variety enumeration needs " + std::to_string(q) + "^" + std::to_string(base_vars.size()) +
                       " base points, above the grid guard of " + std::to_string(options.grid_guard));

    const gf::Field& FF = *F;
    const unsigned workers = std::max(1u, options.workers);
    std::vector<std::vector<gf::Code>> parts(workers);
    parallel_chunks(total, workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
      std::vector<gf::Code> b(base_vars.size());
      decode(begin, b, q);
      std::vector<gf::Code> y(n), coef;
      std::vector<std::vector<gf::Code>> candidates(other_vars.size());
      std::vector<std::size_t> pick(other_vars.size());
      auto& out = parts[chunk];
      for (std::size_t i = begin; i < end; ++i, increment(b, q)) {
        bool empty = false;
        for (std::size_t t = 0; t < other_vars.size() && !empty; ++t) {
          std::optional<std::vector<gf::Code>> cand;
          for (const auto& c : constraints[t]) {
            c(b, coef);
            auto r = roots(FF, coef);
            if (!r) continue;
            if (!cand) {
              cand = std::move(r);
            } else {
              std::vector<gf::Code> both;
              std::sort(r->begin(), r->end());
              std::sort(cand->begin(), cand->end());
              std::set_intersection(cand->begin(), cand->end(), r->begin(), r->end(), std::back_inserter(both));
              cand = std::move(both);
            }
            if (cand->empty()) break;
          }
          if (!cand) {
            cand.emplace(q);
            std::iota(cand->begin(), cand->end(), gf::Code{0});
          }
          candidates[t] = std::move(*cand);
          empty = candidates[t].empty();
        }
        if (empty) continue;
        for (std::size_t t = 0; t < base_vars.size(); ++t) y[base_vars[t]] = b[t];
        std::fill(pick.begin(), pick.end(), 0);
        for (;;) {
          for (std::size_t t = 0; t < other_vars.size(); ++t) y[other_vars[t]] = candidates[t][pick[t]];
          if (std::all_of(checks.begin(), checks.end(), [&](const auto& g) { return g(y) == 0; }))
            out.insert(out.end(), y.begin(), y.end());
          std::size_t t = other_vars.size();
          while (t > 0 && ++pick[t - 1] == candidates[t - 1].size()) pick[--t] = 0;
          if (t == 0) break;
        }
      }
      out = canonicalize(q, n, std::move(out));
    });
    std::vector<gf::Code> merged;
    for (auto& part : parts) merged.insert(merged.end(), part.begin(), part.end());
    result = PointSet{F, n, canonicalize(q, n, std::move(merged)), Provenance::variety};
  }

  const PointSet image = image_points(instance, ext_k, options);
  if (!contains_all(result, image))
    throw SoundnessError("V(F) computed from the annihilator basis misses points of the image over F_" +
                         std::to_string(q) + " (degree cutoff too low?)");
  return result;
}

std::uint64_t count(const PointSet& ps) { return ps.size(); }

bool contains_all(const PointSet& super, const PointSet& sub) {
  if (!gf::same_field(*super.field, *sub.field) || super.n != sub.n) return false;
  std::size_t i = 0;
  for (std::size_t j = 0; j < sub.size(); ++j) {
    while (i < super.size() && tuple_less(super.point(i), sub.point(j))) ++i;
    if (i == super.size() || !std::ranges::equal(super.point(i), sub.point(j))) return false;
  }
  return true;
}

PointSet embed_points(const PointSet& ps, const gf::FieldRef& sup) {
  const auto emb = gf::get_embedding(ps.field, sup);
  std::vector<gf::Code> coords(ps.coords.size());
  std::transform(ps.coords.begin(), ps.coords.end(), coords.begin(), [&](gf::Code c) { return (*emb)(c); });
  return PointSet{sup, ps.n, canonicalize(sup->size(), ps.n, std::move(coords)), ps.provenance};
}

std::string render_point(const PointSet& ps, std::size_t i) {
  std::string out;
  for (const auto c : ps.point(i)) {
    if (!out.empty()) out += ',';
    out += ps.field->render(c);
  }
  return out;
}

}  // namespace mel::pointset
