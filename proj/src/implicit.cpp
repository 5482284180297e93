#include "mel/implicit.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <set>

#include "mel/error.hpp"
#include "mel/linalg.hpp"
#include "mel/parallel.hpp"

namespace mel::implicit {

namespace {

std::uint64_t saturating_power(std::uint64_t base, std::uint64_t exp) {
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    r *= base;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

// Grid points are visited in the order i -> i*stride mod |grid| (stride coprime to |grid|),
// so that early rows are spread over the grid and full column rank is reached quickly.
struct Grid {
  GridSpec spec;
  gf::FieldRef field;
  std::size_t s = 0;
  std::uint64_t stride = 1;

  void point(std::uint64_t i, std::vector<gf::Code>& x) const {
    std::uint64_t idx = static_cast<std::uint64_t>((static_cast<unsigned __int128>(i) * stride) % spec.points);
    for (std::size_t t = s; t-- > 0;) {
      x[t] = static_cast<gf::Code>(idx % spec.side);
      idx /= spec.side;
    }
  }
};

Grid make_grid(const Instance& instance, std::uint64_t composed_degree, std::uint64_t guard) {
  Grid g;
  g.spec = exact_grid(instance, composed_degree, guard);
  g.field = gf::get_field(instance.base->characteristic(), instance.base->degree() * g.spec.ext_k);
  g.s = instance.s;
  const std::uint64_t total = g.spec.points;
  if (total > 2) {
    std::uint64_t stride = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(static_cast<double>(total) * 0.6180339887));
    while (std::gcd(stride, total) != 1) ++stride;
    g.stride = stride;
  }
  return g;
}

std::vector<mpoly::CompiledPoly> compile_coordinates(const Instance& instance, SubsetMask A,
                                                     const gf::FieldRef& field) {
  std::vector<mpoly::CompiledPoly> out;
  for (auto i : A.elements()) out.emplace_back(instance.polys[i], field);
  return out;
}

void require_instance_poly(const Instance& instance, const mpoly::MPoly& g) {
  if (g.nvars() != instance.n())
    throw DomainError("relation has " + std::to_string(g.nvars()) + " variables, ground set has " +
                      std::to_string(instance.n()));
  if (!gf::same_field(*g.field(), *instance.base)) throw DomainError("relation is not over the base field");
}

SubsetMask support(const mpoly::MPoly& g) {
  SubsetMask m;
  for (std::size_t i = 0; i < g.nvars(); ++i)
    if (g.involves(i)) m = m.with(i);
  return m;
}

}  // namespace

GridSpec exact_grid(const Instance& instance, std::uint64_t composed_degree, std::uint64_t guard) {
  GridSpec spec;
  spec.side = composed_degree + 1;
  const std::uint64_t q0 = instance.q0();
  std::uint64_t size = q0;
  spec.ext_k = 1;
  while (size < spec.side) {
    size *= q0;
    ++spec.ext_k;
  }
  const std::uint64_t field_size = saturating_power(instance.base->characteristic(),
                                                    std::uint64_t{instance.base->degree()} * spec.ext_k);
  if (field_size > gf::kDefaultFieldGuard)
    throw GuardError("exactness grid needs a field of " + std::to_string(field_size) + " elements");
  spec.points = saturating_power(spec.side, instance.s);
  if (spec.points > guard)
    throw GuardError("exactness grid of " + std::to_string(spec.side) + "^" + std::to_string(instance.s) +
                     " points exceeds the grid guard of " + std::to_string(guard));
  return spec;
}

bool ideal_member(const Instance& instance, const mpoly::MPoly& g, const ImplicitOptions& options) {
  require_instance_poly(instance, g);
  if (g.is_zero()) return true;
  const SubsetMask vars = support(g);
  const Grid grid = make_grid(instance, std::uint64_t{*g.total_degree()} * instance.d(), options.grid_guard);
  const auto coords = compile_coordinates(instance, vars, grid.field);
  const auto var_list = vars.elements();
  const mpoly::CompiledPoly compiled(g, grid.field);

  std::atomic<bool> nonzero{false};
  parallel_chunks(grid.spec.points, options.workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<gf::Code> x(instance.s);
    std::vector<gf::Code> y(instance.n(), 0);
    for (std::size_t i = begin; i < end && !nonzero.load(std::memory_order_relaxed); ++i) {
      grid.point(i, x);
      for (std::size_t t = 0; t < var_list.size(); ++t) y[var_list[t]] = coords[t](x);
      if (compiled(y) != 0) nonzero = true;
    }
  });
  return !nonzero;
}

AnnihilatorBasis annihilator_space(const Instance& instance, SubsetMask A, std::uint32_t D,
                                   const ImplicitOptions& options) {
  if (!SubsetMask::full(instance.n()).contains(A)) throw DomainError("subset outside the ground set");
  AnnihilatorBasis result;
  result.varsubset = A;
  result.degree_bound = D;
  if (A.empty()) return result;

  const auto var_list = A.elements();
  const std::size_t a = var_list.size();
  auto ascending = mpoly::monomials_up_to(a, D, options.monomial_guard);
  const std::vector<mpoly::Monomial> columns(ascending.rbegin(), ascending.rend());
  const std::size_t N = columns.size();

  const Grid grid = make_grid(instance, std::uint64_t{D} * instance.d(), options.grid_guard);
  result.grid = grid.spec;
  const gf::Field& F = *grid.field;
  const auto coords = compile_coordinates(instance, A, grid.field);

  linalg::Echelon echelon(grid.field, N);
  const std::uint64_t batch = std::max<std::uint64_t>(64, 2 * N);
  std::vector<linalg::Row> rows;
  for (std::uint64_t done = 0; done < grid.spec.points && !echelon.full_rank();) {
    const std::uint64_t count = std::min(batch, grid.spec.points - done);
    rows.assign(count, linalg::Row(N));
    parallel_chunks(count, options.workers, [&](std::size_t, std::size_t begin, std::size_t end) {
      std::vector<gf::Code> x(instance.s);
      std::vector<std::vector<gf::Code>> powers(a, std::vector<gf::Code>(D + 1));
      for (std::size_t r = begin; r < end; ++r) {
        grid.point(done + r, x);
        for (std::size_t t = 0; t < a; ++t) {
          const gf::Code v = coords[t](x);
          powers[t][0] = F.one();
          for (std::uint32_t e = 1; e <= D; ++e) powers[t][e] = F.mul(powers[t][e - 1], v);
        }
        auto& row = rows[r];
        for (std::size_t c = 0; c < N; ++c) {
          gf::Code val = F.one();
          for (std::size_t t = 0; t < a && val != 0; ++t) val = F.mul(val, powers[t][columns[c].exps[t]]);
          row[c] = val;
        }
      }
    });
    for (auto& row : rows) {
      echelon.add_row(std::move(row));
      if (echelon.full_rank()) break;
    }
    done += count;
  }
  if (echelon.full_rank()) return result;

  // The kernel is cut out by equations with base-field coefficients, so its canonical
  // basis has base-field entries even though the rows were evaluated in the extension.
  const auto emb = gf::get_embedding(instance.base, grid.field);
  for (const auto& v : echelon.kernel()) {
    mpoly::MPoly g(instance.base, instance.n());
    for (std::size_t c = 0; c < N; ++c) {
      if (v[c] == 0) continue;
      const auto coeff = emb->preimage(v[c]);
      if (!coeff) throw SoundnessError("annihilator kernel vector is not defined over the base field");
      mpoly::Monomial m{std::vector<std::uint32_t>(instance.n(), 0)};
      for (std::size_t t = 0; t < a; ++t) m.exps[var_list[t]] = columns[c].exps[t];
      g.add_term(m, *coeff);
    }
    if (!ideal_member(instance, g, options))
      throw SoundnessError("annihilator " + mpoly::render(g) + " failed re-verification");
    result.basis.push_back(std::move(g));
  }
  return result;
}

std::optional<AnnihilatorBasis> lowest_annihilators(const Instance& instance, SubsetMask A,
                                                    std::uint32_t max_degree, const ImplicitOptions& options) {
  for (std::uint32_t D = 1; D <= max_degree; ++D) {
    auto basis = annihilator_space(instance, A, D, options);
    if (!basis.empty()) return basis;
  }
  return std::nullopt;
}

mpoly::MPoly circuit_annihilator(const Instance& instance, SubsetMask C, std::uint32_t delta,
                                 const ImplicitOptions& options) {
  const auto space = annihilator_space(instance, C, delta, options);
  if (space.empty())
    throw SoundnessError("circuit " + to_string(C) + " has no annihilator of degree <= " + std::to_string(delta) +
                         " (degree of V underestimated?)");
  // Rows are ordered by descending leading monomial; the last one has minimal degree.
  mpoly::MPoly g = space.basis.back();
  if (g.total_degree().value_or(0) > delta)
    throw SoundnessError("circuit annihilator exceeds the degree bound");
  for (auto j : C.elements())
    if (!g.involves(j))
      throw SoundnessError("annihilator " + mpoly::render(g) + " does not involve X" + std::to_string(j + 1) +
                           "; " + to_string(C) + " is not a circuit");
  if (!ideal_member(instance, g, options)) throw SoundnessError("circuit annihilator failed re-verification");
  return g;
}

std::uint32_t hypersurface_degree(const Instance& instance, std::uint32_t m, const ImplicitOptions& options) {
  if (instance.n() != static_cast<std::size_t>(m) + 1)
    throw DomainError("hypersurface degree needs rank(E) = n - 1");
  const std::uint64_t bound = saturating_power(std::max<std::uint32_t>(instance.d(), 1), m);
  const SubsetMask all = SubsetMask::full(instance.n());
  for (std::uint64_t D = 1; D <= bound; ++D)
    if (!annihilator_space(instance, all, static_cast<std::uint32_t>(D), options).empty())
      return static_cast<std::uint32_t>(D);
  throw SoundnessError("no relation of degree <= d^m = " + std::to_string(bound) + " among the coordinates");
}

std::vector<mpoly::MPoly> restrict_to(const std::vector<mpoly::MPoly>& basis, SubsetMask allowed) {
  if (basis.empty()) return {};
  const auto& field = basis.front().field();
  const std::size_t n = basis.front().nvars();
  std::set<mpoly::Monomial> all;
  for (const auto& g : basis)
    for (const auto& [m, c] : g.terms()) all.insert(m);
  auto uses_forbidden = [&](const mpoly::Monomial& m) {
    for (std::size_t i = 0; i < n; ++i)
      if (m.exps[i] && !allowed.contains(i)) return true;
    return false;
  };
  // Elimination order: forbidden monomials first, each block in descending graded-lex.
  std::vector<mpoly::Monomial> columns;
  for (auto it = all.rbegin(); it != all.rend(); ++it)
    if (uses_forbidden(*it)) columns.push_back(*it);
  const std::size_t forbidden = columns.size();
  for (auto it = all.rbegin(); it != all.rend(); ++it)
    if (!uses_forbidden(*it)) columns.push_back(*it);

  std::vector<linalg::Row> rows;
  for (const auto& g : basis) {
    linalg::Row r(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) r[c] = g.coefficient(columns[c]);
    rows.push_back(std::move(r));
  }
  std::vector<mpoly::MPoly> out;
  for (const auto& r : linalg::rref(field, rows, columns.size())) {
    const auto lead = std::find_if(r.begin(), r.end(), [](gf::Code c) { return c != 0; });
    if (static_cast<std::size_t>(lead - r.begin()) < forbidden) continue;
    mpoly::MPoly g(field, n);
    for (std::size_t c = forbidden; c < columns.size(); ++c) g.add_term(columns[c], r[c]);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace mel::implicit
