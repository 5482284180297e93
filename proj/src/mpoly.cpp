#include "mel/mpoly.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "mel/error.hpp"

namespace mel::mpoly {

std::uint32_t Monomial::degree() const { return std::accumulate(exps.begin(), exps.end(), std::uint32_t{0}); }

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  return a.exps <=> b.exps;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r = a;
  for (std::size_t i = 0; i < r.exps.size(); ++i) r.exps[i] += b.exps[i];
  return r;
}

MPoly::MPoly(gf::FieldRef field, std::size_t nvars) : field_(std::move(field)), nvars_(nvars) {
  if (!field_) throw DomainError("polynomial without a field");
}

MPoly MPoly::constant(gf::FieldRef field, std::size_t nvars, gf::Code c) {
  MPoly f(std::move(field), nvars);
  f.add_term(Monomial{std::vector<std::uint32_t>(nvars, 0)}, c);
  return f;
}

MPoly MPoly::variable(gf::FieldRef field, std::size_t nvars, std::size_t var) {
  if (var >= nvars) throw DomainError("variable index out of range");
  MPoly f(std::move(field), nvars);
  Monomial m{std::vector<std::uint32_t>(nvars, 0)};
  m.exps[var] = 1;
  f.add_term(m, 1);
  return f;
}

std::optional<std::uint32_t> MPoly::total_degree() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.rbegin()->first.degree();
}

std::uint32_t MPoly::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.exps[var]);
  return d;
}

gf::Code MPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0 : it->second;
}

gf::Code MPoly::leading_coefficient() const { return terms_.empty() ? 0 : terms_.rbegin()->second; }

void MPoly::add_term(const Monomial& m, gf::Code c) {
  if (m.exps.size() != nvars_) throw DomainError("monomial has the wrong number of variables");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second = field_->add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

void MPoly::require_compatible(const MPoly& o) const {
  if (nvars_ != o.nvars_) throw DomainError("polynomials have different variable counts");
  if (!gf::same_field(*field_, *o.field_)) throw DomainError("polynomials over different fields");
}

MPoly MPoly::operator+(const MPoly& o) const {
  require_compatible(o);
  MPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
  require_compatible(o);
  MPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, field_->neg(c));
  return r;
}

MPoly MPoly::operator*(const MPoly& o) const {
  require_compatible(o);
  MPoly r(field_, nvars_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, field_->mul(ca, cb));
  return r;
}

MPoly MPoly::scaled(gf::Code c) const {
  MPoly r(field_, nvars_);
  if (c == 0) return r;
  for (const auto& [m, v] : terms_) r.terms_.emplace(m, field_->mul(v, c));
  return r;
}

bool operator==(const MPoly& a, const MPoly& b) {
  return a.nvars_ == b.nvars_ && gf::same_field(*a.field_, *b.field_) && a.terms_ == b.terms_;
}

namespace {

gf::EmbeddingRef embedding_into(const MPoly& f, const gf::FieldRef& target) {
  if (gf::same_field(*f.field(), *target)) return nullptr;
  return gf::get_embedding(f.field(), target);
}

}  // namespace

gf::Code evaluate(const MPoly& f, std::span<const gf::Code> point, const gf::FieldRef& target) {
  if (point.size() != f.nvars())
    throw DomainError("point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                      std::to_string(f.nvars()) + " variables");
  for (auto c : point)
    if (!target->contains(c)) throw DomainError("point coordinate outside the target field");
  const auto emb = embedding_into(f, target);
  const gf::Field& F = *target;
  gf::Code acc = 0;
  for (const auto& [m, c] : f.terms()) {
    gf::Code t = emb ? (*emb)(c) : c;
    for (std::size_t i = 0; i < m.exps.size() && t != 0; ++i)
      if (m.exps[i] != 0) t = F.mul(t, F.pow(point[i], m.exps[i]));
    acc = F.add(acc, t);
  }
  return acc;
}

gf::FieldElement evaluate(const MPoly& f, std::span<const gf::FieldElement> point) {
  if (point.empty()) return {f.field(), evaluate(f, std::span<const gf::Code>{}, f.field())};
  const gf::FieldRef& target = point.front().field;
  std::vector<gf::Code> codes;
  codes.reserve(point.size());
  for (const auto& e : point) {
    if (!gf::same_field(*e.field, *target)) throw DomainError("point coordinates in different fields");
    codes.push_back(e.code);
  }
  return {target, evaluate(f, codes, target)};
}

MPoly partial_derivative(const MPoly& f, std::size_t var) {
  if (var >= f.nvars()) throw DomainError("variable index out of range");
  const gf::Field& F = *f.field();
  MPoly r(f.field(), f.nvars());
  for (const auto& [m, c] : f.terms()) {
    if (m.exps[var] == 0) continue;
    Monomial dm = m;
    dm.exps[var] -= 1;
    r.add_term(dm, F.mul(c, F.from_int(m.exps[var])));
  }
  return r;
}

MPoly specialize(const MPoly& f, const std::map<std::size_t, gf::Code>& assignment, const gf::FieldRef& target) {
  for (const auto& [var, value] : assignment) {
    if (var >= f.nvars()) throw DomainError("assigned variable out of range");
    if (!target->contains(value)) throw DomainError("assigned value outside the target field");
  }
  const auto emb = embedding_into(f, target);
  const gf::Field& F = *target;
  MPoly r(target, f.nvars());
  for (const auto& [m, c] : f.terms()) {
    gf::Code t = emb ? (*emb)(c) : c;
    Monomial rest = m;
    for (const auto& [var, value] : assignment) {
      if (rest.exps[var] == 0) continue;
      t = F.mul(t, F.pow(value, rest.exps[var]));
      rest.exps[var] = 0;
    }
    r.add_term(rest, t);
  }
  return r;
}

MPoly embed(const MPoly& f, const gf::FieldRef& target) { return specialize(f, {}, target); }

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

// Exponent vectors of exactly degree `deg` in ascending lex order (last variable first).
void monomials_of_degree(std::size_t nvars, std::uint32_t deg, std::vector<Monomial>& out) {
  if (nvars == 0) {
    if (deg == 0) out.push_back(Monomial{});
    return;
  }
  std::vector<std::uint32_t> e(nvars, 0);
  // Recursive descent: X1 exponent ascending, remaining degree distributed recursively.
  auto rec = [&](auto&& self, std::size_t var, std::uint32_t left) -> void {
    if (var + 1 == nvars) {
      e[var] = left;
      out.push_back(Monomial{e});
      return;
    }
    for (std::uint32_t a = 0; a <= left; ++a) {
      e[var] = a;
      self(self, var + 1, left - a);
    }
    e[var] = 0;
  };
  rec(rec, 0, deg);
}

}  // namespace

std::vector<Monomial> monomials_up_to(std::size_t nvars, std::uint32_t D, std::uint64_t guard) {
  const std::uint64_t count = binomial(nvars + D, D);
  if (count > guard)
    throw GuardError(std::to_string(count) + " monomials of degree <= " + std::to_string(D) + " in " +
                     std::to_string(nvars) + " variables exceed the guard of " + std::to_string(guard));
  std::vector<Monomial> out;
  out.reserve(count);
  for (std::uint32_t deg = 0; deg <= D; ++deg) monomials_of_degree(nvars, deg, out);
  return out;
}

std::string render(const MPoly& f) {
  if (f.is_zero()) return "0";
  const gf::Field& F = *f.field();
  std::string out;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    if (!out.empty()) out += " + ";
    std::string mono;
    for (std::size_t i = 0; i < m.exps.size(); ++i) {
      if (m.exps[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += 'X' + std::to_string(i + 1);
      if (m.exps[i] > 1) mono += '^' + std::to_string(m.exps[i]);
    }
    if (mono.empty())
      out += F.render(c);
    else if (c == 1)
      out += mono;
    else
      out += F.render(c) + '*' + mono;
  }
  return out;
}

CompiledPoly::CompiledPoly(const MPoly& f, const gf::FieldRef& target) : target_(target), nvars_(f.nvars()) {
  const auto emb = embedding_into(f, target);
  for (const auto& [m, c] : f.terms()) {
    const gf::Code tc = emb ? (*emb)(c) : c;
    if (m.is_constant()) {
      constant_ = target_->add(constant_, tc);
      continue;
    }
    Term t{target_->log(tc), {}};
    for (std::size_t i = 0; i < m.exps.size(); ++i)
      if (m.exps[i]) t.factors.emplace_back(static_cast<std::uint32_t>(i), m.exps[i]);
    terms_.push_back(std::move(t));
  }
}

gf::Code CompiledPoly::operator()(std::span<const gf::Code> point) const {
  const gf::Field& F = *target_;
  const std::uint64_t order = F.size() - 1;
  gf::Code acc = constant_;
  for (const auto& t : terms_) {
    std::uint64_t lg = t.coeff_log;
    bool zero = false;
    for (const auto& [var, e] : t.factors) {
      const gf::Code x = point[var];
      if (x == 0) {
        zero = true;
        break;
      }
      lg += static_cast<std::uint64_t>(F.log(x)) * e;
    }
    if (!zero) acc = F.add(acc, F.exp(lg % order));
  }
  return acc;
}

}  // namespace mel::mpoly
