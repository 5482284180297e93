#include "mel/gf.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include "mel/error.hpp"

namespace mel::gf {

namespace {

using Poly = std::vector<std::uint32_t>;  // over F_p, constant term first

std::uint64_t checked_power(std::uint64_t base, std::uint32_t exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

// Remainder of a modulo a monic divisor, in place; result has length deg(divisor).
void reduce_mod(Poly& a, std::span<const std::uint32_t> divisor, std::uint32_t p) {
  const std::size_t dd = divisor.size() - 1;
  for (std::size_t i = a.size(); i-- > dd;) {
    const std::uint64_t c = a[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j) {
      const std::size_t idx = i - dd + j;
      a[idx] = static_cast<std::uint32_t>((a[idx] + (p - c) * divisor[j]) % p);
    }
  }
  a.resize(std::min(a.size(), dd));
  a.resize(dd, 0);
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& modulus, std::uint32_t p) {
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{a[i]} * b[j]) % p);
  }
  reduce_mod(prod, modulus, p);
  return prod;
}

Poly powmod(Poly base, std::uint64_t e, const Poly& modulus, std::uint32_t p) {
  Poly result(modulus.size() - 1, 0);
  result[0] = 1;
  while (e > 0) {
    if (e & 1) result = mulmod(result, base, modulus, p);
    base = mulmod(base, base, modulus, p);
    e >>= 1;
  }
  return result;
}

Poly decode(Code c, std::uint32_t p, std::uint32_t k) {
  Poly out(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    out[i] = c % p;
    c /= p;
  }
  return out;
}

Code encode(const Poly& v, std::uint32_t p) {
  Code c = 0;
  for (std::size_t i = v.size(); i-- > 0;) c = c * p + v[i];
  return c;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

std::uint64_t FieldSpec::order() const {
  return checked_power(p, k, std::numeric_limits<std::uint64_t>::max() / 2);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> poly) {
  std::size_t deg = poly.size();
  while (deg > 0 && poly[deg - 1] % p == 0) --deg;
  if (deg < 2) return false;  // zero or constant
  const std::size_t n = deg - 1;
  if (n == 1) return true;
  for (std::size_t e = 1; e <= n / 2; ++e) {
    const std::uint64_t count = checked_power(p, static_cast<std::uint32_t>(e), std::uint64_t{1} << 40);
    Poly divisor(e + 1);
    for (std::uint64_t tail = 0; tail < count; ++tail) {
      std::uint64_t t = tail;
      for (std::size_t i = 0; i < e; ++i) {
        divisor[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      divisor[e] = 1;
      Poly rem(poly.begin(), poly.begin() + static_cast<std::ptrdiff_t>(deg));
      for (auto& c : rem) c %= p;
      reduce_mod(rem, divisor, p);
      if (std::all_of(rem.begin(), rem.end(), [](std::uint32_t c) { return c == 0; })) return false;
    }
  }
  return true;
}

FieldSpec build_field(std::uint32_t p, std::uint32_t k, std::uint64_t guard) {
  if (!is_prime(p)) throw DomainError("field characteristic " + std::to_string(p) + " is not prime");
  if (k < 1) throw DomainError("extension degree must be at least 1");
  const std::uint64_t q = checked_power(p, k, guard);
  if (q > guard)
    throw GuardError("field of size " + std::to_string(p) + "^" + std::to_string(k) +
                     " exceeds the size guard of " + std::to_string(guard) + " elements");

  FieldSpec spec{p, k, {}};
  if (k == 1) {
    spec.modulus = {0, 1};
    return spec;
  }
  // Digit sums of all tails, then scan weight classes in increasing order.
  std::vector<std::uint32_t> weight(q);
  for (std::uint64_t c = 1; c < q; ++c) weight[c] = weight[c / p] + static_cast<std::uint32_t>(c % p);
  const std::uint32_t max_weight = k * (p - 1);
  Poly candidate(k + 1);
  for (std::uint32_t w = 1; w <= max_weight; ++w) {
    for (std::uint64_t tail = 0; tail < q; ++tail) {
      if (weight[tail] != w) continue;
      Poly lower = decode(static_cast<Code>(tail), p, k);
      std::copy(lower.begin(), lower.end(), candidate.begin());
      candidate[k] = 1;
      if (is_irreducible(p, candidate)) {
        spec.modulus = candidate;
        return spec;
      }
    }
  }
  throw SoundnessError("no irreducible polynomial found");  // impossible for valid (p, k)
}

Field::Field(FieldSpec spec) : spec_(std::move(spec)) {
  const std::uint32_t p = spec_.p;
  const std::uint32_t k = spec_.k;
  if (!is_prime(p)) throw DomainError("field characteristic is not prime");
  if (k < 1 || spec_.modulus.size() != k + 1 || spec_.modulus[k] != 1)
    throw DomainError("field modulus must be monic of degree k");
  if (k > 1 && !is_irreducible(p, spec_.modulus)) throw DomainError("field modulus is reducible");
  q_ = spec_.order();
  if (q_ > std::numeric_limits<Code>::max() / 2) throw GuardError("field too large for 32-bit codes");

  // Primitive element: smallest code whose order is q - 1.
  const Poly& modulus = spec_.modulus;
  const auto factors = prime_factors(q_ - 1);
  Poly g_poly;
  for (Code c = 1; c < q_; ++c) {
    Poly cand = decode(c, p, k);
    bool primitive = true;
    for (auto r : factors) {
      Poly t = powmod(cand, (q_ - 1) / r, modulus, p);
      if (t[0] == 1 && std::all_of(t.begin() + 1, t.end(), [](std::uint32_t x) { return x == 0; })) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      primitive_ = c;
      g_poly = std::move(cand);
      break;
    }
  }

  const std::size_t order = q_ - 1;
  exp_.assign(2 * order, 0);
  log_.assign(q_, 0);
  Poly cur(k, 0);
  cur[0] = 1;
  for (std::size_t i = 0; i < order; ++i) {
    const Code c = encode(cur, p);
    exp_[i] = c;
    log_[c] = static_cast<std::uint32_t>(i);
    cur = mulmod(cur, g_poly, modulus, p);
  }
  for (std::size_t i = 0; i < order; ++i) exp_[order + i] = exp_[i];

  neg_.resize(q_);
  for (Code a = 0; a < q_; ++a) {
    Poly v = decode(a, p, k);
    for (auto& c : v) c = (p - c) % p;
    neg_[a] = encode(v, p);
  }
  if (q_ <= 1024) {
    add_table_.resize(q_ * q_);
    for (Code a = 0; a < q_; ++a)
      for (Code b = 0; b < q_; ++b) add_table_[a * q_ + b] = add_slow(a, b);
  }
}

Code Field::add_slow(Code a, Code b) const {
  const std::uint32_t p = spec_.p;
  if (p == 2) return a ^ b;
  if (spec_.k == 1) return (a + b) % p;
  Code r = 0;
  Code place = 1;
  for (std::uint32_t i = 0; i < spec_.k; ++i) {
    r += ((a % p + b % p) % p) * place;
    a /= p;
    b /= p;
    place *= p;
  }
  return r;
}

Code Field::neg(Code a) const { return neg_[a]; }

Code Field::inv(Code a) const {
  if (a == 0) throw DomainError("division by zero");
  const std::uint64_t order = q_ - 1;
  return exp_[(order - log_[a]) % order];
}

Code Field::pow(Code a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  const std::uint64_t order = q_ - 1;
  return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % order)) % order];
}

Code Field::from_int(std::int64_t v) const {
  const std::int64_t p = spec_.p;
  return static_cast<Code>(((v % p) + p) % p);
}

Code Field::from_coeffs(std::span<const std::uint32_t> coeffs) const {
  if (coeffs.size() != spec_.k)
    throw DomainError("coefficient vector has length " + std::to_string(coeffs.size()) + ", expected " +
                      std::to_string(spec_.k));
  for (auto c : coeffs)
    if (c >= spec_.p) throw DomainError("coefficient not reduced mod p");
  return encode(Poly(coeffs.begin(), coeffs.end()), spec_.p);
}

std::vector<std::uint32_t> Field::coeffs(Code a) const { return decode(a, spec_.p, spec_.k); }

std::string Field::render(Code a) const {
  if (spec_.k == 1) return std::to_string(a);
  std::string out = "[";
  const auto v = coeffs(a);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out + "]";
}

bool same_field(const Field& a, const Field& b) { return &a == &b || a.spec() == b.spec(); }

FieldRef get_field(std::uint32_t p, std::uint32_t k, std::uint64_t guard) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, FieldRef> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({p, k}); it != cache.end()) return it->second;
  }
  // Build outside the lock; a concurrent duplicate build is harmless (deterministic).
  auto field = std::make_shared<const Field>(build_field(p, k, guard));
  std::lock_guard lock(mutex);
  return cache.try_emplace({p, k}, std::move(field)).first->second;
}

namespace {

void require_same(const FieldElement& a, const FieldElement& b) {
  if (!a.field || !b.field) throw DomainError("field element without a field");
  if (!same_field(*a.field, *b.field)) throw DomainError("mismatched field specs");
}

}  // namespace

FieldElement arith(const FieldElement& a, const FieldElement& b, Op op) {
  require_same(a, b);
  const Field& f = *a.field;
  switch (op) {
    case Op::add:
      return {a.field, f.add(a.code, b.code)};
    case Op::sub:
      return {a.field, f.sub(a.code, b.code)};
    case Op::mul:
      return {a.field, f.mul(a.code, b.code)};
    case Op::div:
      return {a.field, f.div(a.code, b.code)};
  }
  throw DomainError("unknown operation");
}

FieldElement pow(const FieldElement& a, std::uint64_t e) {
  // Square-and-multiply rather than the log table, so the two routes can be compared.
  const Field& f = *a.field;
  Code base = a.code;
  Code result = f.one();
  while (e > 0) {
    if (e & 1) result = f.mul(result, base);
    base = f.mul(base, base);
    e >>= 1;
  }
  return {a.field, result};
}

FieldElement element(const FieldRef& field, std::span<const std::uint32_t> coeffs) {
  return {field, field->from_coeffs(coeffs)};
}

std::vector<FieldElement> enumerate_elements(const FieldRef& field) {
  std::vector<FieldElement> out;
  out.reserve(field->size());
  for (Code c = 0; c < field->size(); ++c) out.push_back({field, c});
  return out;
}

namespace {
constexpr Code kNone = std::numeric_limits<Code>::max();
}

Embedding::Embedding(FieldRef sub, FieldRef sup) : sub_(std::move(sub)), sup_(std::move(sup)) {
  const auto& s = sub_->spec();
  const auto& t = sup_->spec();
  if (s.p != t.p) throw DomainError("cannot embed fields of different characteristic");
  if (t.k % s.k != 0)
    throw DomainError("F_" + std::to_string(s.p) + "^" + std::to_string(s.k) + " is not a subfield of F_" +
                      std::to_string(t.p) + "^" + std::to_string(t.k));
  const Field& F = *sup_;
  bool found = false;
  for (Code x = 0; x < F.size() && !found; ++x) {
    Code acc = 0;
    for (std::size_t i = s.modulus.size(); i-- > 0;) acc = F.add(F.mul(acc, x), s.modulus[i]);
    if (acc == 0) {
      theta_ = x;
      found = true;
    }
  }
  if (!found) throw SoundnessError("subfield modulus has no root in the extension");

  std::vector<Code> powers(s.k);
  powers[0] = F.one();
  for (std::size_t i = 1; i < s.k; ++i) powers[i] = F.mul(powers[i - 1], theta_);
  image_.resize(sub_->size());
  inverse_.assign(F.size(), kNone);
  for (Code a = 0; a < sub_->size(); ++a) {
    Code v = 0;
    Code rest = a;
    for (std::size_t i = 0; i < s.k; ++i) {
      v = F.add(v, F.mul(rest % s.p, powers[i]));
      rest /= s.p;
    }
    image_[a] = v;
    inverse_[v] = a;
  }
}

std::optional<Code> Embedding::preimage(Code b) const {
  if (b >= inverse_.size() || inverse_[b] == kNone) return std::nullopt;
  return inverse_[b];
}

EmbeddingRef get_embedding(const FieldRef& sub, const FieldRef& sup) {
  static std::mutex mutex;
  static std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, EmbeddingRef> cache;
  const auto key = std::make_tuple(sub->characteristic(), sub->degree(), sup->degree());
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) {
      const auto& e = it->second;
      if (same_field(*e->sub(), *sub) && same_field(*e->sup(), *sup)) return e;
    }
  }
  auto emb = std::make_shared<const Embedding>(sub, sup);
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.try_emplace(key, emb);
  if (!inserted && !(same_field(*it->second->sub(), *sub) && same_field(*it->second->sup(), *sup)))
    return emb;  // non-canonical field objects; do not pollute the cache
  return it->second;
}

FieldElement embed(const FieldRef& sub, const FieldRef& sup, const FieldElement& a) {
  if (!same_field(*a.field, *sub)) throw DomainError("element is not in the source field");
  return {sup, (*get_embedding(sub, sup))(a.code)};
}

}  // namespace mel::gf
