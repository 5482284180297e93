#pragma once

// Exact arithmetic in F_p and F_{p^k}.
//
// An element of F_{p^k} = F_p[x]/(modulus) is the coefficient vector (c_0, ..., c_{k-1});
// internally it is packed into a Code = sum c_i p^i, so code order is the lexicographic
// order of coefficient vectors with the constant coefficient varying fastest.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mel::gf {

using Code = std::uint32_t;

inline constexpr std::uint64_t kDefaultFieldGuard = std::uint64_t{1} << 20;

struct FieldSpec {
  std::uint32_t p = 0;
  std::uint32_t k = 0;
  /// Monic, degree k, constant term first. For k = 1 this is X (the unused X - 0 convention).
  std::vector<std::uint32_t> modulus;

  std::uint64_t order() const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

bool is_prime(std::uint64_t n);

/// First monic irreducible polynomial of degree k over F_p, ordered by coefficient
/// weight (sum of the lower coefficients) and then by code. Deterministic.
FieldSpec build_field(std::uint32_t p, std::uint32_t k, std::uint64_t guard = kDefaultFieldGuard);

/// True when `poly` (constant term first, any degree >= 1) has no monic factor of
/// degree 1..deg/2 over F_p. Exhaustive trial division.
bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> poly);

class Field {
 public:
  explicit Field(FieldSpec spec);

  const FieldSpec& spec() const { return spec_; }
  std::uint32_t characteristic() const { return spec_.p; }
  std::uint32_t degree() const { return spec_.k; }
  std::uint64_t size() const { return q_; }

  Code zero() const { return 0; }
  Code one() const { return 1; }

  Code add(Code a, Code b) const {
    if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * q_ + b];
    return add_slow(a, b);
  }
  Code neg(Code a) const;
  Code sub(Code a, Code b) const { return add(a, neg(b)); }
  Code mul(Code a, Code b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[static_cast<std::size_t>(log_[a]) + log_[b]];
  }
  Code inv(Code a) const;
  Code div(Code a, Code b) const { return mul(a, inv(b)); }
  Code pow(Code a, std::uint64_t e) const;

  /// Discrete log to the fixed primitive element; `a` must be nonzero.
  std::uint32_t log(Code a) const { return log_[a]; }
  /// Primitive element raised to e (any e >= 0).
  Code exp(std::uint64_t e) const { return exp_[e % (q_ - 1)]; }
  Code primitive() const { return primitive_; }

  /// Image of an integer in the prime subfield.
  Code from_int(std::int64_t v) const;
  Code from_coeffs(std::span<const std::uint32_t> coeffs) const;
  std::vector<std::uint32_t> coeffs(Code a) const;
  bool contains(Code a) const { return a < q_; }

  /// `[c0,c1,...]` for k > 1, plain integer for prime fields.
  std::string render(Code a) const;

 private:
  Code add_slow(Code a, Code b) const;

  FieldSpec spec_;
  std::uint64_t q_ = 0;
  Code primitive_ = 1;
  std::vector<Code> exp_;           // length 2(q-1), so log a + log b needs no reduction
  std::vector<std::uint32_t> log_;  // log_[0] unused
  std::vector<Code> neg_;
  std::vector<Code> add_table_;     // dense q*q table for small fields
};

using FieldRef = std::shared_ptr<const Field>;

/// Shared, cached field for (p, k). Thread-safe.
FieldRef get_field(std::uint32_t p, std::uint32_t k, std::uint64_t guard = kDefaultFieldGuard);

bool same_field(const Field& a, const Field& b);

/// A value together with the field it lives in; arithmetic checks that fields match.
struct FieldElement {
  FieldRef field;
  Code code = 0;

  std::vector<std::uint32_t> coeffs() const { return field->coeffs(code); }
  bool is_zero() const { return code == 0; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return same_field(*a.field, *b.field) && a.code == b.code;
  }
};

enum class Op { add, sub, mul, div };

FieldElement arith(const FieldElement& a, const FieldElement& b, Op op);
FieldElement pow(const FieldElement& a, std::uint64_t e);

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) { return arith(a, b, Op::add); }
inline FieldElement operator-(const FieldElement& a, const FieldElement& b) { return arith(a, b, Op::sub); }
inline FieldElement operator*(const FieldElement& a, const FieldElement& b) { return arith(a, b, Op::mul); }
inline FieldElement operator/(const FieldElement& a, const FieldElement& b) { return arith(a, b, Op::div); }

FieldElement element(const FieldRef& field, std::span<const std::uint32_t> coeffs);

/// All elements in code order.
std::vector<FieldElement> enumerate_elements(const FieldRef& field);

/// Ring embedding F_{p^j} -> F_{p^{jl}} sending the generator x of `sub` to the first
/// root (in code order) of sub's modulus inside `sup`.
class Embedding {
 public:
  Embedding(FieldRef sub, FieldRef sup);

  const FieldRef& sub() const { return sub_; }
  const FieldRef& sup() const { return sup_; }

  Code operator()(Code a) const { return image_[a]; }
  /// Inverse on the image; nullopt when `b` is not in the embedded subfield.
  std::optional<Code> preimage(Code b) const;
  /// Image of sub's generator.
  Code generator_image() const { return theta_; }

 private:
  FieldRef sub_;
  FieldRef sup_;
  Code theta_ = 0;
  std::vector<Code> image_;
  std::vector<Code> inverse_;  // sized |sup|, kNone where outside the image
};

using EmbeddingRef = std::shared_ptr<const Embedding>;

/// Cached embedding; throws DomainError unless sub.p == sup.p and sub.k | sup.k.
EmbeddingRef get_embedding(const FieldRef& sub, const FieldRef& sup);

FieldElement embed(const FieldRef& sub, const FieldRef& sup, const FieldElement& a);

}  // namespace mel::gf
