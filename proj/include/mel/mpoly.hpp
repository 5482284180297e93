#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mel/gf.hpp"

namespace mel::mpoly {

inline constexpr std::uint64_t kDefaultMonomialGuard = 20000;

/// Exponent vector; ordered graded-lexicographically (total degree, then X1 > X2 > ...).
struct Monomial {
  std::vector<std::uint32_t> exps;

  std::uint32_t degree() const;
  bool is_constant() const { return degree() == 0; }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);
};

Monomial operator*(const Monomial& a, const Monomial& b);

/// Sparse polynomial in `nvars` variables. No zero coefficients are stored.
class MPoly {
 public:
  using Terms = std::map<Monomial, gf::Code>;

  MPoly(gf::FieldRef field, std::size_t nvars);

  static MPoly constant(gf::FieldRef field, std::size_t nvars, gf::Code c);
  static MPoly variable(gf::FieldRef field, std::size_t nvars, std::size_t var);

  const gf::FieldRef& field() const { return field_; }
  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  /// nullopt for the zero polynomial.
  std::optional<std::uint32_t> total_degree() const;
  std::uint32_t degree_in(std::size_t var) const;
  bool involves(std::size_t var) const { return degree_in(var) > 0; }
  gf::Code coefficient(const Monomial& m) const;
  /// Coefficient of the graded-lex largest monomial (0 for the zero polynomial).
  gf::Code leading_coefficient() const;

  /// Adds c * m, merging with an existing term.
  void add_term(const Monomial& m, gf::Code c);

  MPoly operator+(const MPoly& o) const;
  MPoly operator-(const MPoly& o) const;
  MPoly operator*(const MPoly& o) const;
  MPoly scaled(gf::Code c) const;

  friend bool operator==(const MPoly& a, const MPoly& b);

 private:
  void require_compatible(const MPoly& o) const;

  gf::FieldRef field_;
  std::size_t nvars_;
  Terms terms_;
};

/// Value of f at `point` (codes in `target`), with f's coefficients embedded into target.
gf::Code evaluate(const MPoly& f, std::span<const gf::Code> point, const gf::FieldRef& target);
gf::FieldElement evaluate(const MPoly& f, std::span<const gf::FieldElement> point);

MPoly partial_derivative(const MPoly& f, std::size_t var);

/// Substitutes the assigned variables (values in `target`); the result lives over
/// `target` and keeps the same variable count, with assigned variables absent.
MPoly specialize(const MPoly& f, const std::map<std::size_t, gf::Code>& assignment, const gf::FieldRef& target);

/// Re-expresses f over a field containing f's field.
MPoly embed(const MPoly& f, const gf::FieldRef& target);

/// All monomials of total degree <= D in ascending graded-lex order; count C(nvars+D, D).
std::vector<Monomial> monomials_up_to(std::size_t nvars, std::uint32_t D,
                                      std::uint64_t guard = kDefaultMonomialGuard);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Canonical text: terms in descending graded-lex order joined by " + ", e.g.
/// `X1^2 + 2*X1*X2 + X3`. Variable i is printed as X{i+1}.
std::string render(const MPoly& f);

/// Evaluates a fixed polynomial over a fixed target field in tight loops.
class CompiledPoly {
 public:
  CompiledPoly(const MPoly& f, const gf::FieldRef& target);

  gf::Code operator()(std::span<const gf::Code> point) const;
  std::size_t nvars() const { return nvars_; }

 private:
  struct Term {
    std::uint32_t coeff_log;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> factors;  // (var, exponent)
  };
  gf::FieldRef target_;
  std::size_t nvars_;
  std::vector<Term> terms_;
  gf::Code constant_ = 0;
};

}  // namespace mel::mpoly
