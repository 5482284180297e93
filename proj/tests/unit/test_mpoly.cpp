#include <random>

#include "doctest.h"
#include "mel/error.hpp"
#include "mel/mpoly.hpp"

using namespace mel;
using mpoly::MPoly;
using mpoly::Monomial;

namespace {

MPoly X(const gf::FieldRef& F, std::size_t n, std::size_t i) { return MPoly::variable(F, n, i); }
MPoly C(const gf::FieldRef& F, std::size_t n, gf::Code c) { return MPoly::constant(F, n, c); }

// Evaluates term by term with repeated multiplication.
gf::Code naive_eval(const MPoly& f, const std::vector<gf::Code>& x) {
  const gf::Field& F = *f.field();
  gf::Code acc = 0;
  for (const auto& [m, c] : f.terms()) {
    gf::Code t = c;
    for (std::size_t i = 0; i < m.exps.size(); ++i)
      for (std::uint32_t e = 0; e < m.exps[i]; ++e) t = F.mul(t, x[i]);
    acc = F.add(acc, t);
  }
  return acc;
}

}  // namespace

TEST_CASE("graded-lex order") {
  const Monomial one{{0, 0}}, x2{{0, 1}}, x1{{1, 0}}, x1x2{{1, 1}}, x1sq{{2, 0}}, x2sq{{0, 2}};
  CHECK(one < x2);
  CHECK(x2 < x1);
  CHECK(x1 < x2sq);
  CHECK(x2sq < x1x2);
  CHECK(x1x2 < x1sq);
  const auto monos = mpoly::monomials_up_to(2, 1);
  REQUIRE(monos.size() == 3);
  CHECK(monos[0] == one);
  CHECK(monos[1] == x2);
  CHECK(monos[2] == x1);
}

TEST_CASE("monomial counts are binomials") {
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::uint32_t D = 0; D <= 5; ++D) CHECK(mpoly::monomials_up_to(n, D).size() == mpoly::binomial(n + D, D));
  CHECK(mpoly::binomial(5, 2) == 10);
  CHECK(mpoly::binomial(2, 5) == 0);
  CHECK_THROWS_AS(mpoly::monomials_up_to(4, 27), GuardError);
}

TEST_CASE("the sigma relation renders canonically") {
  const auto F = gf::get_field(3, 1);
  const MPoly g = X(F, 3, 0) * X(F, 3, 0) - X(F, 3, 0) * X(F, 3, 1) + X(F, 3, 2);
  CHECK(mpoly::render(g) == "X1^2 + 2*X1*X2 + X3");
  CHECK(g.total_degree() == 2u);
  CHECK(g.degree_in(0) == 2);
  CHECK(g.involves(2));
  CHECK(g.leading_coefficient() == 1);
  CHECK(mpoly::render(MPoly(F, 2)) == "0");
  CHECK_FALSE(MPoly(F, 2).total_degree().has_value());
}

TEST_CASE("ring arithmetic") {
  const auto F = gf::get_field(5, 1);
  const MPoly x = X(F, 2, 0), y = X(F, 2, 1);
  const MPoly lhs = (x + y) * (x + y);
  const MPoly rhs = x * x + C(F, 2, 2) * x * y + y * y;
  CHECK(lhs == rhs);
  CHECK((x - x).is_zero());
  CHECK(x.scaled(0).is_zero());
  CHECK(x.scaled(3) == C(F, 2, 3) * x);
  CHECK_THROWS_AS(x + X(F, 3, 0), DomainError);
  CHECK_THROWS_AS(x + X(gf::get_field(3, 1), 2, 0), DomainError);
}

TEST_CASE("characteristic p: (x + y)^p = x^p + y^p") {
  const auto F = gf::get_field(3, 1);
  const MPoly x = X(F, 2, 0), y = X(F, 2, 1);
  const MPoly s = x + y;
  CHECK(s * s * s == x * x * x + y * y * y);
}

TEST_CASE("compiled and generic evaluation agree with a naive oracle") {
  const auto F = gf::get_field(2, 3);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    MPoly f(F, 3);
    for (int t = 0; t < 5; ++t)
      f.add_term(Monomial{{static_cast<std::uint32_t>(rng() % 4), static_cast<std::uint32_t>(rng() % 3),
                           static_cast<std::uint32_t>(rng() % 3)}},
                 static_cast<gf::Code>(rng() % 8));
    const mpoly::CompiledPoly compiled(f, F);
    for (int pt = 0; pt < 20; ++pt) {
      std::vector<gf::Code> x = {static_cast<gf::Code>(rng() % 8), static_cast<gf::Code>(rng() % 8),
                                 static_cast<gf::Code>(rng() % 8)};
      const auto expect = naive_eval(f, x);
      CHECK(mpoly::evaluate(f, x, F) == expect);
      CHECK(compiled(x) == expect);
    }
  }
}

TEST_CASE("evaluation embeds coefficients into an extension") {
  const auto F3 = gf::get_field(3, 1);
  const auto F9 = gf::get_field(3, 2);
  const MPoly f = X(F3, 1, 0) * X(F3, 1, 0) + C(F3, 1, 1);  // x^2 + 1, the modulus of F_9
  const gf::Code t = F9->from_coeffs(std::vector<std::uint32_t>{0, 1});
  CHECK(mpoly::evaluate(f, std::vector<gf::Code>{t}, F9) == 0);
  CHECK(mpoly::evaluate(f, std::vector<gf::Code>{1}, F3) == 2);
  const std::vector<gf::FieldElement> pt = {{F9, t}};
  CHECK(mpoly::evaluate(f, pt).code == 0);
  CHECK(mpoly::embed(f, F9).field().get() == F9.get());
}

TEST_CASE("partial derivatives") {
  const auto F2 = gf::get_field(2, 1);
  const MPoly x = X(F2, 1, 0);
  CHECK(mpoly::partial_derivative(x * x, 0).is_zero());
  CHECK(mpoly::partial_derivative(x * x * x, 0) == x * x);
  const auto F3 = gf::get_field(3, 1);
  const MPoly a = X(F3, 2, 0), b = X(F3, 2, 1);
  CHECK(mpoly::partial_derivative(a * b + a, 0) == b + C(F3, 2, 1));
  CHECK_THROWS_AS(mpoly::partial_derivative(a, 2), DomainError);
}

TEST_CASE("specialize substitutes values") {
  const auto F = gf::get_field(3, 1);
  const MPoly g = X(F, 3, 0) * X(F, 3, 0) - X(F, 3, 0) * X(F, 3, 1) + X(F, 3, 2);
  const auto h = mpoly::specialize(g, {{0, 1}, {1, 2}}, F);  // 1 - 2 + X3
  CHECK(h == X(F, 3, 2) + C(F, 3, 2));
  CHECK_THROWS_AS(mpoly::specialize(g, {{5, 1}}, F), DomainError);
}
