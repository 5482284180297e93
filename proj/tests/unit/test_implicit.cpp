#include "doctest.h"
#include "mel/error.hpp"
#include "mel/implicit.hpp"
#include "support.hpp"

using namespace mel;
using mpoly::MPoly;

namespace {

MPoly X(const Instance& inst, std::size_t i) { return MPoly::variable(inst.base, inst.n(), i); }

}  // namespace

TEST_CASE("exact grid sizes") {
  const auto sigma = test::load("sigma2_f3");
  const auto g = implicit::exact_grid(sigma, 4, 1u << 20);  // D = 2, d = 2
  CHECK(g.side == 5);
  CHECK(g.ext_k == 2);  // 3 < 5 <= 9
  CHECK(g.points == 25);
  CHECK_THROWS_AS(implicit::exact_grid(sigma, 4, 10), GuardError);
}

TEST_CASE("ideal membership") {
  const auto sigma = test::load("sigma2_f3");
  const MPoly g = X(sigma, 0) * X(sigma, 0) - X(sigma, 0) * X(sigma, 1) + X(sigma, 2);
  CHECK(implicit::ideal_member(sigma, g));
  CHECK(implicit::ideal_member(sigma, g * X(sigma, 1)));
  CHECK_FALSE(implicit::ideal_member(sigma, X(sigma, 2) - X(sigma, 0)));
  CHECK(implicit::ideal_member(sigma, MPoly(sigma.base, 3)));
  // Vanishes on F_3 points (x^3 = x) but is not in the ideal.
  const MPoly fermat = X(sigma, 0) * X(sigma, 0) * X(sigma, 0) - X(sigma, 0);
  CHECK_FALSE(implicit::ideal_member(sigma, fermat));
  CHECK_THROWS_AS(implicit::ideal_member(sigma, MPoly::variable(sigma.base, 2, 0)), DomainError);
}

TEST_CASE("sigma: annihilator spaces by degree") {
  const auto sigma = test::load("sigma2_f3");
  const SubsetMask E = SubsetMask::full(3);
  CHECK(implicit::annihilator_space(sigma, E, 1).empty());
  const auto two = implicit::annihilator_space(sigma, E, 2);
  REQUIRE(two.basis.size() == 1);
  CHECK(mpoly::render(two.basis[0]) == "X1^2 + 2*X1*X2 + X3");
  // Degree 3: g times each of 1, X1, X2, X3.
  CHECK(implicit::annihilator_space(sigma, E, 3).basis.size() == 4);
  CHECK(implicit::annihilator_space(sigma, SubsetMask::of({0, 1}), 4).empty());
  CHECK(implicit::annihilator_space(sigma, SubsetMask::of({1, 2}), 4).empty());
  CHECK(implicit::annihilator_space(sigma, SubsetMask(), 3).empty());
}

TEST_CASE("annihilator bases are canonical RREF with descending leading monomials") {
  const auto sigma = test::load("sigma2_f3");
  const auto space = implicit::annihilator_space(sigma, SubsetMask::full(3), 3);
  for (std::size_t i = 0; i + 1 < space.basis.size(); ++i) {
    const auto lead_a = space.basis[i].terms().rbegin()->first;
    const auto lead_b = space.basis[i + 1].terms().rbegin()->first;
    CHECK(lead_b < lead_a);
    CHECK(space.basis[i].leading_coefficient() == 1);
    // Leading monomial of a row does not occur in the others.
    for (std::size_t j = 0; j < space.basis.size(); ++j)
      if (j != i) CHECK(space.basis[j].coefficient(lead_a) == 0);
  }
  for (const auto& g : space.basis) CHECK(implicit::ideal_member(sigma, g));
}

TEST_CASE("circuit annihilators of the corpus") {
  const auto sigma = test::load("sigma2_f3");
  CHECK(mpoly::render(implicit::circuit_annihilator(sigma, SubsetMask::full(3), 2)) == "X1^2 + 2*X1*X2 + X3");
  const auto sigma2 = test::load("sigma2_f2");
  CHECK(mpoly::render(implicit::circuit_annihilator(sigma2, SubsetMask::full(3), 2)) == "X1^2 + X1*X2 + X3");
  const auto frob = test::load("frobenius_f2");
  CHECK(mpoly::render(implicit::circuit_annihilator(frob, SubsetMask::full(2), 2)) == "X1^2 + X2");
  const auto graph = test::load("graph_f3");
  CHECK(mpoly::render(implicit::circuit_annihilator(graph, SubsetMask::full(3), 1)) == "X1 + X2 + 2*X3");
  const auto sigma3 = test::load("sigma3_f3");
  // x1^3 - e1 x1^2 + e2 x1 - e3
  CHECK(mpoly::render(implicit::circuit_annihilator(sigma3, SubsetMask::full(4), 3)) ==
        "X1^3 + 2*X1^2*X2 + X1*X3 + 2*X4");
  CHECK_THROWS_AS(implicit::circuit_annihilator(sigma, SubsetMask::full(3), 1), SoundnessError);
  const auto rank2 = test::load("rank2_f3");
  // {1,2,3,4} is dependent but not a circuit: its lowest relation misses X4.
  CHECK_THROWS_AS(implicit::circuit_annihilator(rank2, SubsetMask::full(4), 1), SoundnessError);
}

TEST_CASE("sigma over F_4 has base-field coefficients after descent") {
  const auto inst = test::load("sigma2_f4");
  const auto g = implicit::circuit_annihilator(inst, SubsetMask::full(3), 2);
  CHECK(g.field().get() == inst.base.get());
  CHECK(implicit::ideal_member(inst, g));
  CHECK(g.total_degree() == 2u);
}

TEST_CASE("hypersurface degree") {
  CHECK(implicit::hypersurface_degree(test::load("sigma2_f3"), 2) == 2);
  CHECK(implicit::hypersurface_degree(test::load("sigma3_f2"), 3) == 3);
  CHECK(implicit::hypersurface_degree(test::load("graph_f3"), 2) == 1);
  CHECK(implicit::hypersurface_degree(test::load("frobenius_f2"), 1) == 2);
  CHECK_THROWS_AS(implicit::hypersurface_degree(test::load("rank2_f3"), 2), DomainError);
}

TEST_CASE("lowest annihilators") {
  const auto rank2 = test::load("rank2_f3");
  const auto low = implicit::lowest_annihilators(rank2, SubsetMask::full(4), 4);
  REQUIRE(low.has_value());
  CHECK(low->degree_bound == 1);
  CHECK(low->basis.size() == 1);
  CHECK_FALSE(implicit::lowest_annihilators(rank2, SubsetMask::of({0, 1}), 4).has_value());
}

TEST_CASE("restrict_to eliminates variables") {
  const auto rank2 = test::load("rank2_f3");
  const auto space = implicit::annihilator_space(rank2, SubsetMask::full(4), 2);
  // X3 - X1 - X2 and X4 - X1 X2 generate; eliminating X3 leaves X1 X2 - X4 alone in degree 2.
  const auto only124 = implicit::restrict_to(space.basis, SubsetMask::of({0, 1, 3}));
  REQUIRE(only124.size() == 1);
  CHECK(mpoly::render(only124[0]) == "X1*X2 + 2*X4");
  CHECK(implicit::restrict_to(space.basis, SubsetMask::of({0, 1})).empty());
  const auto all = implicit::restrict_to(space.basis, SubsetMask::full(4));
  CHECK(all.size() == space.basis.size());
}
