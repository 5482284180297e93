#include <algorithm>

#include "doctest.h"
#include "mel/error.hpp"
#include "mel/matroid.hpp"
#include "support.hpp"

using namespace mel;
using matroid::Matroid;

namespace {

// Circuits of the matroid whose rank function is `rank`, straight from the definition.
std::vector<SubsetMask> circuits_from_rank(std::size_t n, const std::function<std::uint32_t(SubsetMask)>& rank) {
  std::vector<SubsetMask> out;
  for (std::uint32_t b = 1; b < (1u << n); ++b) {
    const SubsetMask A(b);
    if (rank(A) == A.size()) continue;
    bool minimal = true;
    for (auto i : A.elements()) minimal = minimal && rank(A.without(i)) == A.size() - 1;
    if (minimal) out.push_back(A);
  }
  std::sort(out.begin(), out.end(), [](SubsetMask a, SubsetMask b) {
    return a.size() != b.size() ? a.size() < b.size() : a.bits() < b.bits();
  });
  return out;
}

}  // namespace

TEST_CASE("sigma: independence and rank") {
  const auto sigma = test::load("sigma2_f3");
  const Matroid M(sigma);
  CHECK(M.independent(SubsetMask()));
  CHECK(M.independent(SubsetMask::of({0, 1})));
  CHECK(M.independent(SubsetMask::of({0, 2})));
  CHECK(M.independent(SubsetMask::of({1, 2})));
  CHECK_FALSE(M.independent(SubsetMask::full(3)));
  CHECK(M.rank(SubsetMask::full(3)) == 2);
  CHECK(M.degree_cap(SubsetMask::full(3)) == 4);
  CHECK(M.degree_cap(SubsetMask::of({0, 1})) == 2);
  CHECK_THROWS_AS(M.independent(SubsetMask::singleton(3)), DomainError);
}

TEST_CASE("identity and Frobenius ranks") {
  const auto id = test::load("identity3_f3");
  const Matroid I(id);
  for (std::uint32_t b = 0; b < 8; ++b) CHECK(I.rank(SubsetMask(b)) == SubsetMask(b).size());
  const auto frob = test::load("frobenius_f2");
  const Matroid F(frob);
  CHECK(F.rank(SubsetMask::singleton(1)) == 1);
  CHECK(F.rank(SubsetMask::full(2)) == 1);
}

TEST_CASE("rank tables of the corpus satisfy the axioms and agree with greedy rank") {
  for (const char* name : test::kCorpus) {
    CAPTURE(name);
    const auto inst = test::load(name);
    const Matroid M(inst);
    const auto table = matroid::rank_table(M);
    CHECK(table.check_axioms().ok());
    for (std::uint32_t b = 0; b < (1u << inst.n()); ++b) CHECK(table(SubsetMask(b)) == M.rank(SubsetMask(b)));
  }
}

TEST_CASE("axiom check catches bad tables") {
  CHECK_FALSE(matroid::RankTable(2, {0, 2, 1, 2}).check_axioms().r1);
  CHECK_FALSE(matroid::RankTable(2, {0, 1, 1, 0}).check_axioms().r2);
  CHECK_FALSE(matroid::RankTable(2, {0, 0, 0, 1}).check_axioms().r3);
  CHECK(matroid::RankTable(2, {0, 1, 1, 1}).check_axioms().ok());
  CHECK_THROWS_AS(matroid::RankTable(2, {0, 1}), DomainError);
}

TEST_CASE("circuits") {
  CHECK(matroid::circuits(Matroid(test::load("sigma2_f3"))) == std::vector<SubsetMask>{SubsetMask::full(3)});
  CHECK(matroid::circuits(Matroid(test::load("identity3_f3"))).empty());
  CHECK(matroid::circuits(Matroid(test::load("frobenius_f2"))) == std::vector<SubsetMask>{SubsetMask::full(2)});
  CHECK(matroid::circuits(Matroid(test::load("sigma3_f3"))) == std::vector<SubsetMask>{SubsetMask::full(4)});
}

TEST_CASE("rank2 circuits match the definition applied to independent rank oracles") {
  const auto inst = test::load("rank2_f3");
  const auto got = matroid::circuits(Matroid(inst));
  const auto by_jacobian = circuits_from_rank(4, [&](SubsetMask A) { return matroid::jacobian_rank(inst, A); });
  const auto slopes = matroid::rank_pointcount_table(inst, 2, 3);
  const auto by_count = circuits_from_rank(4, [&](SubsetMask A) { return slopes[A.bits()]; });
  CHECK(got == by_jacobian);
  CHECK(got == by_count);
  CHECK(got.size() == 4);
  for (auto C : got) CHECK(C.size() == 3);
}

TEST_CASE("fundamental circuits") {
  const auto sigma = test::load("sigma2_f3");
  const Matroid M(sigma);
  CHECK(matroid::fundamental_circuit(M, SubsetMask::of({0, 1}), 2) == SubsetMask::full(3));
  CHECK(matroid::fundamental_circuit(M, SubsetMask::of({0, 2}), 1) == SubsetMask::full(3));
  CHECK(matroid::fundamental_circuit(M, SubsetMask::of({1, 2}), 0) == SubsetMask::full(3));
  CHECK_THROWS_AS(matroid::fundamental_circuit(M, SubsetMask::of({0}), 2), DomainError);
  CHECK_THROWS_AS(matroid::fundamental_circuit(M, SubsetMask::of({0, 1}), 1), DomainError);

  const auto rank2 = test::load("rank2_f3");
  const Matroid R(rank2);
  CHECK(matroid::fundamental_circuit(R, SubsetMask::of({0, 1}), 3) == SubsetMask::of({0, 1, 3}));
  CHECK(matroid::fundamental_circuit(R, SubsetMask::of({2, 3}), 0) == SubsetMask::of({0, 2, 3}));
}

TEST_CASE("point-count rank") {
  const auto sigma = test::load("sigma2_f3");
  CHECK(matroid::rank_pointcount(sigma, SubsetMask::full(3), 2, 3) == 2);
  CHECK(matroid::rank_pointcount(test::load("frobenius_f2"), SubsetMask::singleton(1), 3, 4) == 1);
  CHECK(matroid::rank_pointcount(test::load("identity2_f3"), SubsetMask::singleton(0), 1, 2) == 1);
  CHECK_THROWS_AS(matroid::rank_pointcount(sigma, SubsetMask::full(3), 2, 2), DomainError);
  const auto counts = matroid::projection_counts(sigma, 1);
  CHECK(counts[SubsetMask::full(3).bits()] == 9);
  CHECK(counts[SubsetMask::of({1, 2}).bits()] == 6);
  CHECK(counts[0] == 1);
}

TEST_CASE("point-count table agrees with the bulk-free version") {
  const auto sigma = test::load("sigma2_f3");
  const auto table = matroid::rank_pointcount_table(sigma, 2, 3);
  for (std::uint32_t b = 0; b < 8; ++b) CHECK(table[b] == matroid::rank_pointcount(sigma, SubsetMask(b), 2, 3));
  CHECK(matroid::projection_counts(sigma, 3, {kDefaultGridGuard, 1}) ==
        matroid::projection_counts(sigma, 3, {kDefaultGridGuard, 3}));
}

TEST_CASE("Jacobian rank") {
  const auto sigma = test::load("sigma2_f3");
  CHECK(matroid::jacobian_rank(sigma, SubsetMask::full(3)) == 2);
  const auto frob = test::load("frobenius_f2");
  CHECK(matroid::jacobian_rank(frob, SubsetMask::singleton(1)) == 0);
  CHECK(matroid::jacobian_rank(frob, SubsetMask::singleton(0)) == 1);
  CHECK(matroid::jacobian_rank(test::load("identity3_f3"), SubsetMask::full(3)) == 3);
  CHECK(matroid::jacobian_rank(sigma, SubsetMask()) == 0);
  CHECK(matroid::jacobian_rank(sigma, SubsetMask::full(3), 3, 42) == matroid::jacobian_rank(sigma, SubsetMask::full(3), 3, 42));
  CHECK_THROWS_AS(matroid::jacobian_rank(sigma, SubsetMask::full(3), 0), DomainError);
}
