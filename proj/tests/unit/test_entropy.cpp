#include <cmath>
#include <map>

#include "doctest.h"
#include "mel/entropy.hpp"
#include "mel/error.hpp"
#include "mel/implicit.hpp"
#include "support.hpp"

using namespace mel;

namespace {

pointset::PointSet variety(const Instance& inst, std::uint32_t k, std::uint32_t D) {
  return pointset::variety_points(inst, k, implicit::annihilator_space(inst, SubsetMask::full(inst.n()), D));
}

// -sum p ln p over an explicit probability map, term by term.
double naive_entropy(const pointset::PointSet& ps, SubsetMask A) {
  std::map<std::vector<gf::Code>, double> prob;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::vector<gf::Code> key;
    for (auto e : A.elements()) key.push_back(ps.point(i)[e]);
    prob[key] += 1.0 / static_cast<double>(ps.size());
  }
  double H = 0;
  for (const auto& [key, p] : prob) H -= p * std::log(p);
  return H;
}

}  // namespace

TEST_CASE("sigma at q = 3") {
  const auto sigma = test::load("sigma2_f3");
  const auto V = variety(sigma, 1, 2);
  const double ln3 = std::log(3.0);
  CHECK(entropy::subset_entropy(V, SubsetMask::singleton(0)) == doctest::Approx(ln3).epsilon(1e-12));
  const double H3 = -(5.0 / 9 * std::log(5.0 / 9) + 2 * (2.0 / 9) * std::log(2.0 / 9));
  CHECK(entropy::subset_entropy(V, SubsetMask::singleton(2)) == doctest::Approx(H3).epsilon(1e-12));
  CHECK(std::fabs(H3 - 0.995027) < 1e-6);
  CHECK(entropy::subset_entropy(V, SubsetMask()) == 0);

  const auto t = entropy::polymatroid(V);
  CHECK(t(SubsetMask::of({0, 2})) == doctest::Approx(2 - 1.0 / 3).epsilon(1e-12));
  CHECK(t(SubsetMask::full(3)) == 2);
  CHECK(t(SubsetMask::of({1, 2})) == doctest::Approx(2 - (2.0 / 3) * std::log(2.0) / ln3).epsilon(1e-12));
  CHECK(t.N == 9);
  CHECK(t.q == 3);
  CHECK(t.fibers[SubsetMask::of({1, 2}).bits()] == 6);

  const auto hist = entropy::histogram(V, SubsetMask::singleton(2));
  CHECK(hist.counts == std::vector<std::uint64_t>{5, 2, 2});
  CHECK(hist.total == 9);
}

TEST_CASE("conditional entropies") {
  const auto sigma = test::load("sigma2_f3");
  const auto V = variety(sigma, 1, 2);
  CHECK(entropy::conditional_entropy(V, 2, SubsetMask::of({0, 1})) == doctest::Approx(0).epsilon(1e-12));
  const double expect = naive_entropy(V, SubsetMask::full(3)) - naive_entropy(V, SubsetMask::of({1, 2}));
  CHECK(entropy::conditional_entropy(V, 0, SubsetMask::of({1, 2})) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect > 0);
  CHECK_THROWS_AS(entropy::conditional_entropy(V, 0, SubsetMask::of({0, 1})), DomainError);

  const auto id = test::load("identity3_f3");
  implicit::AnnihilatorBasis empty;
  empty.varsubset = SubsetMask::full(3);
  const auto W = pointset::variety_points(id, 1, empty);
  CHECK(entropy::conditional_entropy(W, 1, SubsetMask::of({0, 2})) == doctest::Approx(std::log(3.0)));
}

TEST_CASE("pipeline entropy equals the naive oracle on the corpus") {
  for (const char* name : {"sigma2_f3", "sigma2_f2", "sigma2_f4", "sigma3_f2", "frobenius_f2", "graph_f3", "rank2_f3"}) {
    CAPTURE(name);
    const auto inst = test::load(name);
    const std::uint32_t D = inst.n() == 4 && inst.s == 3 ? 3 : 2;
    for (std::uint32_t k = 1; k <= 2; ++k) {
      const auto V = variety(inst, k, D);
      REQUIRE(V.size() <= 10000);
      for (std::uint32_t b = 0; b < (1u << inst.n()); ++b)
        CHECK(entropy::subset_entropy(V, SubsetMask(b)) ==
              doctest::Approx(naive_entropy(V, SubsetMask(b))).epsilon(1e-12));
    }
  }
}

TEST_CASE("identity tables are exact") {
  const auto id = test::load("identity3_f3");
  implicit::AnnihilatorBasis empty;
  empty.varsubset = SubsetMask::full(3);
  const auto t = entropy::polymatroid(pointset::variety_points(id, 2, empty));
  for (std::uint32_t b = 0; b < 8; ++b) CHECK(t.h[b] == static_cast<double>(SubsetMask(b).size()));
  const auto rep = entropy::check_polymatroid_axioms(t);
  CHECK(rep.ok());
  CHECK(rep.submodular.worst_slack == 0);
}

TEST_CASE("polymatroid axioms on sigma") {
  const auto t = entropy::polymatroid(variety(test::load("sigma2_f3"), 1, 2));
  const auto rep = entropy::check_polymatroid_axioms(t);
  CHECK(rep.ok());
  CHECK(rep.monotone.checked == 12);
  CHECK(rep.submodular.checked == 36);
  CHECK(t(SubsetMask::full(3)) == 2);
}

TEST_CASE("axiom check reports violations") {
  entropy::PolymatroidTable t;
  t.n = 2;
  t.q = 3;
  t.N = 1;
  t.h = {0, 1, 1, 2.5};
  auto rep = entropy::check_polymatroid_axioms(t);
  CHECK_FALSE(rep.bounded.pass);
  CHECK_FALSE(rep.submodular.pass);
  CHECK(rep.monotone.pass);
  t.h = {0, 1, 0.5, 0.8};
  rep = entropy::check_polymatroid_axioms(t);
  CHECK_FALSE(rep.monotone.pass);
  CHECK(rep.monotone.worst_slack == doctest::Approx(-0.2));
  CHECK_FALSE(rep.monotone.witness.empty());
}

TEST_CASE("entropy from counts") {
  const std::uint64_t counts[] = {1, 3, 2};
  const double expect = -(1.0 / 6 * std::log(1.0 / 6) + 0.5 * std::log(0.5) + 1.0 / 3 * std::log(1.0 / 3));
  CHECK(entropy::entropy_from_counts(6, counts) == doctest::Approx(expect).epsilon(1e-14));
  const std::uint64_t uniform[] = {4, 4, 4};
  CHECK(entropy::entropy_from_counts(12, uniform) == std::log(3.0));
  CHECK_THROWS_AS(entropy::entropy_from_counts(0, {}), DomainError);
}

TEST_CASE("large counts keep relative accuracy") {
  // N = 10^8 split as 6 * 10^7 + 4 * 10^7; compare against long double.
  const std::uint64_t counts[] = {60000000, 40000000};
  const long double p = 0.6L, r = 0.4L;
  const long double expect = -(p * std::log(p) + r * std::log(r));
  const double got = entropy::entropy_from_counts(100000000, counts);
  CHECK(std::fabs(got - static_cast<double>(expect)) / static_cast<double>(expect) < 1e-12);
}

TEST_CASE("empty point sets are rejected") {
  pointset::PointSet ps{gf::get_field(3, 1), 2, {}, pointset::Provenance::image};
  CHECK_THROWS_AS(entropy::subset_entropy(ps, SubsetMask()), DomainError);
  CHECK_THROWS_AS(entropy::polymatroid(ps), DomainError);
}
