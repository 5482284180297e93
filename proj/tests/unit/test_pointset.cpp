#include <set>

#include "doctest.h"
#include "mel/error.hpp"
#include "mel/implicit.hpp"
#include "mel/pointset.hpp"
#include "support.hpp"

using namespace mel;

namespace {

implicit::AnnihilatorBasis full_basis(const Instance& inst, std::uint32_t D) {
  return implicit::annihilator_space(inst, SubsetMask::full(inst.n()), D);
}

// Every (a, b, c) in F^3 satisfying a^2 - a b + c = 0, by exhaustive search.
std::set<std::vector<gf::Code>> sigma_variety(const gf::Field& F) {
  std::set<std::vector<gf::Code>> out;
  for (gf::Code a = 0; a < F.size(); ++a)
    for (gf::Code b = 0; b < F.size(); ++b)
      for (gf::Code c = 0; c < F.size(); ++c)
        if (F.add(F.sub(F.mul(a, a), F.mul(a, b)), c) == 0) out.insert({a, b, c});
  return out;
}

}  // namespace

TEST_CASE("image points") {
  const auto sigma = test::load("sigma2_f3");
  const auto im = pointset::image_points(sigma, 1);
  CHECK(pointset::count(im) == 9);
  CHECK(im.provenance == pointset::Provenance::image);
  const auto id = pointset::image_points(test::load("identity2_f3"), 1);
  CHECK(pointset::count(id) == 9);
  const auto frob = pointset::image_points(test::load("frobenius_f2"), 1);
  REQUIRE(pointset::count(frob) == 2);
  CHECK(pointset::render_point(frob, 0) == "0,0");
  CHECK(pointset::render_point(frob, 1) == "1,1");
}

TEST_CASE("points are sorted and distinct") {
  const auto im = pointset::image_points(test::load("sigma3_f2"), 2);
  for (std::size_t i = 0; i + 1 < im.size(); ++i) {
    const auto a = im.point(i), b = im.point(i + 1);
    CHECK(std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()));
  }
}

TEST_CASE("sigma variety matches brute force and has q^2 points") {
  const auto sigma = test::load("sigma2_f3");
  const auto basis = full_basis(sigma, 2);
  for (std::uint32_t k = 1; k <= 3; ++k) {
    const auto V = pointset::variety_points(sigma, k, basis);
    const std::uint64_t q = V.field->size();
    CHECK(pointset::count(V) == q * q);
    const auto oracle = sigma_variety(*V.field);
    std::set<std::vector<gf::Code>> got;
    for (std::size_t i = 0; i < V.size(); ++i) got.insert({V.point(i).begin(), V.point(i).end()});
    CHECK(got == oracle);
    CHECK(V == pointset::image_points(sigma, k));
  }
  CHECK(pointset::count(pointset::variety_points(sigma, 3, basis)) == 729);
}

TEST_CASE("variety of a free matroid is the whole space") {
  const auto id = test::load("identity3_f3");
  implicit::AnnihilatorBasis empty;
  empty.varsubset = SubsetMask::full(3);
  CHECK(pointset::count(pointset::variety_points(id, 1, empty)) == 27);
  CHECK(pointset::count(pointset::variety_points(id, 2, empty)) == 729);
}

TEST_CASE("Frobenius over F_4 has 4 points") {
  const auto frob = test::load("frobenius_f2");
  CHECK(pointset::count(pointset::variety_points(frob, 2, full_basis(frob, 2))) == 4);
}

TEST_CASE("non-hypersurface variety") {
  const auto rank2 = test::load("rank2_f3");
  const auto V = pointset::variety_points(rank2, 2, full_basis(rank2, 2));
  CHECK(pointset::count(V) == 81);
  CHECK(V == pointset::image_points(rank2, 2));
}

TEST_CASE("a basis that is too weak is caught by the containment check") {
  const auto sigma = test::load("sigma2_f3");
  auto wrong = full_basis(sigma, 2);
  // Replace the relation by X3 = X1 X2, which the image does not satisfy.
  mpoly::MPoly g = mpoly::MPoly::variable(sigma.base, 3, 2) -
                   mpoly::MPoly::variable(sigma.base, 3, 0) * mpoly::MPoly::variable(sigma.base, 3, 1);
  wrong.basis = {g};
  CHECK_THROWS_AS(pointset::variety_points(sigma, 1, wrong), SoundnessError);
}

TEST_CASE("point counts grow along subfield embeddings") {
  const auto sigma = test::load("sigma2_f2");
  const auto basis = full_basis(sigma, 2);
  const auto V2 = pointset::variety_points(sigma, 2, basis);
  const auto V4 = pointset::variety_points(sigma, 4, basis);
  const auto lifted = pointset::embed_points(V2, V4.field);
  CHECK(pointset::count(lifted) == pointset::count(V2));
  CHECK(pointset::contains_all(V4, lifted));
  CHECK(pointset::count(V2) <= pointset::count(V4));
}

TEST_CASE("guards") {
  const auto sigma = test::load("sigma2_f3");
  CHECK_THROWS_AS(pointset::image_points(sigma, 3, {100, 1}), GuardError);
  CHECK_THROWS_AS(pointset::variety_points(sigma, 3, full_basis(sigma, 2), {100, 1}), GuardError);
  CHECK_THROWS_AS(pointset::image_points(sigma, 0), DomainError);
}

TEST_CASE("results do not depend on the worker count") {
  const auto sigma = test::load("sigma3_f2");
  const auto basis = full_basis(sigma, 3);
  CHECK(pointset::variety_points(sigma, 3, basis, {kDefaultGridGuard, 1}) ==
        pointset::variety_points(sigma, 3, basis, {kDefaultGridGuard, 3}));
  CHECK(pointset::image_points(sigma, 3, {kDefaultGridGuard, 1}) ==
        pointset::image_points(sigma, 3, {kDefaultGridGuard, 4}));
}

TEST_CASE("extension elements render as coefficient vectors") {
  const auto inst = test::load("sigma2_f4");
  const auto im = pointset::image_points(inst, 1);
  CHECK(pointset::count(im) == 16);
  CHECK(pointset::render_point(im, 1).find('[') != std::string::npos);
}
