#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "toric/io.hpp"
#include "toric/polytope.hpp"

using namespace toric;

TEST_CASE("triangle from facet rows") {
  // (1,0;1),(0,1;1),(-1,-1;1): vertices (-1,-1),(2,-1),(-1,2)
  Polytope P = tst::make_polytope(2, {{{1, 0}, "1"}, {{0, 1}, "1"}, {{-1, -1}, "1"}});
  REQUIRE(P.vertices().vertices.size() == 3);
  std::vector<RatVec> expect = {rat_vec({-1, -1}), rat_vec({-1, 2}), rat_vec({2, -1})};
  for (const auto& e : expect) {
    bool found = false;
    for (const auto& v : P.vertices().vertices) found |= (v.point == e);
    CHECK(found);
  }
  CHECK(P.volume() == Rational(9, 2));
  CHECK(P.barycenter() == rat_vec({0, 0}));
}

TEST_CASE("interval") {
  Polytope P = tst::interval("1", "1");
  REQUIRE(P.vertices().vertices.size() == 2);
  CHECK(P.vertices().vertices.front().point == rat_vec({-1}));
  CHECK(P.vertices().vertices.back().point == rat_vec({1}));
  CHECK(P.volume() == Rational(2));
  CHECK(P.barycenter() == rat_vec({0}));
}

TEST_CASE("empty interior is rejected") {
  CHECK_THROWS_WITH_AS(
      tst::make_polytope(2, {{{1, 0}, "1"}, {{0, 1}, "1"}, {{-1, -1}, "1"}, {{1, 1}, "-3"}}),
      doctest::Contains("infeasible"), Error);
  try {
    tst::make_polytope(2, {{{1, 0}, "1"}, {{0, 1}, "1"}, {{-1, -1}, "1"}, {{1, 1}, "-3"}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyInterior);
  }
}

TEST_CASE("unbounded is rejected") {
  try {
    tst::make_polytope(2, {{{1, 0}, "1"}, {{0, 1}, "1"}});
    FAIL("expected Unbounded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unbounded);
  }
}

TEST_CASE("redundant facet is rejected with its index") {
  try {
    tst::make_polytope(2, {{{1, 0}, "1"}, {{0, 1}, "1"}, {{-1, -1}, "1"}, {{1, 1}, "5"}});
    FAIL("expected RedundantFacet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RedundantFacet);
    CHECK(e.index() == 3);
  }
}

TEST_CASE("non-primitive normal rejected unless raw") {
  try {
    tst::make_polytope(1, {{{2}, "1"}, {{-1}, "1"}});
    FAIL("expected NonPrimitiveNormal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPrimitiveNormal);
    CHECK(e.index() == 0);
  }
  std::vector<Facet> fs;
  Eigen::VectorXi n1(1), n2(1);
  n1 << 2;
  n2 << -1;
  fs.push_back({n1, Rational(1)});
  fs.push_back({n2, Rational(1)});
  Polytope P(1, fs, /*raw=*/true);
  CHECK(P.volume() == Rational(3, 2));
}

TEST_CASE("unit square vertices have two active facets each") {
  Polytope P = tst::make_polytope(2, {{{1, 0}, "0"}, {{0, 1}, "0"}, {{-1, 0}, "1"}, {{0, -1}, "1"}});
  REQUIRE(P.vertices().vertices.size() == 4);
  for (const auto& v : P.vertices().vertices) CHECK(v.active.size() == 2);
  CHECK(P.volume() == Rational(1));
  CHECK(P.barycenter() == (RatVec{Rational(1, 2), Rational(1, 2)}));
}

TEST_CASE("example 5.1 polytope at eps=1/2") {
  Polytope P = tst::ex51(Rational(1, 2));
  CHECK(P.vertices().vertices.size() == 4);
  CHECK(P.is_delzant().is_delzant);
  RatVec x = {Rational(-1, 6), Rational(-1, 6)};
  RatVec lv = P.facet_values_exact(x);
  CHECK(lv[0] == Rational(1, 6));
  CHECK(lv[1] == Rational(5, 6));
  CHECK(lv[2] == Rational(5, 6));
  CHECK(lv[3] == Rational(5, 6));
}

TEST_CASE("delzant failure reports determinant offender") {
  Polytope P = tst::make_polytope(2, {{{1, 0}, "0"}, {{0, 1}, "0"}, {{-1, -2}, "2"}});
  auto rep = P.is_delzant();
  CHECK(!rep.is_delzant);
  REQUIRE(rep.failures.size() == 1);
  const auto& v = P.vertices().vertices[rep.failures[0].vertex_index];
  CHECK(v.point == rat_vec({0, 1}));
  CHECK(rep.failures[0].reason == DelzantFailure::NonUnimodular);
}

TEST_CASE("standard simplex is delzant") {
  Polytope P = tst::make_polytope(2, {{{1, 0}, "0"}, {{0, 1}, "0"}, {{-1, -1}, "1"}});
  CHECK(P.is_delzant().is_delzant);
  CHECK(P.volume() == Rational(1, 2));
}

TEST_CASE("volume and barycenter are affine-equivariant") {
  auto rng = tst::Rng(12345);
  for (int trial = 0; trial < 25; ++trial) {
    Polytope P = tst::random_delzant_polytope(rng);
    CHECK(P.volume() > 0);
    // barycenter strictly interior
    for (const auto& l : P.facet_values_exact(P.barycenter())) CHECK(l > 0);

    RatVec a = {Rational(rng.uniform_int(-5, 5), 3), Rational(rng.uniform_int(-5, 5), 7)};
    Polytope Q = P.translate(a);
    CHECK(Q.volume() == P.volume());
    CHECK(Q.barycenter()[0] == P.barycenter()[0] + a[0]);
    CHECK(Q.barycenter()[1] == P.barycenter()[1] + a[1]);

    Eigen::MatrixXi U = tst::random_unimodular(rng, 2);
    Polytope R = P.apply_unimodular(U);
    CHECK(R.volume() == P.volume());
    CHECK(R.is_delzant().is_delzant == P.is_delzant().is_delzant);
  }
}

TEST_CASE("vertex set invariant under facet reorder") {
  Polytope P = tst::ex51(Rational(1, 2));
  Polytope Q = tst::make_polytope(
      2, {{{-1, -1}, "1/2"}, {{1, 0}, "1"}, {{1, 1}, "1/2"}, {{0, 1}, "1"}});
  REQUIRE(P.vertices().vertices.size() == Q.vertices().vertices.size());
  for (size_t i = 0; i < P.vertices().vertices.size(); ++i)
    CHECK(P.vertices().vertices[i].point == Q.vertices().vertices[i].point);
  CHECK(P.volume() == Q.volume());
  CHECK(P.barycenter() == Q.barycenter());
}

TEST_CASE("polytope json round trip is exact") {
  Polytope P = tst::ex51(Rational(7, 13));
  Json j = polytope_to_json(P);
  Polytope Q = polytope_from_json(j);
  REQUIRE(P.facet_count() == Q.facet_count());
  for (int k = 0; k < P.facet_count(); ++k) {
    CHECK(P.facet(k).normal == Q.facet(k).normal);
    CHECK(P.facet(k).offset == Q.facet(k).offset);
  }
}

TEST_CASE("toml subset parser") {
  std::string text =
      "# a triangle\n"
      "name = \"p2\"\n"
      "dimension = 2\n"
      "[[facets]]\n"
      "normal = [1, 0]\n"
      "offset = \"1\"\n"
      "[[facets]]\n"
      "normal = [0, 1]\n"
      "offset = 1\n"
      "[[facets]]\n"
      "normal = [-1, -1]\n"
      "offset = \"1\"  # anticanonical\n";
  Json doc = parse_toml_subset(text);
  Polytope P = polytope_from_json(doc);
  CHECK(P.name() == "p2");
  CHECK(P.volume() == Rational(9, 2));
}

TEST_CASE("3d cube volume and delzant") {
  Polytope P = tst::make_polytope(3, {{{1, 0, 0}, "0"},
                                      {{0, 1, 0}, "0"},
                                      {{0, 0, 1}, "0"},
                                      {{-1, 0, 0}, "2"},
                                      {{0, -1, 0}, "3"},
                                      {{0, 0, -1}, "5"}});
  CHECK(P.volume() == Rational(30));
  CHECK(P.barycenter() == (RatVec{Rational(1), Rational(3, 2), Rational(5, 2)}));
  CHECK(P.is_delzant().is_delzant);
  CHECK(P.vertices().vertices.size() == 8);
}

TEST_CASE("3d simplex volume") {
  Polytope P = tst::make_polytope(
      3, {{{1, 0, 0}, "0"}, {{0, 1, 0}, "0"}, {{0, 0, 1}, "0"}, {{-1, -1, -1}, "1"}});
  CHECK(P.volume() == Rational(1, 6));
}
