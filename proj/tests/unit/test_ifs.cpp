#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "../gen.hpp"
#include "../oracles.hpp"
#include "vislab/errors.hpp"
#include "vislab/ifs.hpp"

using namespace vislab;

namespace {

IFSystem equal_system(int s, double lambda) {
  IFSystem sys;
  sys.name = "test";
  for (int i = 0; i < s; ++i) sys.maps.push_back({lambda, {i * (1.0 - lambda) / std::max(1, s - 1), 0.0}});
  sys.hull = {{0, 0}, 1};
  return sys;
}

std::set<std::tuple<double, double, double>> corner_set(const std::vector<DiskNode>& nodes) {
  std::set<std::tuple<double, double, double>> out;
  for (const auto& n : nodes) out.insert({n.square.corner.x, n.square.corner.y, n.square.side});
  return out;
}

}  // namespace

TEST_SUITE("ifs") {

TEST_CASE("similarity dimension") {
  CHECK(similarity_dimension(fourcorner()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(similarity_dimension(equal_system(2, 0.25)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(similarity_dimension(preset("gasket3")) == doctest::Approx(1.0).epsilon(1e-12));
  const auto sys = equal_system(3, 0.3);
  const double a = similarity_dimension(sys);
  CHECK(std::fabs(3 * std::pow(0.3, a) - 1) <= 1e-12);
  CHECK_THROWS_AS(similarity_dimension(equal_system(5, 0.9)), InvalidInput);
}

TEST_CASE("fourcorner stage 1 corners") {
  const auto g = generate_generation(fourcorner(), 1);
  REQUIRE(g.nodes.size() == 4);
  const std::vector<Point2> want{{0, 0}, {0, 0.75}, {0.75, 0}, {0.75, 0.75}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(g.nodes[i].square.corner == want[i]);
    CHECK(g.nodes[i].square.side == 0.25);
  }
}

TEST_CASE("stage 0 is the hull and stage 3 has the right area") {
  const auto g0 = generate_generation(preset("gasket3"), 0);
  REQUIRE(g0.nodes.size() == 1);
  CHECK(g0.nodes[0].square.corner == g0.system.hull.corner);
  CHECK(g0.nodes[0].square.side == g0.system.hull.side);

  const auto g3 = generate_generation(fourcorner(), 3);
  CHECK(g3.nodes.size() == 64);
  double area = 0;
  for (const auto& n : g3.nodes) area += n.square.side * n.square.side;
  CHECK(area == doctest::Approx(std::pow(4.0, -3)).epsilon(1e-15));
}

TEST_CASE("corners follow the base-4 digit expansion") {
  const auto g = generate_generation(fourcorner(), 4);
  std::set<std::pair<double, double>> want;
  for (int w = 0; w < 256; ++w) {
    double x = 0, y = 0;
    for (int j = 1; j <= 4; ++j) {
      const int digit = (w >> (2 * (j - 1))) & 3;
      x += ((digit >> 1) & 1) * 3 * std::pow(4.0, -j);
      y += (digit & 1) * 3 * std::pow(4.0, -j);
    }
    want.insert({x, y});
  }
  std::set<std::pair<double, double>> got;
  for (const auto& n : g.nodes) got.insert({n.square.corner.x, n.square.corner.y});
  CHECK(got == want);
}

TEST_CASE("budget errors name the cap") {
  try {
    (void)generate_generation(fourcorner(), 11);
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("1048576") != std::string::npos);
  }
  CHECK_NOTHROW((void)generation_size(fourcorner(), 10));
  CHECK_THROWS_AS((void)generation_size(fourcorner(), 3, 63), ResourceError);
}

TEST_CASE("word composition") {
  const auto sys = fourcorner();
  const auto id = compose_word(sys, Word{});
  CHECK(id.lambda == 1.0);
  CHECK(id.z == Point2{0, 0});
  const auto t1 = compose_word(sys, Word{{1}});
  CHECK(t1.lambda == 0.25);
  CHECK(t1.z == Point2{0, 0});
  const auto t11 = compose_word(sys, Word{{1, 1}});
  CHECK(t11.lambda == 0.0625);
  for (Point2 p : {Point2{1, 1}, Point2{0.3, -2}, Point2{5, 7}}) {
    const Point2 direct = sys.maps[0].apply(sys.maps[0].apply(p));
    CHECK(t11.apply(p) == direct);
  }
  // order: T_w = T_{w_n} o ... o T_{w_1}
  const auto t24 = compose_word(sys, Word{{2, 4}});
  const Point2 p{0.4, 0.9};
  CHECK(t24.apply(p).x == doctest::Approx(sys.maps[3].apply(sys.maps[1].apply(p)).x));
  CHECK(t24.apply(p).y == doctest::Approx(sys.maps[3].apply(sys.maps[1].apply(p)).y));
}

TEST_CASE("fixed point is the limit of iterates") {
  gen::Rng rng(2);
  const auto sys = fourcorner();
  for (int trial = 0; trial < 50; ++trial) {
    Word w;
    for (int i = 0; i < rng.integer(1, 5); ++i) w.letters.push_back(rng.integer(1, 4));
    const auto m = compose_word(sys, w);
    Point2 p = rng.point(-3, 3);
    for (int k = 0; k < 60; ++k) p = m.apply(p);
    const Point2 f = m.fixed_point();
    CHECK(p.x == doctest::Approx(f.x).epsilon(1e-12));
    CHECK(p.y == doctest::Approx(f.y).epsilon(1e-12));
  }
}

TEST_CASE("node words and indices are lexicographic and consistent") {
  const auto sys = fourcorner();
  const auto g = generate_generation(sys, 3);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    CHECK(g.nodes[i].index == i);
    const Word w = g.word(i);
    CHECK(index_from_word(w, 4) == i);
    CHECK(word_from_index(i, 3, 4) == w);
    const Square sq = compose_word(sys, w).apply(sys.hull);
    CHECK(sq.corner.x == doctest::Approx(g.nodes[i].square.corner.x).epsilon(1e-15));
    CHECK(sq.corner.y == doctest::Approx(g.nodes[i].square.corner.y).epsilon(1e-15));
  }
  CHECK(word_from_index(0, 3, 4).letters == std::vector<int>{1, 1, 1});
  CHECK(word_from_index(63, 3, 4).letters == std::vector<int>{4, 4, 4});
}

TEST_CASE("genericity") {
  CHECK(is_generic(Word{{1, 2}}, 1, 2));
  CHECK_FALSE(is_generic(Word{{1, 1}}, 1, 2));
  CHECK(is_generic(Word{{1, 1, 2, 2, 1}}, 2, 2));
  CHECK_FALSE(is_generic(Word{{1, 2, 1, 2}}, 2, 2));
}

TEST_CASE("subword census examples") {
  CHECK(subword_census(fourcorner(), 1, 1, 1000, 1) == 1.0);
  CHECK(subword_census(equal_system(2, 0.25), 2, 1, 1000, 1) == 0.5);
  // exact: words of length 20 missing at least one of 4 letters
  double exact = 0;
  const double binom[] = {1, 4, 6, 4, 1};
  for (int k = 1; k <= 3; ++k) exact += (k % 2 ? 1 : -1) * binom[k] * std::pow((4.0 - k) / 4.0, 20);
  CHECK(exact <= 4 * std::pow(0.75, 20));
  const std::uint64_t samples = 1'000'000;
  const double mc = subword_census(fourcorner(), 20, 1, samples, 42);
  CHECK(std::fabs(mc - exact) <= 4 * std::sqrt(exact * (1 - exact) / samples));
  CHECK(mc <= 0.0127 + 4 * std::sqrt(exact / samples));
  // fixed seed reproduces
  CHECK(subword_census(fourcorner(), 20, 1, 10'000, 42) == subword_census(fourcorner(), 20, 1, 10'000, 42));
}

TEST_CASE("census agrees with brute enumeration when exhaustive") {
  for (int N = 2; N <= 6; ++N) {
    int bad = 0;
    for (std::uint64_t i = 0; i < (1u << (2 * N)); ++i) bad += !is_generic(word_from_index(i, N, 4), 1, 4);
    CHECK(subword_census(fourcorner(), N, 1, 1, 0) == doctest::Approx(bad / std::pow(4.0, N)));
  }
}

TEST_CASE("property: nesting, self-similarity and ratio law") {
  for (const auto& name : preset_names()) {
    const auto sys = preset(name);
    for (int n = 0; n <= 4; ++n) {
      const auto g = generate_generation(sys, n);
      const auto h = generate_generation(sys, n + 1);
      const std::size_t s = sys.size();
      for (std::size_t i = 0; i < h.nodes.size(); ++i) {
        int containing = 0;
        for (const auto& parent : g.nodes) containing += parent.square.contains(h.nodes[i].square, 1e-12);
        CHECK(containing == 1);
        CHECK(h.nodes[i].square.side ==
              doctest::Approx(sys.hull.side * std::pow(1.0 / s, n + 1)).epsilon(1e-14));
      }
      std::vector<DiskNode> images;
      for (const auto& m : sys.maps)
        for (const auto& node : g.nodes) images.push_back({0, m.apply(node.square)});
      auto a = corner_set(images), b = corner_set(h.nodes);
      REQUIRE(a.size() == b.size());
      auto ia = a.begin();
      for (auto ib = b.begin(); ib != b.end(); ++ia, ++ib) {
        CHECK(std::get<0>(*ia) == doctest::Approx(std::get<0>(*ib)).epsilon(1e-14));
        CHECK(std::get<1>(*ia) == doctest::Approx(std::get<1>(*ib)).epsilon(1e-14));
      }
      // independent recursion agrees
      const auto brute = oracle::stage_squares(sys, n);
      CHECK(brute.size() == g.nodes.size());
    }
  }
}

TEST_CASE("json description") {
  const auto sys = parse_ifs_json(
      R"({"maps":[{"lambda":0.25,"z":[0.0,0.0]},{"lambda":0.25,"z":[0.75,0.75]}],)"
      R"("hull":{"corner":[0,0],"side":1},"osc":true})");
  CHECK(sys.size() == 2);
  CHECK(sys.maps[1].z == Point2{0.75, 0.75});
  CHECK(similarity_dimension(sys) == doctest::Approx(0.5));
  CHECK_THROWS_AS(parse_ifs_json("{not json"), InvalidInput);
  CHECK_THROWS_AS(parse_ifs_json(R"({"maps":[{"lambda":1.5,"z":[0,0]},{"lambda":0.5,"z":[0,0]}],"hull":{"corner":[0,0],"side":1}})"),
                  InvalidInput);
  CHECK_THROWS_AS(parse_ifs_json(R"({"maps":[{"lambda":0.5,"z":[0,0]}],"hull":{"corner":[0,0],"side":1}})"),
                  InvalidInput);
  CHECK_THROWS_AS(resolve_ifs("no-such-preset-or-file"), InvalidInput);
  CHECK(resolve_ifs("fourcorner").size() == 4);
}

}  // TEST_SUITE
