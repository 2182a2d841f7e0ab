#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lozlab/stats.hpp"
#include "lozlab/tiling_sampler.hpp"
#include "lozlab/ust.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

using namespace lozlab;

namespace {

// a=0 b=1 c=2 d=3
const WalkPath kSimple{0, 1, 2};
const WalkPath kOneLoop{0, 1, 0, 3};
const WalkPath kTwoWay{0, 1, 2, 0, 2};

PlanarGraph absorbing_five() {
  PlanarGraph g;
  g.add_vertex({0, 0});
  g.add_vertex({1, 0});
  g.add_vertex({0.5, 0.8});
  g.add_vertex({0.5, -1}, true);
  g.add_vertex({0.5, 2}, true);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  g.add_edge(0, 3, 3.0, 1.0);
  g.add_edge(1, 3, 3.0, 1.0);
  g.add_edge(2, 4, 3.0, 1.0);
  g.finalize();
  return g;
}

PlanarGraph triangle_one_wired() {
  PlanarGraph g;
  g.add_vertex({0, 0});
  g.add_vertex({1, 0});
  g.add_vertex({0.5, 1}, true);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  g.finalize();
  return g;
}

// 3x3 grid graph wired at one corner: its 192 spanning trees
PlanarGraph grid3_corner() {
  PlanarGraph g;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) g.add_vertex({double(x), double(y)}, x == 0 && y == 0);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      if (x + 1 < 3) g.add_edge(3 * x + y, 3 * (x + 1) + y);
      if (y + 1 < 3) g.add_edge(3 * x + y, 3 * x + y + 1);
    }
  g.finalize();
  return g;
}

double wilson_pvalue(const PlanarGraph& g, const std::vector<int>& order, std::uint64_t seed, int n) {
  auto trees = enumerate_wired_trees(g, 1000);
  std::map<std::vector<int>, int> idx;
  std::vector<double> probs;
  for (const auto& [t, w] : trees) {
    idx[t.parent] = static_cast<int>(probs.size());
    probs.push_back(w);
  }
  std::vector<long> counts(probs.size(), 0);
  Rng rng = make_stream(seed, 0);
  for (int i = 0; i < n; ++i) {
    WiredTree t = wilson_ust(g, order, rng);
    REQUIRE(t.valid(g));
    ++counts[idx.at(t.parent)];
  }
  return chi2_pvalue(counts, probs);
}

}  // namespace

TEST_CASE("loop erasures on hand examples") {
  CHECK(forward_loop_erase(kSimple) == kSimple);
  CHECK(forward_loop_erase(kOneLoop) == WalkPath{0, 3});
  CHECK(forward_loop_erase(kTwoWay) == WalkPath{0, 2});
  CHECK(backward_loop_erase(kSimple) == kSimple);
  CHECK(backward_loop_erase(kOneLoop) == WalkPath{0, 3});
  CHECK(backward_loop_erase(kTwoWay) == WalkPath{0, 1, 2});
  CHECK(mixed_loop_erase(kTwoWay, kTwoWay.size() - 1) == forward_loop_erase(kTwoWay));
  const WalkPath once{0, 1, 2, 1, 3};
  CHECK(mixed_loop_erase(once, 0) == backward_loop_erase(once));
  // start revisited: backward erasure from its last visit
  CHECK(mixed_loop_erase(kTwoWay, 0) == WalkPath{0, 2});
  CHECK_THROWS(mixed_loop_erase(kTwoWay, 9));
}

TEST_CASE("erasures are simple with preserved endpoints") {
  PlanarGraph g = grid_graph(3, 1);
  Rng rng = make_stream(31, 0);
  for (int i = 0; i < 500; ++i) {
    WalkPath x = random_walk_to_boundary(g, g.nearest_vertex({0, 0}), rng);
    for (std::size_t T : {std::size_t{0}, x.size() / 3, x.size() - 1}) {
      for (const WalkPath& y : {forward_loop_erase(x), backward_loop_erase(x), mixed_loop_erase(x, T)}) {
        CHECK(y.front() == x.front());
        CHECK(y.back() == x.back());
        std::vector<int> s = y;
        std::sort(s.begin(), s.end());
        CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
        for (std::size_t k = 0; k + 1 < y.size(); ++k) {
          auto arcs = g.arcs(y[k]);
          CHECK(std::any_of(arcs.begin(), arcs.end(), [&](const auto& a) { return a.to == y[k + 1]; }));
        }
      }
    }
  }
}

TEST_CASE("erasure laws agree by trajectory enumeration") {
  PlanarGraph g = absorbing_five();
  ErasureLaws r = compare_erasure_laws(g, 0, 2, 1e-9);
  CHECK(r.residual <= 1e-9);
  CHECK(r.tv_mixed_forward <= 1e-6);
  CHECK(r.tv_backward_forward <= 1e-6);
  CHECK(r.trajectories > 1000);
}

TEST_CASE("wilson is exact") {
  PlanarGraph tri = triangle_one_wired();
  CHECK(enumerate_wired_trees(tri, 10).size() == 3);
  CHECK(wilson_pvalue(tri, {0, 1}, 41, 100000) > 1e-3);
  PlanarGraph grid = grid3_corner();
  CHECK(enumerate_wired_trees(grid, 1000).size() == 192);
  CHECK(wilson_pvalue(grid, {8, 7, 6, 5, 4, 3, 2, 1}, 42, 100000) > 1e-3);
  CHECK(wilson_pvalue(grid, {4, 1, 2, 3, 5, 6, 7, 8}, 43, 100000) > 1e-3);
  // weighted: law proportional to the product of oriented weights
  PlanarGraph w;
  w.add_vertex({0, 0});
  w.add_vertex({1, 0});
  w.add_vertex({0.5, 1}, true);
  w.add_vertex({0.5, -1}, true);
  w.add_edge(0, 1, 2.0, 0.5);
  w.add_edge(0, 2, 1.0, 1.0);
  w.add_edge(1, 2, 3.0, 1.0);
  w.add_edge(1, 3, 1.5, 1.0);
  w.finalize();
  CHECK(wilson_pvalue(w, {0, 1}, 44, 100000) > 1e-3);
  // one free vertex: its edge drawn proportionally to weight
  PlanarGraph star;
  star.add_vertex({0, 0});
  star.add_vertex({1, 0}, true);
  star.add_vertex({-1, 0}, true);
  star.add_edge(0, 1, 1.0, 1.0);
  star.add_edge(0, 2, 3.0, 1.0);
  star.finalize();
  CHECK(wilson_pvalue(star, {0}, 45, 40000) > 1e-3);
}

TEST_CASE("subtree spanning") {
  PlanarGraph g = grid_graph(4, 1);
  Rng rng = make_stream(46, 0);
  WiredTree t = wilson_ust(g, {}, rng);
  std::vector<int> all(g.num_vertices());
  std::iota(all.begin(), all.end(), 0);
  SubTree whole = subtree_spanning(t, all);
  long inner = 0;
  for (int v = 0; v < g.num_vertices(); ++v) inner += !g.is_boundary(v);
  CHECK(static_cast<long>(whole.edges.size()) == inner);
  int v0 = g.nearest_vertex({0, 0});
  SubTree one = subtree_spanning(t, {v0});
  int len = 0;
  for (int u = v0; t.parent[u] >= 0; u = t.parent[u]) ++len;
  CHECK(static_cast<int>(one.edges.size()) == len);
  CHECK(one.distance_to(g, {0, 0}) == 0.0);
  CHECK_THROWS(subtree_spanning(t, {}));
  // outside-first partial run leaves the rest unattached
  std::vector<int> far;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (norm(g.pos(v)) >= 3) far.push_back(v);
  WiredTree part = wilson_ust(g, far, rng, true);
  SubTree s = subtree_spanning(part, far);
  for (auto [c, p] : s.edges) CHECK(p == part.parent[c]);
}

TEST_CASE("temperley bijection") {
  {
    PlanarGraph g;
    g.add_vertex({0, 0});
    g.add_vertex({1, 0}, true);
    g.add_edge(0, 1);
    g.finalize();
    TemperleyGraph tg(g);
    CHECK(tg.num_white() == 1);
    CHECK(tg.num_black() == 1);
    auto ms = tg.enumerate_matchings(10);
    REQUIRE(ms.size() == 1);
    CHECK(tg.tree(ms[0]).parent == std::vector<int>{1, -1});
  }
  for (auto [w, h] : std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {2, 3}, {3, 3}}) {
    PlanarGraph g = square_patch(w, h);
    TemperleyGraph tg(g);
    auto trees = enumerate_wired_trees(g, 200000);
    auto ms = tg.enumerate_matchings(200000);
    CHECK(trees.size() == ms.size());
    std::set<std::vector<int>> images;
    for (const auto& [t, _] : trees) {
      auto m = tg.dimers(t);
      REQUIRE(tg.tree(m).parent == t.parent);
      images.insert(m);
    }
    CHECK(images.size() == trees.size());
  }
  CHECK(enumerate_wired_trees(square_patch(3, 3), 200000).size() == 100352);
}

TEST_CASE("winding from the tree matches the dimer height") {
  PlanarGraph g = square_patch(4, 3);
  TemperleyGraph tg(g);
  Rng rng = make_stream(47, 0);
  std::set<Rational> offsets;
  for (int s = 0; s < 200; ++s) {
    WiredTree t = wilson_ust(g, {}, rng);
    auto h = tg.heights(tg.dimers(t), 0);
    for (int x = 0; x < tg.num_corners(); ++x) {
      int y = (x * 7 + s) % tg.num_corners();
      offsets.insert(Rational(h[x] - h[y], 4) - height_from_winding(tg, t, x, y));
    }
    CHECK(height_from_winding(tg, t, 3, 3) == Rational(0));
  }
  CHECK(offsets.size() == 1);
}

TEST_CASE("topological winding") {
  CHECK(winding_topological({{-1, 1}, {1, 1}}, {0, 0}) == doctest::Approx(-kPi / 2));
  Polyline square{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
  CHECK(winding_topological(square, {0, 0}) == doctest::Approx(2 * kPi));
  CHECK_THROWS(winding_topological(square, {1, 0}));
  // L-shape against a dense numeric unwrap
  Polyline ell{{0, 0}, {2, 0}, {2, 2}};
  Point2 z{3, -1};
  double dense = 0, prev = 0;
  bool first = true;
  for (std::size_t s = 0; s + 1 < ell.size(); ++s)
    for (int k = 0; k <= 20000; ++k) {
      Point2 p = ell[s] + (k / 20000.0) * (ell[s + 1] - ell[s]);
      double a = std::atan2(p.y - z.y, p.x - z.x);
      if (!first) {
        double d = a - prev;
        while (d > kPi) d -= 2 * kPi;
        while (d < -kPi) d += 2 * kPi;
        dense += d;
      }
      prev = a;
      first = false;
    }
  CHECK(winding_topological(ell, z) == doctest::Approx(dense).epsilon(1e-9));
  // additivity
  Rng rng = make_stream(48, 0);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int i = 0; i < 1000; ++i) {
    Polyline p{{U(rng), U(rng)}, {U(rng), U(rng)}, {U(rng), U(rng)}};
    Polyline q{p.back(), {U(rng), U(rng)}, {U(rng), U(rng)}};
    Polyline pq = p;
    pq.insert(pq.end(), q.begin() + 1, q.end());
    Point2 w{U(rng), U(rng)};
    CHECK(std::abs(winding_topological(pq, w) - winding_topological(p, w) - winding_topological(q, w)) < 1e-12);
  }
}

TEST_CASE("intrinsic winding") {
  CHECK(winding_intrinsic({{0, 0}, {1, 0}, {2, 0}}) == 0.0);
  CHECK(winding_intrinsic({{0, 0}, {1, 0}, {1, 1}}) == doctest::Approx(kPi / 2));
  CHECK_THROWS(winding_intrinsic({{0, 0}, {2, 0}, {1, 1}, {1, -1}}));
  CHECK_THROWS(winding_intrinsic({{0, 0}, {1, 0}}));
  CHECK(winding_topological({{0, 0}, {1, 0}, {1, 1}}, {0, 0}) + winding_topological({{0, 0}, {1, 0}, {1, 1}}, {1, 1}) ==
        doctest::Approx(kPi / 2));
}

TEST_CASE("intrinsic winding equals the endpoint windings on lattice paths") {
  Rng rng = make_stream(49, 0);
  const Point2 dirs[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  int done = 0;
  while (done < 2000) {
    Polyline p{{0, 0}};
    std::set<std::pair<int, int>> seen{{0, 0}};
    const int len = 3 + static_cast<int>(uniform_below(rng, 40));
    while (static_cast<int>(p.size()) < len) {
      std::vector<Point2> free;
      for (Point2 d : dirs) {
        Point2 q = p.back() + d;
        if (!seen.count({int(q.x), int(q.y)})) free.push_back(q);
      }
      if (free.empty()) break;
      Point2 q = free[uniform_below(rng, free.size())];
      seen.insert({int(q.x), int(q.y)});
      p.push_back(q);
    }
    if (p.size() < 3) continue;
    ++done;
    double lhs = winding_intrinsic(p);
    double rhs = winding_topological(p, p.back()) + winding_topological(p, p.front());
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}
