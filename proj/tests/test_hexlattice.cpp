#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lozlab/hexlattice.hpp"
#include "lozlab/tiling_sampler.hpp"

#include <algorithm>
#include <set>

using namespace lozlab;

namespace {

// Ryser permanent of the white x black adjacency matrix.
long permanent_count(const HexDomain& d) {
  const int n = d.num_white();
  if (n != d.num_black()) return 0;
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (const auto& e : d.edges()) a[e.white][e.black] = 1;
  long total = 0;
  for (unsigned long s = 1; s < (1ul << n); ++s) {
    long prod = 1;
    for (int i = 0; i < n && prod; ++i) {
      long row = 0;
      for (int j = 0; j < n; ++j)
        if (s >> j & 1) row += a[i][j];
      prod *= row;
    }
    int bits = __builtin_popcountl(s);
    total += ((n - bits) % 2 ? -1 : 1) * prod;
  }
  return total;
}

long macmahon(int a, int b, int c) {
  double r = 1;
  for (int i = 1; i <= a; ++i)
    for (int j = 1; j <= b; ++j)
      for (int k = 1; k <= c; ++k) r *= double(i + j + k - 1) / (i + j + k - 2);
  return std::lround(r);
}

}  // namespace

TEST_CASE("hexagon shape") {
  auto d = build_hexagon(1, 1, 1);
  CHECK(d->num_white() + d->num_black() == 6);
  CHECK(d->num_faces() == 7);
  CHECK(d->interior_faces().size() == 1);
  CHECK(d->origin() == d->faces()[d->interior_faces()[0]]);
  for (auto [a, b, c] : {std::array<int, 3>{2, 2, 2}, {2, 3, 4}, {1, 1, 5}, {3, 3, 3}}) {
    auto h = build_hexagon(a, b, c);
    CHECK(h->num_white() == a * b + b * c + c * a);
    CHECK(h->balanced());
    CHECK(h->boundary_walk().size() == static_cast<std::size_t>(2 * (a + b + c)));
  }
  CHECK_THROWS_AS(build_hexagon(2, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_hexagon(-1, 2, 2), std::invalid_argument);
}

TEST_CASE("tiling counts against the permanent") {
  CHECK(permanent_count(*build_hexagon(1, 1, 1)) == 2);
  CHECK(permanent_count(*build_hexagon(2, 2, 2)) == 20);
  CHECK(macmahon(2, 2, 2) == 20);
  for (auto [a, b, c] : {std::array<int, 3>{1, 1, 1}, {2, 2, 2}, {1, 2, 3}, {2, 2, 3}})
    CHECK(static_cast<long>(enumerate_tilings(build_hexagon(a, b, c), 1000).size()) == macmahon(a, b, c));
}

TEST_CASE("embedding is injective and adjacency symmetric") {
  auto d = build_hexagon(3, 2, 4);
  std::set<std::pair<long, long>> seen;
  for (const auto& f : d->faces()) {
    Point2 c = f.center();
    CHECK(seen.insert({std::lround(c.x * 1e6), std::lround(c.y * 1e6)}).second);
  }
  for (int f = 0; f < d->num_faces(); ++f)
    for (int k = 0; k < 6; ++k) {
      int g = d->face_neighbor(f, k);
      if (g >= 0) CHECK(d->face_neighbor(g, (k + 3) % 6) == f);
    }
}

TEST_CASE("simply connected check") {
  auto d = build_hexagon(3, 3, 3);
  std::vector<TriCoord> tris = d->triangles();
  FaceCoord o = d->origin();
  // punch the six triangles around the origin
  std::vector<TriCoord> holed;
  for (auto t : tris) {
    bool around = false;
    for (int k = 0; k < 6; ++k) {
      LatticeStep s = lattice_step(o, k);
      if (t == s.white || t == s.black) around = true;
    }
    if (!around) holed.push_back(t);
  }
  CHECK_THROWS_AS(HexDomain::from_triangles(holed), std::invalid_argument);
  CHECK_NOTHROW(HexDomain::from_triangles(tris));
}

TEST_CASE("heights") {
  auto d = build_hexagon(2, 2, 2);
  auto all = enumerate_tilings(d, 100);
  FaceCoord pin = d->faces()[d->boundary_walk()[0]];
  std::vector<HeightField> fields;
  for (const auto& m : all) {
    HeightField h = height_field(m, pin);
    CHECK(h.at(pin) == 0);
    CHECK(heights_consistent(m, face_heights(m, d->face_index(pin))));
    fields.push_back(h);
    // vertex sums: around every triangle the three increments cancel
    for (const auto& t : d->triangles()) {
      FaceCoord c[3];
      if (t.up) {
        c[0] = {t.u, t.v};
        c[1] = {t.u + 1, t.v};
        c[2] = {t.u, t.v + 1};
      } else {
        c[0] = {t.u + 1, t.v};
        c[1] = {t.u + 1, t.v + 1};
        c[2] = {t.u, t.v + 1};
      }
      int sum = 0;
      for (int i = 0; i < 3; ++i) sum += h.at(c[(i + 1) % 3]) - h.at(c[i]);
      CHECK(sum == 0);
    }
  }
  // boundary determinism
  for (const auto& h : fields)
    for (int f = 0; f < d->num_faces(); ++f)
      if (d->is_boundary_face(f)) CHECK(h.values[f] == fields[0].values[f]);
  // and matches the precomputed boundary profile
  for (std::size_t i = 0; i < d->boundary_walk().size(); ++i)
    CHECK(fields[0].values[d->boundary_walk()[i]] == d->boundary_heights()[i]);

  auto one = build_hexagon(1, 1, 1);
  auto two = enumerate_tilings(one, 10);
  REQUIRE(two.size() == 2);
  FaceCoord p1 = one->faces()[one->boundary_walk()[0]];
  HeightField a = height_field(two[0], p1), b = height_field(two[1], p1);
  CHECK(std::abs(a.at(one->origin()) - b.at(one->origin())) == 3);
  for (std::size_t i = 0; i + 1 < one->boundary_walk().size(); ++i) {
    int k = one->boundary_dirs()[i];
    int f = one->boundary_walk()[i], g = one->boundary_walk()[i + 1];
    CHECK(a.values[g] - a.values[f] == (k % 2 == 0 ? 1 : -1));
  }
  CHECK_THROWS_AS(height_field(two[0], FaceCoord{50, 50}), std::invalid_argument);
}

TEST_CASE("lipschitz bound") {
  HeightField h;
  h.faces = {{0, 0}, {1, 0}, {2, 0}};
  h.values = {4, 4, 4};
  CHECK(lipschitz_bound(h) == Rational(0));
  h.faces = {{0, 0}, {1, 0}};
  h.values = {0, -2};
  CHECK(lipschitz_bound(h) == Rational(1));
  HeightField empty;
  CHECK_THROWS(lipschitz_bound(empty));
  auto d = build_hexagon(2, 2, 2);
  for (const auto& m : enumerate_tilings(d, 100)) CHECK(lipschitz_bound(height_field(m, d->origin())) <= Rational(2));
}

TEST_CASE("boundary curve") {
  auto one = build_hexagon(1, 1, 1);
  BoundaryCurve c = boundary_curve(*one);
  CHECK(c.points.size() == 7);
  CHECK(c.points.front() == c.points.back());
  std::set<std::array<int, 3>> distinct(c.points.begin(), c.points.end() - 1);
  CHECK(distinct.size() == 6);
  for (auto [a, b, cc] : {std::array<int, 3>{2, 3, 4}, {5, 1, 2}}) {
    auto d = build_hexagon(a, b, cc);
    BoundaryCurve bc = boundary_curve(*d);
    CHECK(bc.points.size() == static_cast<std::size_t>(2 * (a + b + cc) + 1));
    for (std::size_t i = 0; i + 1 < bc.points.size(); ++i) {
      int l1 = 0;
      for (int j = 0; j < 3; ++j) l1 += std::abs(bc.points[i + 1][j] - bc.points[i][j]);
      CHECK(l1 == 1);
      // third coordinate = boundary height up to a constant
      const auto& p = bc.points[i];
      const auto& q = bc.points[0];
      CHECK((p[0] + p[1] + p[2]) - (q[0] + q[1] + q[2]) == d->boundary_heights()[i]);
      // projection
      FaceCoord f = d->faces()[d->boundary_walk()[i]];
      CHECK(p[0] - p[1] - (q[0] - q[1]) == f.u - d->faces()[d->boundary_walk()[0]].u);
      CHECK(p[1] - p[2] - (q[1] - q[2]) == f.v - d->faces()[d->boundary_walk()[0]].v);
    }
  }
  // removing a corner white leaves an unbalanced domain
  auto d = build_hexagon(2, 2, 2);
  std::vector<TriCoord> tris = d->triangles();
  tris.erase(std::find(tris.begin(), tris.end(), d->whites().front()));
  auto cut = HexDomain::from_triangles(tris);
  CHECK_FALSE(cut->balanced());
  CHECK_THROWS_AS(boundary_curve(*cut), UntileableError);
  CHECK(enumerate_tilings(cut, 100).empty());
}

TEST_CASE("local windows") {
  auto d = build_hexagon(2, 2, 2);
  auto all = enumerate_tilings(d, 100);
  CHECK(local_window(all[0], 0.2).size() <= 1);
  CHECK_THROWS(local_window(all[0], d->radius() + 0.5));
  for (double r : {0.3, 0.5, 0.6, 1.0, d->radius()})
    for (const auto& a : all)
      for (const auto& b : all) {
        bool same = local_window(a, r) == local_window(b, r);
        CHECK(same == (std::exp(-agreement_radius(a, b)) <= std::exp(-r)));
      }
  // one elementary rotation at the centre
  int pairs = 0;
  for (const auto& m : all) {
    DimerConfig f = apply_flip(m, {d->origin(), true});
    if (f == m) continue;
    ++pairs;
    CHECK(local_window(m, 0.5) == local_window(f, 0.5));
    CHECK(local_window(m, 0.51) != local_window(f, 0.51));
    CHECK(agreement_radius(m, f) == doctest::Approx(0.5));
  }
  CHECK(pairs > 0);
}
