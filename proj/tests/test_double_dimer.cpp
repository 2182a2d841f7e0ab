#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lozlab/double_dimer.hpp"
#include "lozlab/tiling_sampler.hpp"

#include <algorithm>
#include <map>

using namespace lozlab;

namespace {

int index_of(const std::vector<DimerConfig>& all, const DimerConfig& m) {
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i] == m) return static_cast<int>(i);
  return -1;
}

// a boundary lozenge of the hexagon: the white and black triangles at the bottom-left corner
DomainPtr minus_corner_lozenge(const DomainPtr& d) {
  return d->without({{0, 0, true}, {0, 0, false}});
}

DomainPtr cube_defect(const DomainPtr& d, FaceCoord p) {
  auto around = triangles_around(p);
  return d->without({around.begin(), around.end()});
}

FaceCoord common_boundary_face(const DomainPtr& a, const DomainPtr& b) {
  for (int f : a->boundary_walk()) {
    FaceCoord c = a->faces()[f];
    int g = b->face_index(c);
    if (g >= 0 && b->is_boundary_face(g)) return c;
  }
  FAIL("no common boundary face");
  return {};
}

void check_heights(const DimerConfig& m, const DimerConfig& m2) {
  FaceCoord pin = common_boundary_face(m.domain_ptr(), m2.domain_ptr());
  LoopDecomposition dec = superimpose(m, m2);
  DDHeight dd = dd_height(dec, pin);
  HeightField h1 = height_field(m, pin), h2 = height_field(m2, pin);
  for (const auto& f : dd.common->faces()) REQUIRE(3 * dd.at(f) == h2.at(f) - h1.at(f));
}

}  // namespace

TEST_CASE("superimpose basic shapes") {
  auto d = build_hexagon(2, 2, 2);
  auto all = enumerate_tilings(d, 100);
  LoopDecomposition same = superimpose(all[4], all[4]);
  CHECK(same.loops.empty());
  CHECK(same.paths.empty());
  CHECK(static_cast<int>(same.doubled.size()) == d->num_white());
  CHECK_FALSE(paths_hit_ball(same, 2.0));

  auto unit = build_hexagon(1, 1, 1);
  auto two = enumerate_tilings(unit, 10);
  LoopDecomposition dec = superimpose(two[0], two[1]);
  REQUIRE(dec.loops.size() == 1);
  CHECK(dec.loops[0].size() == 6);
  CHECK(dec.paths.empty());
  CHECK(dec.doubled.empty());
  const auto& loop = dec.loops[0];
  for (std::size_t i = 0; i < loop.size(); ++i) CHECK(loop.in_m[i] != loop.in_m[(i + 1) % loop.size()]);
  std::vector<Point2> poly;
  for (const auto& t : loop.verts) poly.push_back(t.centroid());
  CHECK(signed_area(poly) > 0);
  // a positive loop raises the level-line height by one inside
  DDHeight h = dd_height(dec);
  CHECK(h.at(unit->origin()) == loop.orientation);
  for (int f : unit->boundary_walk()) CHECK(h.values[f] == 0);
  check_heights(two[0], two[1]);
  check_heights(two[1], two[0]);
}

TEST_CASE("one open path for a removed boundary lozenge") {
  auto d = build_hexagon(2, 2, 2);
  auto d2 = minus_corner_lozenge(d);
  auto t1 = enumerate_tilings(d, 100);
  auto t2 = enumerate_tilings(d2, 100);
  REQUIRE(!t2.empty());
  for (const auto& m : t1)
    for (const auto& m2 : t2) {
      LoopDecomposition dec = superimpose(m, m2);
      REQUIRE(dec.paths.size() == 1);
      const auto& p = dec.paths[0];
      for (TriCoord end : {p.verts.front(), p.verts.back()}) CHECK(!d2->contains(end));
      CHECK(p.in_m.front());
      CHECK(p.in_m.back());
      // components cover every vertex once
      std::vector<TriCoord> seen;
      for (const auto& k : dec.doubled) {
        seen.push_back({k.u, k.v, true});
        seen.push_back(black_of({k.u, k.v, true}, k.type));
      }
      for (const auto* list : {&dec.loops, &dec.paths})
        for (const auto& c : *list) seen.insert(seen.end(), c.verts.begin(), c.verts.end());
      std::sort(seen.begin(), seen.end());
      CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
      CHECK(seen == d->triangles());
    }
}

TEST_CASE("round trip and dd height") {
  auto d = build_hexagon(2, 2, 2);
  auto all = enumerate_tilings(d, 100);
  for (const auto& m : all)
    for (const auto& m2 : all) {
      auto [a, b] = reconstruct(superimpose(m, m2));
      REQUIRE(a == m);
      REQUIRE(b == m2);
      check_heights(m, m2);
    }
  auto big = build_hexagon(3, 3, 3);
  Rng rng = make_stream(21, 0);
  for (int i = 0; i < 200; ++i) {
    DimerConfig m = cftp_sample(big, rng), m2 = cftp_sample(big, rng);
    auto [a, b] = reconstruct(superimpose(m, m2));
    REQUIRE(a == m);
    REQUIRE(b == m2);
    check_heights(m, m2);
  }
  auto defect = cube_defect(big, {1, 1});
  for (int i = 0; i < 100; ++i) check_heights(cftp_sample(big, rng), cftp_sample(defect, rng));
}

TEST_CASE("resampling orientations") {
  auto unit = build_hexagon(1, 1, 1);
  auto two = enumerate_tilings(unit, 10);
  Rng rng = make_stream(22, 0);
  LoopDecomposition dec = superimpose(two[0], two[1]);
  const int n = 10000;
  long pos = 0;
  for (int i = 0; i < n; ++i) {
    auto [a, b] = resample_orientations(dec, rng);
    CHECK(!(a == b));
    pos += dec.loops[0].orientation > 0;
  }
  CHECK(std::abs(pos - n / 2.0) < 3 * std::sqrt(n * 0.25));

  // no loops: deterministic
  auto d = build_hexagon(2, 2, 2);
  auto all = enumerate_tilings(d, 100);
  LoopDecomposition same = superimpose(all[2], all[2]);
  for (int i = 0; i < 5; ++i) CHECK(resample_orientations(same, rng).first == all[2]);

  // exact law: every pair receives total mass one
  std::map<std::pair<int, int>, long> mass;
  const int top = 12;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j) {
      LoopDecomposition dd = superimpose(all[i], all[j]);
      const int L = static_cast<int>(dd.loops.size());
      REQUIRE(L <= top);
      for (long bits = 0; bits < (1L << L); ++bits) {
        std::vector<char> b(L);
        for (int k = 0; k < L; ++k) b[k] = (bits >> k) & 1;
        auto [x, y] = reconstruct_with(dd, b);
        mass[{index_of(all, x), index_of(all, y)}] += 1L << (top - L);
      }
    }
  CHECK(mass.size() == all.size() * all.size());
  for (const auto& [_, w] : mass) CHECK(w == (1L << top));
}

TEST_CASE("M'' law is uniform on the second domain") {
  auto hex222 = build_hexagon(2, 2, 2);
  auto hex223 = build_hexagon(2, 2, 3);
  std::vector<std::pair<DomainPtr, DomainPtr>> pairs{
      {hex222, minus_corner_lozenge(hex222)},
      {hex222, cube_defect(hex222, {1, 1})},
      {hex222, hex222->translated(1, 0)->with_origin(hex222->origin())},
      {hex223, hex223->translated(0, 1)->with_origin(hex223->origin())},
  };
  for (const auto& [d1, d2] : pairs) {
    auto t1 = enumerate_tilings(d1, 100);
    auto t2 = enumerate_tilings(d2, 100);
    REQUIRE(!t2.empty());
    std::vector<long> counts(t2.size(), 0);
    for (const auto& m : t1)
      for (const auto& m2 : t2) {
        LoopDecomposition dec = superimpose(m, m2);
        DimerConfig mpp = build_m_double_prime(dec);
        int j = index_of(t2, mpp);
        REQUIRE(j >= 0);
        ++counts[j];
        CHECK(agree_off_paths(m, mpp, dec));
      }
    for (long c : counts) CHECK(c == static_cast<long>(t1.size()));
  }
  // same domain, same matching
  auto all = enumerate_tilings(hex222, 100);
  for (const auto& m : all) CHECK(build_m_double_prime(m, m) == m);
}

TEST_CASE("paths hitting a ball") {
  auto d = build_hexagon(3, 3, 3);
  auto d2 = cube_defect(d, {1, 1});
  Rng rng = make_stream(23, 0);
  for (int i = 0; i < 50; ++i) {
    DimerConfig m = cftp_sample(d, rng);
    LoopDecomposition dec = superimpose(m, cftp_sample(d2, rng));
    CHECK(!dec.paths.empty());
    CHECK(paths_hit_ball(dec, 100.0));
    CHECK_FALSE(paths_hit_ball(superimpose(m, cftp_sample(d, rng)), 100.0));
    // monotone in r
    bool prev = false;
    for (double r : {0.5, 1.0, 2.0, 3.0, 4.0}) {
      bool now = paths_hit_ball(dec, r);
      CHECK((!prev || now));
      prev = now;
    }
  }
}
