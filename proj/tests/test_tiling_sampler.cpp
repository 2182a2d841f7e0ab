#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lozlab/stats.hpp"
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

// tilings of the domain agreeing with spec on its frozen edges (oracle side)
std::vector<DimerConfig> completions(const ConditionalSpec& spec) {
  const HexDomain& d = spec.config.domain();
  Point2 o = d.origin().center();
  std::vector<DimerConfig> out;
  for (const auto& m : enumerate_tilings(spec.config.domain_ptr(), 100000)) {
    bool ok = true;
    for (int w = 0; w < d.num_white() && ok; ++w) {
      TriCoord wt = d.whites()[w];
      TriCoord bt = black_of(wt, spec.config.white_type(w));
      if (norm(wt.centroid() - o) >= spec.radius && norm(bt.centroid() - o) >= spec.radius)
        ok = m.white_type(w) == spec.config.white_type(w);
    }
    if (ok) out.push_back(m);
  }
  return out;
}

DomainPtr forced_strip() {
  return HexDomain::from_triangles({{0, 0, true}, {0, 0, false}, {1, 0, true}, {1, 0, false}});
}

}  // namespace

TEST_CASE("enumeration") {
  CHECK(enumerate_tilings(build_hexagon(1, 1, 1), 10).size() == 2);
  CHECK(enumerate_tilings(build_hexagon(2, 2, 2), 100).size() == 20);
  CHECK_THROWS_AS(enumerate_tilings(build_hexagon(2, 2, 2), 19), CapExceededError);
  auto all = enumerate_tilings(build_hexagon(2, 2, 2), 100);
  for (std::size_t i = 0; i + 1 < all.size(); ++i) CHECK(all[i].white_types() < all[i + 1].white_types());
  CHECK(enumerate_tilings(forced_strip(), 10).size() == 1);
}

TEST_CASE("flips") {
  auto d = build_hexagon(1, 1, 1);
  auto all = enumerate_tilings(d, 10);
  for (const auto& m : all) {
    int other = 0;
    for (bool up : {false, true}) other += !(apply_flip(m, {d->origin(), up}) == m);
    CHECK(other == 1);  // exactly one of the two directions moves: probability 1/2
    FaceCoord p = d->origin();
    DimerConfig f = apply_flip(m, {p, true});
    if (f == m) f = apply_flip(m, {p, false});
    auto h1 = height_field(m, d->faces()[d->boundary_walk()[0]]);
    auto h2 = height_field(f, d->faces()[d->boundary_walk()[0]]);
    int changed = 0;
    for (std::size_t i = 0; i < h1.values.size(); ++i)
      if (h1.values[i] != h2.values[i]) {
        ++changed;
        CHECK(std::abs(h1.values[i] - h2.values[i]) == 3);
      }
    CHECK(changed == 1);
  }
  // boundary face: never admissible
  CHECK(apply_flip(all[0], {d->faces()[d->boundary_walk()[0]], true}) == all[0]);
}

TEST_CASE("glauber transition matrix is symmetric") {
  for (auto dom : {build_hexagon(2, 2, 2), build_hexagon(1, 2, 3), build_hexagon(1, 3, 3)}) {
    auto all = enumerate_tilings(dom, 50);
    const auto& interior = dom->interior_faces();
    std::vector<std::vector<double>> p(all.size(), std::vector<double>(all.size(), 0));
    for (std::size_t i = 0; i < all.size(); ++i)
      for (int f : interior)
        for (bool up : {false, true}) {
          int j = index_of(all, apply_flip(all[i], {dom->faces()[f], up}));
          REQUIRE(j >= 0);
          p[i][j] += 1.0 / (2 * interior.size());
        }
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = 0; j < all.size(); ++j) CHECK(p[i][j] == p[j][i]);
  }
}

TEST_CASE("glauber long run is uniform") {
  auto d = build_hexagon(2, 2, 2);
  auto all = enumerate_tilings(d, 100);
  Rng rng = make_stream(11, 0);
  DimerConfig m = all[0];
  std::vector<long> counts(all.size(), 0);
  for (int i = 0; i < 20000; ++i) {
    for (int s = 0; s < 30; ++s) m = glauber_step(m, rng);
    ++counts[index_of(all, m)];
  }
  CHECK(chi2_uniform_pvalue(counts) > 1e-3);
}

TEST_CASE("cftp exactness") {
  {
    auto d = build_hexagon(1, 1, 1);
    auto all = enumerate_tilings(d, 10);
    Rng rng = make_stream(5, 0);
    const int n = 100000;
    long c0 = 0;
    for (int i = 0; i < n; ++i) c0 += cftp_sample(d, rng) == all[0];
    double sigma = std::sqrt(n * 0.25);
    CHECK(std::abs(c0 - n / 2.0) < 3 * sigma);
  }
  for (auto dom : {build_hexagon(2, 2, 2), build_hexagon(1, 2, 3)}) {
    auto all = enumerate_tilings(dom, 200);
    Rng rng = make_stream(6, 0);
    std::vector<long> counts(all.size(), 0);
    for (int i = 0; i < 100000; ++i) ++counts[index_of(all, cftp_sample(dom, rng))];
    CHECK(chi2_uniform_pvalue(counts) > 1e-3);
  }
  Rng rng = make_stream(7, 0);
  auto strip = forced_strip();
  auto only = enumerate_tilings(strip, 10)[0];
  for (int i = 0; i < 10; ++i) CHECK(cftp_sample(strip, rng) == only);
  std::vector<TriCoord> tris = build_hexagon(2, 2, 2)->triangles();
  tris.pop_back();
  CHECK_THROWS_AS(cftp_sample(HexDomain::from_triangles(tris), rng), UntileableError);
}

TEST_CASE("updates are monotone") {
  auto d = build_hexagon(4, 3, 5);
  HeightSystem sys = HeightSystem::whole(d);
  Rng rng = make_stream(8, 0);
  std::uniform_int_distribution<int> site(0, sys.num_sites() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> a = sys.top(), b = sys.bottom();
    // scramble both from the extremes, then force a <= b by construction
    HeightChain ca(sys, sys.bottom()), cb(sys, sys.top());
    ca.sweep(rng, trial % 5);
    a = ca.heights();
    b = sys.top();
    for (int s = 0; s < 2000; ++s) {
      int x = site(rng);
      bool up = rng() & 1;
      sys.update(a, x, up);
      sys.update(b, x, up);
      for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] <= b[i]);
    }
    CHECK(sys.valid(a));
    CHECK(sys.valid(b));
  }
  for (std::size_t i = 0; i < sys.top().size(); ++i) CHECK(sys.bottom()[i] <= sys.top()[i]);
}

TEST_CASE("conditional sampling") {
  auto d = build_hexagon(2, 2, 2);
  auto all = enumerate_tilings(d, 100);
  Rng rng = make_stream(9, 0);
  // radius beyond the domain: whole-domain law
  {
    ConditionalSpec spec{100.0, all[3]};
    HeightSystem sys = conditional_system(spec);
    CHECK(sys.num_sites() == static_cast<int>(d->interior_faces().size()));
    std::vector<long> counts(all.size(), 0);
    for (int i = 0; i < 40000; ++i) ++counts[index_of(all, conditional_sample(spec, rng))];
    CHECK(chi2_uniform_pvalue(counts) > 1e-3);
  }
  // a single free cube
  for (const auto& m : all) {
    if (apply_flip(m, {d->origin(), true}) == m && apply_flip(m, {d->origin(), false}) == m) continue;
    ConditionalSpec spec{0.6, m};
    CHECK(conditional_system(spec).num_sites() == 1);
    auto comp = completions(spec);
    REQUIRE(comp.size() == 2);
    const int n = 10000;
    long c0 = 0;
    for (int i = 0; i < n; ++i) c0 += conditional_sample(spec, rng) == comp[0];
    CHECK(std::abs(c0 - n / 2.0) < 3 * std::sqrt(n * 0.25));
    SpreadOutResult so = spread_out_statistic(spec, 20000, rng);
    CHECK(so.max_prob == doctest::Approx(0.5).epsilon(0.03));
    break;
  }
  // nothing free
  {
    ConditionalSpec spec{0.1, all[7]};
    CHECK(conditional_system(spec).num_sites() == 0);
    CHECK(conditional_sample(spec, rng) == all[7]);
    CHECK(spread_out_statistic(spec, 10, rng).max_prob == 1.0);
    CHECK_THROWS(spread_out_statistic(spec, 0, rng));
  }
  // law on completions, intermediate radius, larger domain
  auto big = build_hexagon(3, 3, 3);
  Rng r2 = make_stream(10, 0);
  DimerConfig m = cftp_sample(big, r2);
  for (double R : {1.2, 1.8}) {
    ConditionalSpec spec{R, m};
    auto comp = completions(spec);
    HeightSystem sys = conditional_system(spec);
    CHECK(sys.unfrozen_islands() == 0);
    if (comp.size() < 2) continue;
    std::vector<long> counts(comp.size(), 0);
    for (int i = 0; i < 30000; ++i) {
      int j = index_of(comp, sys.to_matching(cftp_heights(sys, r2)));
      REQUIRE(j >= 0);
      ++counts[j];
    }
    CHECK(chi2_uniform_pvalue(counts) > 1e-3);
  }
}

TEST_CASE("spread-out table") {
  std::vector<int> h{0, 0, 3, 3, 3, 6};
  SpreadOutResult r = spread_out_from_heights(h);
  CHECK(r.max_prob == doctest::Approx(0.5));
  for (const auto& row : r.table) CHECK(row.prob <= 0.5 + 1e-12);
  CHECK(r.table.front().x_window == -1.0);
  CHECK(r.table.back().x_window == 6.0);
}
