#pragma once

#include "lozlab/hexlattice.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace lozlab {

struct FlipSite {
  FaceCoord face;
  bool up = true;  // raise the height by 3 when admissible
};

struct ConditionalSpec;

// Height-function view of (part of) a domain. Variable sites are faces whose six
// triangles are all free; every other face carries a fixed height.
class HeightSystem {
 public:
  static HeightSystem whole(DomainPtr d);

  const HexDomain& domain() const { return *dom_; }
  const DomainPtr& domain_ptr() const { return dom_; }
  int num_sites() const { return static_cast<int>(sites_.size()); }
  int site_face(int s) const { return sites_[s]; }
  int face_site(int f) const { return site_of_[f]; }
  // heights with fixed faces filled in and variable faces set to the maximal state
  const std::vector<int>& top() const { return top_; }
  const std::vector<int>& bottom() const { return bottom_; }

  // Heat-bath move at site s: the largest (up) or smallest admissible height.
  void update(std::vector<int>& h, int s, bool up) const {
    const int* nb = &nbr_[6 * s];
    const int* hv = h.data();
    int lo = std::max({hv[nb[0]] - 1, hv[nb[1]] - 2, hv[nb[2]] - 1, hv[nb[3]] - 2, hv[nb[4]] - 1, hv[nb[5]] - 2});
    int hi = std::min({hv[nb[0]] + 2, hv[nb[1]] + 1, hv[nb[2]] + 2, hv[nb[3]] + 1, hv[nb[4]] + 2, hv[nb[5]] + 1});
    int& x = h[sites_[s]];
    // lo <= x <= hi <= lo + 3
    if (up) {
      int d = hi - x;
      x = hi - (d == 3 ? 0 : d);
    } else {
      int d = x - lo;
      x = lo + (d == 3 ? 0 : d);
    }
  }

  bool valid(const std::vector<int>& h) const;
  DimerConfig to_matching(const std::vector<int>& h) const;
  // heights of m on this system's faces, aligned with the fixed values
  std::vector<int> heights_of(const DimerConfig& m) const;
  int free_triangle_count() const { return free_tris_; }
  int unfrozen_islands() const { return islands_; }

 private:
  friend HeightSystem conditional_system(const ConditionalSpec&);
  void finish();

  DomainPtr dom_;
  std::vector<int> sites_, site_of_, nbr_;
  std::vector<char> fixed_;
  std::vector<int> base_, top_, bottom_;
  std::vector<std::int8_t> frozen_type_;  // per white, -1 if free
  std::vector<char> black_frozen_;
  int free_tris_ = 0;
  int islands_ = 0;
};

// Exact uniform integer in [0, n) (multiply-shift with rejection).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    std::uint64_t t = (0 - n) % n;
    while (low < t) {
      m = static_cast<unsigned __int128>(rng()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::vector<DimerConfig> enumerate_tilings(DomainPtr d, long cap);

// Deterministic move used by glauber_step; returns m when not admissible.
DimerConfig apply_flip(const DimerConfig& m, FlipSite site);
// Draws uniform_below(2 * #interior faces): site = x / 2, up = x % 2.
DimerConfig glauber_step(const DimerConfig& m, Rng& rng);

// Exact sample of the heights of a system by monotone CFTP. Epochs T = 1, 2, 4, ...;
// move j (time -(j+1)) is one uniform_below(2 * sites) draw made when first needed.
std::vector<int> cftp_heights(const HeightSystem& sys, Rng& rng);
DimerConfig cftp_sample(DomainPtr d, Rng& rng);

// Single-site chain on a system, kept in height form.
class HeightChain {
 public:
  HeightChain(const HeightSystem& sys, std::vector<int> start);
  void step(Rng& rng);
  void sweep(Rng& rng, int count = 1);
  const std::vector<int>& heights() const { return h_; }
  DimerConfig config() const { return sys_->to_matching(h_); }

 private:
  const HeightSystem* sys_;
  std::vector<int> h_;
  std::uint64_t range_;
};

struct ConditionalSpec {
  double radius;
  DimerConfig config;  // only its restriction to the frozen edges matters
};

// Matched edges of spec.config with both centroids at distance >= R from the
// origin are frozen; a frozen lozenge enclosed by free triangles is released.
HeightSystem conditional_system(const ConditionalSpec& spec);
DimerConfig conditional_sample(const ConditionalSpec& spec, Rng& rng);

struct WindowRow {
  double x_window;
  double prob;
  double ci_halfwidth;
};

struct SpreadOutResult {
  double max_prob = 0;
  double ci_halfwidth = 0;
  long samples = 0;
  std::vector<WindowRow> table;  // x on a grid of step 1/2 over the observed range
};

// Window statistic from observed origin heights (already pinned).
SpreadOutResult spread_out_from_heights(const std::vector<int>& h0);
SpreadOutResult spread_out_statistic(const ConditionalSpec& spec, long samples, Rng& rng);

}  // namespace lozlab
