#include "lozlab/tiling_sampler.hpp"

#include <climits>
#include <functional>
#include <map>
#include <queue>

namespace lozlab {

namespace {

// lattice segment crossed by the edge (white w, type t): start face and white-left direction
void edge_segment_face(TriCoord w, int t, FaceCoord& p, int& k) {
  switch (t) {
    case 0: p = {w.u + 1, w.v}; k = 2; break;
    case 1: p = {w.u, w.v + 1}; k = 4; break;
    default: p = {w.u, w.v}; k = 0; break;
  }
}

}  // namespace

// ---------------------------------------------------------------- HeightSystem

HeightSystem HeightSystem::whole(DomainPtr d) {
  if (!d->balanced()) throw UntileableError("domain is unbalanced");
  HeightSystem s;
  s.dom_ = std::move(d);
  const HexDomain& dom = *s.dom_;
  s.fixed_.assign(dom.num_faces(), 0);
  s.base_.assign(dom.num_faces(), 0);
  const auto& walk = dom.boundary_walk();
  const auto& bh = dom.boundary_heights();
  for (std::size_t i = 0; i < walk.size(); ++i) {
    int f = walk[i];
    if (s.fixed_[f] && s.base_[f] != bh[i]) throw UntileableError("boundary heights disagree at a pinch");
    s.fixed_[f] = 1;
    s.base_[f] = bh[i];
  }
  for (int f = 0; f < dom.num_faces(); ++f)
    if (!dom.is_interior(f) && !s.fixed_[f]) throw std::logic_error("boundary face missing from walk");
  s.frozen_type_.assign(dom.num_white(), -1);
  s.black_frozen_.assign(dom.num_black(), 0);
  s.finish();
  return s;
}

void HeightSystem::finish() {
  const HexDomain& dom = *dom_;
  const int nf = dom.num_faces();
  sites_.clear();
  site_of_.assign(nf, -1);
  for (int f = 0; f < nf; ++f)
    if (!fixed_[f]) {
      site_of_[f] = static_cast<int>(sites_.size());
      sites_.push_back(f);
    }
  nbr_.assign(6 * sites_.size(), -1);
  for (std::size_t s = 0; s < sites_.size(); ++s)
    for (int k = 0; k < 6; ++k) {
      int g = dom.face_neighbor(sites_[s], k);
      if (g < 0) throw std::logic_error("variable site on the boundary");
      nbr_[6 * s + k] = g;
    }
  free_tris_ = 0;
  for (int w = 0; w < dom.num_white(); ++w) free_tris_ += frozen_type_[w] < 0;
  for (int b = 0; b < dom.num_black(); ++b) free_tris_ += !black_frozen_[b];

  // extremal height functions: shortest paths from the fixed faces
  auto extremal = [&](bool upper) {
    std::vector<int> h(nf, upper ? INT_MAX : INT_MIN);
    using Item = std::pair<int, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (int f = 0; f < nf; ++f)
      if (fixed_[f]) {
        h[f] = base_[f];
        pq.push({upper ? h[f] : -h[f], f});
      }
    while (!pq.empty()) {
      auto [key, f] = pq.top();
      pq.pop();
      if ((upper ? h[f] : -h[f]) != key) continue;
      for (int k = 0; k < 6; ++k) {
        int g = dom.face_neighbor(f, k);
        if (g < 0 || fixed_[g]) continue;
        if (upper) {
          int c = h[f] + (k % 2 == 0 ? 1 : 2);
          if (c < h[g]) {
            h[g] = c;
            pq.push({c, g});
          }
        } else {
          int c = h[f] - (k % 2 == 0 ? 2 : 1);
          if (c > h[g]) {
            h[g] = c;
            pq.push({-c, g});
          }
        }
      }
    }
    return h;
  };
  top_ = extremal(true);
  bottom_ = extremal(false);
  if (!valid(top_) || !valid(bottom_)) throw UntileableError("no completion exists");
}

bool HeightSystem::valid(const std::vector<int>& h) const {
  const HexDomain& dom = *dom_;
  for (int f = 0; f < dom.num_faces(); ++f)
    for (int k = 0; k < 6; k += 2) {  // each segment once per white-left orientation
      int g = dom.face_neighbor(f, k);
      if (g < 0) continue;
      int diff = h[g] - h[f];
      LatticeStep st = lattice_step(dom.faces()[f], k);
      int w = dom.white_index(st.white.u, st.white.v);
      int b = dom.black_index(st.black.u, st.black.v);
      bool wfree = w >= 0 && frozen_type_[w] < 0;
      bool bfree = b >= 0 && !black_frozen_[b];
      if (wfree && bfree) {
        if (diff != 1 && diff != -2) return false;
      } else {
        bool matched = w >= 0 && b >= 0 && frozen_type_[w] == st.type;
        if (diff != (matched ? -2 : 1)) return false;
      }
    }
  try {
    (void)to_matching(h);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

DimerConfig HeightSystem::to_matching(const std::vector<int>& h) const {
  const HexDomain& dom = *dom_;
  std::vector<std::int8_t> types(dom.num_white(), -1);
  for (int w = 0; w < dom.num_white(); ++w) {
    if (frozen_type_[w] >= 0) {
      types[w] = frozen_type_[w];
      continue;
    }
    for (int t = 0; t < 3; ++t) {
      FaceCoord p;
      int k;
      edge_segment_face(dom.whites()[w], t, p, k);
      int f = dom.face_index(p), g = dom.face_index(step(p, k));
      if (h[g] - h[f] != -2) continue;
      if (types[w] >= 0 || dom.edge_index(w, t) < 0) throw UntileableError("heights do not encode a matching");
      types[w] = static_cast<std::int8_t>(t);
    }
    if (types[w] < 0) throw UntileableError("heights do not encode a matching");
  }
  try {
    return DimerConfig::from_white_types(dom_, std::move(types));
  } catch (const std::invalid_argument& e) {
    throw UntileableError(e.what());
  }
}

std::vector<int> HeightSystem::heights_of(const DimerConfig& m) const {
  int ref = -1;
  for (int f = 0; f < dom_->num_faces() && ref < 0; ++f)
    if (fixed_[f]) ref = f;
  std::vector<int> h = face_heights(m, ref);
  int off = base_[ref];
  for (auto& x : h) x += off;
  return h;
}

// ---------------------------------------------------------------- enumeration

std::vector<DimerConfig> enumerate_tilings(DomainPtr d, long cap) {
  std::vector<DimerConfig> out;
  if (!d->balanced()) return out;
  const int nw = d->num_white();
  std::vector<std::int8_t> types(nw, -1);
  std::vector<char> used(d->num_black(), 0);
  std::function<void(int)> rec = [&](int w) {
    if (w == nw) {
      if (static_cast<long>(out.size()) >= cap) throw CapExceededError("tiling count exceeds cap");
      out.push_back(DimerConfig::from_white_types(d, types));
      return;
    }
    for (int t = 0; t < 3; ++t) {
      int e = d->edge_index(w, t);
      if (e < 0) continue;
      int b = d->edges()[e].black;
      if (used[b]) continue;
      used[b] = 1;
      types[w] = static_cast<std::int8_t>(t);
      rec(w + 1);
      used[b] = 0;
    }
    types[w] = -1;
  };
  rec(0);
  return out;
}

// ---------------------------------------------------------------- dynamics

DimerConfig apply_flip(const DimerConfig& m, FlipSite site) {
  const HexDomain& d = m.domain();
  int f = d.face_index(site.face);
  if (f < 0 || !d.is_interior(f)) return m;
  const int u = site.face.u, v = site.face.v;
  const int wi[3] = {d.white_index(u, v), d.white_index(u - 1, v), d.white_index(u, v - 1)};
  static const std::int8_t stateA[3] = {2, 0, 1};  // matched segments d0,d2,d4: p is a local max
  static const std::int8_t stateB[3] = {1, 2, 0};
  const std::int8_t* from = site.up ? stateB : stateA;
  const std::int8_t* to = site.up ? stateA : stateB;
  for (int i = 0; i < 3; ++i)
    if (m.white_type(wi[i]) != from[i]) return m;
  std::vector<std::int8_t> types = m.white_types();
  for (int i = 0; i < 3; ++i) types[wi[i]] = to[i];
  return DimerConfig::from_white_types(m.domain_ptr(), std::move(types));
}

DimerConfig glauber_step(const DimerConfig& m, Rng& rng) {
  const auto& interior = m.domain().interior_faces();
  if (interior.empty()) return m;
  std::uint64_t x = uniform_below(rng, 2 * interior.size());
  return apply_flip(m, {m.domain().faces()[interior[x / 2]], x % 2 == 1});
}

std::vector<int> cftp_heights(const HeightSystem& sys, Rng& rng) {
  const int n = sys.num_sites();
  if (n == 0) return sys.top();
  const std::uint64_t range = 2 * static_cast<std::uint64_t>(n);
  std::vector<std::uint32_t> moves;
  std::vector<int> hi, lo;
  for (std::size_t T = 1;; T *= 2) {
    while (moves.size() < T) moves.push_back(static_cast<std::uint32_t>(uniform_below(rng, range)));
    hi = sys.top();
    lo = sys.bottom();
    for (std::size_t j = T; j-- > 0;) {
      std::uint32_t mv = moves[j];
      sys.update(hi, static_cast<int>(mv >> 1), mv & 1);
      sys.update(lo, static_cast<int>(mv >> 1), mv & 1);
    }
    if (hi == lo) return hi;
  }
}

DimerConfig cftp_sample(DomainPtr d, Rng& rng) {
  HeightSystem sys = HeightSystem::whole(std::move(d));
  return sys.to_matching(cftp_heights(sys, rng));
}

HeightChain::HeightChain(const HeightSystem& sys, std::vector<int> start)
    : sys_(&sys), h_(std::move(start)), range_(2 * static_cast<std::uint64_t>(sys.num_sites())) {}

void HeightChain::step(Rng& rng) {
  if (sys_->num_sites() == 0) return;
  std::uint64_t mv = uniform_below(rng, range_);
  sys_->update(h_, static_cast<int>(mv >> 1), mv & 1);
}

void HeightChain::sweep(Rng& rng, int count) {
  const long n = static_cast<long>(count) * sys_->num_sites();
  for (long i = 0; i < n; ++i) step(rng);
}

// ---------------------------------------------------------------- conditional

HeightSystem conditional_system(const ConditionalSpec& spec) {
  if (!(spec.radius > 0)) throw std::invalid_argument("radius must be positive");
  const DimerConfig& m = spec.config;
  const HexDomain& dom = m.domain();
  Point2 o = dom.origin().center();
  HeightSystem s;
  s.dom_ = m.domain_ptr();
  s.frozen_type_.assign(dom.num_white(), -1);
  s.black_frozen_.assign(dom.num_black(), 0);
  for (int w = 0; w < dom.num_white(); ++w) {
    TriCoord wt = dom.whites()[w];
    TriCoord bt = black_of(wt, m.white_type(w));
    if (norm(wt.centroid() - o) >= spec.radius && norm(bt.centroid() - o) >= spec.radius) {
      s.frozen_type_[w] = m.white_type(w);
      s.black_frozen_[dom.black_index(bt.u, bt.v)] = 1;
    }
  }
  const int nf = dom.num_faces();
  const int ref = dom.boundary_walk()[0];
  auto tri_free = [&](TriCoord t) {
    if (t.up) {
      int w = dom.white_index(t.u, t.v);
      return w >= 0 && s.frozen_type_[w] < 0;
    }
    int b = dom.black_index(t.u, t.v);
    return b >= 0 && !s.black_frozen_[b];
  };
  for (;;) {
    s.fixed_.assign(nf, 0);
    for (int f = 0; f < nf; ++f)
      for (int k = 0; k < 6; ++k) {
        LatticeStep st = lattice_step(dom.faces()[f], k);
        if (!tri_free(st.white) || !tri_free(st.black)) s.fixed_[f] = 1;
      }
    // faces tied to the outer boundary through segments of known increment
    std::vector<char> seen(nf, 0);
    std::vector<int> queue{ref};
    seen[ref] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int f = queue[qi];
      for (int k = 0; k < 6; ++k) {
        int g = dom.face_neighbor(f, k);
        if (g < 0 || seen[g]) continue;
        LatticeStep st = lattice_step(dom.faces()[f], k);
        if (tri_free(st.white) && tri_free(st.black)) continue;
        seen[g] = 1;
        queue.push_back(g);
      }
    }
    bool released = false;
    for (int f = 0; f < nf; ++f) {
      if (!s.fixed_[f] || seen[f]) continue;
      for (int k = 0; k < 6; ++k) {
        LatticeStep st = lattice_step(dom.faces()[f], k);
        for (TriCoord t : {st.white, st.black}) {
          if (tri_free(t) || !dom.contains(t)) continue;
          int w, b;
          if (t.up) {
            w = dom.white_index(t.u, t.v);
            TriCoord bt = black_of(t, s.frozen_type_[w]);
            b = dom.black_index(bt.u, bt.v);
          } else {
            b = dom.black_index(t.u, t.v);
            w = m.black_white(b);
          }
          s.frozen_type_[w] = -1;
          s.black_frozen_[b] = 0;
          released = true;
        }
      }
      ++s.islands_;
    }
    if (!released) break;
  }
  std::vector<int> hm = face_heights(m, ref);
  s.base_.assign(nf, 0);
  for (int f = 0; f < nf; ++f)
    if (s.fixed_[f]) s.base_[f] = hm[f];
  s.finish();
  return s;
}

DimerConfig conditional_sample(const ConditionalSpec& spec, Rng& rng) {
  HeightSystem sys = conditional_system(spec);
  return sys.to_matching(cftp_heights(sys, rng));
}

SpreadOutResult spread_out_from_heights(const std::vector<int>& h0) {
  if (h0.empty()) throw std::invalid_argument("zero samples");
  std::map<int, long> counts;
  for (int x : h0) ++counts[x];
  SpreadOutResult r;
  r.samples = static_cast<long>(h0.size());
  const double n = static_cast<double>(h0.size());
  auto half = [&](double p) { return 1.959963984540054 * std::sqrt(p * (1 - p) / n); };
  const int lo = counts.begin()->first, hi = counts.rbegin()->first;
  for (int twice = 2 * (lo - 1); twice <= 2 * hi; ++twice) {
    double x = twice / 2.0;
    long c = 0;
    for (auto it = counts.upper_bound(static_cast<int>(std::floor(x))); it != counts.end() && it->first < x + 1; ++it)
      if (it->first > x) c += it->second;
    double p = c / n;
    r.table.push_back({x, p, half(p)});
    if (p > r.max_prob) {
      r.max_prob = p;
      r.ci_halfwidth = half(p);
    }
  }
  return r;
}

SpreadOutResult spread_out_statistic(const ConditionalSpec& spec, long samples, Rng& rng) {
  if (samples <= 0) throw std::invalid_argument("zero samples");
  HeightSystem sys = conditional_system(spec);
  const int f0 = sys.domain().origin_face();
  std::vector<int> h0;
  h0.reserve(samples);
  for (long i = 0; i < samples; ++i) h0.push_back(cftp_heights(sys, rng)[f0]);
  return spread_out_from_heights(h0);
}

}  // namespace lozlab
