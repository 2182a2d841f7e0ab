#include "lozlab/double_dimer.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <map>
#include <stdexcept>

namespace lozlab {

namespace {

EdgeKey key_between(TriCoord a, TriCoord b) {
  TriCoord w = a.up ? a : b;
  TriCoord k = a.up ? b : a;
  if (w.up == k.up) throw std::invalid_argument("edge must join a white and a black vertex");
  for (int t = 0; t < 3; ++t)
    if (black_of(w, t) == k) return {w.u, w.v, t};
  throw std::invalid_argument("vertices are not adjacent");
}

// matching partner of t in m, if t is a vertex of m's domain
std::optional<TriCoord> partner(const DimerConfig& m, TriCoord t) {
  const HexDomain& d = m.domain();
  if (t.up) {
    int w = d.white_index(t.u, t.v);
    if (w < 0) return {};
    return black_of(t, m.white_type(w));
  }
  int b = d.black_index(t.u, t.v);
  if (b < 0) return {};
  return d.whites()[m.black_white(b)];
}

// orientation of a component from its edge flags and vertex order
int orientation_of(const DDComponent& c) {
  if (c.in_m.empty()) return 0;
  return (c.verts[0].up == static_cast<bool>(c.in_m[0])) ? 1 : -1;
}

std::vector<std::int8_t> types_from(const HexDomain& d, const std::vector<EdgeKey>& edges) {
  std::vector<std::int8_t> types(d.num_white(), -1);
  for (const auto& k : edges) {
    int w = d.white_index(k.u, k.v);
    if (w < 0) throw std::invalid_argument("edge outside its domain");
    types[w] = static_cast<std::int8_t>(k.type);
  }
  return types;
}

}  // namespace

EdgeKey DDComponent::edge(std::size_t i) const { return key_between(verts[i], verts[(i + 1) % verts.size()]); }

int DDHeight::at(FaceCoord f) const {
  int i = common->face_index(f);
  if (i < 0) throw std::out_of_range("face outside the common domain");
  return values[i];
}

LoopDecomposition superimpose(const DimerConfig& m, const DimerConfig& m2) {
  LoopDecomposition dec;
  dec.d1 = m.domain_ptr();
  dec.d2 = m2.domain_ptr();
  std::vector<TriCoord> all = dec.d1->triangles();
  for (const auto& t : dec.d2->triangles())
    if (!dec.d1->contains(t)) all.push_back(t);
  std::sort(all.begin(), all.end());
  int u0 = INT_MAX, v0 = INT_MAX, u1 = INT_MIN, v1 = INT_MIN;
  for (const auto& t : all) {
    u0 = std::min(u0, t.u), v0 = std::min(v0, t.v);
    u1 = std::max(u1, t.u), v1 = std::max(v1, t.v);
  }
  const int hgt = v1 - v0 + 1;
  auto slot = [&](TriCoord t) { return (static_cast<std::size_t>(t.u - u0) * hgt + (t.v - v0)) * 2 + t.up; };
  std::vector<int> grid(static_cast<std::size_t>(u1 - u0 + 1) * hgt * 2, -1);
  for (std::size_t i = 0; i < all.size(); ++i) grid[slot(all[i])] = static_cast<int>(i);
  auto index_of = [&](TriCoord t) {
    if (t.u < u0 || t.u > u1 || t.v < v0 || t.v > v1 || grid[slot(t)] < 0)
      throw std::invalid_argument("matchings do not share a common region");
    return grid[slot(t)];
  };

  const int n = static_cast<int>(all.size());
  std::vector<int> p1(n, -1), p2(n, -1);
  for (int i = 0; i < n; ++i) {
    if (auto q = partner(m, all[i])) p1[i] = index_of(*q);
    if (auto q = partner(m2, all[i])) p2[i] = index_of(*q);
    if (p1[i] < 0 && p2[i] < 0) throw std::invalid_argument("vertex covered by neither matching");
  }
  std::vector<char> seen(n, 0);
  for (int i = 0; i < n; ++i)
    if (p1[i] >= 0 && p1[i] == p2[i] && !seen[i]) {
      seen[i] = seen[p1[i]] = 1;
      dec.doubled.push_back(key_between(all[i], all[p1[i]]));
    }
  std::sort(dec.doubled.begin(), dec.doubled.end());

  // open paths start at vertices covered by one matching only
  for (int i = 0; i < n; ++i) {
    if (seen[i] || (p1[i] >= 0 && p2[i] >= 0)) continue;
    DDComponent c;
    bool use_m = p1[i] >= 0;
    int cur = i;
    while (true) {
      seen[cur] = 1;
      c.verts.push_back(all[cur]);
      int nxt = use_m ? p1[cur] : p2[cur];
      if (nxt < 0) break;
      c.in_m.push_back(use_m);
      cur = nxt;
      use_m = !use_m;
    }
    c.orientation = orientation_of(c);
    dec.paths.push_back(std::move(c));
  }

  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::vector<int> cyc;
    bool use_m = true;
    int cur = i;
    do {
      seen[cur] = 1;
      cyc.push_back(cur);
      cur = use_m ? p1[cur] : p2[cur];
      use_m = !use_m;
    } while (cur != i);
    std::vector<Point2> poly;
    for (int v : cyc) poly.push_back(all[v].centroid());
    if (signed_area(poly) < 0) std::reverse(cyc.begin() + 1, cyc.end());
    DDComponent c;
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      c.verts.push_back(all[cyc[k]]);
      c.in_m.push_back(p1[cyc[k]] == cyc[(k + 1) % cyc.size()]);
    }
    c.orientation = orientation_of(c);
    dec.loops.push_back(std::move(c));
  }
  return dec;
}

std::pair<DimerConfig, DimerConfig> reconstruct_with(const LoopDecomposition& dec, const std::vector<char>& bits) {
  if (bits.size() != dec.loops.size()) throw std::invalid_argument("one bit per loop");
  std::vector<EdgeKey> e1 = dec.doubled, e2 = dec.doubled;
  auto take = [&](const DDComponent& c, bool flip) {
    for (std::size_t i = 0; i < c.size(); ++i) (static_cast<bool>(c.in_m[i]) != flip ? e1 : e2).push_back(c.edge(i));
  };
  for (std::size_t k = 0; k < dec.loops.size(); ++k) take(dec.loops[k], (bits[k] ? 1 : -1) != dec.loops[k].orientation);
  for (const auto& p : dec.paths) take(p, false);
  return {DimerConfig::from_white_types(dec.d1, types_from(*dec.d1, e1)),
          DimerConfig::from_white_types(dec.d2, types_from(*dec.d2, e2))};
}

std::pair<DimerConfig, DimerConfig> reconstruct(const LoopDecomposition& dec) {
  std::vector<char> bits;
  for (const auto& c : dec.loops) bits.push_back(c.orientation > 0);
  return reconstruct_with(dec, bits);
}

std::pair<DimerConfig, DimerConfig> resample_orientations(LoopDecomposition& dec, Rng& rng) {
  for (auto& c : dec.loops) {
    int o = (rng() >> 63) ? 1 : -1;
    if (o != c.orientation) {
      for (auto& f : c.in_m) f = !f;
      c.orientation = o;
    }
  }
  return reconstruct(dec);
}

DDHeight dd_height(const LoopDecomposition& dec, std::optional<FaceCoord> pin) {
  std::map<EdgeKey, int> jump;  // +1 on m-only edges, -1 on m2-only edges
  for (const auto* list : {&dec.loops, &dec.paths})
    for (const auto& c : *list) {
      if (c.orientation == 0) throw std::invalid_argument("unoriented component");
      for (std::size_t i = 0; i < c.size(); ++i) jump[c.edge(i)] = c.in_m[i] ? 1 : -1;
    }
  std::vector<TriCoord> common;
  for (const auto& t : dec.d1->triangles())
    if (dec.d2->contains(t)) common.push_back(t);
  DDHeight out;
  out.common = HexDomain::from_triangles(common);
  const HexDomain& c = *out.common;
  int start = pin ? c.face_index(*pin) : c.boundary_walk()[0];
  if (start < 0) throw std::invalid_argument("pin outside the common domain");
  out.values.assign(c.num_faces(), INT_MIN);
  out.values[start] = 0;
  std::deque<int> q{start};
  while (!q.empty()) {
    int f = q.front();
    q.pop_front();
    for (int k = 0; k < 6; ++k) {
      int g = c.face_neighbor(f, k);
      if (g < 0 || out.values[g] != INT_MIN) continue;
      LatticeStep s = lattice_step(c.faces()[f], k);
      auto it = jump.find({s.white.u, s.white.v, s.type});
      int j = it == jump.end() ? 0 : it->second;
      out.values[g] = out.values[f] + (s.white_left ? j : -j);
      q.push_back(g);
    }
  }
  return out;
}

DimerConfig build_m_double_prime(const LoopDecomposition& dec) {
  std::vector<EdgeKey> e = dec.doubled;
  for (const auto& c : dec.loops)
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c.in_m[i]) e.push_back(c.edge(i));
  for (const auto& c : dec.paths)
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!c.in_m[i]) e.push_back(c.edge(i));
  return DimerConfig::from_white_types(dec.d2, types_from(*dec.d2, e));
}

DimerConfig build_m_double_prime(const DimerConfig& m, const DimerConfig& m2) {
  return build_m_double_prime(superimpose(m, m2));
}

bool paths_hit_ball(const LoopDecomposition& dec, double r) {
  Point2 o = dec.d1->origin().center();
  for (const auto& c : dec.paths)
    for (std::size_t i = 0; i < c.size(); ++i)
      if (edge_distance(c.edge(i), o) < r) return true;
  return false;
}

std::vector<FaceCoord> path_adjacent_faces(const LoopDecomposition& dec) {
  std::vector<FaceCoord> out;
  for (const auto& c : dec.paths)
    for (const auto& t : c.verts) {
      if (t.up) {
        out.insert(out.end(), {{t.u, t.v}, {t.u + 1, t.v}, {t.u, t.v + 1}});
      } else {
        out.insert(out.end(), {{t.u + 1, t.v}, {t.u, t.v + 1}, {t.u + 1, t.v + 1}});
      }
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool agree_off_paths(const DimerConfig& m, const DimerConfig& mpp, const LoopDecomposition& dec) {
  std::vector<EdgeKey> on_path;
  for (const auto& c : dec.paths)
    for (std::size_t i = 0; i < c.size(); ++i) on_path.push_back(c.edge(i));
  std::sort(on_path.begin(), on_path.end());
  const HexDomain& d1 = m.domain();
  const HexDomain& d2 = mpp.domain();
  for (int e = 0; e < static_cast<int>(d1.edges().size()); ++e) {
    EdgeKey k = d1.edge_key(e);
    if (d2.edge_index(k) < 0 || std::binary_search(on_path.begin(), on_path.end(), k)) continue;
    if (m.has_edge(e) != mpp.has_edge(k)) return false;
  }
  return true;
}

}  // namespace lozlab
