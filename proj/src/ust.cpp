#include "lozlab/ust.hpp"

#include "lozlab/tiling_sampler.hpp"  // uniform_below

#include <algorithm>
#include <climits>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace lozlab {

// ---------------------------------------------------------------- graph

int PlanarGraph::add_vertex(Point2 p, bool boundary) {
  finalized_ = false;
  pos_.push_back(p);
  boundary_.push_back(boundary);
  return static_cast<int>(pos_.size()) - 1;
}

void PlanarGraph::add_edge(int a, int b, double w_ab, double w_ba) {
  if (a == b || a < 0 || b < 0 || a >= num_vertices() || b >= num_vertices())
    throw std::invalid_argument("bad edge endpoints");
  if (!(w_ab > 0) || !(w_ba > 0)) throw std::invalid_argument("edge weights must be positive");
  finalized_ = false;
  edges_.emplace_back(a, b);
  ew_.emplace_back(w_ab, w_ba);
}

void PlanarGraph::finalize(bool check_planar) {
  const int n = num_vertices();
  if (std::none_of(boundary_.begin(), boundary_.end(), [](char c) { return c != 0; }))
    throw std::invalid_argument("graph needs a wired boundary vertex");
  off_.assign(n + 1, 0);
  for (auto [a, b] : edges_) ++off_[a + 1], ++off_[b + 1];
  std::partial_sum(off_.begin(), off_.end(), off_.begin());
  arcs_.assign(off_[n], {});
  std::vector<int> fill(off_.begin(), off_.end() - 1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    auto [a, b] = edges_[i];
    arcs_[fill[a]++] = {b, ew_[i].first};
    arcs_[fill[b]++] = {a, ew_[i].second};
  }
  uniform_.assign(n, 1);
  bool all_uniform = true;
  for (int v = 0; v < n; ++v) {
    Point2 p = pos_[v];
    std::sort(arcs_.begin() + off_[v], arcs_.begin() + off_[v + 1], [&](const Arc& x, const Arc& y) {
      Point2 dx = pos_[x.to] - p, dy = pos_[y.to] - p;
      return std::atan2(dx.y, dx.x) < std::atan2(dy.y, dy.x);
    });
    for (int i = off_[v]; i + 1 < off_[v + 1]; ++i) {
      if (arcs_[i].to == arcs_[i + 1].to) throw std::invalid_argument("parallel edges");
      if (arcs_[i].weight != arcs_[i + 1].weight) uniform_[v] = 0;
    }
    all_uniform = all_uniform && uniform_[v];
  }
  cum_.clear();
  if (!all_uniform) {
    cum_.resize(arcs_.size());
    for (int v = 0; v < n; ++v) {
      double s = 0;
      for (int i = off_[v]; i < off_[v + 1]; ++i) cum_[i] = s += arcs_[i].weight;
    }
  }
  // every vertex reaches ∂
  std::vector<char> seen(boundary_.begin(), boundary_.end());
  std::deque<int> q;
  for (int v = 0; v < n; ++v)
    if (seen[v]) q.push_back(v);
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int i = off_[v]; i < off_[v + 1]; ++i)
      if (!seen[arcs_[i].to]) seen[arcs_[i].to] = 1, q.push_back(arcs_[i].to);
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw std::invalid_argument("vertex cannot reach the boundary");
  if (check_planar) {
    for (std::size_t i = 0; i < edges_.size(); ++i)
      for (std::size_t j = i + 1; j < edges_.size(); ++j) {
        auto [a, b] = edges_[i];
        auto [c, d] = edges_[j];
        if (a == c || a == d || b == c || b == d) continue;
        if (segments_intersect(pos_[a], pos_[b], pos_[c], pos_[d])) throw std::invalid_argument("edges cross");
      }
  }
  finalized_ = true;
}

int PlanarGraph::nearest_vertex(Point2 p) const {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (int v = 0; v < num_vertices(); ++v) {
    double d = norm(pos_[v] - p);
    if (d < bd) bd = d, best = v;
  }
  return best;
}

int PlanarGraph::step(int v, Rng& rng) const {
  const int deg = off_[v + 1] - off_[v];
  if (deg == 0) throw std::logic_error("isolated vertex");
  if (uniform_[v]) return arcs_[off_[v] + uniform_below(rng, deg)].to;
  double total = cum_[off_[v + 1] - 1];
  double x = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
  for (int i = off_[v]; i < off_[v + 1] - 1; ++i)
    if (x < cum_[i]) return arcs_[i].to;
  return arcs_[off_[v + 1] - 1].to;
}

PlanarGraph grid_graph(double half, double mesh) {
  if (!(mesh > 0) || !(half >= mesh)) throw std::invalid_argument("grid needs half >= mesh > 0");
  const int k = static_cast<int>(std::floor(half / mesh + 1e-9));
  const int side = 2 * k + 1;
  PlanarGraph g;
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) {
      bool ring = i == 0 || j == 0 || i == side - 1 || j == side - 1;
      g.add_vertex({(i - k) * mesh, (j - k) * mesh}, ring);
    }
  auto id = [&](int i, int j) { return i * side + j; };
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) {
      bool ring_ij = i == 0 || j == 0 || i == side - 1 || j == side - 1;
      if (i + 1 < side) {
        bool ring2 = i + 1 == side - 1 || j == 0 || j == side - 1;
        if (!(ring_ij && ring2)) g.add_edge(id(i, j), id(i + 1, j));
      }
      if (j + 1 < side) {
        bool ring2 = i == 0 || i == side - 1 || j + 1 == side - 1;
        if (!(ring_ij && ring2)) g.add_edge(id(i, j), id(i, j + 1));
      }
    }
  g.finalize(false);
  return g;
}

PlanarGraph square_patch(int w, int h) {
  if (w < 1 || h < 1) throw std::invalid_argument("patch sides must be positive");
  PlanarGraph g;
  for (int x = 0; x < w; ++x)
    for (int y = 0; y < h; ++y) g.add_vertex({static_cast<double>(x), static_cast<double>(y)});
  auto id = [&](int x, int y) { return x * h + y; };
  for (int x = 0; x < w; ++x)
    for (int y = 0; y < h; ++y) {
      if (x + 1 < w) g.add_edge(id(x, y), id(x + 1, y));
      if (y + 1 < h) g.add_edge(id(x, y), id(x, y + 1));
    }
  for (int x = 0; x < w; ++x) {
    g.add_edge(id(x, 0), g.add_vertex({static_cast<double>(x), -1.0}, true));
    g.add_edge(id(x, h - 1), g.add_vertex({static_cast<double>(x), static_cast<double>(h)}, true));
  }
  for (int y = 0; y < h; ++y) {
    g.add_edge(id(0, y), g.add_vertex({-1.0, static_cast<double>(y)}, true));
    g.add_edge(id(w - 1, y), g.add_vertex({static_cast<double>(w), static_cast<double>(y)}, true));
  }
  g.finalize();
  return g;
}

// ---------------------------------------------------------------- walks

WalkPath random_walk_to_boundary(const PlanarGraph& g, int start, Rng& rng) {
  WalkPath x{start};
  int v = start;
  while (!g.is_boundary(v)) {
    v = g.step(v, rng);
    x.push_back(v);
  }
  return x;
}

WalkPath forward_loop_erase(const WalkPath& x) {
  if (x.empty()) return {};
  int mx = *std::max_element(x.begin(), x.end());
  std::vector<int> at(static_cast<std::size_t>(mx) + 1, -1);
  WalkPath y;
  for (int v : x) {
    if (at[v] >= 0) {
      for (std::size_t k = at[v] + 1; k < y.size(); ++k) at[y[k]] = -1;
      y.resize(at[v] + 1);
    } else {
      at[v] = static_cast<int>(y.size());
      y.push_back(v);
    }
  }
  return y;
}

WalkPath backward_loop_erase(const WalkPath& x) {
  WalkPath r(x.rbegin(), x.rend());
  WalkPath y = forward_loop_erase(r);
  std::reverse(y.begin(), y.end());
  return y;
}

WalkPath mixed_loop_erase(const WalkPath& x, std::size_t T) {
  if (x.empty()) return {};
  if (T >= x.size()) throw std::invalid_argument("stopping index beyond the path");
  WalkPath yt = forward_loop_erase(WalkPath(x.begin(), x.begin() + T + 1));
  int mx = *std::max_element(x.begin(), x.end());
  std::vector<char> later(static_cast<std::size_t>(mx) + 1, 0);
  for (std::size_t t = T; t < x.size(); ++t) later[x[t]] = 1;
  std::size_t S = 0;
  while (!later[yt[S]]) ++S;
  std::size_t tau = x.size() - 1;
  while (x[tau] != yt[S]) --tau;
  WalkPath y(yt.begin(), yt.begin() + S);
  WalkPath tail = backward_loop_erase(WalkPath(x.begin() + tau, x.end()));
  y.insert(y.end(), tail.begin(), tail.end());
  return y;
}

ErasureLaws compare_erasure_laws(const PlanarGraph& g, int start, int stop_at, double max_residual) {
  if (g.is_boundary(start)) throw std::invalid_argument("walk must start off the boundary");
  ErasureLaws out;
  double threshold = max_residual;
  while (true) {
    std::map<WalkPath, double> fwd, bwd, mix;
    double residual = 0;
    long count = 0;
    WalkPath x{start};
    auto rec = [&](auto&& self, double p) -> void {
      int v = x.back();
      double total = 0;
      for (const auto& a : g.arcs(v)) total += a.weight;
      for (const auto& a : g.arcs(v)) {
        double q = p * a.weight / total;
        x.push_back(a.to);
        if (g.is_boundary(a.to)) {
          ++count;
          auto hit = std::find(x.begin(), x.end(), stop_at);
          std::size_t T = hit == x.end() ? x.size() - 1 : static_cast<std::size_t>(hit - x.begin());
          fwd[forward_loop_erase(x)] += q;
          bwd[backward_loop_erase(x)] += q;
          mix[mixed_loop_erase(x, T)] += q;
        } else if (q > threshold) {
          self(self, q);
        } else {
          residual += q;
        }
        x.pop_back();
      }
    };
    rec(rec, 1.0);
    if (residual <= max_residual) {
      auto tv = [&](const std::map<WalkPath, double>& a) {
        double s = 0;
        for (const auto& [k, p] : a) {
          auto it = fwd.find(k);
          s += std::abs(p - (it == fwd.end() ? 0.0 : it->second));
        }
        for (const auto& [k, p] : fwd)
          if (!a.count(k)) s += p;
        return s / 2;
      };
      out.tv_mixed_forward = tv(mix);
      out.tv_backward_forward = tv(bwd);
      out.residual = residual;
      out.trajectories = count;
      return out;
    }
    threshold /= 4;
  }
}

// ---------------------------------------------------------------- trees

bool WiredTree::valid(const PlanarGraph& g) const {
  const int n = g.num_vertices();
  if (static_cast<int>(parent.size()) != n) return false;
  for (int v = 0; v < n; ++v) {
    if (g.is_boundary(v) != (parent[v] < 0)) return false;
    if (parent[v] >= 0) {
      auto arcs = g.arcs(v);
      if (std::none_of(arcs.begin(), arcs.end(), [&](const auto& a) { return a.to == parent[v]; })) return false;
    }
  }
  // no directed cycle: every vertex reaches ∂ within n steps
  std::vector<char> state(n, 0);  // 0 new, 1 on stack, 2 done
  for (int v = 0; v < n; ++v) {
    std::vector<int> stack;
    int u = v;
    while (u >= 0 && state[u] == 0) {
      state[u] = 1;
      stack.push_back(u);
      u = parent[u];
    }
    if (u >= 0 && state[u] == 1) return false;
    for (int s : stack) state[s] = 2;
  }
  return true;
}

WiredTree wilson_ust(const PlanarGraph& g, const std::vector<int>& order, Rng& rng, bool partial) {
  const int n = g.num_vertices();
  std::vector<char> in_tree(n, 0);
  WiredTree t;
  t.parent.assign(n, -1);
  for (int v = 0; v < n; ++v) in_tree[v] = g.is_boundary(v);
  auto attach = [&](int v) {
    int u = v;
    while (!in_tree[u]) {
      t.parent[u] = g.step(u, rng);
      u = t.parent[u];
    }
    for (u = v; !in_tree[u]; u = t.parent[u]) in_tree[u] = 1;
  };
  for (int v : order) attach(v);
  if (!partial)
    for (int v = 0; v < n; ++v) attach(v);
  // vertices overwritten during walks but never attached keep stale pointers
  if (partial)
    for (int v = 0; v < n; ++v)
      if (!in_tree[v]) t.parent[v] = -1;
  return t;
}

SubTree subtree_spanning(const WiredTree& t, const std::vector<int>& vset) {
  if (vset.empty()) throw std::invalid_argument("empty vertex set");
  SubTree s;
  std::vector<char> seen(t.parent.size(), 0);
  for (int v : vset) {
    int u = v;
    while (!seen[u]) {
      seen[u] = 1;
      s.vertices.push_back(u);
      if (t.parent[u] < 0) break;
      s.edges.emplace_back(u, t.parent[u]);
      u = t.parent[u];
    }
  }
  std::sort(s.edges.begin(), s.edges.end());
  std::sort(s.vertices.begin(), s.vertices.end());
  return s;
}

double SubTree::distance_to(const PlanarGraph& g, Point2 p) const {
  double best = std::numeric_limits<double>::infinity();
  for (int v : vertices) best = std::min(best, norm(g.pos(v) - p));
  for (auto [a, b] : edges) best = std::min(best, dist_point_segment(p, g.pos(a), g.pos(b)));
  return best;
}

std::vector<std::pair<WiredTree, double>> enumerate_wired_trees(const PlanarGraph& g, long cap) {
  const int n = g.num_vertices();
  std::vector<int> inner;
  for (int v = 0; v < n; ++v)
    if (!g.is_boundary(v)) inner.push_back(v);
  std::vector<std::pair<WiredTree, double>> out;
  WiredTree t;
  t.parent.assign(n, -1);
  std::vector<int> choice(inner.size(), 0);
  // odometer over parent choices
  while (true) {
    double w = 1;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      const auto& a = g.arcs(inner[i])[choice[i]];
      t.parent[inner[i]] = a.to;
      w *= a.weight;
    }
    if (t.valid(g)) {
      out.emplace_back(t, w);
      if (static_cast<long>(out.size()) > cap) throw CapExceededError("too many spanning trees");
    }
    std::size_t i = 0;
    while (i < inner.size() && ++choice[i] == g.degree(inner[i])) choice[i++] = 0;
    if (i == inner.size()) break;
  }
  return out;
}

// ---------------------------------------------------------------- winding

namespace {
bool same_point(Point2 a, Point2 b) { return norm(a - b) < 1e-12; }
double subtended(Point2 a, Point2 b, Point2 z) { return std::atan2(cross(a - z, b - z), dot(a - z, b - z)); }
}  // namespace

double winding_topological(const Polyline& p, Point2 z) {
  if (p.size() < 2) throw std::invalid_argument("polyline needs two points");
  std::size_t s0 = 0, s1 = p.size() - 1;
  if (same_point(p.front(), z)) s0 = 1;
  if (same_point(p.back(), z)) s1 = p.size() - 2;
  double w = 0;
  for (std::size_t i = s0; i < s1; ++i) {
    if (dist_point_segment(z, p[i], p[i + 1]) < 1e-12) throw std::invalid_argument("point lies on the polyline");
    w += subtended(p[i], p[i + 1], z);
  }
  return w;
}

double total_turning(const Polyline& p) {
  double w = 0;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    Point2 d0 = p[i] - p[i - 1], d1 = p[i + 1] - p[i];
    if (norm(d0) == 0 || norm(d1) == 0) throw std::invalid_argument("zero-length segment");
    w += std::atan2(cross(d0, d1), dot(d0, d1));
  }
  return w;
}

bool is_simple(const Polyline& p) {
  const std::size_t m = p.size();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (same_point(p[i], p[i + 1])) return false;
    if (i + 2 < m) {
      Point2 d0 = p[i + 1] - p[i], d1 = p[i + 2] - p[i + 1];
      if (std::abs(cross(d0, d1)) <= 1e-12 * norm(d0) * norm(d1) && dot(d0, d1) < 0) return false;
    }
    for (std::size_t j = i + 2; j + 1 < m; ++j)
      if (segments_intersect(p[i], p[i + 1], p[j], p[j + 1])) return false;
  }
  return true;
}

double winding_intrinsic(const Polyline& p) {
  if (p.size() < 3) throw std::invalid_argument("intrinsic winding needs two segments");
  if (!is_simple(p)) throw std::invalid_argument("polyline is not simple");
  return total_turning(p);
}

// ---------------------------------------------------------------- Temperley

namespace {
double angle_of(Point2 d) { return std::atan2(d.y, d.x); }
}  // namespace

const std::vector<int>& TemperleyGraph::rotation(int x) const {
  return x == g_->num_vertices() ? root_rot_ : rot_[x];
}

int TemperleyGraph::head(int dart) const {
  const GEdge& e = edge_[dart / 2];
  if (dart % 2) return e.a;
  return g_->is_boundary(e.b) ? g_->num_vertices() : e.b;
}

int TemperleyGraph::out_dart(int v, int e) const { return edge_[e].a == v ? 2 * e : 2 * e + 1; }

TemperleyGraph::TemperleyGraph(const PlanarGraph& g, double cut_angle) : g_(&g) {
  const int n = g.num_vertices();
  const int root = n;
  rot_.assign(n, {});
  for (int v = 0; v < n; ++v) {
    if (g.is_boundary(v)) continue;
    for (const auto& a : g.arcs(v)) {
      auto key = std::minmax(v, a.to);
      auto it = edge_of_.find(key);
      int e;
      if (it == edge_of_.end()) {
        e = static_cast<int>(edge_.size());
        edge_of_[key] = e;
        edge_.push_back({v, a.to});
      } else {
        e = it->second;
      }
      rot_[v].push_back(e);
    }
  }
  const int E = num_edges();
  Point2 centre{0, 0};
  for (int v = 0; v < n; ++v) centre = centre + g.pos(v);
  centre = (1.0 / n) * centre;
  const double cut = cut_angle * kPi / 180.0;
  auto key_from_cut = [&](Point2 p) {
    double a = angle_of(p - centre) - cut;
    a = std::fmod(a, 2 * kPi);
    if (a < 0) a += 2 * kPi;
    return a;
  };
  std::vector<int> spokes;
  for (int e = 0; e < E; ++e)
    if (g.is_boundary(edge_[e].b)) spokes.push_back(e);
  if (spokes.empty()) throw std::invalid_argument("no edge reaches the boundary");
  // counterclockwise around the root = clockwise as seen from the centre
  auto spoke_key = [&](int e) {
    Point2 b = g.pos(edge_[e].b), a = g.pos(edge_[e].a);
    return std::make_pair(key_from_cut(b), -angle_of(a - b));
  };
  root_rot_ = spokes;
  std::sort(root_rot_.begin(), root_rot_.end(), [&](int x, int y) { return spoke_key(x) > spoke_key(y); });

  rpos_a_.assign(E, -1);
  rpos_b_.assign(E, -1);
  for (int v = 0; v < n; ++v)
    for (std::size_t i = 0; i < rot_[v].size(); ++i) {
      int e = rot_[v][i];
      (edge_[e].a == v ? rpos_a_ : rpos_b_)[e] = static_cast<int>(i);
    }
  for (std::size_t i = 0; i < root_rot_.size(); ++i) rpos_b_[root_rot_[i]] = static_cast<int>(i);

  // faces: after arriving at w along e, leave along the edge clockwise from e at w
  left_face_.assign(2 * E, -1);
  for (int d0 = 0; d0 < 2 * E; ++d0) {
    if (left_face_[d0] >= 0) continue;
    int f = static_cast<int>(face_darts_.size());
    face_darts_.emplace_back();
    int d = d0;
    do {
      left_face_[d] = f;
      face_darts_[f].push_back(d);
      int w = head(d), e = d / 2;
      const auto& rot = rotation(w);
      int i = (d % 2) ? rpos_a_[e] : rpos_b_[e];
      int k = static_cast<int>(rot.size());
      int e2 = rot[(i - 1 + k) % k];
      d = (w == root) ? 2 * e2 + 1 : out_dart(w, e2);
    } while (d != d0);
  }
  int V = 1;
  for (int v = 0; v < n; ++v) V += !g.is_boundary(v);
  if (V - E + num_faces() != 2) throw std::invalid_argument("embedding is not planar (Euler check)");

  // f0: the root face straddling the cut
  int last = *std::max_element(spokes.begin(), spokes.end(), [&](int x, int y) { return spoke_key(x) < spoke_key(y); });
  f0_ = left_face_[2 * last];
  for (int e : spokes) boundary_cycle_.push_back(edge_[e].b);
  std::sort(boundary_cycle_.begin(), boundary_cycle_.end());
  boundary_cycle_.erase(std::unique(boundary_cycle_.begin(), boundary_cycle_.end()), boundary_cycle_.end());
  std::sort(boundary_cycle_.begin(), boundary_cycle_.end(),
            [&](int x, int y) { return key_from_cut(g.pos(x)) < key_from_cut(g.pos(y)); });

  vertex_black_.assign(n, -1);
  for (int v = 0; v < n; ++v)
    if (!g.is_boundary(v)) {
      vertex_black_[v] = static_cast<int>(black_vertex_.size());
      black_vertex_.push_back(v);
    }
  face_black_.assign(num_faces(), -1);
  for (int f = 0; f < num_faces(); ++f)
    if (f != f0_) {
      face_black_[f] = static_cast<int>(black_vertex_.size() + black_face_.size());
      black_face_.push_back(f);
    }
  wadj_.assign(E, {});
  for (int e = 0; e < E; ++e) {
    auto& w = wadj_[e];
    w.push_back(vertex_black_[edge_[e].a]);
    if (!g.is_boundary(edge_[e].b)) w.push_back(vertex_black_[edge_[e].b]);
    for (int d : {2 * e, 2 * e + 1}) {
      int b = face_black_[left_face_[d]];
      if (b >= 0 && std::find(w.begin(), w.end(), b) == w.end()) w.push_back(b);
    }
  }
  build_corners();
}

void TemperleyGraph::build_corners() {
  const int n = g_->num_vertices();
  std::vector<std::vector<int>> corner_at(n);
  for (int v = 0; v < n; ++v) {
    if (g_->is_boundary(v)) continue;
    const auto& rot = rot_[v];
    const int k = static_cast<int>(rot.size());
    corner_at[v].assign(k, -1);
    for (int i = 0; i < k; ++i) {
      int f = left_face_[out_dart(v, rot[i])];
      if (f == f0_) continue;
      corner_at[v][i] = static_cast<int>(corner_v_.size());
      corner_v_.push_back(v);
      corner_f_.push_back(f);
      corner_e1_.push_back(rot[i]);
      corner_e2_.push_back(rot[(i + 1) % k]);
    }
  }
  corner_adj_.assign(corner_v_.size(), {});
  auto link = [&](int c1, int c2, int white, int black) {
    // c1 -> c2 runs counterclockwise around the black: white on the right
    corner_adj_[c1].push_back({c2, white, black, false});
    corner_adj_[c2].push_back({c1, white, black, true});
  };
  for (int v = 0; v < n; ++v) {
    if (g_->is_boundary(v)) continue;
    const auto& rot = rot_[v];
    const int k = static_cast<int>(rot.size());
    for (int i = 0; i < k; ++i) {
      int c = corner_at[v][i];
      if (c < 0) continue;
      int c2 = corner_at[v][(i + 1) % k];
      if (c2 >= 0 && k > 1) link(c, c2, rot[(i + 1) % k], vertex_black_[v]);
      // along the face, to the corner at the far end of e1
      int e1 = rot[i];
      int x = edge_[e1].a == v ? edge_[e1].b : edge_[e1].a;
      if (g_->is_boundary(x)) continue;
      const auto& rx = rot_[x];
      int kx = static_cast<int>(rx.size());
      int j = (edge_[e1].a == x ? rpos_a_[e1] : rpos_b_[e1]);
      int cx = corner_at[x][(j - 1 + kx) % kx];
      if (cx >= 0) link(c, cx, e1, face_black_[corner_f_[c]]);
    }
  }
}

TemperleyGraph::Matching TemperleyGraph::dimers(const WiredTree& t) const {
  const int n = g_->num_vertices();
  if (static_cast<int>(t.parent.size()) != n || !t.valid(*g_)) throw std::invalid_argument("not a wired spanning tree");
  Matching m(num_edges(), -1);
  std::vector<char> in_tree(num_edges(), 0);
  for (int v = 0; v < n; ++v) {
    if (g_->is_boundary(v)) continue;
    int e = edge_of_.at(std::minmax(v, t.parent[v]));
    in_tree[e] = 1;
    m[e] = vertex_black_[v];
  }
  // dual tree rooted at f0, oriented away from it
  std::vector<char> seen(num_faces(), 0);
  std::deque<int> q{f0_};
  seen[f0_] = 1;
  while (!q.empty()) {
    int f = q.front();
    q.pop_front();
    for (int d : face_darts_[f]) {
      if (in_tree[d / 2]) continue;
      int h = left_face_[d ^ 1];
      if (seen[h]) continue;
      seen[h] = 1;
      m[d / 2] = face_black_[h];
      q.push_back(h);
    }
  }
  if (std::find(m.begin(), m.end(), -1) != m.end()) throw std::invalid_argument("not a wired spanning tree");
  return m;
}

WiredTree TemperleyGraph::tree(const Matching& m) const {
  const int n = g_->num_vertices();
  if (static_cast<int>(m.size()) != num_edges()) throw std::invalid_argument("matching size");
  WiredTree t;
  t.parent.assign(n, -1);
  std::vector<char> used(num_black(), 0);
  for (int e = 0; e < num_edges(); ++e) {
    int b = m[e];
    if (b < 0 || b >= num_black() || used[b] || std::find(wadj_[e].begin(), wadj_[e].end(), b) == wadj_[e].end())
      throw std::invalid_argument("not a perfect matching of G_D");
    used[b] = 1;
    if (b < static_cast<int>(black_vertex_.size())) {
      int v = black_vertex_[b];
      t.parent[v] = edge_[e].a == v ? edge_[e].b : edge_[e].a;
    }
  }
  return t;
}

std::vector<TemperleyGraph::Matching> TemperleyGraph::enumerate_matchings(long cap) const {
  std::vector<Matching> out;
  if (num_white() != num_black()) return out;
  Matching m(num_white(), -1);
  std::vector<char> used(num_black(), 0);
  auto rec = [&](auto&& self, int e) -> void {
    if (e == num_white()) {
      out.push_back(m);
      if (static_cast<long>(out.size()) > cap) throw CapExceededError("too many matchings");
      return;
    }
    for (int b : wadj_[e])
      if (!used[b]) {
        used[b] = 1;
        m[e] = b;
        self(self, e + 1);
        used[b] = 0;
      }
  };
  rec(rec, 0);
  return out;
}

std::vector<int> TemperleyGraph::heights(const Matching& m, int pin) const {
  const int C = num_corners();
  std::vector<int> h(C, INT_MIN);
  h[pin] = 0;
  std::deque<int> q{pin};
  while (!q.empty()) {
    int c = q.front();
    q.pop_front();
    for (const auto& s : corner_adj_[c]) {
      int inc = (m[s.white] == s.black) ? -3 : 1;
      int val = h[c] + (s.white_left ? inc : -inc);
      if (h[s.to] == INT_MIN) {
        h[s.to] = val;
        q.push_back(s.to);
      } else if (h[s.to] != val) {
        throw std::logic_error("height function is not path independent");
      }
    }
  }
  return h;
}

double TemperleyGraph::corner_winding(const WiredTree& t, int c) const {
  const PlanarGraph& g = *g_;
  int v = corner_v_[c];
  auto other = [&](int e) { return edge_[e].a == v ? edge_[e].b : edge_[e].a; };
  Point2 p = g.pos(v);
  Point2 d1 = g.pos(other(corner_e1_[c])) - p, d2 = g.pos(other(corner_e2_[c])) - p;
  double sweep = std::atan2(cross(d1, d2), dot(d1, d2));
  if (sweep <= 0) sweep += 2 * kPi;
  double a = angle_of(d1) + sweep / 2;
  double len = std::min(norm(d1), norm(d2));
  Polyline line{p + 0.25 * len * Point2{std::cos(a), std::sin(a)}, p};
  int u = v;
  while (!g.is_boundary(u)) {
    u = t.parent[u];
    if (u < 0) throw std::invalid_argument("tree does not cover the corner vertex");
    line.push_back(g.pos(u));
  }
  auto it = std::find(boundary_cycle_.begin(), boundary_cycle_.end(), u);
  if (it == boundary_cycle_.end()) throw std::logic_error("branch ends off the boundary cycle");
  for (++it; it != boundary_cycle_.end(); ++it) line.push_back(g.pos(*it));
  line.push_back(g.pos(boundary_cycle_.front()));
  return total_turning(line);
}

Rational height_from_winding(const TemperleyGraph& tg, const WiredTree& t, int x, int y) {
  if (x == y) return Rational(0);
  double w = (tg.corner_winding(t, x) - tg.corner_winding(t, y)) / (2 * kPi);
  return Rational(std::llround(8 * w), 8);
}

}  // namespace lozlab
