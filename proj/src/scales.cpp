#include "lozlab/scales.hpp"

#include "lozlab/stats.hpp"
#include "lozlab/tiling_sampler.hpp"

#include <algorithm>
#include <complex>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace lozlab {

std::vector<int> CrossingTrace::visits(int j) const {
  std::vector<int> out;
  for (int k = 0; k <= k_max(); ++k)
    if (index[k] == j) out.push_back(k);
  return out;
}

int CrossingTrace::kappa(int i) const {
  for (int k = k_max(); k >= 0; --k)
    if (index[k] == i) return k;
  return -1;
}

std::string CrossingTrace::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "k,tau,i,radius\n";
  for (int k = 0; k <= k_max(); ++k) os << k << ',' << tau[k] << ',' << index[k] << ',' << norm(at[k] - origin) << '\n';
  return os.str();
}

CrossingTrace crossing_decomposition(const Polyline& x, int i_min, int i_max, Point2 origin) {
  if (i_min >= i_max) throw std::invalid_argument("need i_min < i_max");
  if (x.empty()) throw std::invalid_argument("empty walk");
  if (norm(x[0] - origin) >= CrossingTrace::radius(i_min)) throw std::invalid_argument("walk must start inside C_imin");
  CrossingTrace tr;
  tr.i_min = i_min;
  tr.i_max = i_max;
  tr.origin = origin;
  auto push = [&](std::size_t t, int i) {
    tr.tau.push_back(t);
    tr.index.push_back(i);
    tr.at.push_back(x[t]);
  };
  push(0, i_min - 1);
  int cur = i_min - 1;
  for (std::size_t t = 1; t < x.size(); ++t) {
    const double r = norm(x[t] - origin);
    while (true) {
      std::optional<int> out, in;
      if (cur + 1 <= i_max - 1) out = cur + 1;
      if (cur > i_min) in = cur - 1;
      if (out && r >= CrossingTrace::radius(*out)) {
        cur = *out;
      } else if (in && r < CrossingTrace::radius(*in)) {
        cur = *in;
      } else {
        break;
      }
      push(t, cur);
    }
  }
  push(x.size() - 1, i_max);
  return tr;
}

CrossingTrace crossing_decomposition(const PlanarGraph& g, const WalkPath& x, int i_min, int i_max, Point2 origin) {
  if (x.empty() || !g.is_boundary(x.back())) throw std::invalid_argument("walk never exits the domain");
  Polyline p;
  p.reserve(x.size());
  for (int v : x) p.push_back(g.pos(v));
  return crossing_decomposition(p, i_min, i_max, origin);
}

ScaleClassification classify_scales(const CrossingTrace& tr) {
  ScaleClassification out;
  for (int i = tr.i_min; i < tr.i_max; ++i) {
    int a = tr.kappa(i - 1), b = tr.kappa(i), c = tr.kappa(i + 1);
    if (a < 0 || b < 0 || c < 0) continue;
    if (a == b - 1 && b == c - 1) {
      out.pre_isolated.push_back(i);
      if (((i % 2) + 2) % 2 == 0) out.even.push_back(i);
    }
  }
  return out;
}

namespace {

Polyline slice(const Polyline& x, std::size_t a, std::size_t b) { return {x.begin() + a, x.begin() + b + 1}; }

}  // namespace

void isolated_scales(const CrossingTrace& tr, const Polyline& x, ScaleClassification& cls) {
  cls.isolated.clear();
  for (int i : cls.even) {
    int k = tr.kappa(i);
    if (k < 1 || k + 2 > tr.k_max()) continue;
    if (tr.tau[k + 2] >= x.size()) throw std::invalid_argument("trace does not match the walk");
    if (!separates(slice(x, tr.tau[k - 1], tr.tau[k]), tr.origin)) continue;
    const double r = std::exp(i + 6.0 / 7.0);
    bool clear = true;
    for (std::size_t t = tr.tau[k + 1]; t < tr.tau[k + 2] && clear; ++t)
      clear = dist_point_segment(tr.origin, x[t], x[t + 1]) >= r;
    if (clear) cls.isolated.push_back(i);
  }
}

bool separates(const Polyline& piece, Point2 z) {
  if (piece.size() < 2) return false;
  std::map<std::pair<double, double>, int> id;
  std::vector<Point2> pts;
  auto vid = [&](Point2 p) {
    auto [it, fresh] = id.try_emplace({p.x, p.y}, static_cast<int>(pts.size()));
    if (fresh) pts.push_back(p);
    return it->second;
  };
  std::vector<std::pair<int, int>> segs;
  double longest = 0;
  for (std::size_t t = 0; t + 1 < piece.size(); ++t) {
    int a = vid(piece[t]), b = vid(piece[t + 1]);
    if (a == b) continue;
    if (dist_point_segment(z, piece[t], piece[t + 1]) == 0) return false;
    segs.emplace_back(std::min(a, b), std::max(a, b));
    longest = std::max(longest, norm(piece[t + 1] - piece[t]));
  }
  std::sort(segs.begin(), segs.end());
  segs.erase(std::unique(segs.begin(), segs.end()), segs.end());
  if (segs.empty()) return false;

  // split at crossings and touchings, found through a uniform bucket grid
  const double cell = longest;
  std::unordered_map<long long, std::vector<int>> buckets;
  auto key = [](long long cx, long long cy) { return cx * 2654435761LL ^ cy; };
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    Point2 a = pts[segs[s].first], b = pts[segs[s].second];
    long long x0 = std::floor(std::min(a.x, b.x) / cell), x1 = std::floor(std::max(a.x, b.x) / cell);
    long long y0 = std::floor(std::min(a.y, b.y) / cell), y1 = std::floor(std::max(a.y, b.y) / cell);
    for (long long cx = x0; cx <= x1; ++cx)
      for (long long cy = y0; cy <= y1; ++cy) buckets[key(cx, cy)].push_back(s);
  }
  std::vector<std::vector<std::pair<double, int>>> cuts(segs.size());
  auto param = [&](int s, Point2 p) {
    Point2 a = pts[segs[s].first], b = pts[segs[s].second];
    return dot(p - a, b - a) / dot(b - a, b - a);
  };
  auto add_cut = [&](int s, int v) {
    if (v == segs[s].first || v == segs[s].second) return;
    cuts[s].emplace_back(param(s, pts[v]), v);
  };
  std::set<std::pair<int, int>> tested;
  for (auto& [_, list] : buckets)
    for (std::size_t i = 0; i < list.size(); ++i)
      for (std::size_t j = i + 1; j < list.size(); ++j) {
        int s1 = std::min(list[i], list[j]), s2 = std::max(list[i], list[j]);
        if (!tested.insert({s1, s2}).second) continue;
        auto [a, b] = segs[s1];
        auto [c, d] = segs[s2];
        if (a == c || a == d || b == c || b == d) {
          // shared endpoint: only a collinear overlap needs cuts
          Point2 u = pts[b] - pts[a], w = pts[d] - pts[c];
          if (cross(u, w) != 0) continue;
        }
        Point2 pa = pts[a], pb = pts[b], pc = pts[c], pd = pts[d];
        if (!segments_intersect(pa, pb, pc, pd)) continue;
        Point2 u = pb - pa, w = pd - pc;
        double den = cross(u, w);
        if (den == 0) {
          for (int v : {c, d})
            if (dist_point_segment(pts[v], pa, pb) == 0) add_cut(s1, v);
          for (int v : {a, b})
            if (dist_point_segment(pts[v], pc, pd) == 0) add_cut(s2, v);
          continue;
        }
        double t = cross(pc - pa, w) / den;
        int v = -1;
        for (int e : {a, b, c, d})
          if (dist_point_segment(pts[e], pa, pb) == 0 && dist_point_segment(pts[e], pc, pd) == 0) v = e;
        if (v < 0) v = vid(pa + t * u);
        add_cut(s1, v);
        add_cut(s2, v);
      }
  std::vector<std::pair<int, int>> edges;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    auto& c = cuts[s];
    std::sort(c.begin(), c.end());
    int prev = segs[s].first;
    for (auto [_, v] : c) {
      if (v != prev) edges.emplace_back(prev, v);
      prev = v;
    }
    if (prev != segs[s].second) edges.emplace_back(prev, segs[s].second);
  }
  for (auto& e : edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  // continuous argument on a spanning forest; a cycle with nonzero winding separates
  const int n = static_cast<int>(pts.size());
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    adj[edges[e].first].emplace_back(edges[e].second, e);
    adj[edges[e].second].emplace_back(edges[e].first, e);
  }
  auto turn = [&](int a, int b) {
    Point2 p = pts[a] - z, q = pts[b] - z;
    return std::atan2(cross(p, q), dot(p, q));
  };
  std::vector<double> phi(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<char> tree_edge(edges.size(), 0);
  for (int r = 0; r < n; ++r) {
    if (!std::isnan(phi[r]) || adj[r].empty()) continue;
    phi[r] = 0;
    std::deque<int> q{r};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (auto [w, e] : adj[v])
        if (std::isnan(phi[w])) {
          phi[w] = phi[v] + turn(v, w);
          tree_edge[e] = 1;
          q.push_back(w);
        }
    }
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (tree_edge[e]) continue;
    auto [a, b] = edges[e];
    if (std::abs(phi[a] + turn(a, b) - phi[b]) > kPi) return true;
  }
  return false;
}

GammaCurves gamma_curves(int j, double theta, int per_piece) {
  if (!(theta >= 0 && theta <= kPi)) throw std::invalid_argument("theta must lie in [0, pi]");
  using C = std::complex<double>;
  const C I(0, 1);
  const double jd = j;
  auto build = [&](const std::vector<std::function<C(double)>>& pieces) {
    Polyline out;
    for (std::size_t p = 0; p < pieces.size(); ++p)
      for (int s = (p == 0 ? 0 : 1); s <= per_piece; ++s) {
        C c = std::exp(pieces[p](p + static_cast<double>(s) / per_piece));
        Point2 q{c.real(), c.imag()};
        if (out.empty() || q.x != out.back().x || q.y != out.back().y) out.push_back(q);
      }
    return out;
  };
  GammaCurves g;
  g.g1 = build({
      [&](double t) { return C(jd + t / 2); },
      [&](double t) { return jd + 0.5 + I * theta * (t - 1); },
      [&](double t) { return jd + I * theta + (t - 1) / 2; },
  });
  g.g2 = build({
      [&](double t) { return C(jd + t / 3); },
      [&](double t) { return jd + 1.0 / 3 - I * kPi * (t - 1); },
      [&](double t) { return jd + (t - 1) / 3 - I * kPi; },
      [&](double t) { return jd + 2.0 / 3 - I * kPi - I * (kPi - theta) * (t - 3); },
      [&](double t) { return jd + (t - 2) / 3 + I * theta; },
  });
  g.winding_difference = winding_topological(g.g2, {0, 0}) - winding_topological(g.g1, {0, 0});
  return g;
}

Polyline densify(const Polyline& p, double spacing) {
  if (p.size() < 2) return p;
  Polyline out{p[0]};
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    int m = std::max(1, static_cast<int>(std::ceil(norm(p[i + 1] - p[i]) / spacing)));
    for (int s = 1; s <= m; ++s) out.push_back(s == m ? p[i + 1] : p[i] + (static_cast<double>(s) / m) * (p[i + 1] - p[i]));
  }
  return out;
}

double discrete_frechet(const Polyline& a, const Polyline& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty polyline");
  std::vector<double> prev(b.size()), cur(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      double d = norm(a[i] - b[j]);
      double best;
      if (i == 0 && j == 0) best = 0;
      else if (i == 0) best = cur[j - 1];
      else if (j == 0) best = prev[0];
      else best = std::min({prev[j], prev[j - 1], cur[j - 1]});
      cur[j] = std::max(d, best);
    }
    std::swap(prev, cur);
  }
  return prev.back();
}

double frechet_distance(const Polyline& a, const Polyline& b, int j) {
  const double s = std::exp(static_cast<double>(j)) / 240;
  return discrete_frechet(densify(a, s), densify(b, s));
}

bool follows(const Polyline& piece, const Polyline& c, int j) {
  return frechet_distance(piece, c, j) <= std::exp(static_cast<double>(j)) / 12;
}

CrossingEstimate uniform_crossing_estimate(const PlanarGraph& g, double n, long trials, Rng& rng) {
  if (trials <= 0) throw std::invalid_argument("need trials > 0");
  int v0 = g.nearest_vertex({0, 0});
  double h = 0;
  for (const auto& a : g.arcs(v0)) h += norm(g.pos(a.to) - g.pos(v0));
  h /= std::max(1, g.degree(v0));
  const Point2 rots[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  CrossingEstimate out;
  out.trials_per_cell = trials;
  std::vector<char> status(g.num_vertices());
  for (Point2 z : {Point2{0, 0}, Point2{h / 2, 0}, Point2{0, h / 2}, Point2{h / 2, h / 2}})
    for (Point2 rot : rots) {
      // local rectangle coordinates of a vertex
      auto local = [&](Point2 p) {
        Point2 d = p - z;
        Point2 q{(rot.x * d.x + rot.y * d.y) / n, (-rot.y * d.x + rot.x * d.y) / n};
        return q + Point2{1.5, 0.5};
      };
      std::vector<int> starts;
      for (int v = 0; v < g.num_vertices(); ++v) {
        Point2 q = local(g.pos(v));
        if (g.is_boundary(v) || q.x < 0 || q.x > 3 || q.y < 0 || q.y > 1) status[v] = 2;
        else if (norm(q - Point2{2.5, 0.5}) <= 0.25) status[v] = 1;
        else status[v] = 0;
        if (status[v] == 0 && norm(q - Point2{0.5, 0.5}) <= 0.25) starts.push_back(v);
      }
      if (starts.empty()) throw std::invalid_argument("no vertex in the start ball");
      long hits = 0;
      for (long t = 0; t < trials; ++t) {
        int v = starts[uniform_below(rng, starts.size())];
        while (status[v] == 0) v = g.step(v, rng);
        hits += status[v] == 1;
      }
      out.cell_rates.push_back(static_cast<double>(hits) / trials);
    }
  auto it = std::min_element(out.cell_rates.begin(), out.cell_rates.end());
  out.alpha = *it;
  double hw = binomial_halfwidth(out.alpha, static_cast<double>(trials), 0.99);
  out.ci_low = std::max(0.0, out.alpha - hw);
  out.ci_high = std::min(1.0, out.alpha + hw);
  return out;
}

}  // namespace lozlab
