#include "lozlab/hexlattice.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace lozlab {

namespace {
const double kS3 = std::sqrt(3.0) / 2;

Point2 lattice_point(double u, double v) { return {u + v / 2, v * kS3}; }

bool point_in_polygon(Point2 p, const std::vector<Point2>& poly) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}
}  // namespace

Point2 FaceCoord::center() const { return lattice_point(u, v); }

Point2 TriCoord::centroid() const {
  return up ? lattice_point(u + 1.0 / 3, v + 1.0 / 3) : lattice_point(u + 2.0 / 3, v + 2.0 / 3);
}

std::array<TriCoord, 6> triangles_around(FaceCoord p) {
  return {{{p.u, p.v, true},
           {p.u - 1, p.v, true},
           {p.u, p.v - 1, true},
           {p.u - 1, p.v, false},
           {p.u, p.v - 1, false},
           {p.u - 1, p.v - 1, false}}};
}

TriCoord black_of(TriCoord w, int type) {
  switch (type) {
    case 0: return {w.u, w.v, false};
    case 1: return {w.u - 1, w.v, false};
    default: return {w.u, w.v - 1, false};
  }
}

LatticeStep lattice_step(FaceCoord p, int k) {
  const int u = p.u, v = p.v;
  switch (k) {
    case 0: return {{u, v, true}, {u, v - 1, false}, 2, true};
    case 1: return {{u, v, true}, {u - 1, v, false}, 1, false};
    case 2: return {{u - 1, v, true}, {u - 1, v, false}, 0, true};
    case 3: return {{u - 1, v, true}, {u - 1, v - 1, false}, 2, false};
    case 4: return {{u, v - 1, true}, {u - 1, v - 1, false}, 1, true};
    default: return {{u, v - 1, true}, {u, v - 1, false}, 0, false};
  }
}

std::pair<Point2, Point2> edge_segment(EdgeKey e) {
  TriCoord w{e.u, e.v, true};
  return {w.centroid(), black_of(w, e.type).centroid()};
}

double edge_distance(EdgeKey e, Point2 p) {
  auto [a, b] = edge_segment(e);
  return std::round(dist_point_segment(p, a, b) * 1e9) / 1e9;
}

// ---------------------------------------------------------------- HexDomain

int HexDomain::white_index(int u, int v) const {
  int x = u - u0_, y = v - v0_;
  if (x < 0 || y < 0 || x >= w_ || y >= h_) return -1;
  return wgrid_[y * w_ + x];
}

int HexDomain::black_index(int u, int v) const {
  int x = u - u0_, y = v - v0_;
  if (x < 0 || y < 0 || x >= w_ || y >= h_) return -1;
  return bgrid_[y * w_ + x];
}

int HexDomain::face_index(FaceCoord f) const {
  int x = f.u - u0_, y = f.v - v0_;
  if (x < 0 || y < 0 || x >= w_ || y >= h_) return -1;
  return fgrid_[y * w_ + x];
}

int HexDomain::edge_index(EdgeKey k) const {
  int w = white_index(k.u, k.v);
  if (w < 0 || k.type < 0 || k.type > 2) return -1;
  return edge_index(w, k.type);
}

EdgeKey HexDomain::edge_key(int e) const {
  const Edge& ed = edges_[e];
  return {whites_[ed.white].u, whites_[ed.white].v, ed.type};
}

std::vector<TriCoord> HexDomain::triangles() const {
  std::vector<TriCoord> all = whites_;
  all.insert(all.end(), blacks_.begin(), blacks_.end());
  std::sort(all.begin(), all.end());
  return all;
}

DomainPtr HexDomain::from_triangles(std::vector<TriCoord> tris, std::optional<FaceCoord> origin) {
  if (tris.empty()) throw std::invalid_argument("empty domain");
  std::sort(tris.begin(), tris.end());
  if (std::adjacent_find(tris.begin(), tris.end()) != tris.end())
    throw std::invalid_argument("duplicate triangle");
  auto d = std::make_shared<HexDomain>();
  for (const auto& t : tris) (t.up ? d->whites_ : d->blacks_).push_back(t);
  d->build(origin);
  return d;
}

void HexDomain::build(std::optional<FaceCoord> origin) {
  int umin = std::numeric_limits<int>::max(), vmin = umin, umax = std::numeric_limits<int>::min(), vmax = umax;
  for (const auto* list : {&whites_, &blacks_})
    for (const auto& t : *list) {
      umin = std::min(umin, t.u);
      vmin = std::min(vmin, t.v);
      umax = std::max(umax, t.u);
      vmax = std::max(vmax, t.v);
    }
  u0_ = umin - 2;
  v0_ = vmin - 2;
  w_ = umax - umin + 5;
  h_ = vmax - vmin + 5;
  wgrid_.assign(static_cast<std::size_t>(w_) * h_, -1);
  bgrid_ = wgrid_;
  fgrid_ = wgrid_;
  for (int i = 0; i < num_white(); ++i) wgrid_[(whites_[i].v - v0_) * w_ + whites_[i].u - u0_] = i;
  for (int i = 0; i < num_black(); ++i) bgrid_[(blacks_[i].v - v0_) * w_ + blacks_[i].u - u0_] = i;

  // honeycomb edges
  edges_.clear();
  white_edges_.assign(3 * whites_.size(), -1);
  black_edges_.assign(3 * blacks_.size(), -1);
  for (int i = 0; i < num_white(); ++i)
    for (int t = 0; t < 3; ++t) {
      TriCoord b = black_of(whites_[i], t);
      int bi = black_index(b.u, b.v);
      if (bi < 0) continue;
      white_edges_[3 * i + t] = static_cast<int>(edges_.size());
      black_edges_[3 * bi + t] = static_cast<int>(edges_.size());
      edges_.push_back({i, bi, t});
    }

  // edge-connectivity of triangles
  {
    int n = num_white() + num_black();
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    auto tri_id = [&](bool up, int idx) { return up ? idx : num_white() + idx; };
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      bool up = x < num_white();
      int idx = up ? x : x - num_white();
      for (int t = 0; t < 3; ++t) {
        int e = up ? white_edges_[3 * idx + t] : black_edges_[3 * idx + t];
        if (e < 0) continue;
        int y = up ? tri_id(false, edges_[e].black) : tri_id(true, edges_[e].white);
        if (!seen[y]) {
          seen[y] = 1;
          ++count;
          stack.push_back(y);
        }
      }
    }
    if (count != n) throw std::invalid_argument("domain triangles are not edge-connected");
  }

  // faces: corners of triangles
  faces_.clear();
  for (const auto& t : whites_) {
    faces_.push_back({t.u, t.v});
    faces_.push_back({t.u + 1, t.v});
    faces_.push_back({t.u, t.v + 1});
  }
  for (const auto& t : blacks_) {
    faces_.push_back({t.u + 1, t.v});
    faces_.push_back({t.u, t.v + 1});
    faces_.push_back({t.u + 1, t.v + 1});
  }
  std::sort(faces_.begin(), faces_.end());
  faces_.erase(std::unique(faces_.begin(), faces_.end()), faces_.end());
  for (int i = 0; i < num_faces(); ++i) fgrid_[(faces_[i].v - v0_) * w_ + faces_[i].u - u0_] = i;

  face_nbr_.assign(6 * faces_.size(), -1);
  interior_.assign(faces_.size(), 1);
  interior_list_.clear();
  long segs = 0;
  std::vector<std::array<int, 2>> bedges;  // (face, k) with domain on the left
  for (int f = 0; f < num_faces(); ++f) {
    for (int k = 0; k < 6; ++k) {
      LatticeStep s = lattice_step(faces_[f], k);
      bool win = contains(s.white), bin = contains(s.black);
      if (!win || !bin) interior_[f] = 0;
      if (!win && !bin) continue;
      face_nbr_[6 * f + k] = face_index(step(faces_[f], k));
      ++segs;
      bool left_in = s.white_left ? win : bin;
      if (left_in && !(win && bin)) bedges.push_back({f, k});
    }
    if (interior_[f]) interior_list_.push_back(f);
  }
  segs /= 2;
  long euler = static_cast<long>(faces_.size()) - segs + static_cast<long>(whites_.size() + blacks_.size());
  if (euler != 1) throw std::invalid_argument("domain is not simply connected");

  // boundary walk
  std::sort(bedges.begin(), bedges.end());
  auto is_bedge = [&](int f, int k) {
    return std::binary_search(bedges.begin(), bedges.end(), std::array<int, 2>{f, k});
  };
  bwalk_.clear();
  bdirs_.clear();
  {
    int f = bedges.front()[0], k = bedges.front()[1];
    const int f_start = f, k_start = k;
    do {
      bwalk_.push_back(f);
      bdirs_.push_back(k);
      int g = face_nbr_[6 * f + k];
      int krev = (k + 3) % 6;
      int next = -1;
      for (int j = 1; j <= 6; ++j) {
        int kk = (krev + j) % 6;
        if (is_bedge(g, kk)) {
          next = kk;
          break;
        }
      }
      if (next < 0) throw std::invalid_argument("broken boundary");
      f = g;
      k = next;
      if (bwalk_.size() > bedges.size()) throw std::invalid_argument("boundary walk does not close");
    } while (!(f == f_start && k == k_start));
    if (bwalk_.size() != bedges.size()) throw std::invalid_argument("boundary is not a single cycle");
  }
  bheights_.clear();
  if (balanced()) {
    std::vector<int> h(bwalk_.size());
    int cur = 0;
    for (std::size_t i = 0; i < bwalk_.size(); ++i) {
      h[i] = cur;
      cur += bdirs_[i] % 2 == 0 ? 1 : -1;
    }
    bheights_ = std::move(h);
  }

  if (origin) {
    if (face_index(*origin) < 0) throw std::invalid_argument("origin not a face of the domain");
    origin_ = *origin;
  } else {
    Point2 c{0, 0};
    for (const auto* list : {&whites_, &blacks_})
      for (const auto& t : *list) c = c + t.centroid();
    c = (1.0 / (whites_.size() + blacks_.size())) * c;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : faces_) {
      double dd = norm(f.center() - c);
      if (dd < best - 1e-9) {
        best = dd;
        origin_ = f;
      }
    }
  }
  Point2 o = origin_.center();
  radius_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bwalk_.size(); ++i) {
    FaceCoord a = faces_[bwalk_[i]];
    FaceCoord b = step(a, bdirs_[i]);
    radius_ = std::min(radius_, dist_point_segment(o, a.center(), b.center()));
  }
}

DomainPtr HexDomain::translated(int du, int dv) const {
  std::vector<TriCoord> tris = triangles();
  for (auto& t : tris) {
    t.u += du;
    t.v += dv;
  }
  return from_triangles(std::move(tris), FaceCoord{origin_.u + du, origin_.v + dv});
}

DomainPtr HexDomain::with_origin(FaceCoord o) const { return from_triangles(triangles(), o); }

DomainPtr HexDomain::without(const std::vector<TriCoord>& drop) const {
  std::vector<TriCoord> tris;
  for (const auto& t : triangles())
    if (std::find(drop.begin(), drop.end(), t) == drop.end()) tris.push_back(t);
  return from_triangles(std::move(tris), origin_);
}

DomainPtr build_hexagon(int a, int b, int c) {
  if (a < 1 || b < 1 || c < 1) throw std::invalid_argument("hexagon sides must be positive");
  std::vector<FaceCoord> corners;
  FaceCoord p{0, 0};
  const int len[6] = {a, b, c, a, b, c};
  for (int s = 0; s < 6; ++s) {
    corners.push_back(p);
    p = {p.u + len[s] * kDirs[s].u, p.v + len[s] * kDirs[s].v};
  }
  std::vector<Point2> poly;
  for (auto& q : corners) poly.push_back(q.center());
  std::vector<TriCoord> tris;
  for (int v = -1; v <= b + c + 1; ++v)
    for (int u = -c - 1; u <= a + 1; ++u)
      for (bool up : {true, false}) {
        TriCoord t{u, v, up};
        if (point_in_polygon(t.centroid(), poly)) tris.push_back(t);
      }
  std::sort(tris.begin(), tris.end());
  auto d = std::make_shared<HexDomain>();
  for (const auto& t : tris) (t.up ? d->whites_ : d->blacks_).push_back(t);
  d->sides_ = std::array<int, 3>{a, b, c};
  d->build(std::nullopt);
  return d;
}

// ---------------------------------------------------------------- DimerConfig

DimerConfig::DimerConfig(DomainPtr d, const std::vector<int>& edge_ids) : dom_(std::move(d)) {
  if (!dom_) throw std::invalid_argument("null domain");
  wtype_.assign(dom_->num_white(), -1);
  bwhite_.assign(dom_->num_black(), -1);
  if (!dom_->balanced() || static_cast<int>(edge_ids.size()) != dom_->num_white())
    throw std::invalid_argument("not a perfect matching");
  for (int e : edge_ids) {
    if (e < 0 || e >= static_cast<int>(dom_->edges().size())) throw std::invalid_argument("bad edge id");
    const auto& ed = dom_->edges()[e];
    if (wtype_[ed.white] >= 0 || bwhite_[ed.black] >= 0) throw std::invalid_argument("not a perfect matching");
    wtype_[ed.white] = static_cast<std::int8_t>(ed.type);
    bwhite_[ed.black] = ed.white;
  }
}

DimerConfig DimerConfig::from_white_types(DomainPtr d, std::vector<std::int8_t> types) {
  std::vector<int> ids;
  ids.reserve(types.size());
  if (static_cast<int>(types.size()) != d->num_white()) throw std::invalid_argument("not a perfect matching");
  for (int w = 0; w < d->num_white(); ++w) {
    int e = types[w] < 0 || types[w] > 2 ? -1 : d->edge_index(w, types[w]);
    if (e < 0) throw std::invalid_argument("not a perfect matching");
    ids.push_back(e);
  }
  return DimerConfig(std::move(d), ids);
}

bool DimerConfig::has_edge(int e) const {
  const auto& ed = dom_->edges()[e];
  return wtype_[ed.white] == ed.type;
}

bool DimerConfig::has_edge(EdgeKey k) const {
  int w = dom_->white_index(k.u, k.v);
  return w >= 0 && wtype_[w] == k.type;
}

std::vector<int> DimerConfig::edge_ids() const {
  std::vector<int> ids(wtype_.size());
  for (int w = 0; w < static_cast<int>(wtype_.size()); ++w) ids[w] = dom_->edge_index(w, wtype_[w]);
  return ids;
}

std::vector<EdgeKey> DimerConfig::edge_keys() const {
  std::vector<EdgeKey> out;
  out.reserve(wtype_.size());
  for (int w = 0; w < static_cast<int>(wtype_.size()); ++w)
    out.push_back({dom_->whites()[w].u, dom_->whites()[w].v, wtype_[w]});
  return out;
}

std::array<int, 3> DimerConfig::type_counts() const {
  std::array<int, 3> c{0, 0, 0};
  for (auto t : wtype_) ++c[t];
  return c;
}

// ---------------------------------------------------------------- heights

int height_increment(const DimerConfig& m, FaceCoord f, int k) {
  LatticeStep s = lattice_step(f, k);
  int w = m.domain().white_index(s.white.u, s.white.v);
  bool matched = w >= 0 && m.white_type(w) == s.type;
  int inc = matched ? -2 : 1;
  return s.white_left ? inc : -inc;
}

std::vector<int> face_heights(const DimerConfig& m, int pin_face) {
  const HexDomain& d = m.domain();
  std::vector<int> h(d.num_faces(), std::numeric_limits<int>::min());
  std::vector<int> queue{pin_face};
  h[pin_face] = 0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int f = queue[qi];
    for (int k = 0; k < 6; ++k) {
      int g = d.face_neighbor(f, k);
      if (g < 0 || h[g] != std::numeric_limits<int>::min()) continue;
      h[g] = h[f] + height_increment(m, d.faces()[f], k);
      queue.push_back(g);
    }
  }
  return h;
}

bool heights_consistent(const DimerConfig& m, const std::vector<int>& h) {
  const HexDomain& d = m.domain();
  for (int f = 0; f < d.num_faces(); ++f)
    for (int k = 0; k < 6; ++k) {
      int g = d.face_neighbor(f, k);
      if (g >= 0 && h[g] - h[f] != height_increment(m, d.faces()[f], k)) return false;
    }
  return true;
}

std::optional<int> HeightField::find(FaceCoord f) const {
  auto it = std::lower_bound(faces.begin(), faces.end(), f);
  if (it == faces.end() || *it != f) return std::nullopt;
  return values[it - faces.begin()];
}

int HeightField::at(FaceCoord f) const {
  auto v = find(f);
  if (!v) throw std::out_of_range("face not in height field");
  return *v;
}

HeightField height_field(const DimerConfig& m, FaceCoord pin) {
  int p = m.domain().face_index(pin);
  if (p < 0) throw std::invalid_argument("pin is not a face of the domain");
  HeightField out;
  out.faces = m.domain().faces();
  out.values = face_heights(m, p);
  out.pin = pin;
  return out;
}

Rational lipschitz_bound(const HeightField& h) {
  const int n = static_cast<int>(h.faces.size());
  if (n == 0) throw std::invalid_argument("empty height field");
  std::map<FaceCoord, int> idx;
  for (int i = 0; i < n; ++i) idx[h.faces[i]] = i;
  std::vector<std::array<int, 6>> nbr(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 6; ++k) {
      auto it = idx.find(step(h.faces[i], k));
      nbr[i][k] = it == idx.end() ? -1 : it->second;
    }
  Rational best(0);
  std::vector<int> dist(n);
  std::vector<int> queue;
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.assign(1, s);
    dist[s] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int f = queue[qi];
      for (int g : nbr[f])
        if (g >= 0 && dist[g] < 0) {
          dist[g] = dist[f] + 1;
          queue.push_back(g);
        }
    }
    for (int t = s + 1; t < n; ++t) {
      if (dist[t] < 0) throw std::invalid_argument("height field on a disconnected face set");
      Rational c(std::abs(h.values[t] - h.values[s]), dist[t] + 1);
      if (c > best) best = c;
    }
  }
  return best;
}

BoundaryCurve boundary_curve(const HexDomain& d) {
  if (!d.balanced()) throw UntileableError("domain is unbalanced");
  const auto& walk = d.boundary_walk();
  const auto& dirs = d.boundary_dirs();
  FaceCoord s = d.faces()[walk[0]];
  std::array<int, 3> p{s.u + s.v, s.v, 0};
  BoundaryCurve c;
  c.points.push_back(p);
  for (int k : dirs) {
    // d0,d2,d4 -> +x,+y,+z ; d3,d5,d1 -> -x,-y,-z
    static const int axis[6] = {0, 2, 1, 0, 2, 1};
    static const int sign[6] = {1, -1, 1, -1, 1, -1};
    p[axis[k]] += sign[k];
    c.points.push_back(p);
  }
  if (c.points.front() != c.points.back()) throw UntileableError("boundary curve does not close");
  return c;
}

// ---------------------------------------------------------------- windows

WindowPattern local_window(const DimerConfig& m, double r) {
  const HexDomain& d = m.domain();
  if (!(r > 0)) throw std::invalid_argument("window radius must be positive");
  if (r > d.radius() + 1e-12) throw std::invalid_argument("window radius exceeds domain radius");
  Point2 o = d.origin().center();
  WindowPattern out;
  for (int w = 0; w < d.num_white(); ++w) {
    EdgeKey k{d.whites()[w].u, d.whites()[w].v, m.white_type(w)};
    if (edge_distance(k, o) < r) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double agreement_radius(const DimerConfig& a, const DimerConfig& b) {
  std::vector<EdgeKey> ka = a.edge_keys(), kb = b.edge_keys();
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  std::vector<EdgeKey> diff;
  std::set_symmetric_difference(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(diff));
  Point2 o = a.domain().origin().center();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& k : diff) best = std::min(best, edge_distance(k, o));
  return best;
}

}  // namespace lozlab
