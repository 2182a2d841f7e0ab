#include "lozlab/lab.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lozlab {

json tiling_to_json(const DimerConfig& m) { return m.edge_ids(); }

namespace {

json tri_json(TriCoord t) { return json::array({t.u, t.v, t.up}); }

json component_json(const DDComponent& c) {
  json verts = json::array();
  for (const auto& t : c.verts) verts.push_back(tri_json(t));
  json flags = json::array();
  for (auto f : c.in_m) flags.push_back(static_cast<bool>(f));
  return {{"verts", verts}, {"in_m", flags}, {"orientation", c.orientation}};
}

}  // namespace

json decomposition_to_json(const LoopDecomposition& dec) {
  json doubled = json::array(), loops = json::array(), paths = json::array();
  for (const auto& k : dec.doubled) doubled.push_back({k.u, k.v, k.type});
  for (const auto& c : dec.loops) loops.push_back(component_json(c));
  for (const auto& c : dec.paths) paths.push_back(component_json(c));
  return {{"doubled", doubled}, {"loops", loops}, {"paths", paths}};
}

json graph_to_json(const PlanarGraph& g) {
  json vs = json::array(), es = json::array();
  for (int v = 0; v < g.num_vertices(); ++v) vs.push_back({{"x", g.pos(v).x}, {"y", g.pos(v).y}, {"boundary", g.is_boundary(v)}});
  for (int e = 0; e < g.num_edges(); ++e) {
    auto [a, b] = g.edges()[e];
    auto [wab, wba] = g.edge_weights()[e];
    es.push_back({{"a", a}, {"b", b}, {"w_ab", wab}, {"w_ba", wba}});
  }
  return {{"vertices", vs}, {"edges", es}};
}

PlanarGraph graph_from_json(const json& j) {
  PlanarGraph g;
  for (const auto& v : j.at("vertices")) g.add_vertex({v.at("x").get<double>(), v.at("y").get<double>()}, v.value("boundary", false));
  for (const auto& e : j.at("edges"))
    g.add_edge(e.at("a").get<int>(), e.at("b").get<int>(), e.value("w_ab", 1.0), e.value("w_ba", 1.0));
  g.finalize(j.value("check_planar", true));
  return g;
}

json tree_to_json(const WiredTree& t) { return {{"parent", t.parent}}; }

WiredTree tree_from_json(const json& j) {
  WiredTree t;
  j.at("parent").get_to(t.parent);
  return t;
}

DomainPtr domain_from_spec(const std::string& spec) {
  int a, b, c;
  char tail;
  if (std::sscanf(spec.c_str(), "hex:%d,%d,%d%c", &a, &b, &c, &tail) != 3)
    throw std::invalid_argument("domain spec must look like hex:a,b,c");
  return build_hexagon(a, b, c);
}

// ---------------------------------------------------------------- svg

namespace {

constexpr double kScale = 24;
const char* kTypeColor[3] = {"#e4572e", "#4c6ef5", "#f3a712"};

std::array<FaceCoord, 3> corners(TriCoord t) {
  if (t.up) return {{{t.u, t.v}, {t.u + 1, t.v}, {t.u, t.v + 1}}};
  return {{{t.u + 1, t.v}, {t.u, t.v + 1}, {t.u + 1, t.v + 1}}};
}

class Canvas {
 public:
  void include(Point2 p) {
    x0_ = std::min(x0_, p.x), x1_ = std::max(x1_, p.x);
    y0_ = std::min(y0_, p.y), y1_ = std::max(y1_, p.y);
  }
  Point2 map(Point2 p) const { return {(p.x - x0_ + 1) * kScale, (y1_ - p.y + 1) * kScale}; }
  std::string pt(Point2 p) const {
    char buf[64];
    Point2 q = map(p);
    std::snprintf(buf, sizeof buf, "%.3f,%.3f", q.x, q.y);
    return buf;
  }
  std::string open() const {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                  (x1_ - x0_ + 2) * kScale, (y1_ - y0_ + 2) * kScale, (x1_ - x0_ + 2) * kScale, (y1_ - y0_ + 2) * kScale);
    return buf;
  }

 private:
  double x0_ = std::numeric_limits<double>::infinity(), x1_ = -x0_, y0_ = x0_, y1_ = -x0_;
};

std::string points(const Canvas& cv, const std::vector<Point2>& ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? " " : "") + cv.pt(ps[i]);
  return s;
}

}  // namespace

std::string svg_of(const DimerConfig& m) {
  const HexDomain& d = m.domain();
  Canvas cv;
  for (const auto& f : d.faces()) cv.include(f.center());
  std::ostringstream os;
  os << cv.open();
  for (int w = 0; w < d.num_white(); ++w) {
    TriCoord white = d.whites()[w];
    const int type = m.white_type(w);
    auto a = corners(white), b = corners(black_of(white, type));
    // lozenge: white's lone corner, shared, black's lone corner, shared
    std::vector<FaceCoord> shared, lone_a, lone_b;
    for (auto p : a) (std::find(b.begin(), b.end(), p) != b.end() ? shared : lone_a).push_back(p);
    for (auto p : b)
      if (std::find(a.begin(), a.end(), p) == a.end()) lone_b.push_back(p);
    std::vector<Point2> poly{lone_a[0].center(), shared[0].center(), lone_b[0].center(), shared[1].center()};
    os << "<polygon points=\"" << points(cv, poly) << "\" fill=\"" << kTypeColor[type]
       << "\" stroke=\"#222\" stroke-width=\"1\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_of(const LoopDecomposition& dec) {
  Canvas cv;
  for (const auto* dom : {dec.d1.get(), dec.d2.get()})
    for (const auto& f : dom->faces()) cv.include(f.center());
  std::ostringstream os;
  os << cv.open();
  for (const auto& k : dec.doubled) {
    TriCoord w{k.u, k.v, true};
    os << "<polyline points=\"" << points(cv, {w.centroid(), black_of(w, k.type).centroid()})
       << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"3\"/>\n";
  }
  for (const auto& c : dec.loops) {
    std::vector<Point2> ps;
    for (const auto& t : c.verts) ps.push_back(t.centroid());
    os << "<polygon points=\"" << points(cv, ps) << "\" fill=\"none\" stroke=\"" << (c.orientation > 0 ? "#d62828" : "#1d3557")
       << "\" stroke-width=\"2\"/>\n";
  }
  for (const auto& c : dec.paths) {
    std::vector<Point2> ps;
    for (const auto& t : c.verts) ps.push_back(t.centroid());
    os << "<polyline points=\"" << points(cv, ps) << "\" fill=\"none\" stroke=\"#2a9d8f\" stroke-width=\"2\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_of(const PlanarGraph& g, const WiredTree& t) {
  if (static_cast<int>(t.parent.size()) != g.num_vertices()) throw std::invalid_argument("tree does not match graph");
  Canvas cv;
  for (int v = 0; v < g.num_vertices(); ++v) cv.include(g.pos(v));
  std::ostringstream os;
  os << cv.open();
  os << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"4\" markerHeight=\"4\" "
        "orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#333\"/></marker></defs>\n";
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (t.parent[v] < 0) continue;
    os << "<polyline points=\"" << points(cv, {g.pos(v), g.pos(t.parent[v])})
       << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>\n";
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!g.is_boundary(v)) continue;
    char buf[128];
    Point2 q = cv.map(g.pos(v));
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"#2a9d8f\"/>\n", q.x, q.y);
    os << buf;
  }
  os << "</svg>\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path);
}

}  // namespace lozlab
