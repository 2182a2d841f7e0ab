#pragma once

#include "lozlab/core.hpp"

#include <array>
#include <compare>
#include <memory>
#include <optional>
#include <vector>

namespace lozlab {

// Lattice points of the triangular lattice = faces of the honeycomb.
// (u,v) sits at u*(1,0) + v*(1/2, sqrt3/2).
struct FaceCoord {
  int u = 0;
  int v = 0;
  auto operator<=>(const FaceCoord&) const = default;
  Point2 center() const;
};

// d0..d5, counterclockwise from east
inline constexpr std::array<FaceCoord, 6> kDirs{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

inline FaceCoord step(FaceCoord p, int k) { return {p.u + kDirs[k].u, p.v + kDirs[k].v}; }

// Triangles = honeycomb vertices. up(u,v) has corners (u,v),(u+1,v),(u,v+1) and is white;
// down(u,v) has corners (u+1,v),(u,v+1),(u+1,v+1) and is black.
struct TriCoord {
  int u = 0;
  int v = 0;
  bool up = true;
  auto operator<=>(const TriCoord&) const = default;
  Point2 centroid() const;
};

// Honeycomb edge: white up(u,v) plus type t. t=0 -> down(u,v), t=1 -> down(u-1,v), t=2 -> down(u,v-1).
struct EdgeKey {
  int u = 0;
  int v = 0;
  int type = 0;
  auto operator<=>(const EdgeKey&) const = default;
};

TriCoord black_of(TriCoord white, int type);
// the six triangles with corner p
std::array<TriCoord, 6> triangles_around(FaceCoord p);

// The lattice segment p -> p+d_k: its two triangles and the honeycomb edge crossing it.
struct LatticeStep {
  TriCoord white;
  TriCoord black;
  int type;
  bool white_left;  // true for even k
};
LatticeStep lattice_step(FaceCoord p, int k);

// Segment in the plane joining the two centroids.
std::pair<Point2, Point2> edge_segment(EdgeKey e);
// distance from p to the edge, snapped to a 1e-9 grid so ties are exact
double edge_distance(EdgeKey e, Point2 p);

class HexDomain;
using DomainPtr = std::shared_ptr<const HexDomain>;

class HexDomain {
 public:
  struct Edge {
    int white;
    int black;
    int type;
  };

  // Triangles may come in any order; duplicates rejected. Connectivity and
  // simple-connectedness are checked; balance is not (see balanced()).
  static DomainPtr from_triangles(std::vector<TriCoord> tris, std::optional<FaceCoord> origin = {});

  int num_white() const { return static_cast<int>(whites_.size()); }
  int num_black() const { return static_cast<int>(blacks_.size()); }
  bool balanced() const { return whites_.size() == blacks_.size(); }
  const std::vector<TriCoord>& whites() const { return whites_; }
  const std::vector<TriCoord>& blacks() const { return blacks_; }
  std::vector<TriCoord> triangles() const;
  int white_index(int u, int v) const;
  int black_index(int u, int v) const;
  bool contains(TriCoord t) const { return (t.up ? white_index(t.u, t.v) : black_index(t.u, t.v)) >= 0; }

  const std::vector<Edge>& edges() const { return edges_; }
  int edge_index(int white, int type) const { return white_edges_[3 * white + type]; }
  int black_edge(int black, int type) const { return black_edges_[3 * black + type]; }
  int edge_index(EdgeKey k) const;
  EdgeKey edge_key(int e) const;

  const std::vector<FaceCoord>& faces() const { return faces_; }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int face_index(FaceCoord f) const;
  // -1 when the segment f -> f+d_k has no triangle of the domain on either side
  int face_neighbor(int f, int k) const { return face_nbr_[6 * f + k]; }
  bool is_interior(int f) const { return interior_[f] != 0; }
  const std::vector<int>& interior_faces() const { return interior_list_; }
  bool is_boundary_face(int f) const { return !interior_[f]; }

  // Boundary as a closed walk with the domain on the left. walk[i] -> walk[i+1] uses dir[i].
  const std::vector<int>& boundary_walk() const { return bwalk_; }
  const std::vector<int>& boundary_dirs() const { return bdirs_; }
  // Heights of boundary faces relative to boundary_walk()[0]; empty if unbalanced.
  const std::vector<int>& boundary_heights() const { return bheights_; }

  FaceCoord origin() const { return origin_; }
  int origin_face() const { return face_index(origin_); }
  double radius() const { return radius_; }

  std::optional<std::array<int, 3>> sides() const { return sides_; }
  DomainPtr translated(int du, int dv) const;
  DomainPtr with_origin(FaceCoord o) const;
  // same origin, the listed triangles removed
  DomainPtr without(const std::vector<TriCoord>& drop) const;

 private:
  friend DomainPtr build_hexagon(int a, int b, int c);
  void build(std::optional<FaceCoord> origin);

  std::vector<TriCoord> whites_, blacks_;
  int u0_ = 0, v0_ = 0, w_ = 0, h_ = 0;  // lookup box
  std::vector<int> wgrid_, bgrid_, fgrid_;
  std::vector<Edge> edges_;
  std::vector<int> white_edges_, black_edges_;
  std::vector<FaceCoord> faces_;
  std::vector<int> face_nbr_;
  std::vector<char> interior_;
  std::vector<int> interior_list_;
  std::vector<int> bwalk_, bdirs_, bheights_;
  FaceCoord origin_;
  double radius_ = 0;
  std::optional<std::array<int, 3>> sides_;
};

DomainPtr build_hexagon(int a, int b, int c);

class DimerConfig {
 public:
  // Throws std::invalid_argument unless edge_ids is a perfect matching of d.
  DimerConfig(DomainPtr d, const std::vector<int>& edge_ids);
  static DimerConfig from_white_types(DomainPtr d, std::vector<std::int8_t> types);

  const HexDomain& domain() const { return *dom_; }
  const DomainPtr& domain_ptr() const { return dom_; }
  int white_type(int w) const { return wtype_[w]; }
  int white_edge(int w) const { return dom_->edge_index(w, wtype_[w]); }
  int black_white(int b) const { return bwhite_[b]; }
  bool has_edge(int e) const;
  bool has_edge(EdgeKey k) const;
  std::vector<int> edge_ids() const;
  std::vector<EdgeKey> edge_keys() const;
  // lozenge orientation counts: index = edge type
  std::array<int, 3> type_counts() const;
  const std::vector<std::int8_t>& white_types() const { return wtype_; }

  bool operator==(const DimerConfig& o) const { return dom_ == o.dom_ && wtype_ == o.wtype_; }

 private:
  DimerConfig() = default;
  DomainPtr dom_;
  std::vector<std::int8_t> wtype_;
  std::vector<int> bwhite_;
};

// Height increment along f -> f+d_k (the segment must belong to the domain).
int height_increment(const DimerConfig& m, FaceCoord f, int k);

struct HeightField {
  std::vector<FaceCoord> faces;  // sorted
  std::vector<int> values;
  FaceCoord pin;
  std::optional<int> find(FaceCoord f) const;
  int at(FaceCoord f) const;
};

// Per-face heights indexed like domain().faces(), value 0 at pin_face.
std::vector<int> face_heights(const DimerConfig& m, int pin_face);
HeightField height_field(const DimerConfig& m, FaceCoord pin);
// true iff every domain segment agrees with the field (path independence)
bool heights_consistent(const DimerConfig& m, const std::vector<int>& h);
Rational lipschitz_bound(const HeightField& h);

struct BoundaryCurve {
  std::vector<std::array<int, 3>> points;  // closed: front == back
};
BoundaryCurve boundary_curve(const HexDomain& d);

using WindowPattern = std::vector<EdgeKey>;
// Matched edges meeting the open ball B(origin, r), sorted.
WindowPattern local_window(const DimerConfig& m, double r);
// sup{R : a and b agree on B(0,R)}; infinity if identical.
double agreement_radius(const DimerConfig& a, const DimerConfig& b);

}  // namespace lozlab
