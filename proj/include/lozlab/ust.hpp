#pragma once

#include "lozlab/core.hpp"

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace lozlab {

// Straight-line embedded graph with wired boundary and per-orientation weights.
class PlanarGraph {
 public:
  struct Arc {
    int to;
    double weight;  // w(v -> to)
  };

  int add_vertex(Point2 p, bool boundary = false);
  void add_edge(int a, int b, double w_ab = 1.0, double w_ba = 1.0);
  // Sorts rotations counterclockwise, checks weights and that every vertex reaches ∂.
  // Crossing edges are rejected when check_planar is set (quadratic).
  void finalize(bool check_planar = true);

  int num_vertices() const { return static_cast<int>(pos_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  Point2 pos(int v) const { return pos_[v]; }
  bool is_boundary(int v) const { return boundary_[v] != 0; }
  // counterclockwise by angle after finalize()
  std::span<const Arc> arcs(int v) const { return {arcs_.data() + off_[v], arcs_.data() + off_[v + 1]}; }
  int degree(int v) const { return off_[v + 1] - off_[v]; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<std::pair<double, double>>& edge_weights() const { return ew_; }
  int nearest_vertex(Point2 p) const;

  // Neighbour drawn with probability proportional to w(v -> .): one uniform_below
  // draw when v's weights are equal, one 53-bit uniform real otherwise.
  int step(int v, Rng& rng) const;

 private:
  std::vector<Point2> pos_;
  std::vector<char> boundary_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::pair<double, double>> ew_;
  std::vector<int> off_;
  std::vector<Arc> arcs_;
  std::vector<double> cum_;  // empty when every vertex has equal weights
  std::vector<char> uniform_;
  bool finalized_ = false;
};

// Vertices of mesh·Z² inside [-half, half]²; the outer ring is wired.
PlanarGraph grid_graph(double half, double mesh);
// w x h interior vertices at integer points (0..w-1, 0..h-1) plus one wired
// vertex per boundary edge (a ring without corners).
PlanarGraph square_patch(int w, int h);

using WalkPath = std::vector<int>;

// Walk from start until it first visits ∂ (inclusive).
WalkPath random_walk_to_boundary(const PlanarGraph& g, int start, Rng& rng);

WalkPath forward_loop_erase(const WalkPath& x);
WalkPath backward_loop_erase(const WalkPath& x);
// Forward erasure of x[0..T], then backward erasure of x[tau..end] from the last
// visit tau to the first point of that erasure met again after T.
WalkPath mixed_loop_erase(const WalkPath& x, std::size_t T);

// Exhaustive comparison of erasure laws for the walk from `start` stopped at ∂.
// The mixed erasure uses T = first visit to `stop_at` (final index if none).
struct ErasureLaws {
  double tv_mixed_forward = 0;
  double tv_backward_forward = 0;
  double residual = 0;  // walk mass not enumerated
  long trajectories = 0;
};
ErasureLaws compare_erasure_laws(const PlanarGraph& g, int start, int stop_at, double max_residual);

struct WiredTree {
  std::vector<int> parent;  // -1 exactly on ∂ (and on vertices not yet reached)
  bool valid(const PlanarGraph& g) const;
};

// Wilson's algorithm. `order` lists the vertices to attach first; vertices it
// misses are attached afterwards in index order unless partial is set.
WiredTree wilson_ust(const PlanarGraph& g, const std::vector<int>& order, Rng& rng, bool partial = false);

struct SubTree {
  std::vector<std::pair<int, int>> edges;  // (child, parent)
  std::vector<int> vertices;
  double distance_to(const PlanarGraph& g, Point2 p) const;
};
SubTree subtree_spanning(const WiredTree& t, const std::vector<int>& vset);

// All wired trees of a small graph with their weights (exhaustive oracle).
std::vector<std::pair<WiredTree, double>> enumerate_wired_trees(const PlanarGraph& g, long cap);

// ---------------------------------------------------------------- winding

using Polyline = std::vector<Point2>;

// Continuous-argument increment of p - z along p. z may be an endpoint (limit
// definition); z on the polyline elsewhere throws std::invalid_argument.
double winding_topological(const Polyline& p, Point2 z);
// Sum of signed exterior angles in (-pi, pi); rejects self-intersecting input.
double winding_intrinsic(const Polyline& p);
// Same sum without the simplicity check.
double total_turning(const Polyline& p);
bool is_simple(const Polyline& p);

// ---------------------------------------------------------------- Temperley

// G' = G with ∂ contracted to a root, its faces, and the derived bipartite graph G_D
// with the root and one root-adjacent face f0 removed.
class TemperleyGraph {
 public:
  // cut_angle (degrees) selects f0: the root face between the last and first
  // boundary spokes counterclockwise from that direction.
  explicit TemperleyGraph(const PlanarGraph& g, double cut_angle = 225.0);

  const PlanarGraph& graph() const { return *g_; }
  int num_edges() const { return static_cast<int>(edge_.size()); }
  int num_faces() const { return static_cast<int>(face_darts_.size()); }
  int outer_face() const { return f0_; }
  // G_D: whites = edges of G' (index e), blacks = non-root vertices then faces != f0
  int num_white() const { return num_edges(); }
  int num_black() const { return static_cast<int>(black_vertex_.size() + black_face_.size()); }
  const std::vector<std::vector<int>>& white_adjacency() const { return wadj_; }

  // one black per white: wadj index of the matched black
  using Matching = std::vector<int>;
  Matching dimers(const WiredTree& t) const;
  WiredTree tree(const Matching& m) const;
  std::vector<Matching> enumerate_matchings(long cap) const;

  // Faces of G_D are corners (v, f) with v not the root and f != f0.
  int num_corners() const { return static_cast<int>(corner_v_.size()); }
  int corner_vertex(int c) const { return corner_v_[c]; }
  // Heights in quarter units: +1 across unmatched, -3 across matched, white on the left.
  // Pinned to 0 at corner `pin`; throws if not path independent.
  std::vector<int> heights(const Matching& m, int pin = 0) const;
  // W_int of the corner's reference curve: stub into v, tree branch, boundary to the cut.
  double corner_winding(const WiredTree& t, int c) const;

 private:
  struct GEdge {
    int a, b;  // G vertex ids; a is never on ∂
  };
  const PlanarGraph* g_;
  std::vector<GEdge> edge_;
  std::vector<std::vector<int>> rot_;  // per G vertex (non-∂): incident edge ids ccw; root gets index n
  std::vector<int> root_rot_;          // spokes in root rotation order
  std::vector<std::vector<int>> face_darts_;
  std::vector<int> left_face_;  // per dart 2e (a->b) and 2e+1 (b->a)
  int f0_ = -1;
  std::vector<int> boundary_cycle_;  // ∂ vertices from the cut, counterclockwise
  std::vector<int> black_vertex_, black_face_;  // G vertex / face id of each black
  std::vector<int> vertex_black_, face_black_;
  std::vector<std::vector<int>> wadj_;
  std::vector<int> corner_v_, corner_f_;
  std::vector<int> corner_e1_, corner_e2_;  // consecutive ccw edges at v bounding the corner
  struct CornerStep {
    int to;
    int white;
    int black;
    bool white_left;
  };
  std::vector<std::vector<CornerStep>> corner_adj_;

  std::vector<int> rpos_a_, rpos_b_;  // index of edge e in the rotation of each endpoint
  std::map<std::pair<int, int>, int> edge_of_;
  int head(int dart) const;
  int out_dart(int v, int e) const;
  const std::vector<int>& rotation(int x) const;
  void build_corners();
};

// (corner_winding(x) - corner_winding(y)) / 2pi, rounded to the nearest 1/8.
Rational height_from_winding(const TemperleyGraph& tg, const WiredTree& t, int x, int y);

}  // namespace lozlab
