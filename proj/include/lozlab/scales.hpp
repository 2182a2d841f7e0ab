#pragma once

#include "lozlab/core.hpp"
#include "lozlab/ust.hpp"

#include <string>
#include <vector>

namespace lozlab {

// Annulus crossings of a walk around `origin` at radii r_i = e^i, i_min <= i < i_max.
// k = 0 is the start (index i_min - 1); the final entry is the exit, index i_max.
struct CrossingTrace {
  int i_min = 0;
  int i_max = 0;
  Point2 origin;
  std::vector<std::size_t> tau;  // walk indices
  std::vector<int> index;        // i(k)
  std::vector<Point2> at;        // X_{tau_k}

  int k_max() const { return static_cast<int>(tau.size()) - 1; }
  static double radius(int i) { return std::exp(static_cast<double>(i)); }
  std::vector<int> visits(int j) const;
  // max{k : i(k) = i}, -1 if C_i is never crossed
  int kappa(int i) const;
  std::string to_csv() const;
};

// Crossing C means the first step whose endpoint is on the far side: |x| >= r
// outward, |x| < r inward. The last point of `x` is the exit from the domain.
CrossingTrace crossing_decomposition(const Polyline& x, int i_min, int i_max, Point2 origin = {});
// Graph walk version; throws unless the walk ends on ∂.
CrossingTrace crossing_decomposition(const PlanarGraph& g, const WalkPath& x, int i_min, int i_max,
                                     Point2 origin = {});

struct ScaleClassification {
  std::vector<int> pre_isolated;
  std::vector<int> even;      // pre-isolated and even
  std::vector<int> isolated;  // subset of even
};

ScaleClassification classify_scales(const CrossingTrace& tr);
// Promotes scales of `cls.even` to isolated. `x` is the walk the trace came from.
void isolated_scales(const CrossingTrace& tr, const Polyline& x, ScaleClassification& cls);

// True iff the union of the segments of `piece` separates `z` from infinity.
// Segments are split at their crossings; z on the union counts as not separated.
bool separates(const Polyline& piece, Point2 z);

struct GammaCurves {
  Polyline g1, g2;
  double winding_difference = 0;  // W(g2, 0) - W(g1, 0)
};
// Both curves sampled at `per_piece` points per parameter unit.
GammaCurves gamma_curves(int j, double theta, int per_piece = 400);

Polyline densify(const Polyline& p, double spacing);
// Discrete Fréchet distance over the vertices of a and b.
double discrete_frechet(const Polyline& a, const Polyline& b);
// Both inputs densified to e^j/240 before the discrete distance is taken.
double frechet_distance(const Polyline& a, const Polyline& b, int j);
bool follows(const Polyline& piece, const Polyline& c, int j);

struct CrossingEstimate {
  double alpha = 0;  // minimum success rate over cells
  double ci_low = 0, ci_high = 0;  // 99% for the minimising cell
  std::vector<double> cell_rates;  // offset-major, 4 orientations each
  long trials_per_cell = 0;
};
// Rectangle n([0,3]x[0,1]) centred at the origin, start ball n B((1/2,1/2),1/4), target
// n B((5/2,1/2),1/4); four orientations (right, left, up, down); offsets z in
// {0, 1/2}^2 times the mean edge length at the origin.
CrossingEstimate uniform_crossing_estimate(const PlanarGraph& g, double n, long trials, Rng& rng);

}  // namespace lozlab
