#pragma once

#include "lozlab/hexlattice.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace lozlab {

// A loop or open path of m ∪ m2. Edge i joins verts[i] and verts[i+1]
// (cyclically for loops) and belongs to m iff in_m[i].
struct DDComponent {
  std::vector<TriCoord> verts;  // loops counterclockwise; paths start at their smaller endpoint
  std::vector<char> in_m;
  // +1 when the edges traversed white -> black are the m edges, -1 otherwise.
  // A positive loop raises the level-line height by one inside.
  int orientation = 0;

  EdgeKey edge(std::size_t i) const;
  std::size_t size() const { return in_m.size(); }
};

struct LoopDecomposition {
  DomainPtr d1, d2;
  std::vector<EdgeKey> doubled;  // sorted
  std::vector<DDComponent> loops;
  std::vector<DDComponent> paths;
};

// Faces of the common domain D1 ∩ D2 with the level-line height (h_{m2} - h_m) / 3.
struct DDHeight {
  DomainPtr common;
  std::vector<int> values;  // indexed like common->faces()
  int at(FaceCoord f) const;
};

// Throws std::invalid_argument when the two domains do not sit in a common
// region consistently (a vertex covered by no edge of m ∪ m2).
LoopDecomposition superimpose(const DimerConfig& m, const DimerConfig& m2);

// Rebuild (m, m2) from the stored orientations.
std::pair<DimerConfig, DimerConfig> reconstruct(const LoopDecomposition& dec);
// Same, with loop k oriented positively iff bit k of `bits` is set.
std::pair<DimerConfig, DimerConfig> reconstruct_with(const LoopDecomposition& dec, const std::vector<char>& bits);
// One fair bit per loop (top bit of one rng() draw, loops in stored order); paths keep theirs.
std::pair<DimerConfig, DimerConfig> resample_orientations(LoopDecomposition& dec, Rng& rng);

// Pinned to 0 at `pin` (default: first boundary face of the common domain).
DDHeight dd_height(const LoopDecomposition& dec, std::optional<FaceCoord> pin = {});

// e in M'' iff (e in m2 and e on no loop) or (e on a loop and e in m).
DimerConfig build_m_double_prime(const DimerConfig& m, const DimerConfig& m2);
DimerConfig build_m_double_prime(const LoopDecomposition& dec);

// Some open path has an edge meeting the open ball B(origin of d1, r).
bool paths_hit_ball(const LoopDecomposition& dec, double r);

// Faces touching a vertex of some open path.
std::vector<FaceCoord> path_adjacent_faces(const LoopDecomposition& dec);

// m (on D1) and mpp (on D2) agree on every edge of D1 ∩ D2 not used by a path.
bool agree_off_paths(const DimerConfig& m, const DimerConfig& mpp, const LoopDecomposition& dec);

}  // namespace lozlab
