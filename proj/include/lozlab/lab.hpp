#pragma once

#include "lozlab/double_dimer.hpp"
#include "lozlab/hexlattice.hpp"
#include "lozlab/scales.hpp"
#include "lozlab/stats.hpp"
#include "lozlab/tiling_sampler.hpp"
#include "lozlab/ust.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lozlab {

using json = nlohmann::ordered_json;

struct ExperimentConfig {
  std::string kind = "robustness";  // robustness | spreadout | winding | subtree
  std::vector<int> sizes{8, 16, 32};  // hexagon (N,N,N)
  std::string perturbation = "cube";  // cube | zigzag | translation | none
  int amplitude = 1;                  // zigzag notches
  double K = 2;                       // bound on |h' - h| / 3 over ∂(D ∩ D')
  long samples = 10000;               // per size (outer samples for spreadout, branches / trees)
  int batches = 10;                   // independent chains or sample groups
  int thin = 20;                      // sweeps between chain samples
  double r = 2;                       // window radius
  std::vector<double> radii{2, 4, 8};  // conditioning radii R, or subtree radii
  double epsilon = 0.1;
  long inner_samples = 1000;
  int inner_thin = 10;
  bool check_heights = false;  // dd height identity on every robustness pair
  std::vector<int> mesh_exponents{4, 5, 6, 7};  // delta = 2^-k
  double half = 4.4816890703380645;              // e^1.5, grid half-width for winding
  double mesh = 0.25;                            // subtree grid
  int c0 = 2;                                    // i_min = ceil(log delta) + c0
  std::uint64_t seed = 1;
  int workers = 0;  // 0: LOZLAB_WORKERS or hardware
};

json config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const json& j);

struct Report {
  std::string kind;
  std::uint64_t seed = 0;
  json config;
  json rows = json::array();
  json trends = json::object();
  bool invariants_ok = true;
  double wall_seconds = 0;
  // wall-clock is left out unless asked, so equal runs give equal bytes
  json to_json(bool with_timing = false) const;
  std::string rows_csv() const;
};

// ---------------------------------------------------------------- workers

int resolve_workers(int requested);
// fn(i) for i in [0, n), spread over `workers` threads; first exception rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------- perturbations

// Cube removed at the middle of the bottom side of a hexagon (row 1).
DomainPtr cube_defect(const DomainPtr& d);
// `count` cube notches at consecutive row-1 faces along the bottom side.
DomainPtr zigzag(const DomainPtr& d, int count);
DomainPtr translate_by_one(const DomainPtr& d);
DomainPtr perturb(const DomainPtr& d, const std::string& kind, int amplitude);

// max over boundary faces f of D ∩ D' of sup |h'(f) - h(f)| / 3 over all tiling pairs,
// both heights pinned at a common boundary face (exact, from extremal heights).
double boundary_discrepancy(const DomainPtr& d, const DomainPtr& d2);
FaceCoord common_boundary_face(const DomainPtr& a, const DomainPtr& b);

// ---------------------------------------------------------------- statistics

struct TvEstimate {
  double tv = 0;            // plug-in
  double tv_corrected = 0;  // bootstrap bias-corrected, clamped at 0
  double ci_low = 0, ci_high = 0;  // 95% percentile bootstrap
  long resamples = 0;
  bool paired = false;
};
// Equal-length lists are resampled as pairs.
TvEstimate tv_windows(const std::vector<WindowPattern>& a, const std::vector<WindowPattern>& b,
                      std::uint64_t seed = 1, long resamples = 1000);

double quantile(std::vector<double> v, double q);
// max over x on a 1/2 grid of the fraction of values in (x, x+1)
double window_max(const std::vector<double>& values);

// ---------------------------------------------------------------- runners

Report run_robustness(const ExperimentConfig& cfg);
Report run_spread_out(const ExperimentConfig& cfg);
Report run_nonconcentration(const ExperimentConfig& cfg);
Report run_subtree(const ExperimentConfig& cfg);
Report run_experiment(const ExperimentConfig& cfg);

// one chain sample path: CFTP start, then `count` samples `thin` sweeps apart
std::vector<DimerConfig> chain_samples(const DomainPtr& d, long count, int thin, Rng& rng);

// ---------------------------------------------------------------- io

json tiling_to_json(const DimerConfig& m);
json decomposition_to_json(const LoopDecomposition& dec);
json graph_to_json(const PlanarGraph& g);
PlanarGraph graph_from_json(const json& j);
json tree_to_json(const WiredTree& t);
WiredTree tree_from_json(const json& j);
// "hex:a,b,c"
DomainPtr domain_from_spec(const std::string& spec);

std::string svg_of(const DimerConfig& m);
std::string svg_of(const LoopDecomposition& dec);
std::string svg_of(const PlanarGraph& g, const WiredTree& t);
// throws std::runtime_error when the file cannot be written
void write_file(const std::string& path, const std::string& text);

}  // namespace lozlab
