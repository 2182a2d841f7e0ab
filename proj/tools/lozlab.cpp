// lozlab command line: sampling, experiments, rendering.

#include "lozlab/lab.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using namespace lozlab;

namespace {

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  return json::parse(f);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else write_file(path, text);
}

// flags shared by the experiment subcommands; unset flags leave the config file (or defaults) alone
struct ExperimentFlags {
  std::string config_path, out, csv;
  bool timing = false;
  std::optional<std::vector<int>> sizes, mesh_exponents;
  std::optional<std::vector<double>> radii;
  std::optional<std::string> perturbation;
  std::optional<int> amplitude, batches, thin, inner_thin, c0, workers;
  std::optional<long> samples, inner_samples;
  std::optional<double> K, r, epsilon, half, mesh;
  std::optional<std::uint64_t> seed;
  bool check_heights = false;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "JSON config file");
    app->add_option("-o,--out", out, "report JSON (default stdout)");
    app->add_option("--csv", csv, "per-row CSV");
    app->add_flag("--timing", timing, "include wall-clock seconds in the report");
    app->add_option("--sizes", sizes, "hexagon sizes N");
    app->add_option("--samples", samples);
    app->add_option("--batches", batches);
    app->add_option("--thin", thin, "sweeps between chain samples");
    app->add_option("--seed", seed);
    app->add_option("--workers", workers, "threads (LOZLAB_WORKERS overrides)");
  }

  ExperimentConfig build(const std::string& kind) const {
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : config_from_json(read_json(config_path));
    c.kind = kind;
    if (sizes) c.sizes = *sizes;
    if (mesh_exponents) c.mesh_exponents = *mesh_exponents;
    if (radii) c.radii = *radii;
    if (perturbation) c.perturbation = *perturbation;
    if (amplitude) c.amplitude = *amplitude;
    if (batches) c.batches = *batches;
    if (thin) c.thin = *thin;
    if (inner_thin) c.inner_thin = *inner_thin;
    if (c0) c.c0 = *c0;
    if (workers) c.workers = *workers;
    if (samples) c.samples = *samples;
    if (inner_samples) c.inner_samples = *inner_samples;
    if (K) c.K = *K;
    if (r) c.r = *r;
    if (epsilon) c.epsilon = *epsilon;
    if (half) c.half = *half;
    if (mesh) c.mesh = *mesh;
    if (seed) c.seed = *seed;
    if (check_heights) c.check_heights = true;
    return c;
  }
};

int run_and_write(const ExperimentConfig& cfg, const ExperimentFlags& f) {
  Report rep = run_experiment(cfg);
  emit(f.out, rep.to_json(f.timing).dump(2) + "\n");
  if (!f.csv.empty()) write_file(f.csv, rep.rows_csv());
  if (!rep.invariants_ok) std::cerr << "invariant violated\n";
  return rep.invariants_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lozenge tilings, double dimers and spanning-tree windings"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "exact uniform tilings by coupling from the past");
  std::string s_domain = "hex:4,4,4", s_out, s_svg;
  long s_count = 1;
  std::uint64_t s_seed = 1;
  sample->add_option("-d,--domain", s_domain, "hex:a,b,c");
  sample->add_option("-n,--count", s_count)->check(CLI::PositiveNumber);
  sample->add_option("--seed", s_seed);
  sample->add_option("-o,--out", s_out, "JSON (default stdout)");
  sample->add_option("--svg", s_svg, "render the first sample");

  // experiments
  ExperimentFlags rob, spr, win;
  auto* robustness = app.add_subcommand("robustness", "path hits and window laws under a boundary perturbation");
  rob.attach(robustness);
  robustness->add_option("--perturbation", rob.perturbation, "cube | zigzag | translation | none");
  robustness->add_option("--amplitude", rob.amplitude, "zigzag notches");
  robustness->add_option("-K", rob.K, "bound on the boundary height discrepancy");
  robustness->add_option("-r,--radius", rob.r, "window radius");
  robustness->add_flag("--check-heights", rob.check_heights, "verify double-dimer heights on every pair");

  auto* spreadout = app.add_subcommand("spreadout", "quantile of the conditional origin-height window mass");
  spr.attach(spreadout);
  spreadout->add_option("--radii", spr.radii, "conditioning radii R");
  spreadout->add_option("--epsilon", spr.epsilon);
  spreadout->add_option("--inner-samples", spr.inner_samples);
  spreadout->add_option("--inner-thin", spr.inner_thin);

  auto* winding = app.add_subcommand("winding", "branch winding and scale counts, or subtree hits with --subtree");
  win.attach(winding);
  bool subtree = false;
  winding->add_flag("--subtree", subtree, "P[subtree of |x|>=R meets B(0,1)] instead");
  winding->add_option("--mesh-exponents", win.mesh_exponents, "delta = 2^-k");
  winding->add_option("--half", win.half, "grid half-width");
  winding->add_option("--mesh", win.mesh, "subtree grid mesh");
  winding->add_option("--radii", win.radii, "subtree radii");
  winding->add_option("--c0", win.c0, "i_min = ceil(log delta) + c0");

  // crossing estimate
  auto* crossing = app.add_subcommand("crossing-estimate", "uniform crossing rate of the walk on a grid");
  double c_half = 40, c_mesh = 1, c_n = 16;
  long c_trials = 2000;
  std::uint64_t c_seed = 1;
  std::string c_graph, c_out;
  crossing->add_option("--half", c_half);
  crossing->add_option("--mesh", c_mesh);
  crossing->add_option("--graph", c_graph, "graph JSON instead of a grid");
  crossing->add_option("-n,--scale", c_n, "rectangle scale");
  crossing->add_option("--trials", c_trials, "walks per cell")->check(CLI::PositiveNumber);
  crossing->add_option("--seed", c_seed);
  crossing->add_option("-o,--out", c_out);

  // render
  auto* render = app.add_subcommand("render", "SVG of a tiling, a double-dimer superposition or a tree");
  std::string r_what = "tiling", r_in, r_domain = "hex:6,6,6", r_perturbation = "cube", r_out, r_graph;
  int r_index = 0;
  double r_half = 4, r_mesh = 0.5;
  std::uint64_t r_seed = 1;
  render->add_option("--what", r_what, "tiling | double-dimer | tree")
      ->check(CLI::IsMember({"tiling", "double-dimer", "tree"}));
  render->add_option("-i,--in", r_in, "tilings JSON from `sample` (tiling) or tree JSON (tree)");
  render->add_option("--index", r_index);
  render->add_option("-d,--domain", r_domain);
  render->add_option("--perturbation", r_perturbation);
  render->add_option("--graph", r_graph, "graph JSON for a tree");
  render->add_option("--half", r_half);
  render->add_option("--mesh", r_mesh);
  render->add_option("--seed", r_seed);
  render->add_option("-o,--out", r_out, "SVG (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sample) {
      DomainPtr d = domain_from_spec(s_domain);
      Rng rng = make_stream(s_seed, 0);
      json tilings = json::array();
      std::optional<DimerConfig> first;
      for (long i = 0; i < s_count; ++i) {
        DimerConfig m = cftp_sample(d, rng);
        if (!first) first = m;
        tilings.push_back(tiling_to_json(m));
      }
      emit(s_out, json{{"domain", s_domain}, {"seed", s_seed}, {"tilings", tilings}}.dump() + "\n");
      if (!s_svg.empty()) write_file(s_svg, svg_of(*first));
      return 0;
    }
    if (*robustness) return run_and_write(rob.build("robustness"), rob);
    if (*spreadout) return run_and_write(spr.build("spreadout"), spr);
    if (*winding) return run_and_write(win.build(subtree ? "subtree" : "winding"), win);
    if (*crossing) {
      PlanarGraph g = c_graph.empty() ? grid_graph(c_half, c_mesh) : graph_from_json(read_json(c_graph));
      Rng rng = make_stream(c_seed, 0);
      CrossingEstimate e = uniform_crossing_estimate(g, c_n, c_trials, rng);
      json j{{"alpha", e.alpha},          {"ci_low", e.ci_low},         {"ci_high", e.ci_high},
             {"trials_per_cell", e.trials_per_cell}, {"cell_rates", e.cell_rates}};
      emit(c_out, j.dump(2) + "\n");
      return 0;
    }
    if (*render) {
      if (r_what == "tiling") {
        if (r_in.empty()) {
          Rng rng = make_stream(r_seed, 0);
          emit(r_out, svg_of(cftp_sample(domain_from_spec(r_domain), rng)));
        } else {
          json j = read_json(r_in);
          DomainPtr d = domain_from_spec(j.at("domain").get<std::string>());
          emit(r_out, svg_of(DimerConfig(d, j.at("tilings").at(r_index).get<std::vector<int>>())));
        }
      } else if (r_what == "double-dimer") {
        DomainPtr d = domain_from_spec(r_domain);
        DomainPtr d2 = perturb(d, r_perturbation, 1);
        Rng rng = make_stream(r_seed, 0);
        DimerConfig m = cftp_sample(d, rng), m2 = cftp_sample(d2, rng);
        emit(r_out, svg_of(superimpose(m, m2)));
      } else {
        PlanarGraph g = r_graph.empty() ? grid_graph(r_half, r_mesh) : graph_from_json(read_json(r_graph));
        WiredTree t;
        if (r_in.empty()) {
          Rng rng = make_stream(r_seed, 0);
          t = wilson_ust(g, {}, rng);
        } else {
          t = tree_from_json(read_json(r_in));
        }
        emit(r_out, svg_of(g, t));
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
