#include "lozlab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace lozlab {

// ---------------------------------------------------------------- config / report

json config_to_json(const ExperimentConfig& c) {
  return json{{"kind", c.kind},
              {"sizes", c.sizes},
              {"perturbation", c.perturbation},
              {"amplitude", c.amplitude},
              {"K", c.K},
              {"samples", c.samples},
              {"batches", c.batches},
              {"thin", c.thin},
              {"r", c.r},
              {"radii", c.radii},
              {"epsilon", c.epsilon},
              {"inner_samples", c.inner_samples},
              {"inner_thin", c.inner_thin},
              {"check_heights", c.check_heights},
              {"mesh_exponents", c.mesh_exponents},
              {"half", c.half},
              {"mesh", c.mesh},
              {"c0", c.c0},
              {"seed", c.seed},
              {"workers", c.workers}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("kind", c.kind);
  get("sizes", c.sizes);
  get("perturbation", c.perturbation);
  get("amplitude", c.amplitude);
  get("K", c.K);
  get("samples", c.samples);
  get("batches", c.batches);
  get("thin", c.thin);
  get("r", c.r);
  get("radii", c.radii);
  get("epsilon", c.epsilon);
  get("inner_samples", c.inner_samples);
  get("inner_thin", c.inner_thin);
  get("check_heights", c.check_heights);
  get("mesh_exponents", c.mesh_exponents);
  get("half", c.half);
  get("mesh", c.mesh);
  get("c0", c.c0);
  get("seed", c.seed);
  get("workers", c.workers);
  for (const auto& [k, _] : j.items())
    if (!config_to_json(c).contains(k)) throw std::invalid_argument("unknown config key: " + k);
  return c;
}

namespace {

// worker count changes nothing in the output, so it stays out of the report
json report_config(const ExperimentConfig& cfg) {
  json j = config_to_json(cfg);
  j.erase("workers");
  return j;
}

}  // namespace

json Report::to_json(bool with_timing) const {
  json j{{"kind", kind}, {"seed", seed}, {"config", config}, {"rows", rows}, {"trends", trends}, {"invariants_ok", invariants_ok}};
  if (with_timing) j["wall_seconds"] = wall_seconds;
  return j;
}

std::string Report::rows_csv() const {
  std::ostringstream os;
  if (rows.empty()) return "";
  std::vector<std::string> cols;
  for (const auto& [k, v] : rows[0].items())
    if (v.is_primitive()) cols.push_back(k);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << (row.contains(cols[i]) ? row[cols[i]].dump() : "");
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------- workers

int resolve_workers(int requested) {
  if (const char* env = std::getenv("LOZLAB_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto run = [&] {
    while (true) {
      std::size_t i = next++;
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!err) err = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

// ---------------------------------------------------------------- perturbations

namespace {

std::array<int, 3> hexagon_sides(const DomainPtr& d) {
  auto s = d->sides();
  if (!s) throw std::invalid_argument("perturbation needs a hexagon");
  return *s;
}

DomainPtr notch(const DomainPtr& d, const std::vector<FaceCoord>& at) {
  std::vector<TriCoord> drop;
  for (FaceCoord p : at)
    for (TriCoord t : triangles_around(p)) {
      if (!d->contains(t)) throw std::invalid_argument("notch leaves the domain");
      drop.push_back(t);
    }
  return d->without(drop);
}

}  // namespace

DomainPtr cube_defect(const DomainPtr& d) {
  auto s = hexagon_sides(d);
  if (s[0] < 2 || s[2] < 2) throw std::invalid_argument("hexagon too small for a cube defect");
  return notch(d, {{s[0] / 2, 1}});
}

DomainPtr zigzag(const DomainPtr& d, int count) {
  auto s = hexagon_sides(d);
  if (count < 1) throw std::invalid_argument("zigzag needs at least one notch");
  std::vector<FaceCoord> at;
  const int u0 = s[0] / 2 - (count - 1) / 2;
  for (int k = 0; k < count; ++k) at.push_back({u0 + k, 1});
  if (at.front().u < 1 || at.back().u > s[0] - 1) throw std::invalid_argument("zigzag longer than the side");
  return notch(d, at);
}

DomainPtr translate_by_one(const DomainPtr& d) { return d->translated(1, 0)->with_origin(d->origin()); }

DomainPtr perturb(const DomainPtr& d, const std::string& kind, int amplitude) {
  if (kind == "cube") return cube_defect(d);
  if (kind == "zigzag") return zigzag(d, amplitude);
  if (kind == "translation") return translate_by_one(d);
  if (kind == "none") return d;
  throw std::invalid_argument("unknown perturbation: " + kind);
}

FaceCoord common_boundary_face(const DomainPtr& a, const DomainPtr& b) {
  for (int f : a->boundary_walk()) {
    FaceCoord c = a->faces()[f];
    int g = b->face_index(c);
    if (g >= 0 && b->is_boundary_face(g)) return c;
  }
  throw std::invalid_argument("domains share no boundary face");
}

double boundary_discrepancy(const DomainPtr& d, const DomainPtr& d2) {
  HeightSystem s1 = HeightSystem::whole(d), s2 = HeightSystem::whole(d2);
  FaceCoord pin = common_boundary_face(d, d2);
  const int p1 = d->face_index(pin), p2 = d2->face_index(pin);
  const int o1 = s1.top()[p1], o2 = s2.top()[p2];
  std::vector<TriCoord> common;
  for (const auto& t : d->triangles())
    if (d2->contains(t)) common.push_back(t);
  DomainPtr c = HexDomain::from_triangles(common);
  int worst = 0;
  for (int f = 0; f < c->num_faces(); ++f) {
    if (!c->is_boundary_face(f)) continue;
    FaceCoord x = c->faces()[f];
    int i = d->face_index(x), j = d2->face_index(x);
    int top1 = s1.top()[i] - o1, bot1 = s1.bottom()[i] - o1;
    int top2 = s2.top()[j] - o2, bot2 = s2.bottom()[j] - o2;
    worst = std::max({worst, std::abs(top2 - bot1), std::abs(top1 - bot2)});
  }
  return worst / 3.0;
}

// ---------------------------------------------------------------- statistics

TvEstimate tv_windows(const std::vector<WindowPattern>& a, const std::vector<WindowPattern>& b, std::uint64_t seed,
                      long resamples) {
  if (a.empty() || b.empty()) throw std::invalid_argument("tv_windows needs nonempty samples");
  std::map<WindowPattern, int> ids;
  auto idx = [&](const std::vector<WindowPattern>& xs) {
    std::vector<int> out;
    out.reserve(xs.size());
    for (const auto& w : xs) out.push_back(ids.try_emplace(w, static_cast<int>(ids.size())).first->second);
    return out;
  };
  std::vector<int> ia = idx(a), ib = idx(b);
  const std::size_t K = ids.size();
  std::vector<double> ca(K), cb(K);
  auto tv_of = [&](auto&& draw_a, auto&& draw_b, std::size_t na, std::size_t nb) {
    std::fill(ca.begin(), ca.end(), 0);
    std::fill(cb.begin(), cb.end(), 0);
    draw_a(ca);
    draw_b(cb);
    double s = 0;
    for (std::size_t k = 0; k < K; ++k) s += std::abs(ca[k] / na - cb[k] / nb);
    return s / 2;
  };
  TvEstimate out;
  out.paired = a.size() == b.size();
  out.tv = tv_of([&](auto& c) { for (int i : ia) c[i] += 1; }, [&](auto& c) { for (int i : ib) c[i] += 1; }, ia.size(), ib.size());
  Rng rng = make_stream(seed, 0);
  std::vector<double> boot;
  boot.reserve(resamples);
  for (long r = 0; r < resamples; ++r) {
    if (out.paired) {
      std::vector<std::size_t> pick(ia.size());
      for (auto& p : pick) p = uniform_below(rng, ia.size());
      boot.push_back(tv_of([&](auto& c) { for (auto p : pick) c[ia[p]] += 1; },
                           [&](auto& c) { for (auto p : pick) c[ib[p]] += 1; }, ia.size(), ib.size()));
    } else {
      boot.push_back(tv_of([&](auto& c) { for (std::size_t k = 0; k < ia.size(); ++k) c[ia[uniform_below(rng, ia.size())]] += 1; },
                           [&](auto& c) { for (std::size_t k = 0; k < ib.size(); ++k) c[ib[uniform_below(rng, ib.size())]] += 1; },
                           ia.size(), ib.size()));
    }
  }
  out.resamples = resamples;
  if (!boot.empty()) {
    double mean = std::accumulate(boot.begin(), boot.end(), 0.0) / boot.size();
    out.tv_corrected = std::max(0.0, 2 * out.tv - mean);
    out.ci_low = quantile(boot, 0.025);
    out.ci_high = quantile(boot, 0.975);
  } else {
    out.tv_corrected = out.ci_low = out.ci_high = out.tv;
  }
  return out;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile of nothing");
  std::sort(v.begin(), v.end());
  long k = static_cast<long>(std::ceil(q * v.size())) - 1;
  k = std::clamp<long>(k, 0, static_cast<long>(v.size()) - 1);
  return v[k];
}

double window_max(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("window_max of nothing");
  std::vector<double> v = values;
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double best = 0;
  for (double x = std::floor(v.front()) - 1; x <= v.back(); x += 0.5) {
    auto lo = std::upper_bound(v.begin(), v.end(), x);
    auto hi = std::lower_bound(v.begin(), v.end(), x + 1);
    best = std::max(best, (hi - lo) / n);
  }
  return best;
}

// ---------------------------------------------------------------- runners

namespace {

json trend_json(const TrendTest& t, bool decreasing) {
  return {{"test", "mann_kendall"}, {"direction", decreasing ? "decreasing" : "increasing"},
          {"s", t.s}, {"z", t.z}, {"p_value", t.p_value}, {"n", t.n}};
}

json slope_json(const Slope& s) {
  return {{"slope", s.slope}, {"intercept", s.intercept}, {"se", s.se}, {"ci_low", s.ci_low}, {"ci_high", s.ci_high}, {"n", s.n}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// order-statistic 95% interval for a quantile
std::pair<double, double> quantile_ci(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  const double z = 1.959963984540054, sd = std::sqrt(n * q * (1 - q));
  long lo = std::clamp<long>(static_cast<long>(std::floor(n * q - z * sd)) - 1, 0, static_cast<long>(n) - 1);
  long hi = std::clamp<long>(static_cast<long>(std::ceil(n * q + z * sd)) - 1, 0, static_cast<long>(n) - 1);
  return {v[lo], v[hi]};
}

std::vector<long> batch_sizes(long total, int batches) {
  if (batches < 1 || total < batches) throw std::invalid_argument("need samples >= batches >= 1");
  std::vector<long> out(batches, total / batches);
  for (long i = 0; i < total % batches; ++i) ++out[i];
  return out;
}

struct RobustBatch {
  long hits = 0, agree = 0, heights_ok = 0, heights_checked = 0;
  std::array<long, 3> types{};
  std::vector<WindowPattern> wa, wb;
};

}  // namespace

std::vector<DimerConfig> chain_samples(const DomainPtr& d, long count, int thin, Rng& rng) {
  HeightSystem sys = HeightSystem::whole(d);
  HeightChain ch(sys, cftp_heights(sys, rng));
  std::vector<DimerConfig> out;
  for (long i = 0; i < count; ++i) {
    if (i > 0) ch.sweep(rng, thin);
    out.push_back(ch.config());
  }
  return out;
}

Report run_robustness(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.kind = "robustness";
  rep.seed = cfg.seed;
  rep.config = report_config(cfg);
  const int workers = resolve_workers(cfg.workers);
  std::vector<double> trend_n, trend_hit, trend_tv_n, trend_tv;
  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    const int N = cfg.sizes[si];
    DomainPtr d = build_hexagon(N, N, N);
    DomainPtr d2 = perturb(d, cfg.perturbation, cfg.amplitude);
    const double K = boundary_discrepancy(d, d2);
    if (K > cfg.K) throw std::invalid_argument("perturbation exceeds K: " + std::to_string(K));
    HeightSystem s1 = HeightSystem::whole(d), s2 = HeightSystem::whole(d2);
    const FaceCoord pin = common_boundary_face(d, d2);
    const auto sizes = batch_sizes(cfg.samples, cfg.batches);
    std::vector<RobustBatch> res(cfg.batches);
    parallel_for(cfg.batches, workers, [&](std::size_t b) {
      Rng rng = make_stream(cfg.seed, 1000 * si + b);
      HeightChain ca(s1, cftp_heights(s1, rng));
      HeightChain cb(s2, cftp_heights(s2, rng));
      RobustBatch& out = res[b];
      for (long i = 0; i < sizes[b]; ++i) {
        if (i > 0) {
          ca.sweep(rng, cfg.thin);
          cb.sweep(rng, cfg.thin);
        }
        DimerConfig m = ca.config(), m2 = cb.config();
        LoopDecomposition dec = superimpose(m, m2);
        out.hits += paths_hit_ball(dec, cfg.r);
        DimerConfig mpp = build_m_double_prime(dec);
        out.agree += agree_off_paths(m, mpp, dec);
        WindowPattern w = local_window(m, cfg.r);
        for (const auto& k : w) ++out.types[k.type];
        out.wa.push_back(std::move(w));
        out.wb.push_back(local_window(mpp, cfg.r));
        if (cfg.check_heights) {
          DDHeight dd = dd_height(dec, pin);
          HeightField h1 = height_field(m, pin), h2 = height_field(m2, pin);
          bool ok = true;
          for (const auto& f : dd.common->faces()) ok = ok && 3 * dd.at(f) == h2.at(f) - h1.at(f);
          out.heights_ok += ok;
          ++out.heights_checked;
        }
      }
    });
    RobustBatch all;
    json batch_hit = json::array(), batch_tv = json::array();
    for (int b = 0; b < cfg.batches; ++b) {
      const auto& r = res[b];
      all.hits += r.hits;
      all.agree += r.agree;
      all.heights_ok += r.heights_ok;
      all.heights_checked += r.heights_checked;
      for (int t = 0; t < 3; ++t) all.types[t] += r.types[t];
      all.wa.insert(all.wa.end(), r.wa.begin(), r.wa.end());
      all.wb.insert(all.wb.end(), r.wb.begin(), r.wb.end());
      double rate = static_cast<double>(r.hits) / sizes[b];
      double tvb = tv_windows(r.wa, r.wb, cfg.seed, 0).tv;
      batch_hit.push_back(rate);
      batch_tv.push_back(tvb);
      trend_n.push_back(N);
      trend_hit.push_back(rate);
      trend_tv_n.push_back(N);
      trend_tv.push_back(tvb);
    }
    const double n = static_cast<double>(cfg.samples);
    const double hit = all.hits / n;
    TvEstimate tv = tv_windows(all.wa, all.wb, cfg.seed + 1000 * si);
    const long edges = all.types[0] + all.types[1] + all.types[2];
    json dens = {{"p_a", edges ? static_cast<double>(all.types[0]) / edges : 0.0},
                 {"p_b", edges ? static_cast<double>(all.types[1]) / edges : 0.0},
                 {"p_c", edges ? static_cast<double>(all.types[2]) / edges : 0.0},
                 {"edges", edges}};
    const double agree = all.agree / n;
    rep.invariants_ok = rep.invariants_ok && all.agree == cfg.samples && all.heights_ok == all.heights_checked;
    rep.rows.push_back({{"N", N},
                        {"K", K},
                        {"samples", cfg.samples},
                        {"hit_probability", hit},
                        {"hit_ci_halfwidth", binomial_halfwidth(hit, n)},
                        {"tv", tv.tv},
                        {"tv_corrected", tv.tv_corrected},
                        {"tv_ci_low", tv.ci_low},
                        {"tv_ci_high", tv.ci_high},
                        {"tv_paired", tv.paired},
                        {"agreement_rate", agree},
                        {"heights_checked", all.heights_checked},
                        {"heights_ok", all.heights_ok},
                        {"window_densities", dens},
                        {"batch_hit_probability", batch_hit},
                        {"batch_tv", batch_tv}});
  }
  rep.trends["hit_probability"] = trend_json(mann_kendall(trend_n, trend_hit, true), true);
  rep.trends["tv"] = trend_json(mann_kendall(trend_tv_n, trend_tv, true), true);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

Report run_spread_out(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.kind = "spreadout";
  rep.seed = cfg.seed;
  rep.config = report_config(cfg);
  if (cfg.sizes.empty()) throw std::invalid_argument("spreadout needs a domain size");
  for (std::size_t k = 1; k < cfg.radii.size(); ++k)
    if (!(cfg.radii[k] > cfg.radii[k - 1])) throw std::invalid_argument("radius schedule must increase");
  const int N = cfg.sizes.back();
  DomainPtr d = build_hexagon(N, N, N);
  HeightSystem sys = HeightSystem::whole(d);
  const int f0 = d->origin_face();
  const auto sizes = batch_sizes(cfg.samples, cfg.batches);
  const std::size_t nr = cfg.radii.size();
  // res[b][r] = inner maxima of batch b at radius r
  std::vector<std::vector<std::vector<double>>> res(cfg.batches, std::vector<std::vector<double>>(nr));
  parallel_for(cfg.batches, resolve_workers(cfg.workers), [&](std::size_t b) {
    Rng rng = make_stream(cfg.seed, b);
    HeightChain outer(sys, cftp_heights(sys, rng));
    std::vector<int> h0;
    for (long i = 0; i < sizes[b]; ++i) {
      if (i > 0) outer.sweep(rng, cfg.thin);
      DimerConfig m = outer.config();
      for (std::size_t r = 0; r < nr; ++r) {
        HeightSystem cs = conditional_system({cfg.radii[r], m});
        if (cs.num_sites() == 0) {
          res[b][r].push_back(1.0);
          continue;
        }
        HeightChain inner(cs, cs.heights_of(m));
        h0.clear();
        for (long k = 0; k < cfg.inner_samples; ++k) {
          if (k > 0) inner.sweep(rng, cfg.inner_thin);
          h0.push_back(inner.heights()[f0]);
        }
        res[b][r].push_back(spread_out_from_heights(h0).max_prob);
      }
    }
  });
  std::vector<double> tx, ty;
  for (std::size_t r = 0; r < nr; ++r) {
    std::vector<double> all;
    json batch_q = json::array();
    for (int b = 0; b < cfg.batches; ++b) {
      all.insert(all.end(), res[b][r].begin(), res[b][r].end());
      double q = quantile(res[b][r], 1 - cfg.epsilon);
      batch_q.push_back(q);
      tx.push_back(cfg.radii[r]);
      ty.push_back(q);
    }
    auto [lo, hi] = quantile_ci(all, 1 - cfg.epsilon);
    rep.rows.push_back({{"R", cfg.radii[r]},
                        {"N", N},
                        {"outer", cfg.samples},
                        {"inner", cfg.inner_samples},
                        {"quantile", quantile(all, 1 - cfg.epsilon)},
                        {"quantile_ci_low", lo},
                        {"quantile_ci_high", hi},
                        {"mean_max", std::accumulate(all.begin(), all.end(), 0.0) / all.size()},
                        {"batch_quantiles", batch_q}});
  }
  rep.trends["quantile"] = trend_json(mann_kendall(tx, ty, true), true);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

namespace {

struct BranchStats {
  double winding;
  int pre, even, isolated;
  std::size_t steps;
};

int scale_top(const PlanarGraph& g) {
  // largest i with the closed ball B(0, e^i) inside the open grid square, plus one
  double half = 0;
  for (int v = 0; v < g.num_vertices(); ++v) half = std::max(half, g.pos(v).x);
  return static_cast<int>(std::floor(std::log(half))) + 1;
}

}  // namespace

Report run_nonconcentration(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.kind = "winding";
  rep.seed = cfg.seed;
  rep.config = report_config(cfg);
  const int workers = resolve_workers(cfg.workers);
  std::vector<double> x_all, iso_all, sq_all, pre_all, tx, twin;
  for (std::size_t di = 0; di < cfg.mesh_exponents.size(); ++di) {
    const double delta = std::ldexp(1.0, -cfg.mesh_exponents[di]);
    PlanarGraph g = grid_graph(cfg.half, delta);
    const int i_min = static_cast<int>(std::ceil(std::log(delta))) + cfg.c0;
    const int i_max = scale_top(g);
    if (i_min >= i_max) throw std::invalid_argument("mesh too coarse for one scale");
    const int v0 = g.nearest_vertex({0, 0});
    const auto sizes = batch_sizes(cfg.samples, cfg.batches);
    std::vector<std::vector<BranchStats>> res(cfg.batches);
    parallel_for(cfg.batches, workers, [&](std::size_t b) {
      Rng rng = make_stream(cfg.seed, 1000 * di + b);
      for (long i = 0; i < sizes[b]; ++i) {
        WalkPath w = random_walk_to_boundary(g, v0, rng);
        Polyline xw;
        xw.reserve(w.size());
        for (int v : w) xw.push_back(g.pos(v));
        WalkPath y = forward_loop_erase(w);
        Polyline py;
        for (int v : y) py.push_back(g.pos(v));
        CrossingTrace tr = crossing_decomposition(xw, i_min, i_max);
        ScaleClassification cls = classify_scales(tr);
        isolated_scales(tr, xw, cls);
        res[b].push_back({winding_topological(py, g.pos(v0)), static_cast<int>(cls.pre_isolated.size()),
                          static_cast<int>(cls.even.size()), static_cast<int>(cls.isolated.size()), w.size()});
      }
    });
    std::vector<BranchStats> all;
    for (const auto& r : res) all.insert(all.end(), r.begin(), r.end());
    const double n = static_cast<double>(all.size());
    double mean = 0;
    for (const auto& s : all) mean += s.winding / n;
    double m2 = 0, m4 = 0, pre = 0, even = 0, iso = 0, steps = 0;
    std::vector<double> turns;
    for (const auto& s : all) {
      double dev = s.winding - mean;
      m2 += dev * dev / n;
      m4 += dev * dev * dev * dev / n;
      pre += s.pre / n;
      even += s.even / n;
      iso += s.isolated / n;
      steps += s.steps / n;
      turns.push_back(s.winding / (2 * kPi));
      x_all.push_back(i_max - i_min);
      iso_all.push_back(s.isolated);
      pre_all.push_back(s.pre);
      sq_all.push_back(dev * dev);
    }
    json batch_w = json::array();
    for (int b = 0; b < cfg.batches; ++b) {
      std::vector<double> t;
      for (const auto& s : res[b]) t.push_back(s.winding / (2 * kPi));
      double wm = window_max(t);
      batch_w.push_back(wm);
      tx.push_back(i_max - i_min);
      twin.push_back(wm);
    }
    const double var = m2 * n / (n - 1);
    rep.rows.push_back({{"delta", delta},
                        {"i_min", i_min},
                        {"i_max", i_max},
                        {"scales", i_max - i_min},
                        {"branches", static_cast<long>(n)},
                        {"winding_mean", mean},
                        {"winding_variance", var},
                        {"winding_variance_ci_halfwidth", 1.959963984540054 * std::sqrt(std::max(0.0, m4 - m2 * m2) / n)},
                        {"window_max", window_max(turns)},
                        {"mean_pre_isolated", pre},
                        {"mean_even_pre_isolated", even},
                        {"mean_isolated", iso},
                        {"mean_walk_steps", steps},
                        {"batch_window_max", batch_w}});
  }
  if (x_all.size() > 2 && std::adjacent_find(x_all.begin(), x_all.end(), std::not_equal_to<>()) != x_all.end()) {
    rep.trends["isolated_slope"] = slope_json(ols_slope(x_all, iso_all));
    rep.trends["pre_isolated_slope"] = slope_json(ols_slope(x_all, pre_all));
    rep.trends["winding_variance_slope"] = slope_json(ols_slope(x_all, sq_all));
    rep.trends["window_max"] = trend_json(mann_kendall(tx, twin, true), true);
  }
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

Report run_subtree(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.kind = "subtree";
  rep.seed = cfg.seed;
  rep.config = report_config(cfg);
  PlanarGraph g = grid_graph(cfg.half, cfg.mesh);
  const std::size_t nr = cfg.radii.size();
  std::vector<std::vector<int>> vsets(nr);
  for (std::size_t r = 0; r < nr; ++r)
    for (int v = 0; v < g.num_vertices(); ++v)
      if (norm(g.pos(v)) >= cfg.radii[r]) vsets[r].push_back(v);
  for (const auto& vs : vsets)
    if (vs.empty()) throw std::invalid_argument("subtree radius beyond the grid");
  const auto sizes = batch_sizes(cfg.samples, cfg.batches);
  std::vector<std::vector<long>> hits(cfg.batches, std::vector<long>(nr, 0));
  parallel_for(cfg.batches, resolve_workers(cfg.workers), [&](std::size_t b) {
    Rng rng = make_stream(cfg.seed, b);
    for (long i = 0; i < sizes[b]; ++i) {
      WiredTree t = wilson_ust(g, {}, rng);
      for (std::size_t r = 0; r < nr; ++r) hits[b][r] += subtree_spanning(t, vsets[r]).distance_to(g, {0, 0}) < 1;
    }
  });
  std::vector<double> tx, ty;
  for (std::size_t r = 0; r < nr; ++r) {
    long total = 0;
    json batch = json::array();
    for (int b = 0; b < cfg.batches; ++b) {
      total += hits[b][r];
      double rate = static_cast<double>(hits[b][r]) / sizes[b];
      batch.push_back(rate);
      tx.push_back(cfg.radii[r]);
      ty.push_back(rate);
    }
    double p = static_cast<double>(total) / cfg.samples;
    rep.rows.push_back({{"R", cfg.radii[r]},
                        {"trees", cfg.samples},
                        {"hit_probability", p},
                        {"hit_ci_halfwidth", binomial_halfwidth(p, static_cast<double>(cfg.samples))},
                        {"batch_hit_probability", batch}});
  }
  rep.trends["hit_probability"] = trend_json(mann_kendall(tx, ty, true), true);
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

Report run_experiment(const ExperimentConfig& cfg) {
  if (cfg.kind == "robustness") return run_robustness(cfg);
  if (cfg.kind == "spreadout") return run_spread_out(cfg);
  if (cfg.kind == "winding") return run_nonconcentration(cfg);
  if (cfg.kind == "subtree") return run_subtree(cfg);
  throw std::invalid_argument("unknown experiment kind: " + cfg.kind);
}

}  // namespace lozlab
