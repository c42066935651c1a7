#ifndef PVTESS_EXPERIMENTS_HPP
#define PVTESS_EXPERIMENTS_HPP

// The batch experiments behind `run`: each one is a pure per-replica worker
// emitting CSV payload rows plus an aggregator turning the full row set into
// StatsRecord JSON. Workers draw replica-derived streams, so any subset of
// replicas can run in any order, in parallel, or across interrupted sessions
// without changing a byte of the final output.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "pvtess/amen.hpp"
#include "pvtess/io.hpp"
#include "pvtess/pointproc.hpp"
#include "pvtess/stats.hpp"
#include "pvtess/tess.hpp"
#include "pvtess/walk.hpp"

namespace pvtess {

using ReplicaRows = std::vector<std::vector<std::string>>;
using RowMap = std::map<std::size_t, ReplicaRows>;

struct Experiment {
  std::vector<std::string> header;  // payload columns, after the replica column
  std::size_t rows_per_replica = 1;
  std::function<ReplicaRows(std::size_t)> worker;
  std::function<Json(const RowMap&)> aggregate;
};

namespace exp_detail {

inline double cell(const ReplicaRows::value_type& row, std::size_t i) {
  return std::stod(row[i]);
}

inline Json stats_record(const std::string& estimator, Json params, double estimate,
                         Interval ci, std::size_t used, std::size_t discarded) {
  ci.lo = std::min(ci.lo, estimate);
  ci.hi = std::max(ci.hi, estimate);
  return Json{{"estimator", estimator}, {"params", std::move(params)},
              {"estimate", estimate},   {"ci_lo", ci.lo},
              {"ci_hi", ci.hi},         {"replicas", used},
              {"discarded", discarded}};
}

inline Interval binomial_ci(double p, std::size_t n) {
  double se = n == 0 ? 0.0 : std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
  return {std::max(0.0, p - 1.96 * se), std::min(1.0, p + 1.96 * se)};
}

inline Json mean_record(const std::string& estimator, Json params,
                        const std::vector<double>& values, std::size_t discarded) {
  Summary s = summarize(values);
  Interval ci = values.size() > 1 ? normal_ci(s) : Interval{s.mean, s.mean};
  return stats_record(estimator, std::move(params), s.mean, ci, values.size(), discarded);
}

inline EmbeddedNetwork replica_network(const ExperimentConfig& cfg, std::size_t replica) {
  Rng rng = derive_stream(cfg.seed, replica, 1);
  bool palm = cfg.kind == "palm";
  return delaunay(sample_poisson(cfg.space, cfg.lambda, cfg.window_radius, rng, palm));
}

inline std::string space_name(Space s) {
  return s == Space::euclidean ? "euclidean" : "hyperbolic";
}

}  // namespace exp_detail

// --- the ten experiments ----------------------------------------------------

namespace exp_detail {

inline Experiment degree_experiment(const ExperimentConfig& cfg) {
  Experiment e;
  e.header = {"certified", "mean_degree"};
  e.worker = [cfg](std::size_t replica) -> ReplicaRows {
    EmbeddedNetwork net = replica_network(cfg, replica);
    std::size_t certified = 0;
    for (std::size_t v = 0; v < net.vertex_count(); ++v)
      if (net.certified[v]) ++certified;
    if (certified == 0) return {{"0", ""}};
    return {{format_uint(certified), format_double(degree_moment(net, 1))}};
  };
  e.aggregate = [cfg](const RowMap& rows) {
    std::vector<double> means;
    std::size_t discarded = 0;
    for (const auto& [r, rr] : rows) {
      if (rr[0][0] == "0")
        ++discarded;
      else
        means.push_back(cell(rr[0], 1));
    }
    Json params{{"space", space_name(cfg.space)},
                {"lambda", cfg.lambda},
                {"window_radius", cfg.window_radius}};
    return Json::array({mean_record("mean_degree", params, means, discarded)});
  };
  return e;
}

inline Experiment cellvol_experiment(const ExperimentConfig& cfg) {
  Experiment e;
  e.header = {"certified_cells", "mean_volume"};
  e.worker = [cfg](std::size_t replica) -> ReplicaRows {
    EmbeddedNetwork net = replica_network(cfg, replica);
    std::size_t cells = 0;
    for (const VoronoiCell& c : voronoi_cells(net))
      if (c.certified) ++cells;
    if (cells == 0) return {{"0", ""}};
    return {{format_uint(cells), format_double(cell_volume_moment(net, 1))}};
  };
  e.aggregate = [cfg](const RowMap& rows) {
    std::vector<double> means;
    std::size_t discarded = 0;
    for (const auto& [r, rr] : rows) {
      if (rr[0][0] == "0")
        ++discarded;
      else
        means.push_back(cell(rr[0], 1));
    }
    Json params{{"space", space_name(cfg.space)},
                {"lambda", cfg.lambda},
                {"window_radius", cfg.window_radius}};
    return Json::array({mean_record("mean_cell_volume", params, means, discarded)});
  };
  return e;
}

inline Experiment speed_experiment(const ExperimentConfig& cfg) {
  Experiment e;
  e.header = {"steps", "displacement"};
  e.rows_per_replica = cfg.steps_grid.size();
  std::vector<long long> grid = cfg.steps_grid;
  e.worker = [cfg, grid](std::size_t replica) -> ReplicaRows {
    std::uint64_t walker_seed = derive_stream(cfg.seed, replica, 9).next();
    LazyWalker walker(cfg.space, cfg.lambda, walker_seed);
    long long horizon = *std::max_element(grid.begin(), grid.end());
    ReplicaRows rows;
    std::size_t next = 0;
    std::vector<long long> sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    for (long long n = 1; n <= horizon; ++n) {
      walker.step();
      while (next < sorted.size() && sorted[next] == n) {
        rows.push_back({format_int(n), format_double(walker.displacement())});
        ++next;
      }
    }
    return rows;
  };
  e.aggregate = [cfg, grid](const RowMap& rows) {
    Json records = Json::array();
    std::vector<long long> sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      std::vector<double> speeds;
      for (const auto& [r, rr] : rows)
        speeds.push_back(cell(rr[i], 1) / static_cast<double>(sorted[i]));
      records.push_back(mean_record(
          "embedded_speed",
          Json{{"space", space_name(cfg.space)}, {"steps", sorted[i]}}, speeds, 0));
    }
    if (sorted.size() >= 2) {
      std::vector<double> slopes;
      std::size_t discarded = 0;
      for (const auto& [r, rr] : rows) {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
          double d = cell(rr[i], 1);
          if (d <= 0.0) continue;
          lx.push_back(std::log(static_cast<double>(sorted[i])));
          ly.push_back(std::log(d));
        }
        if (lx.size() == sorted.size())
          slopes.push_back(ols_slope(lx, ly));
        else
          ++discarded;
      }
      records.push_back(mean_record(
          "loglog_slope", Json{{"space", space_name(cfg.space)}}, slopes, discarded));
    }
    return records;
  };
  return e;
}

inline Experiment tail_experiment(const ExperimentConfig& cfg) {
  Experiment e;
  e.header = {"certified", "diameter"};
  e.worker = [cfg](std::size_t replica) -> ReplicaRows {
    Rng rng = derive_stream(cfg.seed, replica, 1);
    EmbeddedNetwork net =
        delaunay(sample_poisson(cfg.space, cfg.lambda, cfg.window_radius, rng, true));
    VoronoiCell root = voronoi_cells(net)[0];
    if (!root.certified) return {{"0", ""}};
    double diam = 0.0;
    const std::vector<Point>& corners = root.boundary.vertices;
    for (std::size_t i = 0; i < corners.size(); ++i)
      for (std::size_t j = i + 1; j < corners.size(); ++j)
        diam = std::max(diam, dist(cfg.space, corners[i], corners[j]));
    return {{"1", format_double(diam)}};
  };
  e.aggregate = [cfg](const RowMap& rows) {
    std::vector<double> diams;
    std::size_t discarded = 0;
    for (const auto& [r, rr] : rows) {
      if (rr[0][0] == "0")
        ++discarded;
      else
        diams.push_back(cell(rr[0], 1));
    }
    std::vector<double> grid = cfg.radius_grid;
    std::sort(grid.begin(), grid.end());
    auto tail = [&](double t) {
      if (diams.empty()) return 0.0;
      std::size_t k = 0;
      for (double d : diams)
        if (d >= t) ++k;
      return static_cast<double>(k) / static_cast<double>(diams.size());
    };
    auto envelope_shape = [&](double t) {
      return ball_volume(cfg.space, t) *
             std::exp(-cfg.lambda * ball_volume(cfg.space, std::max(0.0, t - 1.0)));
    };
    double scale = tail(grid.front()) / envelope_shape(grid.front());
    Json records = Json::array();
    for (double t : grid) {
      double p = tail(t);
      records.push_back(stats_record("diameter_tail", Json{{"R", t}}, p,
                                     binomial_ci(p, diams.size()), diams.size(),
                                     discarded));
      double env = scale * envelope_shape(t);
      records.push_back(stats_record("diameter_tail_envelope", Json{{"R", t}}, env,
                                     Interval{env, env}, diams.size(), discarded));
    }
    return records;
  };
  return e;
}

inline Experiment d1d2_experiment(const ExperimentConfig& cfg) {
  double window = inverse_ball_volume(cfg.space, second_point_mass(1e-4) / cfg.delta);
  if (cfg.space == Space::hyperbolic && window > kMaxHyperbolicWindow)
    throw rejection_error("d1d2: delta so small the two-point window exceeds the chart cap");
  Experiment e;
  e.header = {"realized", "d1", "d2"};
  e.worker = [cfg, window](std::size_t replica) -> ReplicaRows {
    Rng rng = derive_stream(cfg.seed, replica, 11);
    RadialPoissonStream stream(cfg.space, cfg.delta, rng, window);
    if (stream.exhausted()) return {{"0", "", ""}};
    double d1 = dist(cfg.space, {0.0, 0.0}, stream.take());
    if (stream.exhausted()) return {{"0", "", ""}};
    double d2 = dist(cfg.space, {0.0, 0.0}, stream.take());
    return {{"1", format_double(d1), format_double(d2)}};
  };
  e.aggregate = [cfg](const RowMap& rows) {
    std::vector<double> d1s, gaps;
    std::size_t unrealized = 0;
    for (const auto& [r, rr] : rows) {
      if (rr[0][0] == "0") {
        ++unrealized;
        continue;
      }
      double d1 = cell(rr[0], 1), d2 = cell(rr[0], 2);
      d1s.push_back(d1);
      gaps.push_back(d2 - d1);
    }
    Json records = Json::array();
    if (!d1s.empty()) {
      double ks = ks_statistic(d1s, [&](double t) {
        return 1.0 - std::exp(-cfg.delta * ball_volume(cfg.space, std::max(0.0, t)));
      });
      records.push_back(stats_record("ks_d1", Json{{"delta", cfg.delta}}, ks,
                                     Interval{ks, ks}, d1s.size(), unrealized));
    }
    double reach = 2.0 * inverse_ball_volume(cfg.space, std::log(1e3) / cfg.delta);
    for (int i = 0; i < 20; ++i) {
      double t = reach * static_cast<double>(i) / 19.0;
      std::size_t k = 0;
      for (double g : gaps)
        if (g >= t) ++k;
      double p = gaps.empty() ? 0.0 : static_cast<double>(k) / static_cast<double>(gaps.size());
      records.push_back(stats_record("gap_tail", Json{{"t", t}}, p,
                                     binomial_ci(p, gaps.size()), gaps.size(), unrealized));
      double bound = std::exp(-cfg.delta * ball_volume(cfg.space, 0.5 * t));
      records.push_back(stats_record("gap_bound", Json{{"t", t}}, bound,
                                     Interval{bound, bound}, gaps.size(), unrealized));
    }
    return records;
  };
  return e;
}

inline Experiment percolation_experiment(const ExperimentConfig& cfg) {
  for (double delta : cfg.delta_grid) {
    double wq = cfg.window_radius +
                inverse_ball_volume(cfg.space, std::log(1e6) / delta);
    if (cfg.space == Space::hyperbolic && wq > kMaxHyperbolicWindow)
      throw rejection_error(
          "percolation: coarse window for the smallest delta exceeds the chart cap");
  }
  Experiment e;
  e.header = {"delta", "size", "boundary", "area", "exact"};
  e.rows_per_replica = cfg.delta_grid.size();
  e.worker = [cfg](std::size_t replica) -> ReplicaRows {
    Rng rng = derive_stream(cfg.seed, replica, 1);
    EmbeddedNetwork net =
        delaunay(sample_poisson(cfg.space, cfg.lambda, cfg.window_radius, rng, true));
    ReplicaRows rows;
    for (std::size_t di = 0; di < cfg.delta_grid.size(); ++di) {
      double delta = cfg.delta_grid[di];
      std::uint64_t coarse_seed = derive_stream(cfg.seed, replica, 20 + di).next();
      PercolationLabeling lab = coarsen_percolation(net, delta, coarse_seed);
      Cluster cl = root_cluster(net, lab, 0);
      rows.push_back({format_double(delta), format_uint(cl.vertex_ids.size()),
                      format_uint(cl.boundary_edge_count),
                      format_double(cl.cells_union_area), cl.exact ? "1" : "0"});
    }
    return rows;
  };
  e.aggregate = [cfg](const RowMap& rows) {
    Json records = Json::array();
    for (std::size_t di = 0; di < cfg.delta_grid.size(); ++di) {
      std::vector<double> ratios;
      std::size_t discarded = 0;
      for (const auto& [r, rr] : rows) {
        const auto& row = rr[di];
        if (row[4] != "1" || row[1] == "0") {
          ++discarded;
          continue;
        }
        ratios.push_back(cell(row, 2) / cell(row, 1));
      }
      if (ratios.empty()) continue;  // fully discarded delta: rows carry the evidence
      records.push_back(mean_record(
          "boundary_ratio",
          Json{{"space", space_name(cfg.space)}, {"delta", cfg.delta_grid[di]}}, ratios,
          discarded));
    }
    return records;
  };
  return e;
}

inline Experiment folner_experiment(const ExperimentConfig& cfg) {
  if (cfg.space == Space::hyperbolic)
    for (double r : cfg.shape_radii)
      if (r > kMaxHyperbolicWindow)
        throw rejection_error("folner: shape radius exceeds the chart cap");
  Experiment e;
  e.header = {"radius", "quotient", "vol"};
  e.rows_per_replica = cfg.shape_radii.size();
  e.worker = [cfg](std::size_t replica) -> ReplicaRows {
    ReplicaRows rows;
    for (std::size_t ri = 0; ri < cfg.shape_radii.size(); ++ri) {
      double radius = cfg.shape_radii[ri];
      double chart = cfg.space == Space::euclidean ? radius : std::tanh(0.5 * radius);
      GeodesicPolygon ball{cfg.space, {}};
      for (int k = 0; k < 64; ++k) {
        double th = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / 64.0;
        ball.vertices.push_back({chart * std::cos(th), chart * std::sin(th)});
      }
      std::vector<Isometry> team;
      for (int q = 0; q < 4; ++q)
        team.push_back(translation(cfg.space, 0.5 * std::numbers::pi * q, 1.0));
      Rng rng = derive_stream(cfg.seed, replica, 30 + ri);
      FolnerResult res = folner_quotient({ball}, team, cfg.mc_points, rng);
      rows.push_back({format_double(radius), format_double(res.quotient),
                      format_double(res.vol_v)});
    }
    return rows;
  };
  e.aggregate = [cfg](const RowMap& rows) {
    Json records = Json::array();
    for (std::size_t ri = 0; ri < cfg.shape_radii.size(); ++ri) {
      std::vector<double> quots;
      for (const auto& [r, rr] : rows) quots.push_back(cell(rr[ri], 1));
      records.push_back(mean_record(
          "folner_quotient",
          Json{{"space", space_name(cfg.space)}, {"radius", cfg.shape_radii[ri]}}, quots,
          0));
    }
    return records;
  };
  return e;
}

inline Experiment mtp_experiment(const ExperimentConfig& cfg) {
  amen_detail::transport_by_name(cfg.transport);  // fail fast on unknown names
  Experiment e;
  e.header = {"roots", "sent_mean", "received_mean"};
  e.worker = [cfg](std::size_t replica) -> ReplicaRows {
    EmbeddedNetwork net = replica_network(cfg, replica);
    MtpResult res = mtp_check(net, cfg.transport);
    return {{format_uint(res.roots), format_double(res.sent_mean),
             format_double(res.received_mean)}};
  };
  e.aggregate = [cfg](const RowMap& rows) {
    std::vector<double> sent, received, gap;
    for (const auto& [r, rr] : rows) {
      sent.push_back(cell(rr[0], 1));
      received.push_back(cell(rr[0], 2));
      gap.push_back(sent.back() - received.back());
    }
    Json params{{"space", space_name(cfg.space)}, {"transport", cfg.transport}};
    return Json::array({mean_record("mtp_sent", params, sent, 0),
                        mean_record("mtp_received", params, received, 0),
                        mean_record("mtp_gap", params, gap, 0)});
  };
  return e;
}

inline Experiment isoperimetric_experiment(const ExperimentConfig& cfg) {
  Experiment e;
  e.header = {"bound", "core", "component"};
  e.worker = [cfg](std::size_t replica) -> ReplicaRows {
    EmbeddedNetwork net = replica_network(cfg, replica);
    IsoperimetricBound res = isoperimetric_upper_bound(net);
    return {{format_double(res.bound), format_uint(res.core_size),
             format_uint(res.component_size)}};
  };
  e.aggregate = [cfg](const RowMap& rows) {
    std::vector<double> bounds;
    for (const auto& [r, rr] : rows) bounds.push_back(cell(rr[0], 0));
    Json params{{"space", space_name(cfg.space)},
                {"lambda", cfg.lambda},
                {"window_radius", cfg.window_radius}};
    return Json::array({mean_record("isoperimetric_bound", params, bounds, 0)});
  };
  return e;
}

inline Experiment ballgrowth_experiment(const ExperimentConfig& cfg) {
  Experiment e;
  e.header = {"R", "valid", "size", "growth", "max_embedded"};
  for (double t : cfg.t_grid) e.header.push_back("contained_t" + format_double(t));
  e.rows_per_replica = cfg.hop_grid.size();
  e.worker = [cfg](std::size_t replica) -> ReplicaRows {
    Rng rng = derive_stream(cfg.seed, replica, 1);
    EmbeddedNetwork net =
        delaunay(sample_poisson(cfg.space, cfg.lambda, cfg.window_radius, rng, true));
    ReplicaRows rows;
    for (const BallContainment& row :
         graph_ball_containment(net, 0, cfg.hop_grid, cfg.t_grid)) {
      std::vector<std::string> cells{format_int(row.radius), row.valid ? "1" : "0",
                                     format_uint(row.size), format_double(row.growth),
                                     format_double(row.max_embedded)};
      for (char c : row.contained) cells.push_back(c ? "1" : "0");
      rows.push_back(std::move(cells));
    }
    return rows;
  };
  e.aggregate = [cfg](const RowMap& rows) {
    Json records = Json::array();
    std::vector<double> growth_mean(cfg.hop_grid.size(), 0.0);
    for (std::size_t gi = 0; gi < cfg.hop_grid.size(); ++gi) {
      std::vector<double> growth;
      std::size_t discarded = 0;
      for (const auto& [r, rr] : rows) {
        if (rr[gi][1] != "1") {
          ++discarded;
          continue;
        }
        growth.push_back(cell(rr[gi], 3));
      }
      Json rec = mean_record("ball_growth", Json{{"R", cfg.hop_grid[gi]}}, growth,
                             discarded);
      growth_mean[gi] = rec["estimate"].get<double>();
      records.push_back(std::move(rec));
      for (std::size_t ti = 0; ti < cfg.t_grid.size(); ++ti) {
        std::size_t used = 0, noncontained = 0;
        for (const auto& [r, rr] : rows) {
          if (rr[gi][1] != "1") continue;
          ++used;
          if (rr[gi][5 + ti] != "1") ++noncontained;
        }
        double p = used == 0
                       ? 0.0
                       : static_cast<double>(noncontained) / static_cast<double>(used);
        records.push_back(stats_record(
            "noncontainment", Json{{"R", cfg.hop_grid[gi]}, {"t", cfg.t_grid[ti]}}, p,
            binomial_ci(p, used), used, rows.size() - used));
      }
    }
    if (cfg.hop_grid.size() >= 2 && growth_mean.front() > 0.0) {
      double change = std::abs(growth_mean.back() - growth_mean.front()) / growth_mean.front();
      records.push_back(stats_record(
          "growth_change",
          Json{{"R_lo", cfg.hop_grid.front()}, {"R_hi", cfg.hop_grid.back()}}, change,
          Interval{change, change}, rows.size(), 0));
    }
    return records;
  };
  return e;
}

}  // namespace exp_detail

inline Experiment make_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "degree") return exp_detail::degree_experiment(cfg);
  if (cfg.experiment == "cellvol") return exp_detail::cellvol_experiment(cfg);
  if (cfg.experiment == "speed") return exp_detail::speed_experiment(cfg);
  if (cfg.experiment == "tail") return exp_detail::tail_experiment(cfg);
  if (cfg.experiment == "d1d2") return exp_detail::d1d2_experiment(cfg);
  if (cfg.experiment == "percolation") return exp_detail::percolation_experiment(cfg);
  if (cfg.experiment == "folner") return exp_detail::folner_experiment(cfg);
  if (cfg.experiment == "mtp") return exp_detail::mtp_experiment(cfg);
  if (cfg.experiment == "isoperimetric") return exp_detail::isoperimetric_experiment(cfg);
  if (cfg.experiment == "ballgrowth") return exp_detail::ballgrowth_experiment(cfg);
  throw config_error("experiment: unknown name '" + cfg.experiment +
                     "' (expected one of speed, degree, cellvol, tail, d1d2, "
                     "percolation, folner, mtp, isoperimetric, ballgrowth)");
}

// Replica-level parallelism: workers are pure, so only the sink serializes.
inline void run_replicas(std::size_t jobs, const std::vector<std::size_t>& pending,
                         const std::function<ReplicaRows(std::size_t)>& worker,
                         const std::function<void(std::size_t, ReplicaRows)>& sink) {
  if (jobs <= 1 || pending.size() <= 1) {
    for (std::size_t r : pending) sink(r, worker(r));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      {
        std::lock_guard<std::mutex> lk(failure_mutex);
        if (failure) return;
      }
      try {
        ReplicaRows rows = worker(pending[i]);
        std::lock_guard<std::mutex> lk(sink_mutex);
        sink(pending[i], std::move(rows));
      } catch (...) {
        std::lock_guard<std::mutex> lk(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < std::min(jobs, pending.size()); ++j)
    pool.emplace_back(body);
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pvtess

#endif  // PVTESS_EXPERIMENTS_HPP
