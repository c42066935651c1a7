// Batch driver: sampling, tessellation, walks, the ten experiments, and the
// two-panel disk figure. Exit codes: 0 success, 2 configuration error,
// 3 runtime rejection.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pvtess/experiments.hpp"
#include "pvtess/io.hpp"
#include "pvtess/pointproc.hpp"
#include "pvtess/svg.hpp"
#include "pvtess/tess.hpp"
#include "pvtess/walk.hpp"

namespace fs = std::filesystem;
using namespace pvtess;

namespace {

Json base_manifest(const ExperimentConfig& cfg) {
  return Json{{"config", cfg.canonical},
              {"config_hash", cfg.hash()},
              {"seed", cfg.seed},
              {"tool_version", kToolVersion}};
}

int cmd_sample(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.out);
  PointSample sample;
  if (cfg.kind == "kac") {
    sample = sample_kac_gaf(cfg.degree, cfg.seed);
  } else {
    sample = sample_poisson(cfg.space, cfg.lambda, cfg.window_radius, cfg.seed,
                            cfg.kind == "palm");
  }
  CsvWriter csv(fs::path(cfg.out) / "points.csv", {"x", "y"});
  for (const Point& p : sample.points)
    csv.row({format_double(p.x), format_double(p.y)});
  csv.flush();
  Json manifest = base_manifest(cfg);
  manifest["space"] = sample.space == Space::euclidean ? "euclidean" : "hyperbolic";
  manifest["kind"] = cfg.kind;
  manifest["lambda"] = sample.intensity;
  if (cfg.kind == "kac") manifest["degree"] = cfg.degree;
  manifest["window_radius"] = sample.window_radius;
  manifest["count"] = sample.points.size();
  write_json(fs::path(cfg.out) / "manifest.json", manifest);
  std::cout << "sample: " << sample.points.size() << " points -> " << cfg.out << "\n";
  return 0;
}

int cmd_tessellate(const ExperimentConfig& cfg) {
  if (cfg.kind == "kac")
    throw config_error("kind: tessellate supports poisson or palm");
  fs::create_directories(cfg.out);
  EmbeddedNetwork net = delaunay(
      sample_poisson(cfg.space, cfg.lambda, cfg.window_radius, cfg.seed,
                     cfg.kind == "palm"));
  std::size_t certified = 0;
  {
    CsvWriter csv(fs::path(cfg.out) / "vertices.csv",
                  {"id", "x", "y", "certified", "hull", "degree"});
    for (std::size_t v = 0; v < net.vertex_count(); ++v) {
      if (net.certified[v]) ++certified;
      csv.row({format_uint(v), format_double(net.vertex[v].x),
               format_double(net.vertex[v].y), net.certified[v] ? "1" : "0",
               net.hull[v] ? "1" : "0", format_uint(net.adj[v].size())});
    }
  }
  {
    CsvWriter csv(fs::path(cfg.out) / "edges.csv", {"a", "b", "mid_x", "mid_y"});
    for (std::size_t i = 0; i < net.edge_count(); ++i)
      csv.row({format_int(net.edges[i].first), format_int(net.edges[i].second),
               format_double(net.edge_midpoint[i].x),
               format_double(net.edge_midpoint[i].y)});
  }
  Json manifest = base_manifest(cfg);
  manifest["vertices"] = net.vertex_count();
  manifest["edges"] = net.edge_count();
  manifest["certified"] = certified;
  write_json(fs::path(cfg.out) / "manifest.json", manifest);
  std::cout << "tessellate: " << net.vertex_count() << " vertices, "
            << net.edge_count() << " edges -> " << cfg.out << "\n";
  return 0;
}

int cmd_walk(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.out);
  // The walk starts at the root, so the sample is always Palm-conditioned.
  EmbeddedNetwork net = delaunay(
      sample_poisson(cfg.space, cfg.lambda, cfg.window_radius, cfg.seed, true));
  WalkTrace trace = srw(net, 0, cfg.steps, derive_stream(cfg.seed, 0, 7).next());
  {
    CsvWriter csv(fs::path(cfg.out) / "trajectory.csv",
                  {"step", "vertex", "x", "y", "embedded", "graph"});
    for (std::size_t j = 0; j < trace.vertex_ids.size(); ++j) {
      int v = trace.vertex_ids[j];
      csv.row({format_uint(j), format_int(v), format_double(net.vertex[v].x),
               format_double(net.vertex[v].y),
               format_double(trace.embedded_displacements[j]),
               format_int(trace.graph_displacements[j])});
    }
  }
  Json manifest = base_manifest(cfg);
  manifest["steps_requested"] = cfg.steps;
  manifest["steps_done"] = trace.vertex_ids.size() - 1;
  manifest["censored"] = trace.censored;
  write_json(fs::path(cfg.out) / "manifest.json", manifest);
  std::cout << "walk: " << trace.vertex_ids.size() - 1 << " steps"
            << (trace.censored ? " (censored at the window shell)" : "") << " -> "
            << cfg.out << "\n";
  return 0;
}

int cmd_run(const ExperimentConfig& cfg, std::size_t jobs, std::size_t limit_replicas) {
  if (cfg.experiment.empty())
    throw config_error("experiment: required for run");
  Experiment exp = make_experiment(cfg);
  fs::create_directories(cfg.out);
  std::string hash = cfg.hash();

  bool resume = false;
  fs::path manifest_path = fs::path(cfg.out) / "manifest.json";
  if (fs::exists(manifest_path)) {
    std::ifstream in(manifest_path, std::ios::binary);
    Json old;
    try {
      in >> old;
      resume = old.value("config_hash", "") == hash;
    } catch (...) {
      resume = false;
    }
  }

  ReplicaLog log(cfg.out, exp.header, exp.rows_per_replica, resume);
  Json manifest = base_manifest(cfg);
  manifest["experiment"] = cfg.experiment;
  manifest["complete"] = false;
  write_json(manifest_path, manifest);

  std::vector<std::size_t> pending;
  for (std::size_t r = 0; r < cfg.replicas; ++r)
    if (!log.done(r)) pending.push_back(r);
  if (limit_replicas > 0 && pending.size() > limit_replicas)
    pending.resize(limit_replicas);

  auto t0 = std::chrono::steady_clock::now();
  run_replicas(jobs, pending, exp.worker,
               [&](std::size_t r, ReplicaRows rows) { log.append(r, std::move(rows)); });
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool all_done = true;
  for (std::size_t r = 0; r < cfg.replicas; ++r) all_done = all_done && log.done(r);
  if (!all_done) {
    std::size_t done = 0;
    for (std::size_t r = 0; r < cfg.replicas; ++r)
      if (log.done(r)) ++done;
    std::cout << "run " << cfg.experiment << ": partial, " << done << " of "
              << cfg.replicas << " replicas logged -> " << cfg.out << "\n";
    return 0;
  }

  log.finalize();
  Json records = exp.aggregate(log.rows());
  for (Json& rec : records) rec["wall_clock_seconds"] = elapsed;
  manifest["records"] = records;
  manifest["complete"] = true;
  write_json(manifest_path, manifest);
  std::cout << "run " << cfg.experiment << ": " << cfg.replicas << " replicas -> "
            << cfg.out << "\n";
  for (const Json& rec : records) {
    std::cout << "  " << rec["estimator"].get<std::string>() << " "
              << rec["params"].dump() << " = " << rec["estimate"].get<double>()
              << " [" << rec["ci_lo"].get<double>() << ", "
              << rec["ci_hi"].get<double>() << "]"
              << " (n=" << rec["replicas"].get<std::size_t>()
              << ", discarded=" << rec["discarded"].get<std::size_t>() << ")\n";
  }
  return 0;
}

int cmd_figure(const std::string& kind, const ExperimentConfig& cfg) {
  fs::create_directories(cfg.out);
  std::vector<DiskPanel> panels;
  Json meta;
  meta["degree"] = cfg.degree;
  meta["seed"] = cfg.seed;
  if (kind == "gaf" || kind == "pair") {
    FigurePanel p = gaf_figure_panel(cfg.degree, cfg.seed);
    panels.push_back(std::move(p.panel));
    meta["gaf"] = p.meta;
  }
  if (kind == "pv" || kind == "pair") {
    FigurePanel p = pv_figure_panel(cfg.degree, cfg.seed);
    panels.push_back(std::move(p.panel));
    meta["pv"] = p.meta;
  }
  std::string svg = figure_svg(panels, meta);
  fs::path svg_path = fs::path(cfg.out) / "figure.svg";
  std::ofstream out(svg_path, std::ios::binary | std::ios::trunc);
  if (!out) throw config_error("out: cannot write " + svg_path.string());
  out << svg;
  out.close();
  Json manifest = base_manifest(cfg);
  manifest["figure"] = meta;
  write_json(fs::path(cfg.out) / "manifest.json", manifest);
  std::cout << "figure " << kind << " -> " << svg_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson-Voronoi tessellations on the Euclidean and hyperbolic planes"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::uint64_t seed_override = 0;
  std::size_t jobs = 1;
  std::size_t limit_replicas = 0;
  app.add_option("--config", config_path, "JSON config file");
  auto* seed_opt = app.add_option("--seed", seed_override, "Master seed (overrides config)");
  auto* out_opt = app.add_option("--out", out_override, "Output directory (overrides config)");
  app.add_option("--jobs", jobs, "Worker threads for replica-level parallelism");

  CLI::App* sub_sample = app.add_subcommand("sample", "Draw a point sample and write CSV");
  CLI::App* sub_tess = app.add_subcommand("tessellate", "Sample and write the Delaunay network");
  CLI::App* sub_walk = app.add_subcommand("walk", "Simple random walk on a sampled network");
  CLI::App* sub_run = app.add_subcommand("run", "Run a replicated experiment");
  sub_run->add_option("--limit-replicas", limit_replicas,
                      "Stop after this many new replicas (testing aid)")
      ->group("");
  CLI::App* sub_figure = app.add_subcommand("figure", "Emit the two-panel disk figure");
  std::string figure_kind;
  sub_figure->add_option("kind", figure_kind, "gaf, pv or pair")
      ->required()
      ->check(CLI::IsMember({"gaf", "pv", "pair"}));

  // Global flags are accepted on either side of the subcommand name.
  for (CLI::App* sub : {sub_sample, sub_tess, sub_walk, sub_run, sub_figure})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Json doc = Json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) throw config_error("config: cannot read " + config_path);
      try {
        in >> doc;
      } catch (const std::exception& e) {
        throw config_error(std::string("config: invalid JSON: ") + e.what());
      }
    }
    ExperimentConfig cfg = parse_config(doc);
    if (*seed_opt || *out_opt) {
      Json effective = cfg.canonical;
      if (*seed_opt) effective["seed"] = seed_override;
      if (*out_opt) effective["out"] = out_override;
      cfg = parse_config(effective);
    }

    if (*sub_sample) return cmd_sample(cfg);
    if (*sub_tess) return cmd_tessellate(cfg);
    if (*sub_walk) return cmd_walk(cfg);
    if (*sub_run) return cmd_run(cfg, jobs, limit_replicas);
    if (*sub_figure) return cmd_figure(figure_kind, cfg);
    return 2;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rejection_error& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
