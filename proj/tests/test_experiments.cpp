#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "pvtess/errors.hpp"
#include "pvtess/experiments.hpp"
#include "pvtess/io.hpp"

using namespace pvtess;
using Catch::Approx;

namespace {

RowMap run_all(const Experiment& e, std::size_t replicas, std::size_t jobs) {
  std::vector<std::size_t> pending;
  for (std::size_t r = 0; r < replicas; ++r) pending.push_back(r);
  RowMap out;
  run_replicas(jobs, pending, e.worker, [&](std::size_t r, ReplicaRows rows) {
    out[r] = std::move(rows);
  });
  return out;
}

void check_shape(const Experiment& e, const RowMap& rows) {
  for (const auto& [r, rr] : rows) {
    REQUIRE(rr.size() == e.rows_per_replica);
    for (const auto& row : rr) REQUIRE(row.size() == e.header.size());
  }
}

double record_estimate(const Json& records, const std::string& estimator) {
  for (const Json& rec : records)
    if (rec.at("estimator") == estimator) return rec.at("estimate").get<double>();
  FAIL("no record named " + estimator);
  return 0.0;
}

}  // namespace

TEST_CASE("unknown experiment name is a config error") {
  ExperimentConfig cfg = parse_config(Json{{"experiment", "nope"}});
  CHECK_THROWS_AS(make_experiment(cfg), config_error);
}

TEST_CASE("workers are pure and parallel scheduling changes nothing") {
  ExperimentConfig cfg = parse_config(Json{{"experiment", "degree"},
                                           {"space", "euclidean"},
                                           {"window_radius", 5.0},
                                           {"replicas", 4},
                                           {"seed", 21}});
  Experiment e = make_experiment(cfg);
  CHECK(e.worker(2) == e.worker(2));
  RowMap serial = run_all(e, 4, 1);
  RowMap parallel = run_all(e, 4, 3);
  CHECK(serial == parallel);
  check_shape(e, serial);
}

TEST_CASE("degree experiment lands near the euclidean mean") {
  ExperimentConfig cfg = parse_config(Json{{"experiment", "degree"},
                                           {"space", "euclidean"},
                                           {"window_radius", 7.0},
                                           {"replicas", 6},
                                           {"seed", 3}});
  Experiment e = make_experiment(cfg);
  RowMap rows = run_all(e, 6, 1);
  check_shape(e, rows);
  Json records = e.aggregate(rows);
  double est = record_estimate(records, "mean_degree");
  CHECK(est > 5.0);
  CHECK(est < 7.0);
  CHECK(records[0].at("replicas") == 6);
}

TEST_CASE("cell volume experiment lands near one over lambda") {
  ExperimentConfig cfg = parse_config(Json{{"experiment", "cellvol"},
                                           {"space", "euclidean"},
                                           {"lambda", 2.0},
                                           {"window_radius", 6.0},
                                           {"replicas", 6},
                                           {"seed", 4}});
  Experiment e = make_experiment(cfg);
  Json records = e.aggregate(run_all(e, 6, 1));
  double est = record_estimate(records, "mean_cell_volume");
  CHECK(est == Approx(0.5).epsilon(0.2));
}

TEST_CASE("speed experiment emits per-step records and a slope") {
  ExperimentConfig cfg = parse_config(Json{{"experiment", "speed"},
                                           {"space", "euclidean"},
                                           {"steps_grid", {16, 64}},
                                           {"replicas", 5},
                                           {"seed", 8}});
  Experiment e = make_experiment(cfg);
  REQUIRE(e.rows_per_replica == 2);
  RowMap rows = run_all(e, 5, 1);
  check_shape(e, rows);
  for (const auto& [r, rr] : rows) {
    CHECK(std::stod(rr[0][1]) >= 0.0);
    CHECK(rr[0][0] == "16");
    CHECK(rr[1][0] == "64");
  }
  Json records = e.aggregate(rows);
  bool saw_slope = false;
  for (const Json& rec : records) saw_slope |= rec.at("estimator") == "loglog_slope";
  CHECK(saw_slope);
}

TEST_CASE("tail experiment pins the envelope at the smallest radius") {
  ExperimentConfig cfg = parse_config(Json{{"experiment", "tail"},
                                           {"space", "euclidean"},
                                           {"kind", "palm"},
                                           {"window_radius", 4.0},
                                           {"radius_grid", {0.5, 1.5}},
                                           {"replicas", 12},
                                           {"seed", 5}});
  Experiment e = make_experiment(cfg);
  Json records = e.aggregate(run_all(e, 12, 1));
  double tail_lo = 0.0, env_lo = 0.0;
  for (const Json& rec : records) {
    if (rec.at("params").at("R") != 0.5) continue;
    if (rec.at("estimator") == "diameter_tail") tail_lo = rec.at("estimate").get<double>();
    if (rec.at("estimator") == "diameter_tail_envelope") env_lo = rec.at("estimate").get<double>();
  }
  CHECK(tail_lo == Approx(env_lo).margin(1e-12));
}

TEST_CASE("d1d2 rows order the two distances") {
  ExperimentConfig cfg = parse_config(Json{{"experiment", "d1d2"},
                                           {"space", "euclidean"},
                                           {"delta", 0.5},
                                           {"replicas", 20},
                                           {"seed", 6}});
  Experiment e = make_experiment(cfg);
  RowMap rows = run_all(e, 20, 1);
  check_shape(e, rows);
  std::size_t realized = 0;
  for (const auto& [r, rr] : rows) {
    if (rr[0][0] != "1") continue;
    ++realized;
    CHECK(std::stod(rr[0][1]) <= std::stod(rr[0][2]));
  }
  CHECK(realized > 0);
  Json records = e.aggregate(rows);
  CHECK(!records.empty());
}

TEST_CASE("percolation rows report cluster evidence per delta") {
  ExperimentConfig cfg = parse_config(Json{{"experiment", "percolation"},
                                           {"space", "euclidean"},
                                           {"window_radius", 6.0},
                                           {"delta_grid", {0.5}},
                                           {"replicas", 4},
                                           {"seed", 9}});
  Experiment e = make_experiment(cfg);
  RowMap rows = run_all(e, 4, 1);
  check_shape(e, rows);
  for (const auto& [r, rr] : rows) {
    CHECK(std::stod(rr[0][0]) == 0.5);
    CHECK(std::stod(rr[0][1]) >= 0.0);
  }
}

TEST_CASE("folner quotients stay positive on euclidean teams") {
  ExperimentConfig cfg = parse_config(Json{{"experiment", "folner"},
                                           {"space", "euclidean"},
                                           {"window_radius", 6.0},
                                           {"shape_radii", {1.0, 2.0}},
                                           {"mc_points", 400},
                                           {"replicas", 3},
                                           {"seed", 10}});
  Experiment e = make_experiment(cfg);
  RowMap rows = run_all(e, 3, 1);
  check_shape(e, rows);
  Json records = e.aggregate(rows);
  for (const Json& rec : records) CHECK(rec.at("estimate").get<double>() >= 0.0);
}

TEST_CASE("mtp experiment balances sent and received on average") {
  ExperimentConfig cfg = parse_config(Json{{"experiment", "mtp"},
                                           {"space", "euclidean"},
                                           {"window_radius", 7.5},
                                           {"transport", "adj"},
                                           {"replicas", 4},
                                           {"seed", 11}});
  Experiment e = make_experiment(cfg);
  RowMap rows = run_all(e, 4, 1);
  check_shape(e, rows);
  Json records = e.aggregate(rows);
  double sent = record_estimate(records, "mtp_sent");
  double gap = record_estimate(records, "mtp_gap");
  CHECK(sent > 0.0);
  CHECK(std::abs(gap) < sent);
}

TEST_CASE("isoperimetric bound is positive and finite") {
  ExperimentConfig cfg = parse_config(Json{{"experiment", "isoperimetric"},
                                           {"space", "euclidean"},
                                           {"window_radius", 6.0},
                                           {"replicas", 3},
                                           {"seed", 12}});
  Experiment e = make_experiment(cfg);
  Json records = e.aggregate(run_all(e, 3, 1));
  double est = record_estimate(records, "isoperimetric_bound");
  CHECK(est > 0.0);
  CHECK(std::isfinite(est));
}

TEST_CASE("ball growth rows are monotone in the hop radius") {
  ExperimentConfig cfg = parse_config(Json{{"experiment", "ballgrowth"},
                                           {"space", "euclidean"},
                                           {"kind", "palm"},
                                           {"window_radius", 8.0},
                                           {"hop_grid", {2, 4}},
                                           {"t_grid", {1.0, 2.0}},
                                           {"replicas", 3},
                                           {"seed", 13}});
  Experiment e = make_experiment(cfg);
  REQUIRE(e.header.size() == 7);
  RowMap rows = run_all(e, 3, 1);
  check_shape(e, rows);
  for (const auto& [r, rr] : rows) {
    if (rr[0][1] == "1" && rr[1][1] == "1")
      CHECK(std::stoull(rr[0][2]) <= std::stoull(rr[1][2]));
  }
  Json records = e.aggregate(rows);
  bool saw_change = false;
  for (const Json& rec : records) saw_change |= rec.at("estimator") == "growth_change";
  CHECK(saw_change);
}
