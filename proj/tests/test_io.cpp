#include <catch2/catch_amalgamated.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pvtess/errors.hpp"
#include "pvtess/io.hpp"

using namespace pvtess;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / ("pvtess_io_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(hex16(0xaf63dc4c8601ec8cull) == "af63dc4c8601ec8c");
  CHECK(hex16(1) == "0000000000000001");
}

TEST_CASE("format_double round-trips and is locale-free") {
  for (double v : {0.1, 1.0 / 3.0, -2.5, 1e300, 5e-324, 6.954929658551372,
                   0.07957747154594767, -0.0, 12345.0}) {
    std::string s = format_double(v);
    double back = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(ec == std::errc());
    CHECK(p == s.data() + s.size());
    CHECK(back == v);
    CHECK(s.find(',') == std::string::npos);
  }
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("csv escaping round-trips") {
  std::vector<std::string> cells = {"plain", "with,comma", "say \"hi\"", "", "1.5"};
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += io_detail::csv_escape(cells[i]);
  }
  CHECK(io_detail::csv_split(line) == cells);
  CHECK(io_detail::csv_escape("a,b") == "\"a,b\"");
  CHECK(io_detail::csv_escape("q\"q") == "\"q\"\"q\"");
}

TEST_CASE("csv writer emits LF-only bytes") {
  auto dir = scratch_dir("writer");
  {
    CsvWriter w(dir / "t.csv", {"a", "b"});
    w.row({"1", "x,y"});
  }
  std::string raw = slurp(dir / "t.csv");
  CHECK(raw == "a,b\n1,\"x,y\"\n");
}

TEST_CASE("config defaults and canonical round-trip") {
  ExperimentConfig cfg = parse_config(Json{{"experiment", "degree"}});
  CHECK(cfg.space == Space::hyperbolic);
  CHECK(cfg.lambda == 1.0);
  CHECK(cfg.window_radius == 8.0);
  CHECK(cfg.replicas == 100);
  CHECK(cfg.seed == 1);
  CHECK(cfg.kind == "poisson");
  // The canonical document lists every effective field, so feeding it back
  // reproduces itself byte for byte and the hash is stable.
  ExperimentConfig again = parse_config(cfg.canonical);
  CHECK(again.canonical.dump() == cfg.canonical.dump());
  CHECK(again.hash() == cfg.hash());
  CHECK(cfg.hash().size() == 16);

  ExperimentConfig other = parse_config(Json{{"experiment", "degree"}, {"seed", 2}});
  CHECK(other.hash() != cfg.hash());
}

TEST_CASE("config rejects bad fields by name") {
  CHECK_THROWS_WITH(parse_config(Json{{"experiment", "degree"}, {"lambda", -1.0}}),
                    "lambda: must be a positive number");
  CHECK_THROWS_WITH(parse_config(Json{{"experiment", "degree"}, {"space", "flat"}}),
                    "space: must be \"euclidean\" or \"hyperbolic\"");
  CHECK_THROWS_WITH(parse_config(Json{{"experiment", "degree"}, {"replicas", 0}}),
                    "replicas: must be a positive integer");
  CHECK_THROWS_WITH(parse_config(Json{{"experiment", "degree"}, {"seed", -3}}),
                    "seed: must be an unsigned 64-bit integer");
  CHECK_THROWS_WITH(parse_config(Json{{"experiment", "degree"}, {"bogus", 1}}),
                    "bogus: unknown config field");
  CHECK_THROWS_AS(parse_config(Json::array()), config_error);
}

TEST_CASE("replica log resume keeps complete replicas only") {
  auto dir = scratch_dir("log1");
  {
    ReplicaLog log(dir, {"v"}, 2, false);
    log.append(0, {{"1"}, {"2"}});
    log.append(2, {{"5"}, {"6"}});
  }
  // Simulate a truncated write: replica 1 gets only one of its two rows.
  {
    std::ofstream out(dir / "replicas.csv", std::ios::binary | std::ios::app);
    out << "1,3\n";
  }
  ReplicaLog log(dir, {"v"}, 2, true);
  CHECK(log.done(0));
  CHECK(log.done(2));
  CHECK_FALSE(log.done(1));
  log.append(1, {{"3"}, {"4"}});
  CHECK(log.done(1));
  CHECK(log.rows().at(1) == std::vector<std::vector<std::string>>{{"3"}, {"4"}});
}

TEST_CASE("replica log last rows win after re-append") {
  auto dir = scratch_dir("log2");
  {
    std::ofstream out(dir / "replicas.csv", std::ios::binary);
    out << "replica,v\n0,stale\n0,fresh1\n0,fresh2\n";
  }
  ReplicaLog log(dir, {"v"}, 2, true);
  REQUIRE(log.done(0));
  CHECK(log.rows().at(0) == std::vector<std::vector<std::string>>{{"fresh1"}, {"fresh2"}});
}

TEST_CASE("replica log rejects wrong row shape") {
  auto dir = scratch_dir("log3");
  ReplicaLog log(dir, {"v"}, 2, false);
  CHECK_THROWS_AS(log.append(0, {{"1"}}), std::logic_error);
}

TEST_CASE("finalized log bytes are independent of interruption") {
  auto a = scratch_dir("log4a");
  auto b = scratch_dir("log4b");
  auto run = [](ReplicaLog& log, std::size_t r) {
    log.append(r, {{format_uint(10 + r)}});
  };
  {
    ReplicaLog log(a, {"v"}, 1, true);
    for (std::size_t r : {2, 0, 1, 3}) run(log, r);
    log.finalize();
  }
  {
    ReplicaLog first(b, {"v"}, 1, true);
    run(first, 0);
    run(first, 3);
  }  // killed mid-run
  {
    ReplicaLog resumed(b, {"v"}, 1, true);
    CHECK(resumed.done(0));
    CHECK(resumed.done(3));
    for (std::size_t r : {1, 2}) run(resumed, r);
    resumed.finalize();
  }
  CHECK(slurp(a / "replicas.csv") == slurp(b / "replicas.csv"));
}
