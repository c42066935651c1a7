#ifndef PVTESS_IO_HPP
#define PVTESS_IO_HPP

// Result persistence: RFC-4180 CSV with LF line endings and locale-free
// number formatting, canonical JSON configs with an FNV-1a hash binding
// outputs to the exact parameters that produced them, and a per-replica log
// that lets an interrupted run resume without changing the final bytes.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pvtess/errors.hpp"
#include "pvtess/geometry.hpp"

namespace pvtess {

inline constexpr const char* kToolVersion = "pvtess 0.1.0";

using Json = nlohmann::json;  // std::map keys, so dumps carry a stable key order

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

// Shortest round-tripping decimal form, independent of any locale.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline std::string format_int(long long v) { return std::to_string(v); }
inline std::string format_uint(std::uint64_t v) { return std::to_string(v); }

namespace io_detail {

inline bool needs_quotes(std::string_view cell) {
  return cell.find_first_of(",\"\n\r") != std::string_view::npos;
}

inline std::string csv_escape(std::string_view cell) {
  if (!needs_quotes(cell)) return std::string(cell);
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// One CSV record, honouring quotes; returns the cells. Embedded newlines are
// not needed by any writer here, so a record is one line.
inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace io_detail

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw config_error("out: cannot write " + path.string());
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << io_detail::csv_escape(cells[i]);
    }
    out_ << '\n';
  }

  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

// --- configuration --------------------------------------------------------

struct ExperimentConfig {
  std::string experiment;
  Space space = Space::hyperbolic;
  std::string kind = "poisson";  // poisson | palm | kac
  double lambda = 1.0;
  int degree = 1000;
  double window_radius = 8.0;
  std::size_t replicas = 100;
  std::uint64_t seed = 1;
  long long steps = 2000;
  std::vector<long long> steps_grid{500, 2000, 8000};
  double delta = 0.1;
  std::vector<double> delta_grid{0.1, 0.03};
  std::vector<double> radius_grid{2.0, 3.0, 4.0};
  std::vector<int> hop_grid{5, 6, 7};
  std::vector<double> t_grid{0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
  std::vector<double> shape_radii{1.0, 2.0, 4.0};
  std::string transport = "f2";
  std::size_t mc_points = 20000;
  std::string out = "out";

  Json canonical;  // every effective field, sorted keys

  std::string hash() const { return hex16(fnv1a64(canonical.dump())); }
};

namespace io_detail {

inline double want_positive(const Json& j, const char* field) {
  if (!j.is_number()) throw config_error(std::string(field) + ": must be a positive number");
  double v = j.get<double>();
  if (!(v > 0.0)) throw config_error(std::string(field) + ": must be a positive number");
  return v;
}

inline long long want_positive_int(const Json& j, const char* field) {
  if (!j.is_number_integer()) throw config_error(std::string(field) + ": must be a positive integer");
  long long v = j.get<long long>();
  if (v <= 0) throw config_error(std::string(field) + ": must be a positive integer");
  return v;
}

inline std::vector<double> want_positive_array(const Json& j, const char* field) {
  if (!j.is_array() || j.empty())
    throw config_error(std::string(field) + ": must be a nonempty array of positive numbers");
  std::vector<double> out;
  for (const Json& e : j) out.push_back(want_positive(e, field));
  return out;
}

}  // namespace io_detail

// Parses and normalizes a config document: unknown fields are errors, every
// field ends up with an effective value, and `canonical` holds the full
// normalized form whose dump is hashed into the manifests.
inline ExperimentConfig parse_config(const Json& doc) {
  if (!doc.is_object()) throw config_error("config: document must be a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "experiment") {
      if (!value.is_string()) throw config_error("experiment: must be a string");
      cfg.experiment = value.get<std::string>();
    } else if (key == "space") {
      std::string s = value.is_string() ? value.get<std::string>() : "";
      if (s == "euclidean")
        cfg.space = Space::euclidean;
      else if (s == "hyperbolic")
        cfg.space = Space::hyperbolic;
      else
        throw config_error("space: must be \"euclidean\" or \"hyperbolic\"");
    } else if (key == "kind") {
      std::string s = value.is_string() ? value.get<std::string>() : "";
      if (s != "poisson" && s != "palm" && s != "kac")
        throw config_error("kind: must be \"poisson\", \"palm\" or \"kac\"");
      cfg.kind = s;
    } else if (key == "lambda") {
      cfg.lambda = io_detail::want_positive(value, "lambda");
    } else if (key == "degree") {
      cfg.degree = static_cast<int>(io_detail::want_positive_int(value, "degree"));
    } else if (key == "window_radius") {
      cfg.window_radius = io_detail::want_positive(value, "window_radius");
    } else if (key == "replicas") {
      cfg.replicas = static_cast<std::size_t>(io_detail::want_positive_int(value, "replicas"));
    } else if (key == "seed") {
      if (!value.is_number_integer() ||
          (!value.is_number_unsigned() && value.get<long long>() < 0))
        throw config_error("seed: must be an unsigned 64-bit integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "steps") {
      cfg.steps = io_detail::want_positive_int(value, "steps");
    } else if (key == "steps_grid") {
      if (!value.is_array() || value.empty())
        throw config_error("steps_grid: must be a nonempty array of positive integers");
      cfg.steps_grid.clear();
      for (const Json& e : value)
        cfg.steps_grid.push_back(io_detail::want_positive_int(e, "steps_grid"));
    } else if (key == "delta") {
      cfg.delta = io_detail::want_positive(value, "delta");
    } else if (key == "delta_grid") {
      cfg.delta_grid = io_detail::want_positive_array(value, "delta_grid");
    } else if (key == "radius_grid") {
      cfg.radius_grid = io_detail::want_positive_array(value, "radius_grid");
    } else if (key == "hop_grid") {
      if (!value.is_array() || value.empty())
        throw config_error("hop_grid: must be a nonempty array of positive integers");
      cfg.hop_grid.clear();
      for (const Json& e : value)
        cfg.hop_grid.push_back(static_cast<int>(io_detail::want_positive_int(e, "hop_grid")));
    } else if (key == "t_grid") {
      cfg.t_grid = io_detail::want_positive_array(value, "t_grid");
    } else if (key == "shape_radii") {
      cfg.shape_radii = io_detail::want_positive_array(value, "shape_radii");
    } else if (key == "transport") {
      if (!value.is_string()) throw config_error("transport: must be a string");
      cfg.transport = value.get<std::string>();
    } else if (key == "mc_points") {
      cfg.mc_points = static_cast<std::size_t>(io_detail::want_positive_int(value, "mc_points"));
    } else if (key == "out") {
      if (!value.is_string() || value.get<std::string>().empty())
        throw config_error("out: must be a nonempty string");
      cfg.out = value.get<std::string>();
    } else {
      throw config_error(key + ": unknown config field");
    }
  }
  cfg.canonical = Json{
      {"experiment", cfg.experiment},
      {"space", cfg.space == Space::euclidean ? "euclidean" : "hyperbolic"},
      {"kind", cfg.kind},
      {"lambda", cfg.lambda},
      {"degree", cfg.degree},
      {"window_radius", cfg.window_radius},
      {"replicas", cfg.replicas},
      {"seed", cfg.seed},
      {"steps", cfg.steps},
      {"steps_grid", cfg.steps_grid},
      {"delta", cfg.delta},
      {"delta_grid", cfg.delta_grid},
      {"radius_grid", cfg.radius_grid},
      {"hop_grid", cfg.hop_grid},
      {"t_grid", cfg.t_grid},
      {"shape_radii", cfg.shape_radii},
      {"transport", cfg.transport},
      {"mc_points", cfg.mc_points},
      {"out", cfg.out},
  };
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("config: cannot read " + path.string());
  Json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw config_error("config: invalid JSON in " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

inline void write_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw config_error("out: cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

// --- resumable replica log --------------------------------------------------

// Per-replica result rows in replicas.csv. A replica counts as complete once
// all of its rows are present, so a killed run recomputes at most one
// replica; finalize() rewrites the file sorted by replica, making the final
// bytes independent of interruption and completion order.
class ReplicaLog {
 public:
  ReplicaLog(const std::filesystem::path& dir, std::vector<std::string> payload_header,
             std::size_t rows_per_replica, bool resume)
      : path_(dir / "replicas.csv"),
        header_(std::move(payload_header)),
        rows_per_replica_(rows_per_replica) {
    if (resume && std::filesystem::exists(path_)) load();
    std::ios::openmode mode = std::ios::binary | (loaded_ ? std::ios::app : std::ios::trunc);
    out_.open(path_, mode);
    if (!out_) throw config_error("out: cannot write " + path_.string());
    if (!loaded_) write_header();
  }

  bool done(std::size_t replica) const {
    auto it = rows_.find(replica);
    return it != rows_.end() && it->second.size() == rows_per_replica_;
  }

  void append(std::size_t replica, std::vector<std::vector<std::string>> rows) {
    if (rows.size() != rows_per_replica_)
      throw std::logic_error("replica log: row count does not match the declared shape");
    for (const auto& r : rows) {
      std::vector<std::string> full;
      full.push_back(format_uint(replica));
      full.insert(full.end(), r.begin(), r.end());
      write_row(full);
    }
    out_.flush();
    rows_[replica] = std::move(rows);
  }

  // Sorted rewrite; call once every replica is complete.
  void finalize() {
    out_.close();
    out_.open(path_, std::ios::binary | std::ios::trunc);
    if (!out_) throw config_error("out: cannot write " + path_.string());
    write_header();
    for (const auto& [replica, rows] : rows_) {
      for (const auto& r : rows) {
        std::vector<std::string> full;
        full.push_back(format_uint(replica));
        full.insert(full.end(), r.begin(), r.end());
        write_row(full);
      }
    }
    out_.flush();
  }

  const std::map<std::size_t, std::vector<std::vector<std::string>>>& rows() const {
    return rows_;
  }

 private:
  void write_header() {
    std::vector<std::string> full;
    full.push_back("replica");
    full.insert(full.end(), header_.begin(), header_.end());
    write_row(full);
    out_.flush();
  }

  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << io_detail::csv_escape(cells[i]);
    }
    out_ << '\n';
  }

  void load() {
    std::ifstream in(path_, std::ios::binary);
    if (!in) return;
    std::string line;
    bool first = true;
    std::map<std::size_t, std::vector<std::vector<std::string>>> parsed;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> cells = io_detail::csv_split(line);
      if (first) {
        first = false;
        continue;  // header
      }
      if (cells.size() != header_.size() + 1) continue;  // truncated tail row
      std::size_t replica = 0;
      auto [p, ec] = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), replica);
      if (ec != std::errc() || p != cells[0].data() + cells[0].size()) continue;
      parsed[replica].push_back(std::vector<std::string>(cells.begin() + 1, cells.end()));
    }
    // Keep only complete replicas; partial ones are recomputed. A replica
    // re-appended after an interrupted write holds stale rows before the
    // complete set, so the last rows_per_replica_ rows win.
    for (auto& [replica, rows] : parsed) {
      if (rows.size() < rows_per_replica_) continue;
      rows_[replica] = std::vector<std::vector<std::string>>(
          rows.end() - static_cast<std::ptrdiff_t>(rows_per_replica_), rows.end());
    }
    loaded_ = !rows_.empty();
  }

  std::filesystem::path path_;
  std::vector<std::string> header_;
  std::size_t rows_per_replica_;
  std::map<std::size_t, std::vector<std::vector<std::string>>> rows_;
  std::ofstream out_;
  bool loaded_ = false;
};

}  // namespace pvtess

#endif  // PVTESS_IO_HPP
