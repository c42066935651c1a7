// Simple random walk on the embedded Delaunay network: fixed-window traces
// with boundary censoring, speed estimation, degree biasing, graph-ball
// growth, and a windowless walker that re-roots the chart at the walker and
// reveals the point process lazily around it.

#ifndef PVTESS_WALK_HPP
#define PVTESS_WALK_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numbers>
#include <vector>

#include "pvtess/cellclip.hpp"
#include "pvtess/errors.hpp"
#include "pvtess/geometry.hpp"
#include "pvtess/pointproc.hpp"
#include "pvtess/rng.hpp"
#include "pvtess/stats.hpp"
#include "pvtess/tess.hpp"

namespace pvtess {

struct WalkTrace {
  std::vector<int> vertex_ids;                 // -1 for windowless traces
  std::vector<double> embedded_displacements;  // d(X_j, X_0), length units
  std::vector<int> graph_displacements;        // d_G(X_j, X_0), hops; may be empty
  bool censored = false;                       // walk reached an uncertified vertex
  std::uint64_t seed = 0;
};

// BFS hop distances from root over the whole sampled network; -1 = unreachable.
inline std::vector<int> graph_distances(const EmbeddedNetwork& net, int root) {
  if (root < 0 || root >= static_cast<int>(net.vertex_count()))
    throw std::invalid_argument("graph_distances: root out of range");
  std::vector<int> d(net.vertex_count(), -1);
  std::deque<int> fifo{root};
  d[root] = 0;
  while (!fifo.empty()) {
    int v = fifo.front();
    fifo.pop_front();
    for (int w : net.adj[v]) {
      if (d[w] >= 0) continue;
      d[w] = d[v] + 1;
      fifo.push_back(w);
    }
  }
  return d;
}

// Uniform-neighbor walk from a certified start vertex. The trace truncates
// with censored = true as soon as the walk steps onto an uncertified vertex
// (that vertex is recorded; its outgoing transition would be unreliable).
inline WalkTrace srw(const EmbeddedNetwork& net, int start_id, long long steps,
                     std::uint64_t seed) {
  if (start_id < 0 || start_id >= static_cast<int>(net.vertex_count()))
    throw std::invalid_argument("srw: start vertex out of range");
  if (steps < 0) throw std::invalid_argument("srw: negative step count");
  if (!net.certified[start_id]) throw rejection_error("srw: start vertex is not certified");
  if (net.adj[start_id].empty()) throw rejection_error("srw: start vertex is isolated");

  std::vector<int> hops = graph_distances(net, start_id);
  Rng rng(seed);
  WalkTrace trace;
  trace.seed = seed;
  int at = start_id;
  trace.vertex_ids.push_back(at);
  trace.embedded_displacements.push_back(0.0);
  trace.graph_displacements.push_back(0);
  for (long long j = 0; j < steps; ++j) {
    const std::vector<int>& nb = net.adj[at];
    at = nb[static_cast<std::size_t>(rng.next() % nb.size())];
    trace.vertex_ids.push_back(at);
    trace.embedded_displacements.push_back(dist(net.space, net.vertex[start_id], net.vertex[at]));
    trace.graph_displacements.push_back(hops[at]);
    if (!net.certified[at]) {
      trace.censored = true;
      break;
    }
  }
  return trace;
}

enum class SpeedMode { embedded, graph };

struct SpeedEstimate {
  SpeedMode mode = SpeedMode::embedded;
  long long length = 0;  // common trace length n (steps)
  double estimate = 0.0;
  Interval ci;
  double censored_fraction = 0.0;
  std::size_t replicas = 0;  // uncensored traces used
};

// Mean of displacement(n)/n over uncensored traces with a normal CI.
inline SpeedEstimate speed_estimate(const std::vector<WalkTrace>& traces, SpeedMode mode) {
  SpeedEstimate out;
  out.mode = mode;
  std::size_t censored = 0;
  std::vector<double> values;
  long long n = -1;
  for (const WalkTrace& t : traces) {
    if (t.censored) {
      ++censored;
      continue;
    }
    const std::vector<double>& emb = t.embedded_displacements;
    if (mode == SpeedMode::graph && t.graph_displacements.empty())
      throw std::invalid_argument("speed_estimate: trace lacks graph displacements");
    long long len = static_cast<long long>(emb.size()) - 1;
    if (n < 0) n = len;
    if (len != n)
      throw std::invalid_argument("speed_estimate: uncensored traces differ in length");
    double d = mode == SpeedMode::embedded
                   ? emb.back()
                   : static_cast<double>(t.graph_displacements.back());
    values.push_back(n == 0 ? 0.0 : d / static_cast<double>(n));
  }
  if (traces.empty() || values.empty())
    throw rejection_error("speed_estimate: all traces censored; enlarge the window");
  if (values.size() < 30)
    throw rejection_error("speed_estimate: need at least 30 uncensored traces");
  Summary s = summarize(values);
  out.length = n;
  out.estimate = s.mean;
  out.ci = normal_ci(s);
  out.censored_fraction = static_cast<double>(censored) / static_cast<double>(traces.size());
  out.replicas = values.size();
  return out;
}

// deg(root) / mean certified degree: the stationary-walk reweighting factor.
inline double degree_bias_weight(const EmbeddedNetwork& net, int root_id) {
  if (root_id < 0 || root_id >= static_cast<int>(net.vertex_count()))
    throw std::invalid_argument("degree_bias_weight: root out of range");
  if (!net.certified[root_id]) throw rejection_error("degree_bias_weight: root is not certified");
  return static_cast<double>(net.adj[root_id].size()) / degree_moment(net, 1);
}

struct BallContainment {
  int radius = 0;
  bool valid = false;        // every vertex at hop distance < radius is certified
  std::size_t size = 0;      // |B_G(o, radius)|
  double growth = 1.0;       // size^(1/radius); 1 for radius 0
  double max_embedded = 0.0; // max over the ball of d(o, x)
  std::vector<char> contained;  // per t in t_grid: ball inside the metric ball of radius t*R
};

// Per-network graph-ball table. A row is valid when the ball's interior is
// certified, so its hop structure matches the infinite network; callers
// discard invalid rows and count them.
inline std::vector<BallContainment> graph_ball_containment(const EmbeddedNetwork& net, int root,
                                                           const std::vector<int>& r_grid,
                                                           const std::vector<double>& t_grid) {
  if (root < 0 || root >= static_cast<int>(net.vertex_count()))
    throw std::invalid_argument("graph_ball_containment: root out of range");
  if (!net.certified[root])
    throw rejection_error("graph_ball_containment: root is not certified");
  for (int r : r_grid)
    if (r < 0) throw std::invalid_argument("graph_ball_containment: negative radius");

  std::vector<int> hops = graph_distances(net, root);
  int max_r = r_grid.empty() ? 0 : *std::max_element(r_grid.begin(), r_grid.end());

  // One pass accumulating per-shell counts, reach, and certification.
  std::vector<std::size_t> shell_count(max_r + 1, 0);
  std::vector<double> shell_reach(max_r + 1, 0.0);
  std::vector<char> shell_certified(max_r + 1, 1);
  for (std::size_t v = 0; v < net.vertex_count(); ++v) {
    int h = hops[v];
    if (h < 0 || h > max_r) continue;
    ++shell_count[h];
    shell_reach[h] = std::max(shell_reach[h], dist(net.space, net.vertex[root], net.vertex[v]));
    if (!net.certified[v]) shell_certified[h] = 0;
  }

  std::vector<BallContainment> rows;
  for (int r : r_grid) {
    BallContainment row;
    row.radius = r;
    row.valid = true;
    for (int h = 0; h < r; ++h) row.valid = row.valid && shell_certified[h];
    for (int h = 0; h <= r; ++h) {
      row.size += shell_count[h];
      row.max_embedded = std::max(row.max_embedded, shell_reach[h]);
    }
    row.growth = r == 0 ? 1.0
                        : std::pow(static_cast<double>(row.size), 1.0 / static_cast<double>(r));
    for (double t : t_grid)
      row.contained.push_back(row.max_embedded <= t * static_cast<double>(r) ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

// --- windowless walker ------------------------------------------------------

// Chart precision caps the hyperbolic window at 12, far less than the reach
// of a long positive-speed walk. The walker below therefore re-roots the
// chart at its position after every step and keeps only the local
// environment: a union of revealed balls with their points. Territory
// farther than the drop radius is forgotten and would be resampled fresh on
// return, which perturbs the environment law only on deep-backtrack events.
namespace lazywalk_detail {

struct RevealBall {
  Point center;   // current chart
  double radius;  // metric, isometry invariant
};

// Distance of the walk origin from the walker, tracked intrinsically: the
// chart cannot hold a point hundreds of units away. One step of length s at
// signed bearing gamma from the origin direction updates r by the hyperbolic
// law of cosines; past r = 30 the exact form overflows and the asymptotic
// form (relative error under e^-60) takes over.
struct OriginTracker {
  Space space = Space::hyperbolic;
  Point o_rel{0.0, 0.0};  // Euclidean: exact offset of the origin
  double r = 0.0;
  double azimuth = 0.0;  // chart bearing of the origin as seen from the walker

  void step(Point target) {
    if (space == Space::euclidean) {
      o_rel.x -= target.x;
      o_rel.y -= target.y;
      r = std::hypot(o_rel.x, o_rel.y);
      return;
    }
    double s = dist(space, {0.0, 0.0}, target);
    double step_az = std::atan2(target.y, target.x);
    if (r < 1e-12) {
      r = s;
      azimuth = step_az + std::numbers::pi;
      return;
    }
    double gamma = std::remainder(azimuth - step_az, 2.0 * std::numbers::pi);
    double cg = std::cos(gamma);
    double r_new, cos_beta;
    if (r < 30.0) {
      double ch = std::cosh(r) * std::cosh(s) - std::sinh(r) * std::sinh(s) * cg;
      r_new = std::acosh(std::max(1.0, ch));
      double denom = std::sinh(s) * std::sinh(r_new);
      cos_beta = denom < 1e-300 ? 1.0 : (std::cosh(s) * ch - std::cosh(r)) / denom;
    } else {
      double u = std::cosh(s) - std::sinh(s) * cg;  // >= e^-s
      r_new = r + std::log(u);
      cos_beta = (std::cosh(s) * u - 1.0) / (std::sinh(s) * u);
    }
    double beta = std::acos(std::clamp(cos_beta, -1.0, 1.0));
    double side = gamma >= 0.0 ? 1.0 : -1.0;
    r = r_new;
    azimuth = std::remainder(step_az + std::numbers::pi - side * beta,
                             2.0 * std::numbers::pi);
  }
};

}  // namespace lazywalk_detail

class LazyWalker {
 public:
  LazyWalker(Space space, double intensity, std::uint64_t seed)
      : space_(space), intensity_(intensity), rng_(derive_stream(seed, 0, 7)) {
    if (!(intensity > 0.0)) throw config_error("intensity: must be positive");
    if (space == Space::hyperbolic && intensity < 3e-4)
      throw rejection_error("windowless walk: cells too large for the chart precision cap");
    origin_.space = space;
    // Radii scale with the typical cell: a ball holding ~12 nuclei covers the
    // walker's cell and its cutters except on negligible-probability tails.
    reveal_radius_ = inverse_ball_volume(space, 12.0 / intensity);
    drop_radius_ = std::max(9.0, 2.5 * reveal_radius_);
    clip_inradius_ = space == Space::euclidean ? std::max(25.0, 6.0 * reveal_radius_) : 4.5;
  }

  long long steps_done() const { return steps_; }
  double displacement() const { return origin_.r; }
  int last_degree() const { return last_degree_; }

  // One uniform-neighbor step on the lazily revealed tessellation.
  void step() {
    std::vector<int> walls = neighbor_walls();
    last_degree_ = static_cast<int>(walls.size());
    int pick = walls[static_cast<std::size_t>(rng_.next() % walls.size())];
    Point target = pts_[pick];

    origin_.step(target);
    // The vacated site stays a process point; the target becomes the walker.
    pts_[pick] = Point{0.0, 0.0};
    Isometry g = isometry_to_origin(space_, target);
    for (Point& p : pts_) p = apply(g, p);
    for (lazywalk_detail::RevealBall& b : balls_) b.center = apply(g, b.center);
    prune();
    ++steps_;
  }

 private:
  // Indices into pts_ of the walker's cell walls, revealing the process as
  // far out as the clipped cell demands.
  std::vector<int> neighbor_walls() {
    double need = reveal_radius_;
    for (int attempt = 0; attempt < 24; ++attempt) {
      reveal(need);
      std::vector<std::pair<double, int>> order;
      for (std::size_t i = 0; i < pts_.size(); ++i) {
        double d = dist(space_, {0.0, 0.0}, pts_[i]);
        if (d <= covered_) order.push_back({d, static_cast<int>(i)});
      }
      std::sort(order.begin(), order.end());
      OriginCellClipper clipper(space_, clip_inradius_);
      for (auto [d, idx] : order) {
        if (!clipper.relevant(d)) break;
        clipper.add(pts_[idx], idx);
      }
      OriginCell cell = clipper.finish();
      double required = 2.0 * cell.max_corner_dist + 1e-9;
      if (required <= covered_ && !cell.hit_bound) {
        std::vector<int> walls(cell.wall_ids.begin(), cell.wall_ids.end());
        if (walls.empty()) throw rejection_error("windowless walk: isolated walker cell");
        return walls;
      }
      // An artificial wall means the sparse early reveal left the cell open;
      // escalate coverage geometrically rather than trusting its inflated
      // corner estimate. If full coverage still leaves it open, the true cell
      // exceeds the clip polygon.
      if (cell.hit_bound) {
        if (required <= covered_)
          throw rejection_error("windowless walk: cell exceeded the clipping bound");
        need = std::min(required + 0.25, covered_ * 2.0 + 0.5);
      } else {
        need = required + 0.25;
      }
      if (space_ == Space::hyperbolic && need > kMaxHyperbolicWindow)
        throw rejection_error("windowless walk: cell exceeded the chart precision cap");
    }
    throw std::logic_error("windowless walk: reveal loop did not settle");
  }

  // Reveal the process on the ball of metric radius w around the walker:
  // sample a fresh Poisson ball and keep the points falling outside already
  // revealed territory. Restriction independence makes the union exact.
  void reveal(double w) {
    if (covered_ >= w) return;
    long long n = rng_.poisson(intensity_ * ball_volume(space_, w));
    for (long long i = 0; i < n; ++i) {
      Point p = detail::uniform_in_ball(space_, w, rng_);
      if (!inside_revealed(p)) pts_.push_back(p);
    }
    balls_.push_back({{0.0, 0.0}, w});
    covered_ = std::max(covered_, w);
    if (pts_.size() > 2000000)
      throw std::logic_error("windowless walk: revealed point budget exceeded");
  }

  bool inside_revealed(Point p) const {
    for (const lazywalk_detail::RevealBall& b : balls_)
      if (dist(space_, b.center, p) < b.radius) return true;
    return false;
  }

  // Forget balls entirely beyond the drop radius together with the points no
  // retained ball covers, then recompute the contiguous coverage at the
  // walker.
  void prune() {
    std::vector<lazywalk_detail::RevealBall> keep;
    bool dropped = false;
    for (const lazywalk_detail::RevealBall& b : balls_) {
      if (dist(space_, {0.0, 0.0}, b.center) - b.radius > drop_radius_)
        dropped = true;
      else
        keep.push_back(b);
    }
    balls_ = std::move(keep);
    if (dropped) {
      std::vector<Point> kept;
      for (const Point& p : pts_)
        if (inside_revealed(p)) kept.push_back(p);
      pts_ = std::move(kept);
    }
    covered_ = 0.0;
    for (const lazywalk_detail::RevealBall& b : balls_)
      covered_ = std::max(covered_, b.radius - dist(space_, {0.0, 0.0}, b.center));
  }

  Space space_;
  double intensity_;
  Rng rng_;
  std::vector<Point> pts_;  // revealed points except the walker itself
  std::vector<lazywalk_detail::RevealBall> balls_;
  double covered_ = 0.0;  // revealed ball radius around the walker
  double reveal_radius_ = 0.0;
  double drop_radius_ = 0.0;
  double clip_inradius_ = 0.0;
  lazywalk_detail::OriginTracker origin_;
  long long steps_ = 0;
  int last_degree_ = 0;
};

// Windowless walk from the Palm origin. No censoring and no graph hops: the
// global graph is never materialized, so vertex ids are -1 and
// graph_displacements stays empty.
inline WalkTrace windowless_srw(Space space, double intensity, long long steps,
                                std::uint64_t seed) {
  if (steps < 0) throw std::invalid_argument("windowless_srw: negative step count");
  LazyWalker walker(space, intensity, seed);
  WalkTrace trace;
  trace.seed = seed;
  trace.vertex_ids.push_back(-1);
  trace.embedded_displacements.push_back(0.0);
  for (long long j = 0; j < steps; ++j) {
    walker.step();
    trace.vertex_ids.push_back(-1);
    trace.embedded_displacements.push_back(walker.displacement());
  }
  return trace;
}

}  // namespace pvtess

#endif  // PVTESS_WALK_HPP
