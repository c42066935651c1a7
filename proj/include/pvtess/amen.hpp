// Amenability experiments: coarsening percolation driven by a sparse Poisson
// process, root-cluster boundary ratios, the d1/d2 nearest-coarse-point laws,
// Folner quotients of cell unions, mass-transport checks, and a spectral
// upper bound on the edge-isoperimetric ratio.

#ifndef PVTESS_AMEN_HPP
#define PVTESS_AMEN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pvtess/errors.hpp"
#include "pvtess/geometry.hpp"
#include "pvtess/pointproc.hpp"
#include "pvtess/rng.hpp"
#include "pvtess/stats.hpp"
#include "pvtess/tess.hpp"

namespace pvtess {

// Mass m with (1+m)e^-m = eps: a window of coarse mass m holds the two
// nearest coarse points except with probability eps.
inline double second_point_mass(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must be in (0,1)");
  double target = std::log(1.0 / eps);
  double m = target + 2.0;  // m - log(1+m) = target
  for (int it = 0; it < 60; ++it) {
    double h = m - std::log1p(m) - target;
    m -= h * (1.0 + m) / m;
  }
  return m;
}

// --- coarsening percolation -------------------------------------------------

struct PercolationLabeling {
  double delta = 0.0;
  std::uint64_t seed = 0;
  PointSample q_points;            // coarse process, window enlarged past the base
  std::vector<int> nearest_q;      // per base vertex: index into q_points.points
  std::vector<char> nearest_exact; // identification certified against the coarse window
  std::vector<char> edge_open;     // per base edge: same coarse cell
};

// Edge {x,y} opens iff x and y lie in the same Voronoi cell of the coarse
// process. The coarse window extends past the base one so that per-vertex
// nearest-point identifications are certifiable: exact iff the nearest
// candidate beats anything that could hide outside the coarse window.
inline PercolationLabeling coarsen_percolation(const EmbeddedNetwork& net, double delta,
                                               std::uint64_t seed) {
  if (!(delta > 0.0)) throw config_error("delta: must be positive");
  PercolationLabeling lab;
  lab.delta = delta;
  lab.seed = seed;

  // Margin = 1e-6 quantile of the per-vertex nearest-coarse distance.
  double margin = inverse_ball_volume(net.space, std::log(1e6) / delta);
  double wq = net.window_radius + margin;
  if (net.space == Space::hyperbolic && wq > kMaxHyperbolicWindow)
    throw rejection_error("coarse window exceeds the chart precision cap");
  Rng rng = derive_stream(seed, 0, 13);
  lab.q_points = sample_poisson(net.space, delta, wq, rng);

  // Nearest coarse point per vertex, pruned by metric radius: a candidate
  // whose radius differs from the vertex radius by more than the current
  // best distance cannot win.
  const std::vector<Point>& q = lab.q_points.points;
  std::vector<std::pair<double, int>> by_radius(q.size());
  for (std::size_t j = 0; j < q.size(); ++j)
    by_radius[j] = {dist(net.space, {0.0, 0.0}, q[j]), static_cast<int>(j)};
  std::sort(by_radius.begin(), by_radius.end());

  lab.nearest_q.assign(net.vertex_count(), -1);
  lab.nearest_exact.assign(net.vertex_count(), 0);
  for (std::size_t v = 0; v < net.vertex_count(); ++v) {
    double rv = dist(net.space, {0.0, 0.0}, net.vertex[v]);
    std::size_t up = std::lower_bound(by_radius.begin(), by_radius.end(),
                                      std::make_pair(rv, -1)) -
                     by_radius.begin();
    std::size_t dn = up;
    double best = std::numeric_limits<double>::infinity();
    for (;;) {
      double gap_up = up < by_radius.size() ? by_radius[up].first - rv : best;
      double gap_dn = dn > 0 ? rv - by_radius[dn - 1].first : best;
      std::size_t j;
      if (gap_up < best && gap_up <= gap_dn)
        j = up++;
      else if (gap_dn < best)
        j = --dn;
      else
        break;
      double d = dist(net.space, net.vertex[v], q[by_radius[j].second]);
      if (d < best) {
        best = d;
        lab.nearest_q[v] = by_radius[j].second;
      }
    }
    lab.nearest_exact[v] = lab.nearest_q[v] >= 0 && rv + best <= wq - 1e-9;
  }
  lab.edge_open.assign(net.edge_count(), 0);
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    auto [a, b] = net.edges[e];
    lab.edge_open[e] = lab.nearest_q[a] >= 0 && lab.nearest_q[a] == lab.nearest_q[b];
  }
  return lab;
}

struct Cluster {
  std::vector<int> vertex_ids;
  std::size_t boundary_edge_count = 0;  // base edges with one endpoint inside
  double cells_union_area = 0.0;        // sum of the members' certified cell areas
  bool exact = true;  // members certified, coarse assignments certified one ring out
};

// Open-edge component of the root, with its base-graph edge boundary. The
// exact flag demands certified neighbor lists on every member plus certified
// coarse assignments on the members and everything adjacent to them; without
// that the cluster could extend past the window unseen.
inline Cluster root_cluster(const EmbeddedNetwork& net, const PercolationLabeling& lab,
                            int root) {
  if (root < 0 || root >= static_cast<int>(net.vertex_count()))
    throw std::invalid_argument("root_cluster: root out of range");
  // edge lookup: adjacency position -> edge index
  std::vector<std::vector<std::pair<int, int>>> inc(net.vertex_count());
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    auto [a, b] = net.edges[e];
    inc[a].push_back({b, static_cast<int>(e)});
    inc[b].push_back({a, static_cast<int>(e)});
  }
  Cluster cl;
  std::vector<char> in(net.vertex_count(), 0);
  std::deque<int> fifo{root};
  in[root] = 1;
  while (!fifo.empty()) {
    int v = fifo.front();
    fifo.pop_front();
    cl.vertex_ids.push_back(v);
    if (!net.certified[v] || !lab.nearest_exact[v]) cl.exact = false;
    for (auto [w, e] : inc[v]) {
      if (!lab.nearest_exact[w]) cl.exact = false;
      if (!lab.edge_open[e] || in[w]) continue;
      in[w] = 1;
      fifo.push_back(w);
    }
  }
  for (std::size_t e = 0; e < net.edge_count(); ++e) {
    auto [a, b] = net.edges[e];
    if (in[a] != in[b]) ++cl.boundary_edge_count;
  }
  if (cl.exact) {
    auto cells = voronoi_cells(net);
    for (int v : cl.vertex_ids) {
      if (!cells[v].certified) {
        cl.exact = false;
        break;
      }
      cl.cells_union_area += cells[v].area;
    }
  }
  std::sort(cl.vertex_ids.begin(), cl.vertex_ids.end());
  return cl;
}

struct RatioEstimate {
  double mean = 0.0;
  Interval ci;
  std::size_t used = 0;
  std::size_t discarded = 0;
};

// Mean of |boundary| / |cluster| over exact root clusters.
inline RatioEstimate boundary_ratio_estimate(const std::vector<Cluster>& roots) {
  RatioEstimate est;
  std::vector<double> ratios;
  for (const Cluster& cl : roots) {
    if (!cl.exact || cl.vertex_ids.empty()) {
      ++est.discarded;
      continue;
    }
    ratios.push_back(static_cast<double>(cl.boundary_edge_count) /
                     static_cast<double>(cl.vertex_ids.size()));
  }
  if (ratios.empty())
    throw rejection_error("boundary ratio: every replica was discarded; enlarge the window");
  Summary s = summarize(ratios);
  est.mean = s.mean;
  est.ci = normal_ci(s);
  est.used = ratios.size();
  return est;
}

// --- d1 / d2 laws -------------------------------------------------------------

struct D1D2Result {
  Space space = Space::euclidean;
  double delta = 0.0;
  double window = 0.0;
  std::size_t replicas = 0;
  std::size_t unrealized = 0;       // d2 escaped the window (probability <= 1e-4)
  std::vector<double> d1, d2;       // realized pairs
  double ks_d1 = 0.0;               // against 1 - exp(-delta vol(t))
  std::vector<double> grid;         // t grid for the d2-d1 tail
  std::vector<double> tail_emp;     // empirical P[d2-d1 >= t]
  std::vector<double> tail_bound;   // exp(-delta vol(t/2))
  std::vector<double> tail_sigma;   // binomial standard error
  std::size_t ball_checked = 0;     // ball-in-cell point tests
  std::size_t ball_failures = 0;    // nearest-point identity violations
};

// Samples the two nearest coarse points per replica. The window carries
// coarse mass m with (1+m)e^-m = 1e-4, so d2 is realized inside it except
// with that probability; misses are counted, not imputed. Each replica also
// checks the ball B(o,(d2-d1)/2) against the nearest cell: points of the
// ball must keep the first coarse point as their nearest.
inline D1D2Result d1_d2_statistics(Space space, double delta, std::size_t replicas,
                                   std::uint64_t seed) {
  if (!(delta > 0.0)) throw config_error("delta: must be positive");
  if (replicas == 0) throw config_error("replicas: must be positive");
  D1D2Result res;
  res.space = space;
  res.delta = delta;
  res.replicas = replicas;
  res.window = inverse_ball_volume(space, second_point_mass(1e-4) / delta);
  if (space == Space::hyperbolic && res.window > kMaxHyperbolicWindow)
    throw rejection_error("d1/d2 window exceeds the chart precision cap");

  for (std::size_t rep = 0; rep < replicas; ++rep) {
    Rng rng = derive_stream(seed, rep, 11);
    RadialPoissonStream stream(space, delta, rng, res.window);
    if (stream.exhausted()) {
      ++res.unrealized;
      continue;
    }
    Point q1 = stream.take();
    if (stream.exhausted()) {
      ++res.unrealized;
      continue;
    }
    Point q2 = stream.take();
    double r1 = dist(space, {0.0, 0.0}, q1);
    double r2 = dist(space, {0.0, 0.0}, q2);
    res.d1.push_back(r1);
    res.d2.push_back(r2);

    double rad = 0.5 * (r2 - r1);
    if (rad > kCoincidentTol) {
      Rng ball_rng = derive_stream(seed, rep, 12);
      for (int k = 0; k < 100; ++k) {
        Point z = detail::uniform_in_ball(space, rad, ball_rng);
        ++res.ball_checked;
        if (dist(space, z, q2) < dist(space, z, q1) - 1e-12) ++res.ball_failures;
      }
    }
  }
  if (res.d1.empty()) throw rejection_error("d1/d2: no replica realized two coarse points");

  double dl = delta;
  Space sp = space;
  res.ks_d1 = ks_statistic(
      res.d1, [dl, sp](double t) { return 1.0 - std::exp(-dl * ball_volume(sp, t)); });

  double t_max = 2.0 * inverse_ball_volume(space, std::log(1e3) / delta);
  std::vector<double> gaps;
  for (std::size_t i = 0; i < res.d1.size(); ++i) gaps.push_back(res.d2[i] - res.d1[i]);
  double n = static_cast<double>(gaps.size());
  for (int k = 0; k < 20; ++k) {
    double t = t_max * static_cast<double>(k) / 19.0;
    std::size_t count = 0;
    for (double g : gaps) count += g >= t;
    double p = static_cast<double>(count) / n;
    res.grid.push_back(t);
    res.tail_emp.push_back(p);
    res.tail_bound.push_back(std::exp(-delta * ball_volume(space, 0.5 * t)));
    res.tail_sigma.push_back(std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n));
  }
  return res;
}

// --- Folner quotients ---------------------------------------------------------

namespace amen_detail {

// Convex geodesic polygon containment, boundary inclusive. Straight-walled
// test coordinates: the Klein chart for the hyperbolic plane.
inline bool convex_contains(Space space, const std::vector<Point>& straight, Point z) {
  Point w = space == Space::euclidean ? z : to_klein(z);
  std::size_t m = straight.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point& a = straight[i];
    const Point& b = straight[(i + 1) % m];
    if ((b.x - a.x) * (w.y - a.y) - (b.y - a.y) * (w.x - a.x) < 0.0) return false;
  }
  return true;
}

}  // namespace amen_detail

struct FolnerResult {
  double quotient = 0.0;  // max over the isometry set of Vol(gV sym-diff V)/Vol(V)
  Interval ci;            // binomial-propagated interval for the max
  double vol_v = 0.0;     // Monte Carlo volume of V
  std::size_t mc_points = 0;
};

// Monte Carlo symmetric-difference quotient of a cell-union Folner candidate.
// Membership is classified pointwise against the convex cells; gV membership
// tests the pulled-back point.
inline FolnerResult folner_quotient(const std::vector<GeodesicPolygon>& cells,
                                    const std::vector<Isometry>& team, std::size_t mc_points,
                                    Rng& rng) {
  if (cells.empty()) throw rejection_error("folner quotient: empty cell union");
  if (team.empty()) throw std::invalid_argument("folner quotient: empty isometry set");
  if (mc_points < 100) throw config_error("mc_points: need at least 100");
  Space space = cells.front().space;

  std::vector<std::vector<Point>> straight;
  double reach = 0.0;
  for (const GeodesicPolygon& cell : cells) {
    std::vector<Point> k;
    for (const Point& c : cell.vertices) {
      k.push_back(space == Space::euclidean ? c : to_klein(c));
      reach = std::max(reach, dist(space, {0.0, 0.0}, c));
      for (const Isometry& g : team)
        reach = std::max(reach, dist(space, {0.0, 0.0}, apply(g, c)));
    }
    straight.push_back(std::move(k));
  }
  double bound_r = reach + 0.25;
  if (space == Space::hyperbolic && bound_r > 13.5)
    throw rejection_error("folner quotient: displaced union exceeds the chart");

  auto in_v = [&](Point z) {
    for (const std::vector<Point>& s : straight)
      if (amen_detail::convex_contains(space, s, z)) return true;
    return false;
  };

  std::vector<Isometry> inverses;
  for (const Isometry& g : team) inverses.push_back(inverse(g));
  std::size_t hit_v = 0;
  std::vector<std::size_t> hit_diff(team.size(), 0);
  for (std::size_t i = 0; i < mc_points; ++i) {
    Point z = detail::uniform_in_ball(space, bound_r, rng);
    bool zv = in_v(z);
    hit_v += zv;
    for (std::size_t j = 0; j < team.size(); ++j) {
      bool zgv = in_v(apply(inverses[j], z));
      hit_diff[j] += zv != zgv;
    }
  }
  if (hit_v == 0) throw rejection_error("folner quotient: union volume not resolved");

  FolnerResult out;
  out.mc_points = mc_points;
  double n = static_cast<double>(mc_points);
  double pv = static_cast<double>(hit_v) / n;
  out.vol_v = pv * ball_volume(space, bound_r);
  std::size_t best = *std::max_element(hit_diff.begin(), hit_diff.end());
  double pd = static_cast<double>(best) / n;
  out.quotient = pd / pv;
  // first-order error propagation of the ratio of binomial fractions
  double se = out.quotient == 0.0
                  ? 1.96 / (pv * n)
                  : 1.96 * out.quotient *
                        std::sqrt(std::max(pd * (1.0 - pd), 1.0 / n) / (n * pd * pd) +
                                  pv * (1.0 - pv) / (n * pv * pv));
  out.ci = {std::max(0.0, out.quotient - se), out.quotient + se};
  return out;
}

// --- mass transport -----------------------------------------------------------

struct MtpResult {
  double sent_mean = 0.0;
  double received_mean = 0.0;
  Interval sent_ci, received_ci;
  std::size_t roots = 0;
};

namespace amen_detail {

enum class Transport { adjacency, f1_degree, f2_nearest, f3_length };

inline Transport transport_by_name(const std::string& name) {
  if (name == "adj") return Transport::adjacency;
  if (name == "f1") return Transport::f1_degree;
  if (name == "f2") return Transport::f2_nearest;
  if (name == "f3") return Transport::f3_length;
  throw config_error("transport: unknown name '" + name + "' (registry: adj, f1, f2, f3)");
}

inline int nearest_neighbor(const EmbeddedNetwork& net, int x) {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (int y : net.adj[x]) {
    double d = dist(net.space, net.vertex[x], net.vertex[y]);
    if (d < bd) {
      bd = d;
      best = y;
    }
  }
  return best;
}

// f(G, x, y) for the registry transports. Nonzero only across edges; the
// nearest point of a nucleus is one of its Delaunay neighbors.
inline double transport_mass(const EmbeddedNetwork& net, Transport f, int x, int y) {
  bool adjacent = std::binary_search(net.adj[x].begin(), net.adj[x].end(), y);
  switch (f) {
    case Transport::adjacency:
      return adjacent ? 1.0 : 0.0;
    case Transport::f1_degree:
      return adjacent && net.adj[x].size() > net.adj[y].size() ? 1.0 : 0.0;
    case Transport::f2_nearest:
      return nearest_neighbor(net, x) == y ? 1.0 : 0.0;
    case Transport::f3_length:
      if (!adjacent) return 0.0;
      return dist(net.space, net.vertex[x], net.vertex[y]) /
             static_cast<double>(net.adj[x].size());
  }
  return 0.0;
}

}  // namespace amen_detail

// Exact sent and received totals over every ordered pair of a finite graph;
// the pair of sums coincides for transports with a pairing symmetry.
inline std::pair<double, double> mtp_exact_sums(const EmbeddedNetwork& net,
                                                const std::string& transport) {
  amen_detail::Transport f = amen_detail::transport_by_name(transport);
  double sent = 0.0, received = 0.0;
  for (std::size_t x = 0; x < net.vertex_count(); ++x) {
    for (int y : net.adj[x]) {
      sent += amen_detail::transport_mass(net, f, static_cast<int>(x), y);
      received += amen_detail::transport_mass(net, f, y, static_cast<int>(x));
    }
  }
  return {sent, received};
}

// Window averages of sent and received mass over certified roots. Roots are
// confined to a deterministic interior ball: requiring a certified one-ring
// is a real selection event near the window edge (failure probability
// roughly exp(-lambda vol(depth/2)) per vertex), and conditioning on it
// keeps only atypically dense neighborhoods there, which skews the two
// averages apart; in the hyperbolic plane the edge region carries a constant
// fraction of the volume, so no amount of pooling washes that out. The
// buffer pushes the per-vertex failure probability below 1e-6, making the
// root set effectively deterministic and the averages unbiased estimators
// of the Palm expectation. The one-ring certification then only guarantees
// every evaluated term is exact.
inline MtpResult mtp_check(const EmbeddedNetwork& net, const std::string& transport) {
  amen_detail::Transport f = amen_detail::transport_by_name(transport);
  double buffer = 2.0 * inverse_ball_volume(net.space, std::log(1e6) / net.intensity) +
                  inverse_ball_volume(net.space, 3.0 / net.intensity);
  double root_radius = net.window_radius - buffer;
  std::vector<double> sent, received;
  for (std::size_t v = 0; v < net.vertex_count(); ++v) {
    if (root_radius <= 0.0) break;
    if (dist(net.space, {0.0, 0.0}, net.vertex[v]) > root_radius) continue;
    if (!net.certified[v]) continue;
    bool ring = true;
    for (int w : net.adj[v]) ring = ring && net.certified[w];
    if (!ring) continue;
    double s = 0.0, r = 0.0;
    for (int w : net.adj[v]) {
      s += amen_detail::transport_mass(net, f, static_cast<int>(v), w);
      r += amen_detail::transport_mass(net, f, w, static_cast<int>(v));
    }
    sent.push_back(s);
    received.push_back(r);
  }
  if (sent.empty())
    throw rejection_error("mtp check: no interior root with a certified one-ring");
  MtpResult out;
  Summary ss = summarize(sent), sr = summarize(received);
  out.sent_mean = ss.mean;
  out.received_mean = sr.mean;
  out.sent_ci = normal_ci(ss);
  out.received_ci = normal_ci(sr);
  out.roots = sent.size();
  return out;
}

// --- isoperimetric upper bound --------------------------------------------------

struct IsoperimetricBound {
  double bound = 0.0;
  std::size_t core_size = 0;       // certified vertices
  std::size_t component_size = 0;  // largest certified component used
};

// Sweep cut of the second eigenvector of the lazy normalized adjacency over
// the largest certified component: min over prefixes (degree volume at most
// half the component total) of |boundary| / volume. The boundary and the
// degree volume count edges of the full window graph, not just the
// component-induced ones: a candidate set's crossing edges into the
// uncertified shell are part of its boundary, and dropping them would let a
// half-window cut look spuriously cheap. Any sweep order yields a valid
// upper bound, so convergence tolerance only affects tightness.
inline IsoperimetricBound isoperimetric_upper_bound(const EmbeddedNetwork& net) {
  std::vector<int> core;
  std::vector<int> local(net.vertex_count(), -1);
  for (std::size_t v = 0; v < net.vertex_count(); ++v)
    if (net.certified[v]) {
      local[v] = static_cast<int>(core.size());
      core.push_back(static_cast<int>(v));
    }
  if (core.empty()) throw rejection_error("isoperimetric bound: empty certified core");

  std::vector<std::vector<int>> adj(core.size());
  for (std::size_t i = 0; i < core.size(); ++i)
    for (int w : net.adj[core[i]])
      if (local[w] >= 0) adj[i].push_back(local[w]);

  // largest connected component
  std::vector<int> comp(core.size(), -1);
  int ncomp = 0;
  for (std::size_t i = 0; i < core.size(); ++i) {
    if (comp[i] >= 0) continue;
    std::deque<std::size_t> fifo{i};
    comp[i] = ncomp;
    while (!fifo.empty()) {
      std::size_t v = fifo.front();
      fifo.pop_front();
      for (int w : adj[v])
        if (comp[w] < 0) {
          comp[w] = ncomp;
          fifo.push_back(static_cast<std::size_t>(w));
        }
    }
    ++ncomp;
  }
  std::vector<std::size_t> comp_size(ncomp, 0);
  for (int c : comp) ++comp_size[c];
  int big = static_cast<int>(std::max_element(comp_size.begin(), comp_size.end()) -
                             comp_size.begin());

  std::vector<int> orig;  // component member -> base vertex id
  std::vector<int> sub(net.vertex_count(), -1);
  for (std::size_t i = 0; i < core.size(); ++i)
    if (comp[i] == big) {
      sub[core[i]] = static_cast<int>(orig.size());
      orig.push_back(core[i]);
    }
  std::size_t n = orig.size();
  std::vector<std::vector<int>> g(n);  // component-induced, for the spectral order
  std::vector<double> full_deg(n);
  double total_vol = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (int w : net.adj[orig[i]])
      if (sub[w] >= 0) g[i].push_back(sub[w]);
    full_deg[i] = static_cast<double>(net.adj[orig[i]].size());
    total_vol += full_deg[i];
  }
  if (total_vol == 0.0) throw rejection_error("isoperimetric bound: core has no edges");

  // power iteration for the second eigenvector of (I + D^-1/2 A D^-1/2)/2,
  // deflated against the known top eigenvector D^1/2 1
  std::vector<double> sq(n), v1(n);
  double norm1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sq[i] = std::sqrt(static_cast<double>(g[i].size()));
    norm1 += sq[i] * sq[i];
  }
  norm1 = std::sqrt(norm1);
  for (std::size_t i = 0; i < n; ++i) v1[i] = sq[i] / norm1;

  Rng rng(0x5eedu);
  std::vector<double> x(n), y(n);
  for (double& xi : x) xi = rng.uniform() - 0.5;
  auto deflate = [&](std::vector<double>& z) {
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += z[i] * v1[i];
    for (std::size_t i = 0; i < n; ++i) z[i] -= dot * v1[i];
  };
  auto normalize = [&](std::vector<double>& z) {
    double nn = 0.0;
    for (double zi : z) nn += zi * zi;
    nn = std::sqrt(nn);
    if (nn == 0.0) return false;
    for (double& zi : z) zi /= nn;
    return true;
  };
  deflate(x);
  if (!normalize(x)) x[0] = 1.0;
  for (int it = 0; it < 600; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int w : g[i]) acc += x[w] / sq[w];
      y[i] = 0.5 * (x[i] + (sq[i] > 0.0 ? acc / sq[i] : 0.0));
    }
    deflate(y);
    if (!normalize(y)) break;
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::abs(y[i] - x[i]));
    x.swap(y);
    if (delta < 1e-8) break;
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] / sq[a] > x[b] / sq[b]; });

  double best = std::numeric_limits<double>::infinity();
  for (int dir = 0; dir < 2; ++dir) {
    std::vector<char> in(n, 0);
    double cut = 0.0, vol = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t v = dir == 0 ? order[k] : order[n - 1 - k];
      double inside = 0.0;
      for (int w : g[v]) inside += in[w];
      cut += full_deg[v] - 2.0 * inside;
      vol += full_deg[v];
      in[v] = 1;
      if (k > 0 && 2.0 * vol > total_vol) break;
      if (vol > 0.0) best = std::min(best, cut / vol);
    }
  }

  IsoperimetricBound out;
  out.bound = best;
  out.core_size = core.size();
  out.component_size = n;
  return out;
}

}  // namespace pvtess

#endif  // PVTESS_AMEN_HPP
