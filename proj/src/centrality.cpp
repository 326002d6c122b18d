#include "urbanet/centrality.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "node_heap.hpp"
#include "urbanet/parallel.hpp"
#include "urbanet/paths.hpp"

namespace urbanet {

std::optional<double> CentralityField::score(NodeId v) const {
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] == v) return scores[i];
  }
  return std::nullopt;
}

namespace {

// Sum over j != i of d_E(i, j) / d_N, where d_N comes from one search rooted at i.
double ratio_sum(std::span<const SphericalPoint> sph, std::size_t i, std::span<const double> row) {
  double sum = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j == i || row[j] == kUnreachable || row[j] <= 0.0) continue;
    sum += great_circle(sph[i], sph[j]) / row[j];
  }
  return sum;
}

std::vector<double> ratio_sums(const InducedSubgraph& sub,
                               std::span<const SphericalPoint> sph, std::size_t threads) {
  std::vector<double> sums(sub.size(), 0.0);
  std::vector<std::vector<double>> scratch(resolve_threads(threads));
  parallel_for(sub.size(), threads, [&](std::size_t worker, std::size_t i) {
    sub.lengths_from(i, scratch[worker]);
    sums[i] = ratio_sum(sph, i, scratch[worker]);
  });
  return sums;
}

// ---- Pruned argmax ----
//
// A member's search stops as soon as an upper bound on its final ratio sum
// falls below the best score found so far. Members that finish are summed
// exactly as ratio_sums does, so the winner matches straightness().

// Unit vectors of the members, one array per axis so the per-source loops
// below vectorize.
struct Units {
  std::vector<double> x, y, z;

  explicit Units(std::span<const SphericalPoint> sph) {
    for (const SphericalPoint& p : sph) {
      x.push_back(p.cos_lat * std::cos(p.lon_rad));
      y.push_back(p.cos_lat * std::sin(p.lon_rad));
      z.push_back(p.sin_lat);
    }
  }
  std::size_t size() const { return x.size(); }
  double chord(std::size_t i, std::size_t j) const {
    const double dx = x[i] - x[j];
    const double dy = y[i] - y[j];
    const double dz = z[i] - z[j];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  }
};

// Upper bound on the arc 2 asin(c / 2) subtended by a chord c: c (1 + c^2 / 20)
// for c <= 1, c pi / 2 up to c = 2.
inline double arc_ceiling(double c) { return c <= 1.0 ? c * (1.0 + c * c / 20.0) : c * 1.5707963267948968; }

// Upper bound on the value great_circle() computes for two points a chord c
// apart. The constant term absorbs arccos rounding near 1, worth about
// sqrt(2 * 1e-15) radians.
inline double inline_ceiling(double c) { return kEarthRadiusMeters * (arc_ceiling(c) * (1.0 + 1e-9) + 1e-7); }

// Largest ratio of true arc length to weight over the subgraph's arcs, so
// every path is at least arc / stretch long. 1 when weights are great-circle
// lengths.
double stretch_ceiling(const InducedSubgraph& sub, const Units& unit) {
  double stretch = 0.0;
  for (std::uint32_t u = 0; u < sub.size(); ++u) {
    for (const auto& arc : sub.arcs(u)) {
      const double c = unit.chord(u, arc.head);
      if (c == 0.0) continue;
      if (arc.weight <= 0.0) return kUnreachable;
      stretch = std::max(stretch, kEarthRadiusMeters * arc_ceiling(c) / arc.weight);
    }
  }
  return stretch * (1.0 + 1e-9);
}

// Running maximum score shared by the workers of one search.
class SharedBest {
 public:
  double load() const { return value_.load(std::memory_order_relaxed); }
  void offer(double v) {
    double cur = load();
    while (v > cur && !value_.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
    }
  }

 private:
  std::atomic<double> value_{-std::numeric_limits<double>::infinity()};
};

// Lengths between a few well-spread landmark members and every member.
struct Landmarks {
  std::size_t count = 0;
  std::size_t n = 0;
  std::vector<double> from;  // from[k * n + j]: landmark k -> j
  std::vector<double> to;    // to[k * n + j]: j -> landmark k

  // Lower bounds on the length i -> j for every j; infinite when j is
  // provably unreachable. Differences of two infinities compare false and
  // drop out.
  void floors(std::size_t i, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < count; ++k) {
      // from(k, j) <= from(k, i) + d(i, j)
      const double* f = from.data() + k * n;
      const double fi = f[i];
      for (std::size_t j = 0; j < n; ++j) {
        const double x = f[j] - fi;
        out[j] = x > out[j] ? x : out[j];
      }
      // to(k, i) <= d(i, j) + to(k, j)
      const double* t = to.data() + k * n;
      const double ti = t[i];
      for (std::size_t j = 0; j < n; ++j) {
        const double y = ti - t[j];
        out[j] = y > out[j] ? y : out[j];
      }
    }
  }

  Landmarks swapped() const { return Landmarks{count, n, to, from}; }
};

// Farthest-point picks by inline distance.
std::vector<std::size_t> spread_members(std::span<const SphericalPoint> sph, std::size_t count) {
  const std::size_t n = sph.size();
  std::vector<double> gap(n, kUnreachable);
  std::vector<std::size_t> picks;
  std::size_t next = 0;
  for (std::size_t round = 0; round <= count && round < n; ++round) {
    if (round > 0) picks.push_back(next);
    const std::size_t from = next;
    for (std::size_t j = 0; j < n; ++j) {
      gap[j] = std::min(gap[j], great_circle(sph[from], sph[j]));
      if (gap[j] > gap[next]) next = j;
    }
  }
  return picks;
}

Landmarks build_landmarks(const InducedSubgraph& forward, const InducedSubgraph& backward,
                          std::span<const SphericalPoint> sph, std::size_t count) {
  const std::vector<std::size_t> picks = spread_members(sph, count);
  const std::size_t n = sph.size();
  Landmarks lm{picks.size(), n, {}, {}};
  std::vector<double> lengths;
  for (std::size_t k : picks) {
    forward.lengths_from(k, lengths);
    lm.from.insert(lm.from.end(), lengths.begin(), lengths.end());
    backward.lengths_from(k, lengths);
    lm.to.insert(lm.to.end(), lengths.begin(), lengths.end());
  }
  return lm;
}

// Per-member bounds shared by the searches from one source i: ceiling[j]
// bounds great_circle(i, j) and cap[j] bounds the ratio for j, since any path
// is at least R * chord / stretch long.
struct Reach {
  std::vector<double> ceiling;
  std::vector<double> cap;
  double total = 0.0;  // sum of ceiling

  void assign(const Units& unit, double stretch, std::size_t i) {
    const std::size_t n = unit.size();
    ceiling.resize(n);
    cap.resize(n);
    const double xi = unit.x[i];
    const double yi = unit.y[i];
    const double zi = unit.z[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = xi - unit.x[j];
      const double dy = yi - unit.y[j];
      const double dz = zi - unit.z[j];
      const double c = std::sqrt(dx * dx + dy * dy + dz * dz);
      const double top = inline_ceiling(c);
      ceiling[j] = top;
      cap[j] = c > 0.0 ? stretch * top / (kEarthRadiusMeters * c * (1.0 - 1e-9)) : kUnreachable;
    }
    ceiling[i] = 0.0;
    cap[i] = 0.0;
    total = 0.0;
    for (double v : ceiling) total += v;
  }
};

// Resumable search from one member, tracking an upper bound on the ratio sum
// it will produce. A settled member contributes ceiling / length. A pending
// one is at least max(radius, floor) away, where floor is its landmark
// bound, and never contributes more than its cap.
class Frontier {
 public:
  void start(const InducedSubgraph& sub, const Landmarks& lm, const Reach& reach, std::size_t i) {
    sub_ = &sub;
    reach_ = &reach;
    const std::size_t n = sub.size();
    fixed_.resize(n);
    lm.floors(i, fixed_);
    // Infinite floors give 0, zero floors the cap; i itself gives 0.
    for (std::size_t j = 0; j < n; ++j) {
      fixed_[j] = std::min(reach.cap[j], reach.ceiling[j] / (fixed_[j] * (1.0 - 1e-9)));
    }
    pending_fixed_ = 0.0;
    for (double v : fixed_) pending_fixed_ += v;
    pending_ = reach.total;
    dist_.assign(n, kUnreachable);
    settled_ = 0.0;
    radius_ = 0.0;
    steps_ = 0;
    heap_.reset(n);
    dist_[i] = 0.0;
    heap_.push(static_cast<std::uint32_t>(i), 0.0);
  }

  bool exhausted() const { return heap_.empty(); }
  std::size_t steps() const { return steps_; }
  const std::vector<double>& lengths() const { return dist_; }

  void step() {
    const auto [d, u] = heap_.pop();
    ++steps_;
    const double ceiling = reach_->ceiling[u];
    pending_ -= ceiling;
    pending_fixed_ -= fixed_[u];
    radius_ = d;
    if (d > 0.0) settled_ += ceiling / d;
    for (const auto& arc : sub_->arcs(u)) {
      const double candidate = d + arc.weight;
      if (candidate < dist_[arc.head]) {
        dist_[arc.head] = candidate;
        heap_.push(arc.head, candidate);
      }
    }
  }

  // Pending members either all at their floors or all at the radius.
  double bound() const {
    if (exhausted()) return settled_;
    const double rest = std::max(0.0, pending_fixed_);
    if (radius_ <= 0.0) return settled_ + rest;
    return settled_ + std::min(rest, std::max(0.0, pending_) / radius_);
  }

  void abandon() { heap_.clear(); }

 private:
  const InducedSubgraph* sub_ = nullptr;
  const Reach* reach_ = nullptr;
  std::vector<double> fixed_;
  std::vector<double> dist_;
  double pending_ = 0.0;
  double pending_fixed_ = 0.0;
  double settled_ = 0.0;
  double radius_ = 0.0;
  std::size_t steps_ = 0;
  detail::NodeHeap heap_;
};

struct SearchSpace {
  const InducedSubgraph& sub;
  const Landmarks& lm;
};

struct Workspace {
  Reach reach;
  std::array<Frontier, 2> frontiers;
};

// Runs the searches from member i in every space side by side, always
// advancing the one that has settled fewest members. Fills the per-space
// ratio sums, or returns false once their total provably stays below
// target().
template <typename Target>
bool bounded_ratio_sums(std::span<const SearchSpace> spaces, Workspace& ws, std::span<const SphericalPoint> sph,
                        const Units& unit, double stretch, std::size_t i, Target&& target,
                        std::span<double> sums) {
  const std::size_t n = sph.size();
  const std::span<Frontier> frontiers(ws.frontiers.data(), spaces.size());
  ws.reach.assign(unit, stretch, i);
  for (std::size_t k = 0; k < spaces.size(); ++k) frontiers[k].start(spaces[k].sub, spaces[k].lm, ws.reach, i);

  for (;;) {
    Frontier* pick = nullptr;
    double bound = 0.0;
    for (Frontier& f : frontiers) {
      bound += f.bound();
      if (!f.exhausted() && (!pick || f.steps() < pick->steps())) pick = &f;
    }
    // Slack for rounding in the running sums.
    if (bound + 1e-9 * (bound + static_cast<double>(n)) < target()) {
      for (Frontier& f : frontiers) f.abandon();
      return false;
    }
    if (!pick) break;
    pick->step();
  }
  for (std::size_t k = 0; k < spaces.size(); ++k) sums[k] = ratio_sum(sph, i, frontiers[k].lengths());
  return true;
}

}  // namespace

CentralityField straightness(const Network& net, std::span<const NodeId> members, Direction c,
                             std::size_t threads) {
  if (members.empty()) throw std::invalid_argument("straightness needs at least one member");
  CentralityField field;
  field.members.assign(members.begin(), members.end());
  field.scores.assign(members.size(), 0.0);

  // Work in ascending id order so scores do not depend on how members were listed.
  std::vector<NodeId> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  const InducedSubgraph forward(net, sorted);
  if (sorted.size() == 1) return field;

  std::vector<SphericalPoint> sph;
  sph.reserve(sorted.size());
  for (NodeId v : sorted) sph.push_back(net.spherical(v));

  const double normalizer = static_cast<double>(sorted.size() - 1);
  std::vector<double> outward;
  std::vector<double> inward;
  if (c != Direction::inward) outward = ratio_sums(forward, sph, threads);
  if (c != Direction::outward) {
    // Searches on the transposed subgraph give j -> i lengths for a fixed i.
    const InducedSubgraph backward(net.reverse_view(), sorted);
    inward = ratio_sums(backward, sph, threads);
  }
  std::vector<double> by_sorted(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    switch (c) {
      case Direction::inward: by_sorted[i] = inward[i] / normalizer; break;
      case Direction::outward: by_sorted[i] = outward[i] / normalizer; break;
      case Direction::absolute:
        by_sorted[i] = (inward[i] + outward[i]) / (2.0 * normalizer);
        break;
    }
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), members[i]);
    field.scores[i] = by_sorted[static_cast<std::size_t>(it - sorted.begin())];
  }
  return field;
}

NodeId most_central(const Network& net, std::span<const NodeId> members, Direction c,
                    std::size_t threads) {
  if (members.empty()) throw std::invalid_argument("straightness needs at least one member");
  std::vector<NodeId> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  const InducedSubgraph forward(net, sorted);
  if (sorted.size() == 1) return sorted.front();
  const InducedSubgraph backward(net.reverse_view(), sorted);

  const std::size_t n = sorted.size();
  std::vector<SphericalPoint> sph;
  sph.reserve(n);
  for (NodeId v : sorted) sph.push_back(net.spherical(v));
  const Units unit(sph);

  constexpr std::size_t kLandmarks = 16;
  const Landmarks lm_forward = build_landmarks(forward, backward, sph, kLandmarks);
  // Searches on the transposed subgraph swap the roles of from and to.
  const Landmarks lm_backward = lm_forward.swapped();
  const SearchSpace out_space{forward, lm_forward};
  const SearchSpace in_space{backward, lm_backward};
  const double stretch = stretch_ceiling(forward, unit);
  std::vector<SearchSpace> spaces;
  if (c != Direction::outward) spaces.push_back(in_space);
  if (c != Direction::inward) spaces.push_back(out_space);

  // Members near the centroid tend to score high; visiting them first raises
  // the bar early.
  std::array<double, 3> centroid{0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    centroid[0] += unit.x[i];
    centroid[1] += unit.y[i];
    centroid[2] += unit.z[i];
  }
  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    order[i] = {-(unit.x[i] * centroid[0] + unit.y[i] * centroid[1] + unit.z[i] * centroid[2]), i};
  }
  std::sort(order.begin(), order.end());

  const double normalizer = static_cast<double>(n - 1);
  const std::size_t workers = resolve_threads(threads);
  std::vector<Workspace> workspaces(workers);
  std::vector<std::optional<double>> scores(n);
  SharedBest best;
  // Scores are compared in sum units: score * normalizer, doubled for absolute.
  const double scale = c == Direction::absolute ? 2.0 * normalizer : normalizer;
  parallel_for(n, workers, [&](std::size_t w, std::size_t k) {
    const std::size_t i = order[k].second;
    std::array<double, 2> sums{0.0, 0.0};
    auto target = [&] { return best.load() * scale; };
    if (!bounded_ratio_sums(spaces, workspaces[w], sph, unit, stretch, i, target,
                            std::span<double>(sums).first(spaces.size()))) {
      return;
    }
    // Same expressions as straightness(): inward sum first for absolute.
    const double score = c == Direction::absolute ? (sums[0] + sums[1]) / (2.0 * normalizer) : sums[0] / normalizer;
    scores[i] = score;
    best.offer(score);
  });

  // Survivors in ascending id order, so ties keep the smallest NodeId.
  std::optional<std::size_t> winner;
  for (std::size_t i = 0; i < n; ++i) {
    if (scores[i] && (!winner || *scores[i] > *scores[*winner])) winner = i;
  }
  return sorted[*winner];
}

NodeId extract_central(const CentralityField& field) {
  if (field.members.empty()) throw std::invalid_argument("empty centrality field");
  std::size_t best = 0;
  for (std::size_t i = 1; i < field.members.size(); ++i) {
    const double s = field.scores[i];
    const double b = field.scores[best];
    if (s > b || (s == b && field.members[i] < field.members[best])) best = i;
  }
  return field.members[best];
}

}  // namespace urbanet
