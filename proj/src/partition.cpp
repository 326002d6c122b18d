#include "urbanet/partition.hpp"

#include <stdexcept>

#include "urbanet/parallel.hpp"

namespace urbanet {

std::size_t Partition::assigned_count() const {
  std::size_t count = 0;
  for (const auto& a : assignment) count += a.has_value();
  return count;
}

std::vector<double> inline_distances(const Network& net, NodeId poi) {
  const SphericalPoint& origin = net.spherical(poi);
  std::vector<double> out(net.node_count());
  for (std::uint32_t v = 0; v < out.size(); ++v) {
    out[v] = great_circle(origin, net.spherical(NodeId(v)));
  }
  return out;
}

Partition assign_nearest(Metric metric, const PoiSet& pois,
                         std::span<const std::span<const double>> per_poi) {
  if (pois.empty()) throw std::invalid_argument("partition needs at least one POI");
  if (per_poi.size() != pois.size()) throw std::invalid_argument("one distance vector per POI");
  const std::size_t n = per_poi.front().size();
  for (const auto& d : per_poi) {
    if (d.size() != n) throw std::invalid_argument("distance vectors differ in length");
  }

  Partition out;
  out.metric = metric;
  out.assignment.assign(n, std::nullopt);
  out.members.assign(pois.size(), {});
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t best = pois.size();
    double best_dist = kUnreachable;
    for (std::size_t k = 0; k < per_poi.size(); ++k) {
      if (per_poi[k][v] < best_dist) {
        best = k;
        best_dist = per_poi[k][v];
      }
    }
    if (best == pois.size()) continue;
    out.assignment[v] = Assignment{best, pois[best].node, best_dist};
    out.members[best].push_back(NodeId(static_cast<std::uint32_t>(v)));
  }
  return out;
}

Partition perimeter_partition(const Network& net, const PoiSet& pois) {
  pois.check_within(net);
  std::vector<std::vector<double>> dists;
  dists.reserve(pois.size());
  for (const Poi& poi : pois) dists.push_back(inline_distances(net, poi.node));
  std::vector<std::span<const double>> views(dists.begin(), dists.end());
  return assign_nearest(Metric::inline_distance, pois, views);
}

Partition network_partition(const Network& net, const PoiSet& pois, PathDirection direction,
                            std::size_t threads) {
  pois.check_within(net);
  std::vector<DistanceField> fields(pois.size());
  parallel_for(pois.size(), threads, [&](std::size_t, std::size_t k) {
    fields[k] = direction == PathDirection::to_poi ? distances_to(net, pois[k].node)
                                                   : distances_from(net, pois[k].node);
  });
  std::vector<std::span<const double>> views;
  views.reserve(fields.size());
  for (const auto& f : fields) views.emplace_back(f.dist);
  return assign_nearest(
      direction == PathDirection::to_poi ? Metric::network_to : Metric::network_from, pois, views);
}

}  // namespace urbanet
