// Nearest-POI assignment of every node under one metric.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "urbanet/network.hpp"
#include "urbanet/paths.hpp"
#include "urbanet/poi_set.hpp"

namespace urbanet {

enum class Metric {
  inline_distance,  // perimeter sets
  network_to,       // network sets, travelling node -> POI
  network_from,     // reversed network sets, travelling POI -> node
};

struct Assignment {
  std::size_t slot = 0;  // position of the POI in its PoiSet
  NodeId poi;
  double dist = 0.0;
};

struct Partition {
  Metric metric = Metric::inline_distance;
  /// Per node; empty only when no POI is reachable under a network metric.
  std::vector<std::optional<Assignment>> assignment;
  /// Per POI slot, the assigned nodes in ascending id order.
  std::vector<std::vector<NodeId>> members;

  std::size_t assigned_count() const;
  const std::optional<Assignment>& operator[](NodeId v) const { return assignment[v.index()]; }
};

/// Great-circle lengths from `poi` to every node.
std::vector<double> inline_distances(const Network& net, NodeId poi);

/// Assigns each node to the POI with the smallest distance. `per_poi[k]` holds
/// distances for PoiSet slot k; kUnreachable entries never win. Exact ties go to
/// the lower slot.
Partition assign_nearest(Metric metric, const PoiSet& pois,
                         std::span<const std::span<const double>> per_poi);

/// Perimeter sets: nearest POI by great-circle distance.
Partition perimeter_partition(const Network& net, const PoiSet& pois);

/// Network sets (to_poi) or reversed network sets (from_poi).
Partition network_partition(const Network& net, const PoiSet& pois, PathDirection direction,
                            std::size_t threads = 0);

}  // namespace urbanet
