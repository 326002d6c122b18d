// Inward, outward and absolute distance-based inconsistencies.
//
// A node is inconsistent for the POI p when p is its great-circle-nearest
// POI but a different POI is nearest along the streets. The node is charged
// to p (its inline-nearest POI), so per-POI sets are disjoint.
#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "urbanet/network.hpp"
#include "urbanet/partition.hpp"
#include "urbanet/poi_set.hpp"

namespace urbanet {

enum class Direction {
  inward,    // travel node -> POI (clinics)
  outward,   // travel POI -> node (police)
  absolute,  // both at once (schools)
};

std::string_view to_string(Direction c);
/// Single-letter code I, O or A.
char code(Direction c);
/// Accepts inward/outward/absolute and I/O/A, case-sensitive.
std::optional<Direction> parse_direction(std::string_view text);

struct TrackOptions {
  /// Count nodes with no reachable POI as inconsistent instead of skipping them.
  bool strict_unreachable = false;
  std::size_t threads = 0;
};

struct InconsistencyReport {
  Direction direction = Direction::inward;
  PoiSet pois;
  /// Per POI slot, inconsistent nodes charged to that POI, ascending ids.
  std::vector<std::vector<NodeId>> inconsistent;
  /// Per POI slot, the perimeter members that are not inconsistent.
  std::vector<std::vector<NodeId>> consistent;
  std::size_t total = 0;
  /// Perimeter nodes passed over because no POI is reachable in a needed direction.
  std::size_t skipped = 0;

  std::size_t count(std::size_t slot) const { return inconsistent[slot].size(); }
  std::vector<std::size_t> counts() const;
  /// Slot each node is charged to, or nothing for consistent nodes.
  std::vector<std::optional<std::size_t>> slot_by_node(std::size_t node_count) const;
};

/// Builds the report from the three partitions. Partitions not needed by `c`
/// may be null.
InconsistencyReport classify(Direction c, const PoiSet& pois, const Partition& perimeter,
                             const Partition* network_to, const Partition* network_from,
                             bool strict_unreachable);

/// Holds a network and memoizes per-POI distance vectors, so repeated tracking
/// of overlapping POI sets (the reducer, the service) only pays for new nodes.
/// Thread-safe.
class Tracker {
 public:
  explicit Tracker(Network net, TrackOptions options = {});

  const Network& network() const { return net_; }
  const TrackOptions& options() const { return options_; }

  InconsistencyReport track(const PoiSet& pois, Direction c) const;

  using Field = std::shared_ptr<const std::vector<double>>;
  Field inline_field(NodeId poi) const;
  Field network_field(NodeId poi, PathDirection direction) const;

  /// Drops cached vectors for nodes outside `keep`.
  void retain(std::span<const NodeId> keep) const;
  std::size_t cached_fields() const;

 private:
  enum Kind { kInline, kTo, kFrom, kKinds };

  Field lookup(Kind kind, NodeId poi) const;
  void prefetch(Kind kind, std::span<const NodeId> pois) const;

  Network net_;
  TrackOptions options_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<NodeId, Field> cache_[kKinds];
};

/// One-shot tracking of `pois` on `net` in direction `c`.
InconsistencyReport track(const Network& net, const PoiSet& pois, Direction c,
                          TrackOptions options = {});

}  // namespace urbanet
