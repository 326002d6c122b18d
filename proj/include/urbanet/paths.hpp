// Shortest-path lengths over a Network: per-POI fields and induced-subgraph tables.
#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "urbanet/network.hpp"

namespace urbanet {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

enum class PathDirection {
  to_poi,    // length of v -> origin
  from_poi,  // length of origin -> v
};

struct DistanceField {
  NodeId origin;
  PathDirection direction = PathDirection::to_poi;
  std::vector<double> dist;

  double operator[](NodeId v) const { return dist[v.index()]; }
  bool reachable(NodeId v) const { return dist[v.index()] != kUnreachable; }
};

/// Single-source lengths in the orientation of `net`. Label-setting, so all
/// weights must be non-negative (Network::build guarantees it).
std::vector<double> single_source_lengths(const Network& net, NodeId source);

/// For every v, the length of the shortest directed path v -> poi.
DistanceField distances_to(const Network& net, NodeId poi);

/// For every v, the length of the shortest directed path poi -> v.
DistanceField distances_from(const Network& net, NodeId poi);

/// The subgraph induced by a node subset, re-indexed locally so repeated
/// searches inside it never touch the rest of the network.
class InducedSubgraph {
 public:
  /// Duplicate members throw std::invalid_argument.
  InducedSubgraph(const Network& net, std::span<const NodeId> members);

  std::size_t size() const { return members_.size(); }
  std::span<const NodeId> members() const { return members_; }
  std::size_t edge_count() const { return arcs_.size(); }

  /// Lengths from local member `source` to every local member, using only
  /// induced edges. `out` is resized to size().
  void lengths_from(std::size_t source, std::vector<double>& out) const;

  /// Called with (local member, final length) in nondecreasing length order;
  /// returning false abandons the search.
  using SettleVisitor = std::function<bool(std::uint32_t, double)>;

  /// As above, reporting members as they are settled. Returns false when the
  /// visitor stopped the search, leaving `out` partial.
  bool lengths_from(std::size_t source, std::vector<double>& out, const SettleVisitor& visit) const;

  struct LocalArc {
    std::uint32_t head;
    double weight;
  };
  /// Arcs leaving local member u, heads in local numbering.
  std::span<const LocalArc> arcs(std::uint32_t u) const {
    return std::span<const LocalArc>(arcs_).subspan(offsets_[u], offsets_[u + 1] - offsets_[u]);
  }

 private:
  std::vector<NodeId> members_;
  std::vector<std::size_t> offsets_;
  std::vector<LocalArc> arcs_;
};

/// Dense |members| x |members| table; row i holds lengths members[i] -> members[j].
class DistanceTable {
 public:
  DistanceTable() = default;
  DistanceTable(std::vector<NodeId> members, std::vector<double> values);

  std::size_t size() const { return members_.size(); }
  std::span<const NodeId> members() const { return members_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * members_.size() + j]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * members_.size(), members_.size());
  }

 private:
  std::vector<NodeId> members_;
  std::vector<double> values_;
};

/// All-pairs lengths restricted to the subgraph induced by `members`.
/// Empty input yields an empty table.
DistanceTable pairwise_in_subgraph(const Network& net, std::span<const NodeId> members,
                                   std::size_t threads = 0);

}  // namespace urbanet
