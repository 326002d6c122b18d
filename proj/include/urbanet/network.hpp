// Immutable distance-weighted directed street graph.
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "urbanet/geo.hpp"

namespace urbanet {

/// Dense node index, contiguous in [0, node_count).
struct NodeId {
  std::uint32_t value = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t v) : value(v) {}
  constexpr std::size_t index() const { return value; }

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

struct Node {
  NodeId id;
  GeoPoint pos;
  std::optional<std::string> external_ref;
};

/// Edge as supplied to Network::build. A missing weight is filled in with the
/// great-circle length between the endpoints.
struct EdgeSpec {
  NodeId source;
  NodeId target;
  std::optional<double> weight;
};

struct Edge {
  NodeId source;
  NodeId target;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Adjacency entry: the far endpoint and the edge length.
struct Arc {
  NodeId head;
  double weight = 0.0;
};

class Network {
 public:
  Network();

  /// Node ids must equal their position in `nodes`. Self-loops, dangling
  /// endpoints and non-finite or negative explicit weights throw
  /// std::invalid_argument. Duplicate directed edges keep the minimum weight.
  static Network build(std::vector<Node> nodes, std::vector<EdgeSpec> edges);

  std::size_t node_count() const;
  std::size_t edge_count() const;
  bool contains(NodeId id) const { return id.index() < node_count(); }

  const Node& node(NodeId id) const;
  std::span<const Node> nodes() const;
  const GeoPoint& position(NodeId id) const { return node(id).pos; }
  const SphericalPoint& spherical(NodeId id) const;

  /// Outgoing arcs in this view's orientation, sorted by head.
  std::span<const Arc> out_arcs(NodeId id) const;
  /// Incoming arcs in this view's orientation; `head` is the tail node.
  std::span<const Arc> in_arcs(NodeId id) const;

  /// Every directed edge in this view's orientation, ordered by (source, target).
  std::vector<Edge> edges() const;

  std::optional<double> edge_weight(NodeId source, NodeId target) const;

  /// Same nodes and weights with every edge flipped. Shares storage.
  Network reverse_view() const;
  bool is_reversed() const { return reversed_; }

  /// True when every edge has a matching reverse edge of equal weight.
  bool is_bidirectional() const;

 private:
  struct Storage;

  Network(std::shared_ptr<const Storage> storage, bool reversed);

  std::shared_ptr<const Storage> storage_;
  bool reversed_ = false;
};

/// Induced-subgraph helper shared by several modules: true for ids in `members`.
std::vector<char> membership_mask(std::size_t node_count, std::span<const NodeId> members);

}  // namespace urbanet

template <>
struct std::hash<urbanet::NodeId> {
  std::size_t operator()(urbanet::NodeId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
