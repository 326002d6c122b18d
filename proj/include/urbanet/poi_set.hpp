// Ordered, labelled set of point-of-interest nodes.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "urbanet/network.hpp"

namespace urbanet {

struct Poi {
  NodeId node;
  std::string label;

  friend bool operator==(const Poi&, const Poi&) = default;
};

/// Raised when an operation would put two POIs on one node.
class DuplicatePoiError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Order matters: it breaks distance ties and fixes report row order.
/// Nodes and labels are unique; construction throws DuplicatePoiError
/// (nodes) or std::invalid_argument (labels, empty label) otherwise.
class PoiSet {
 public:
  PoiSet() = default;
  explicit PoiSet(std::vector<Poi> pois);

  std::size_t size() const { return pois_.size(); }
  bool empty() const { return pois_.empty(); }
  const Poi& operator[](std::size_t slot) const { return pois_[slot]; }
  auto begin() const { return pois_.begin(); }
  auto end() const { return pois_.end(); }
  std::span<const Poi> items() const { return pois_; }

  std::vector<NodeId> nodes() const;
  std::optional<std::size_t> slot_of(NodeId node) const;
  std::optional<std::size_t> slot_of(const std::string& label) const;
  bool contains(NodeId node) const { return slot_of(node).has_value(); }

  /// Copy with the POI in `slot` moved to `node`, keeping its label and order.
  PoiSet with_moved(std::size_t slot, NodeId node) const;
  PoiSet with_added(NodeId node, std::string label) const;
  PoiSet without(NodeId node) const;

  /// Throws std::out_of_range if any POI lies outside `net`.
  void check_within(const Network& net) const;

  friend bool operator==(const PoiSet&, const PoiSet&) = default;

 private:
  std::vector<Poi> pois_;
};

}  // namespace urbanet
