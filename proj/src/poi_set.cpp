#include "urbanet/poi_set.hpp"

#include <algorithm>
#include <unordered_set>

namespace urbanet {

PoiSet::PoiSet(std::vector<Poi> pois) : pois_(std::move(pois)) {
  std::unordered_set<NodeId> nodes;
  std::unordered_set<std::string> labels;
  for (const Poi& poi : pois_) {
    if (poi.label.empty()) throw std::invalid_argument("POI label is empty");
    if (!nodes.insert(poi.node).second) {
      throw DuplicatePoiError("duplicate POI at node " + std::to_string(poi.node.value) +
                              " (label " + poi.label + ")");
    }
    if (!labels.insert(poi.label).second) {
      throw std::invalid_argument("duplicate POI label " + poi.label);
    }
  }
}

std::vector<NodeId> PoiSet::nodes() const {
  std::vector<NodeId> out;
  out.reserve(pois_.size());
  for (const Poi& poi : pois_) out.push_back(poi.node);
  return out;
}

std::optional<std::size_t> PoiSet::slot_of(NodeId node) const {
  auto it = std::find_if(pois_.begin(), pois_.end(), [&](const Poi& p) { return p.node == node; });
  if (it == pois_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - pois_.begin());
}

std::optional<std::size_t> PoiSet::slot_of(const std::string& label) const {
  auto it = std::find_if(pois_.begin(), pois_.end(), [&](const Poi& p) { return p.label == label; });
  if (it == pois_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - pois_.begin());
}

PoiSet PoiSet::with_moved(std::size_t slot, NodeId node) const {
  std::vector<Poi> next = pois_;
  next.at(slot).node = node;
  return PoiSet(std::move(next));
}

PoiSet PoiSet::with_added(NodeId node, std::string label) const {
  std::vector<Poi> next = pois_;
  next.push_back(Poi{node, std::move(label)});
  return PoiSet(std::move(next));
}

PoiSet PoiSet::without(NodeId node) const {
  std::vector<Poi> next;
  next.reserve(pois_.size());
  for (const Poi& poi : pois_) {
    if (poi.node != node) next.push_back(poi);
  }
  if (next.size() == pois_.size()) {
    throw std::invalid_argument("node " + std::to_string(node.value) + " is not a POI");
  }
  return PoiSet(std::move(next));
}

void PoiSet::check_within(const Network& net) const {
  for (const Poi& poi : pois_) {
    if (!net.contains(poi.node)) {
      throw std::out_of_range("POI " + poi.label + " references missing node " +
                              std::to_string(poi.node.value));
    }
  }
}

}  // namespace urbanet
