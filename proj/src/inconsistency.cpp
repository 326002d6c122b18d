#include "urbanet/inconsistency.hpp"

#include <algorithm>
#include <stdexcept>

#include "urbanet/parallel.hpp"

namespace urbanet {

std::string_view to_string(Direction c) {
  switch (c) {
    case Direction::inward: return "inward";
    case Direction::outward: return "outward";
    case Direction::absolute: return "absolute";
  }
  return "unknown";
}

char code(Direction c) {
  switch (c) {
    case Direction::inward: return 'I';
    case Direction::outward: return 'O';
    case Direction::absolute: return 'A';
  }
  return '?';
}

std::optional<Direction> parse_direction(std::string_view text) {
  if (text == "inward" || text == "I") return Direction::inward;
  if (text == "outward" || text == "O") return Direction::outward;
  if (text == "absolute" || text == "A") return Direction::absolute;
  return std::nullopt;
}

std::vector<std::size_t> InconsistencyReport::counts() const {
  std::vector<std::size_t> out;
  out.reserve(inconsistent.size());
  for (const auto& set : inconsistent) out.push_back(set.size());
  return out;
}

std::vector<std::optional<std::size_t>> InconsistencyReport::slot_by_node(
    std::size_t node_count) const {
  std::vector<std::optional<std::size_t>> out(node_count);
  for (std::size_t slot = 0; slot < inconsistent.size(); ++slot) {
    for (NodeId v : inconsistent[slot]) out.at(v.index()) = slot;
  }
  return out;
}

namespace {

// Outcome of comparing one node's inline-nearest POI with its network-nearest.
enum class Verdict { consistent, inconsistent, unreachable };

Verdict judge(const Partition& network, NodeId v, std::size_t inline_slot) {
  const auto& a = network[v];
  if (!a) return Verdict::unreachable;
  return a->slot == inline_slot ? Verdict::consistent : Verdict::inconsistent;
}

}  // namespace

InconsistencyReport classify(Direction c, const PoiSet& pois, const Partition& perimeter,
                             const Partition* network_to, const Partition* network_from,
                             bool strict_unreachable) {
  const bool need_to = c != Direction::outward;
  const bool need_from = c != Direction::inward;
  if ((need_to && !network_to) || (need_from && !network_from)) {
    throw std::invalid_argument("missing network partition for direction");
  }

  InconsistencyReport report;
  report.direction = c;
  report.pois = pois;
  report.inconsistent.assign(pois.size(), {});
  report.consistent.assign(pois.size(), {});

  for (std::size_t slot = 0; slot < pois.size(); ++slot) {
    for (NodeId v : perimeter.members[slot]) {
      bool flagged = true;
      bool skipped = false;
      for (const Partition* network : {need_to ? network_to : nullptr,
                                       need_from ? network_from : nullptr}) {
        if (!network) continue;
        switch (judge(*network, v, slot)) {
          case Verdict::consistent:
            flagged = false;
            break;
          case Verdict::unreachable:
            if (!strict_unreachable) {
              flagged = false;
              skipped = true;
            }
            break;
          case Verdict::inconsistent:
            break;
        }
      }
      if (flagged) {
        report.inconsistent[slot].push_back(v);
      } else {
        report.consistent[slot].push_back(v);
      }
      report.skipped += skipped;
    }
    report.total += report.inconsistent[slot].size();
  }
  return report;
}

Tracker::Tracker(Network net, TrackOptions options)
    : net_(std::move(net)), options_(options) {}

Tracker::Field Tracker::lookup(Kind kind, NodeId poi) const {
  {
    std::lock_guard lock(mutex_);
    auto it = cache_[kind].find(poi);
    if (it != cache_[kind].end()) return it->second;
  }
  std::vector<double> values;
  switch (kind) {
    case kInline: values = inline_distances(net_, poi); break;
    case kTo: values = distances_to(net_, poi).dist; break;
    case kFrom: values = distances_from(net_, poi).dist; break;
    default: throw std::logic_error("bad field kind");
  }
  auto field = std::make_shared<const std::vector<double>>(std::move(values));
  std::lock_guard lock(mutex_);
  return cache_[kind].try_emplace(poi, std::move(field)).first->second;
}

void Tracker::prefetch(Kind kind, std::span<const NodeId> pois) const {
  parallel_for(pois.size(), options_.threads,
               [&](std::size_t, std::size_t k) { lookup(kind, pois[k]); });
}

Tracker::Field Tracker::inline_field(NodeId poi) const {
  if (!net_.contains(poi)) throw std::out_of_range("POI node " + std::to_string(poi.value));
  return lookup(kInline, poi);
}

Tracker::Field Tracker::network_field(NodeId poi, PathDirection direction) const {
  if (!net_.contains(poi)) throw std::out_of_range("POI node " + std::to_string(poi.value));
  return lookup(direction == PathDirection::to_poi ? kTo : kFrom, poi);
}

void Tracker::retain(std::span<const NodeId> keep) const {
  std::lock_guard lock(mutex_);
  for (auto& cache : cache_) {
    std::erase_if(cache, [&](const auto& entry) {
      return std::find(keep.begin(), keep.end(), entry.first) == keep.end();
    });
  }
}

std::size_t Tracker::cached_fields() const {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (const auto& cache : cache_) n += cache.size();
  return n;
}

InconsistencyReport Tracker::track(const PoiSet& pois, Direction c) const {
  if (pois.empty()) throw std::invalid_argument("tracking needs at least one POI");
  pois.check_within(net_);
  const std::vector<NodeId> nodes = pois.nodes();

  auto partition_of = [&](Kind kind, Metric metric) {
    prefetch(kind, nodes);
    std::vector<Field> fields;
    fields.reserve(nodes.size());
    for (NodeId p : nodes) fields.push_back(lookup(kind, p));
    std::vector<std::span<const double>> views;
    views.reserve(fields.size());
    for (const Field& f : fields) views.emplace_back(*f);
    return assign_nearest(metric, pois, views);
  };

  const Partition perimeter = partition_of(kInline, Metric::inline_distance);
  std::optional<Partition> to;
  std::optional<Partition> from;
  if (c != Direction::outward) to = partition_of(kTo, Metric::network_to);
  if (c != Direction::inward) from = partition_of(kFrom, Metric::network_from);
  return classify(c, pois, perimeter, to ? &*to : nullptr, from ? &*from : nullptr,
                  options_.strict_unreachable);
}

InconsistencyReport track(const Network& net, const PoiSet& pois, Direction c,
                          TrackOptions options) {
  return Tracker(net, options).track(pois, c);
}

}  // namespace urbanet
