#include "urbanet/paths.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "node_heap.hpp"
#include "urbanet/parallel.hpp"

namespace urbanet {

namespace {

// Label-setting search. for_each_arc(u, relax) calls relax(v, w) per arc
// u -> v; settle(u, d) runs as u is finalized and may return false to stop.
template <typename ForEachArc, typename Settle>
bool dijkstra(std::uint32_t source, std::vector<double>& dist, ForEachArc&& for_each_arc,
              Settle&& settle) {
  thread_local detail::NodeHeap heap;
  heap.reset(dist.size());
  dist[source] = 0.0;
  heap.push(source, 0.0);
  while (!heap.empty()) {
    const auto [d, u] = heap.pop();
    if (!settle(u, d)) {
      heap.clear();
      return false;
    }
    for_each_arc(u, [&](std::uint32_t v, double w) {
      const double candidate = d + w;
      if (candidate < dist[v]) {
        dist[v] = candidate;
        heap.push(v, candidate);
      }
    });
  }
  return true;
}

template <typename ForEachArc>
void dijkstra(std::uint32_t source, std::vector<double>& dist, ForEachArc&& for_each_arc) {
  dijkstra(source, dist, for_each_arc, [](std::uint32_t, double) { return true; });
}

}  // namespace

std::vector<double> single_source_lengths(const Network& net, NodeId source) {
  if (!net.contains(source)) throw std::out_of_range("source " + std::to_string(source.value));
  std::vector<double> dist(net.node_count(), kUnreachable);
  dijkstra(source.value, dist, [&](std::uint32_t u, auto&& push) {
    for (const Arc& arc : net.out_arcs(NodeId(u))) push(arc.head.value, arc.weight);
  });
  return dist;
}

DistanceField distances_to(const Network& net, NodeId poi) {
  return DistanceField{poi, PathDirection::to_poi, single_source_lengths(net.reverse_view(), poi)};
}

DistanceField distances_from(const Network& net, NodeId poi) {
  return DistanceField{poi, PathDirection::from_poi, single_source_lengths(net, poi)};
}

InducedSubgraph::InducedSubgraph(const Network& net, std::span<const NodeId> members)
    : members_(members.begin(), members.end()) {
  constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> local(net.node_count(), kAbsent);
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const NodeId id = members_[i];
    if (!net.contains(id)) throw std::out_of_range("member " + std::to_string(id.value));
    if (local[id.index()] != kAbsent) {
      throw std::invalid_argument("duplicate member " + std::to_string(id.value));
    }
    local[id.index()] = static_cast<std::uint32_t>(i);
  }
  offsets_.assign(members_.size() + 1, 0);
  for (std::size_t i = 0; i < members_.size(); ++i) {
    for (const Arc& arc : net.out_arcs(members_[i])) {
      const std::uint32_t head = local[arc.head.index()];
      if (head != kAbsent) arcs_.push_back(LocalArc{head, arc.weight});
    }
    offsets_[i + 1] = arcs_.size();
  }
}

void InducedSubgraph::lengths_from(std::size_t source, std::vector<double>& out) const {
  lengths_from(source, out, [](std::uint32_t, double) { return true; });
}

bool InducedSubgraph::lengths_from(std::size_t source, std::vector<double>& out,
                                   const SettleVisitor& visit) const {
  out.assign(members_.size(), kUnreachable);
  return dijkstra(
      static_cast<std::uint32_t>(source), out,
      [&](std::uint32_t u, auto&& push) {
        for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) push(arcs_[k].head, arcs_[k].weight);
      },
      visit);
}

DistanceTable::DistanceTable(std::vector<NodeId> members, std::vector<double> values)
    : members_(std::move(members)), values_(std::move(values)) {
  if (values_.size() != members_.size() * members_.size()) {
    throw std::invalid_argument("distance table size mismatch");
  }
}

DistanceTable pairwise_in_subgraph(const Network& net, std::span<const NodeId> members,
                                   std::size_t threads) {
  if (members.empty()) return {};
  const InducedSubgraph sub(net, members);
  const std::size_t n = sub.size();
  std::vector<double> values(n * n, kUnreachable);
  parallel_for(n, threads, [&](std::size_t, std::size_t i) {
    std::vector<double> row;
    sub.lengths_from(i, row);
    std::copy(row.begin(), row.end(), values.begin() + static_cast<std::ptrdiff_t>(i * n));
  });
  return DistanceTable(std::vector<NodeId>(members.begin(), members.end()), std::move(values));
}

}  // namespace urbanet
