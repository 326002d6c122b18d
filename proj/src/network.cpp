#include "urbanet/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace urbanet {

struct Network::Storage {
  std::vector<Node> nodes;
  std::vector<SphericalPoint> spherical;
  // Compressed adjacency, forward and transposed.
  std::vector<std::size_t> out_offsets;
  std::vector<Arc> out_arcs;
  std::vector<std::size_t> in_offsets;
  std::vector<Arc> in_arcs;
};

namespace {

std::string describe_edge(const EdgeSpec& e) {
  return "<" + std::to_string(e.source.value) + ", " + std::to_string(e.target.value) + ">";
}

void fill_csr(std::size_t n, const std::vector<Edge>& edges, bool transpose,
              std::vector<std::size_t>& offsets, std::vector<Arc>& arcs) {
  offsets.assign(n + 1, 0);
  for (const Edge& e : edges) {
    ++offsets[(transpose ? e.target : e.source).index() + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  arcs.resize(edges.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const Edge& e : edges) {
    const NodeId tail = transpose ? e.target : e.source;
    const NodeId head = transpose ? e.source : e.target;
    arcs[cursor[tail.index()]++] = Arc{head, e.weight};
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(arcs.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
              arcs.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]),
              [](const Arc& a, const Arc& b) { return a.head < b.head; });
  }
}

}  // namespace

Network::Network() : Network(std::make_shared<const Storage>(Storage{{}, {}, {0}, {}, {0}, {}}), false) {}

Network::Network(std::shared_ptr<const Storage> storage, bool reversed)
    : storage_(std::move(storage)), reversed_(reversed) {}

Network Network::build(std::vector<Node> nodes, std::vector<EdgeSpec> specs) {
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes[i].id.index() != i) {
      throw std::invalid_argument("node at position " + std::to_string(i) + " has id " +
                                  std::to_string(nodes[i].id.value));
    }
    if (!is_valid(nodes[i].pos)) {
      throw std::invalid_argument("node " + std::to_string(i) + " has an invalid position");
    }
  }

  std::vector<Edge> edges;
  edges.reserve(specs.size());
  for (const EdgeSpec& spec : specs) {
    if (spec.source.index() >= n || spec.target.index() >= n) {
      throw std::invalid_argument("edge " + describe_edge(spec) + " references a missing node");
    }
    if (spec.source == spec.target) {
      throw std::invalid_argument("self-loop " + describe_edge(spec));
    }
    double weight = 0.0;
    if (spec.weight) {
      weight = *spec.weight;
      if (!std::isfinite(weight) || weight < 0.0) {
        throw std::invalid_argument("edge " + describe_edge(spec) + " has invalid weight");
      }
    } else {
      weight = great_circle(nodes[spec.source.index()].pos, nodes[spec.target.index()].pos);
    }
    edges.push_back(Edge{spec.source, spec.target, weight});
  }

  // Parallel edges collapse to the lightest one.
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.source != b.source) return a.source < b.source;
    if (a.target != b.target) return a.target < b.target;
    return a.weight < b.weight;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) {
                            return a.source == b.source && a.target == b.target;
                          }),
              edges.end());

  Storage storage;
  storage.spherical.reserve(n);
  for (const Node& node : nodes) storage.spherical.emplace_back(node.pos);
  storage.nodes = std::move(nodes);
  fill_csr(n, edges, false, storage.out_offsets, storage.out_arcs);
  fill_csr(n, edges, true, storage.in_offsets, storage.in_arcs);
  return Network(std::make_shared<const Storage>(std::move(storage)), false);
}

std::size_t Network::node_count() const { return storage_->nodes.size(); }

std::size_t Network::edge_count() const { return storage_->out_arcs.size(); }

const Node& Network::node(NodeId id) const {
  if (!contains(id)) throw std::out_of_range("node id " + std::to_string(id.value));
  return storage_->nodes[id.index()];
}

std::span<const Node> Network::nodes() const { return storage_->nodes; }

const SphericalPoint& Network::spherical(NodeId id) const {
  return storage_->spherical[id.index()];
}

std::span<const Arc> Network::out_arcs(NodeId id) const {
  const auto& offsets = reversed_ ? storage_->in_offsets : storage_->out_offsets;
  const auto& arcs = reversed_ ? storage_->in_arcs : storage_->out_arcs;
  return std::span<const Arc>(arcs).subspan(offsets[id.index()],
                                            offsets[id.index() + 1] - offsets[id.index()]);
}

std::span<const Arc> Network::in_arcs(NodeId id) const {
  const auto& offsets = reversed_ ? storage_->out_offsets : storage_->in_offsets;
  const auto& arcs = reversed_ ? storage_->out_arcs : storage_->in_arcs;
  return std::span<const Arc>(arcs).subspan(offsets[id.index()],
                                            offsets[id.index() + 1] - offsets[id.index()]);
}

std::vector<Edge> Network::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::uint32_t u = 0; u < node_count(); ++u) {
    for (const Arc& arc : out_arcs(NodeId(u))) out.push_back(Edge{NodeId(u), arc.head, arc.weight});
  }
  return out;
}

std::optional<double> Network::edge_weight(NodeId source, NodeId target) const {
  const auto arcs = out_arcs(source);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), target,
                             [](const Arc& a, NodeId id) { return a.head < id; });
  if (it == arcs.end() || it->head != target) return std::nullopt;
  return it->weight;
}

Network Network::reverse_view() const { return Network(storage_, !reversed_); }

bool Network::is_bidirectional() const {
  for (std::uint32_t u = 0; u < node_count(); ++u) {
    for (const Arc& arc : out_arcs(NodeId(u))) {
      const auto back = edge_weight(arc.head, NodeId(u));
      if (!back || *back != arc.weight) return false;
    }
  }
  return true;
}

std::vector<char> membership_mask(std::size_t node_count, std::span<const NodeId> members) {
  std::vector<char> mask(node_count, 0);
  for (NodeId id : members) {
    if (id.index() >= node_count) throw std::out_of_range("member id " + std::to_string(id.value));
    mask[id.index()] = 1;
  }
  return mask;
}

}  // namespace urbanet
