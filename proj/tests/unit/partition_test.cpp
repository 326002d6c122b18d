#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support/oracles.hpp"
#include "urbanet/fixtures.hpp"
#include "urbanet/partition.hpp"

using namespace urbanet;

namespace {

Network equator_line(std::size_t n, bool connect) {
  std::vector<Node> nodes;
  std::vector<EdgeSpec> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    nodes.push_back(Node{NodeId(i), GeoPoint::make(0, static_cast<double>(i)), {}});
    if (connect && i > 0) {
      edges.push_back({NodeId(i - 1), NodeId(i), {}});
      edges.push_back({NodeId(i), NodeId(i - 1), {}});
    }
  }
  return Network::build(nodes, edges);
}

std::vector<NodeId> ids(std::initializer_list<std::uint32_t> list) {
  std::vector<NodeId> out;
  for (auto v : list) out.emplace_back(v);
  return out;
}

void expect_disjoint_cover(const Partition& p) {
  std::vector<int> seen(p.assignment.size(), 0);
  for (std::size_t slot = 0; slot < p.members.size(); ++slot) {
    for (NodeId v : p.members[slot]) {
      ++seen[v.index()];
      ASSERT_TRUE(p.assignment[v.index()]);
      EXPECT_EQ(p.assignment[v.index()]->slot, slot);
    }
  }
  for (std::size_t v = 0; v < seen.size(); ++v) {
    EXPECT_EQ(seen[v], p.assignment[v] ? 1 : 0) << "node " << v;
  }
}

}  // namespace

TEST(Partition, SinglePoiOwnsEverything) {
  const Network net = equator_line(5, true);
  const PoiSet pois({Poi{NodeId(2), "only"}});
  const auto p = perimeter_partition(net, pois);
  EXPECT_EQ(p.members[0].size(), 5u);
  const auto n = network_partition(net, pois, PathDirection::to_poi);
  EXPECT_EQ(n.members[0].size(), 5u);
}

TEST(Partition, MidpointTieGoesToEarlierPoi) {
  const Network net = equator_line(3, false);
  const auto p = perimeter_partition(net, PoiSet({Poi{NodeId(0), "a"}, Poi{NodeId(2), "b"}}));
  EXPECT_EQ(p.members[0], ids({0, 1}));
  const auto q = perimeter_partition(net, PoiSet({Poi{NodeId(2), "b"}, Poi{NodeId(0), "a"}}));
  EXPECT_EQ(q.members[0], ids({1, 2}));
}

TEST(Partition, LineSplitsInHalves) {
  // Brute-force comparison: node 1 is 1 degree from node 0 and 2 from node 3.
  const Network net = equator_line(4, false);
  const auto p = perimeter_partition(net, PoiSet({Poi{NodeId(0), "a"}, Poi{NodeId(3), "b"}}));
  EXPECT_EQ(p.members[0], ids({0, 1}));
  EXPECT_EQ(p.members[1], ids({2, 3}));
  EXPECT_EQ(p.metric, Metric::inline_distance);
}

TEST(Partition, UnreachableNodesStayUnassigned) {
  const Network net = equator_line(3, false);
  const auto p = network_partition(net, PoiSet({Poi{NodeId(0), "a"}}), PathDirection::to_poi);
  EXPECT_TRUE(p.assignment[0]);
  EXPECT_FALSE(p.assignment[1]);
  EXPECT_FALSE(p.assignment[2]);
  EXPECT_EQ(p.assigned_count(), 1u);
}

TEST(Partition, DirectedRingByHandWalk) {
  // 0 -> 1 -> 2 -> 3 -> 4 -> 5 -> 0 with unit weights, POIs on 0 and 3.
  std::vector<Node> nodes;
  std::vector<EdgeSpec> edges;
  for (std::uint32_t i = 0; i < 6; ++i) {
    nodes.push_back(Node{NodeId(i), GeoPoint::make(0.001 * std::cos(i), 0.001 * std::sin(i)), {}});
    edges.push_back({NodeId(i), NodeId((i + 1) % 6), 1.0});
  }
  const Network net = Network::build(nodes, edges);
  const PoiSet pois({Poi{NodeId(0), "p0"}, Poi{NodeId(3), "p3"}});

  const auto to = network_partition(net, pois, PathDirection::to_poi);
  EXPECT_EQ(to.members[0], ids({0, 4, 5}));
  EXPECT_EQ(to.members[1], ids({1, 2, 3}));
  const auto from = network_partition(net, pois, PathDirection::from_poi);
  EXPECT_EQ(from.members[0], ids({0, 1, 2}));
  EXPECT_EQ(from.members[1], ids({3, 4, 5}));

  // Cross-check against the Floyd-Warshall oracle.
  const auto fw = oracle::floyd_warshall(net);
  for (std::uint32_t v = 0; v < 6; ++v) {
    const std::size_t to_slot = fw[v][0] <= fw[v][3] ? 0 : 1;
    const std::size_t from_slot = fw[0][v] <= fw[3][v] ? 0 : 1;
    EXPECT_EQ(to.assignment[v]->slot, to_slot);
    EXPECT_EQ(from.assignment[v]->slot, from_slot);
  }
}

TEST(Partition, DisjointCoverAndMinimalityOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = fixtures::random_instance(seed);
    for (const auto& p : {perimeter_partition(inst.net, inst.pois),
                          network_partition(inst.net, inst.pois, PathDirection::to_poi),
                          network_partition(inst.net, inst.pois, PathDirection::from_poi)}) {
      expect_disjoint_cover(p);
    }
    const auto per = perimeter_partition(inst.net, inst.pois);
    EXPECT_EQ(per.assigned_count(), inst.net.node_count());
    const auto to = network_partition(inst.net, inst.pois, PathDirection::to_poi);
    std::vector<DistanceField> fields;
    for (const Poi& poi : inst.pois) fields.push_back(distances_to(inst.net, poi.node));
    for (std::uint32_t v = 0; v < inst.net.node_count(); ++v) {
      const auto& a = to.assignment[v];
      if (!a) continue;
      for (std::size_t k = 0; k < fields.size(); ++k) {
        EXPECT_LE(a->dist, fields[k].dist[v]);
        if (k < a->slot) EXPECT_LT(a->dist, fields[k].dist[v]);  // ties went to the earlier slot
      }
    }
  }
}

TEST(Partition, PerimeterIgnoresEdgeStructure) {
  const auto inst = fixtures::random_instance(17);
  auto edges = inst.net.edges();
  std::mt19937_64 rng(3);
  std::shuffle(edges.begin(), edges.end(), rng);
  std::vector<EdgeSpec> specs;
  for (std::size_t i = 0; i < edges.size() / 2; ++i) specs.push_back({edges[i].source, edges[i].target, {}});
  const Network thinned = Network::build(
      std::vector<Node>(inst.net.nodes().begin(), inst.net.nodes().end()), specs);
  EXPECT_EQ(perimeter_partition(inst.net, inst.pois).members,
            perimeter_partition(thinned, inst.pois).members);
}
