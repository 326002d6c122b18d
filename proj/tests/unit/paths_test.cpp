#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "urbanet/fixtures.hpp"
#include "urbanet/paths.hpp"

using namespace urbanet;

namespace {

// Directed 3-cycle 0 -> 1 -> 2 -> 0, unit weights.
Network unit_cycle() {
  std::vector<Node> nodes;
  for (std::uint32_t i = 0; i < 3; ++i) {
    nodes.push_back(Node{NodeId(i), GeoPoint::make(0, 0.001 * i), std::nullopt});
  }
  return Network::build(nodes, {{NodeId(0), NodeId(1), 1.0},
                                {NodeId(1), NodeId(2), 1.0},
                                {NodeId(2), NodeId(0), 1.0}});
}

}  // namespace

TEST(Paths, CycleDistancesFollowOrientation) {
  const Network net = unit_cycle();
  const auto to = distances_to(net, NodeId(0));
  const auto from = distances_from(net, NodeId(0));
  EXPECT_EQ(to[NodeId(0)], 0.0);
  EXPECT_EQ(from[NodeId(0)], 0.0);
  EXPECT_EQ(to[NodeId(1)], 2.0);    // 1 -> 2 -> 0
  EXPECT_EQ(from[NodeId(1)], 1.0);  // 0 -> 1
  EXPECT_EQ(to.direction, PathDirection::to_poi);
}

TEST(Paths, ReverseViewMirrorsPathLengths) {
  const Network net = unit_cycle();
  // Brute force on the cycle: 0 -> 2 is 0 -> 1 -> 2, length 2.
  EXPECT_EQ(single_source_lengths(net, NodeId(0))[2], 2.0);
  EXPECT_EQ(single_source_lengths(net.reverse_view(), NodeId(2))[0], 2.0);
}

TEST(Paths, UnreachableIsMarked) {
  const Network net = Network::build(
      {Node{NodeId(0), GeoPoint::make(0, 0), {}}, Node{NodeId(1), GeoPoint::make(0, 0.001), {}}},
      {{NodeId(0), NodeId(1), {}}});
  const auto to = distances_to(net, NodeId(0));
  EXPECT_FALSE(to.reachable(NodeId(1)));
  EXPECT_EQ(to[NodeId(1)], kUnreachable);
}

TEST(Paths, AgreesWithFloydWarshallOnRandomDigraphs) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const std::size_t n = 2 + seed % 63;  // up to 64 nodes
    const auto inst = fixtures::random_digraph(seed, n, 0.15, 1);
    const auto fw = oracle::floyd_warshall(inst.net);
    for (std::uint32_t p = 0; p < n; ++p) {
      const auto to = distances_to(inst.net, NodeId(p));
      const auto from = distances_from(inst.net, NodeId(p));
      const auto to_rev = distances_from(inst.net.reverse_view(), NodeId(p));
      for (std::uint32_t v = 0; v < n; ++v) {
        ASSERT_DOUBLE_EQ(to.dist[v], fw[v][p]) << "seed " << seed << " v " << v << " p " << p;
        ASSERT_DOUBLE_EQ(from.dist[v], fw[p][v]) << "seed " << seed;
        ASSERT_EQ(to.dist[v], to_rev.dist[v]);
      }
    }
  }
}

TEST(Paths, FieldsAreRelaxationFixpointsWithRealizableLabels) {
  const auto inst = fixtures::random_instance(5);
  const Network& net = inst.net;
  const auto from = distances_from(net, inst.pois[0].node);
  for (std::uint32_t u = 0; u < net.node_count(); ++u) {
    if (!from.reachable(NodeId(u))) continue;
    EXPECT_GE(from.dist[u], 0.0);
    for (const Arc& arc : net.out_arcs(NodeId(u))) {
      EXPECT_LE(from[arc.head], from.dist[u] + arc.weight);
    }
    // A finite label is realized by some tight incoming arc (or is the origin).
    if (NodeId(u) == from.origin) continue;
    bool tight = false;
    for (const Arc& arc : net.in_arcs(NodeId(u))) {
      tight |= from[arc.head] + arc.weight == from.dist[u];
    }
    EXPECT_TRUE(tight) << "node " << u;
  }
}

TEST(Paths, PairwiseSingleMemberAndEmpty) {
  const Network net = unit_cycle();
  const std::vector<NodeId> one{NodeId(1)};
  const auto table = pairwise_in_subgraph(net, one);
  ASSERT_EQ(table.size(), 1u);
  EXPECT_EQ(table.at(0, 0), 0.0);
  EXPECT_EQ(pairwise_in_subgraph(net, {}).size(), 0u);
}

TEST(Paths, PairwiseDropsEdgesThroughExcludedNodes) {
  // Path 0 - 1 - 2 (both directions); remove the middle node.
  std::vector<Node> nodes;
  for (std::uint32_t i = 0; i < 3; ++i) nodes.push_back(Node{NodeId(i), GeoPoint::make(0, 0.001 * i), {}});
  const Network net = Network::build(nodes, {{NodeId(0), NodeId(1), {}}, {NodeId(1), NodeId(0), {}},
                                             {NodeId(1), NodeId(2), {}}, {NodeId(2), NodeId(1), {}}});
  const std::vector<NodeId> ends{NodeId(0), NodeId(2)};
  const auto table = pairwise_in_subgraph(net, ends);
  EXPECT_EQ(table.at(0, 1), kUnreachable);
  EXPECT_EQ(table.at(1, 0), kUnreachable);
  EXPECT_EQ(table.at(0, 0), 0.0);
}

TEST(Paths, PairwiseMatchesInducedFloydWarshall) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto inst = fixtures::random_digraph(seed, 15, 0.25, 1);
    std::mt19937_64 rng(seed);
    std::vector<NodeId> members;
    while (members.size() < 8) {
      const NodeId v(static_cast<std::uint32_t>(fixtures::below(rng, 15)));
      if (std::find(members.begin(), members.end(), v) == members.end()) members.push_back(v);
    }
    const auto fw = oracle::floyd_warshall(inst.net, membership_mask(15, members));
    const auto table = pairwise_in_subgraph(inst.net, members);
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = 0; j < members.size(); ++j) {
        ASSERT_DOUBLE_EQ(table.at(i, j), fw[members[i].index()][members[j].index()]);
      }
    }
  }
}

TEST(Paths, InducedSubgraphRejectsDuplicates) {
  const Network net = unit_cycle();
  const std::vector<NodeId> dup{NodeId(0), NodeId(0)};
  EXPECT_THROW(InducedSubgraph(net, dup), std::invalid_argument);
}
