// Straightness centrality over induced subgraphs.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "urbanet/inconsistency.hpp"
#include "urbanet/network.hpp"

namespace urbanet {

struct CentralityField {
  std::vector<NodeId> members;
  std::vector<double> scores;  // parallel to members

  std::size_t size() const { return members.size(); }
  std::optional<double> score(NodeId v) const;
};

/// Mean ratio of great-circle to network length between each member and every
/// other member, with network lengths measured inside the induced subgraph.
///
/// The direction selects which trips are measured: inward uses j -> i (people
/// travelling to a candidate site i), outward uses i -> j, absolute averages
/// the two ratios. Unreachable pairs and zero-length paths contribute 0 but
/// still count in the (|members| - 1) normalizer. A single member scores 0.
/// Throws std::invalid_argument on empty or duplicate members.
CentralityField straightness(const Network& net, std::span<const NodeId> members, Direction c,
                             std::size_t threads = 0);

/// Same as extract_central(straightness(...)), without finishing the searches
/// of members that provably cannot win.
NodeId most_central(const Network& net, std::span<const NodeId> members, Direction c,
                    std::size_t threads = 0);

/// Member with the highest score; exact ties go to the smallest NodeId.
/// Throws std::invalid_argument on an empty field.
NodeId extract_central(const CentralityField& field);

}  // namespace urbanet
