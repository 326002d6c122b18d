// Priority queue shared by the shortest-path searches.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace urbanet::detail {

// Indexed 4-ary min-heap keyed by tentative length, with decrease-key.
class NodeHeap {
 public:
  void reset(std::size_t n) {
    if (pos_.size() < n) pos_.resize(n, kAbsent);
    items_.clear();
  }
  bool empty() const { return items_.empty(); }

  // Inserts v or lowers its key.
  void push(std::uint32_t v, double key) {
    std::size_t at = pos_[v];
    if (at == kAbsent) {
      at = items_.size();
      items_.push_back({key, v});
    } else {
      items_[at].key = key;
    }
    sift_up(at);
  }

  std::pair<double, std::uint32_t> pop() {
    const Item top = items_.front();
    pos_[top.node] = kAbsent;
    const Item last = items_.back();
    items_.pop_back();
    if (!items_.empty()) {
      items_.front() = last;
      sift_down(0);
    }
    return {top.key, top.node};
  }

  // Leaves the position index clean after an early exit.
  void clear() {
    for (const Item& item : items_) pos_[item.node] = kAbsent;
    items_.clear();
  }

 private:
  static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
  struct Item {
    double key;
    std::uint32_t node;
  };
  // Ties on key go to the smaller node id so runs are reproducible.
  static bool before(const Item& a, const Item& b) {
    return a.key < b.key || (a.key == b.key && a.node < b.node);
  }

  void place(std::size_t at, const Item& item) {
    items_[at] = item;
    pos_[item.node] = static_cast<std::uint32_t>(at);
  }
  void sift_up(std::size_t at) {
    const Item item = items_[at];
    while (at > 0) {
      const std::size_t parent = (at - 1) / 4;
      if (!before(item, items_[parent])) break;
      place(at, items_[parent]);
      at = parent;
    }
    place(at, item);
  }
  void sift_down(std::size_t at) {
    const Item item = items_[at];
    const std::size_t n = items_.size();
    for (;;) {
      const std::size_t first = 4 * at + 1;
      if (first >= n) break;
      std::size_t best = first;
      const std::size_t end = std::min(first + 4, n);
      for (std::size_t c = first + 1; c < end; ++c) {
        if (before(items_[c], items_[best])) best = c;
      }
      if (!before(items_[best], item)) break;
      place(at, items_[best]);
      at = best;
    }
    place(at, item);
  }

  std::vector<Item> items_;
  std::vector<std::uint32_t> pos_;
};

}  // namespace urbanet::detail
