#ifndef BARO_INTERNAL_ORDER_TREE_H_
#define BARO_INTERNAL_ORDER_TREE_H_

#include <cstdint>
#include <vector>

#include "baro/core.h"

namespace baro::internal {

// Treap keyed by PriorityKey (better keys to the left) with subtree weight
// sums. Supports insertion and "total weight of keys strictly better than q"
// in expected O(log n). Node storage is an arena that Clear() recycles.
class OrderTree {
 public:
  void Insert(const PriorityKey& key, double weight);
  double SumBetter(const PriorityKey& query) const;
  double Total() const { return root_ < 0 ? 0.0 : nodes_[root_].sum; }
  size_t size() const { return nodes_.size(); }
  void Clear();

  // Visits (key, weight) pairs from best to worst.
  template <typename Fn>
  void ForEachInOrder(Fn&& fn) const {
    std::vector<int32_t> stack;
    int32_t cur = root_;
    while (cur >= 0 || !stack.empty()) {
      while (cur >= 0) {
        stack.push_back(cur);
        cur = nodes_[cur].left;
      }
      cur = stack.back();
      stack.pop_back();
      fn(nodes_[cur].key, nodes_[cur].weight);
      cur = nodes_[cur].right;
    }
  }

 private:
  struct Node {
    PriorityKey key;
    double weight;
    double sum;
    uint64_t heap;
    int32_t left;
    int32_t right;
  };

  void Pull(int32_t v) {
    Node& node = nodes_[v];
    node.sum = node.weight + (node.left >= 0 ? nodes_[node.left].sum : 0.0) +
               (node.right >= 0 ? nodes_[node.right].sum : 0.0);
  }
  // Splits into (keys better than `key`, the rest).
  void Split(int32_t v, const PriorityKey& key, int32_t& better,
             int32_t& rest);
  int32_t Merge(int32_t a, int32_t b);
  uint64_t NextHeap() {
    heap_state_ ^= heap_state_ << 13;
    heap_state_ ^= heap_state_ >> 7;
    heap_state_ ^= heap_state_ << 17;
    return heap_state_;
  }

  std::vector<Node> nodes_;
  int32_t root_ = -1;
  uint64_t heap_state_ = 0x2545f4914f6cdd1dULL;
};

}  // namespace baro::internal

#endif  // BARO_INTERNAL_ORDER_TREE_H_
