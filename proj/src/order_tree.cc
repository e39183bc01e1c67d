#include "baro/internal/order_tree.h"

namespace baro::internal {

void OrderTree::Split(int32_t v, const PriorityKey& key, int32_t& better,
                      int32_t& rest) {
  if (v < 0) {
    better = rest = -1;
    return;
  }
  if (Better(nodes_[v].key, key)) {
    int32_t right_better = -1;
    Split(nodes_[v].right, key, right_better, rest);
    nodes_[v].right = right_better;
    Pull(v);
    better = v;
  } else {
    int32_t left_rest = -1;
    Split(nodes_[v].left, key, better, left_rest);
    nodes_[v].left = left_rest;
    Pull(v);
    rest = v;
  }
}

int32_t OrderTree::Merge(int32_t a, int32_t b) {
  if (a < 0) return b;
  if (b < 0) return a;
  if (nodes_[a].heap > nodes_[b].heap) {
    nodes_[a].right = Merge(nodes_[a].right, b);
    Pull(a);
    return a;
  }
  nodes_[b].left = Merge(a, nodes_[b].left);
  Pull(b);
  return b;
}

void OrderTree::Insert(const PriorityKey& key, double weight) {
  const int32_t v = static_cast<int32_t>(nodes_.size());
  nodes_.push_back(Node{key, weight, weight, NextHeap(), -1, -1});
  int32_t better = -1;
  int32_t rest = -1;
  Split(root_, key, better, rest);
  root_ = Merge(Merge(better, v), rest);
}

double OrderTree::SumBetter(const PriorityKey& query) const {
  double acc = 0.0;
  int32_t v = root_;
  while (v >= 0) {
    const Node& node = nodes_[v];
    if (Better(node.key, query)) {
      acc += node.weight + (node.left >= 0 ? nodes_[node.left].sum : 0.0);
      v = node.right;
    } else {
      v = node.left;
    }
  }
  return acc;
}

void OrderTree::Clear() {
  nodes_.clear();
  root_ = -1;
}

}  // namespace baro::internal
