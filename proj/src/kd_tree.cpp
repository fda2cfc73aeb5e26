#include "pureg/kd_tree.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <utility>

namespace pureg {

namespace {

// Max-heap entry: (squared distance, index). The lexicographic order makes
// the "worst of the current k" well defined even under distance ties.
using HeapEntry = std::pair<double, int>;

}  // namespace

KdTree::KdTree(Eigen::MatrixXd points) : points_(std::move(points)) {
  const int n = size();
  order_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order_[static_cast<std::size_t>(i)] = i;
  if (n > 0) {
    nodes_.reserve(static_cast<std::size_t>(2 * n / kLeafSize + 2));
    root_ = build(0, n);
  }
}

int KdTree::build(int begin, int end) {
  const int node_index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  if (end - begin <= kLeafSize) {
    nodes_[static_cast<std::size_t>(node_index)].begin = begin;
    nodes_[static_cast<std::size_t>(node_index)].end = end;
    return node_index;
  }

  // Split on the widest axis of this subset's bounding box.
  const int d = dim();
  int axis = 0;
  double best_extent = -1.0;
  for (int a = 0; a < d; ++a) {
    double lo = points_(order_[static_cast<std::size_t>(begin)], a);
    double hi = lo;
    for (int i = begin + 1; i < end; ++i) {
      double v = points_(order_[static_cast<std::size_t>(i)], a);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_extent) {
      best_extent = hi - lo;
      axis = a;
    }
  }

  const int mid = (begin + end) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) {
                     double va = points_(a, axis);
                     double vb = points_(b, axis);
                     return va < vb || (va == vb && a < b);
                   });
  const double split = points_(order_[static_cast<std::size_t>(mid)], axis);

  // Left subtree holds coordinates <= split, right holds >= split.
  const int left = build(begin, mid);
  const int right = build(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(node_index)];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return node_index;
}

void KdTree::check_query(const Eigen::VectorXd& query) const {
  if (query.size() != points_.cols()) {
    throw std::invalid_argument("query has dimension " + std::to_string(query.size()) +
                                ", tree has dimension " + std::to_string(points_.cols()));
  }
}

std::vector<int> KdTree::nearest(const Eigen::VectorXd& query, int k) const {
  check_query(query);
  if (k < 1 || k > size()) {
    throw std::invalid_argument("nearest: k = " + std::to_string(k) +
                                " out of range for " + std::to_string(size()) + " points");
  }

  std::priority_queue<HeapEntry> heap;  // top() is the worst kept candidate
  auto consider = [&](int idx) {
    double d2 = (points_.row(idx).transpose() - query).squaredNorm();
    HeapEntry e{d2, idx};
    if (static_cast<int>(heap.size()) < k) {
      heap.push(e);
    } else if (e < heap.top()) {
      heap.pop();
      heap.push(e);
    }
  };

  // Iterative depth-first descent, nearer child first.
  std::vector<int> stack;
  stack.push_back(root_);
  while (!stack.empty()) {
    int ni = stack.back();
    stack.pop_back();
    const Node& node = nodes_[static_cast<std::size_t>(ni)];
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) consider(order_[static_cast<std::size_t>(i)]);
      continue;
    }
    double gap = query(node.axis) - node.split;
    int near = gap <= 0.0 ? node.left : node.right;
    int far = gap <= 0.0 ? node.right : node.left;
    // Visit the far side unless every point there is strictly worse than the
    // current k-th best. <= keeps boundary ties, which index tie-breaking
    // then resolves deterministically.
    if (static_cast<int>(heap.size()) < k || gap * gap <= heap.top().first) {
      stack.push_back(far);
    }
    stack.push_back(near);
  }

  std::vector<HeapEntry> entries;
  entries.reserve(heap.size());
  while (!heap.empty()) {
    entries.push_back(heap.top());
    heap.pop();
  }
  std::sort(entries.begin(), entries.end());
  std::vector<int> result;
  result.reserve(entries.size());
  for (const auto& e : entries) result.push_back(e.second);
  return result;
}

std::vector<int> KdTree::within_radius(const Eigen::VectorXd& query, double radius) const {
  check_query(query);
  std::vector<int> result;
  if (root_ < 0 || radius < 0.0) return result;

  std::vector<int> stack;
  stack.push_back(root_);
  while (!stack.empty()) {
    int ni = stack.back();
    stack.pop_back();
    const Node& node = nodes_[static_cast<std::size_t>(ni)];
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        int idx = order_[static_cast<std::size_t>(i)];
        double dist = std::sqrt((points_.row(idx).transpose() - query).squaredNorm());
        if (dist <= radius) result.push_back(idx);
      }
      continue;
    }
    double gap = std::abs(query(node.axis) - node.split);
    if (query(node.axis) <= node.split) {
      stack.push_back(node.left);
      if (gap <= radius) stack.push_back(node.right);
    } else {
      stack.push_back(node.right);
      if (gap <= radius) stack.push_back(node.left);
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace pureg
