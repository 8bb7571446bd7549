#include "mlbinet/value.hpp"

#include <algorithm>
#include <unordered_set>
#include <utility>

#include "mlbinet/errors.hpp"

namespace mlbinet::ad {

Value Value::zeros(std::size_t rows, std::size_t cols) { return full(rows, cols, 0.0); }

Value Value::full(std::size_t rows, std::size_t cols, double fill) {
  auto node = std::make_shared<Node>();
  node->rows = rows;
  node->cols = cols;
  node->data.assign(rows * cols, fill);
  node->op = "const";
  return Value(std::move(node));
}

Value Value::from(std::size_t rows, std::size_t cols, std::vector<double> data) {
  if (data.size() != rows * cols) {
    throw ShapeError("from", "data length " + std::to_string(data.size()) +
                                 " does not match " + std::to_string(rows) + "x" +
                                 std::to_string(cols));
  }
  auto node = std::make_shared<Node>();
  node->rows = rows;
  node->cols = cols;
  node->data = std::move(data);
  node->op = "const";
  return Value(std::move(node));
}

Value Value::scalar(double v) { return from(1, 1, {v}); }

Value Value::leaf(std::size_t rows, std::size_t cols, std::vector<double> data) {
  Value v = from(rows, cols, std::move(data));
  v.node()->requires_grad = true;
  v.node()->grad.assign(v.size(), 0.0);
  v.node()->op = "leaf";
  return v;
}

double Value::item() const {
  if (size() != 1) {
    throw NumericError("item: value is " + std::to_string(rows()) + "x" +
                       std::to_string(cols()) + ", expected a scalar");
  }
  return node_->data[0];
}

void Value::zero_grad() const {
  node_->grad.assign(node_->size(), 0.0);
}

std::vector<Node*> topo_order(Node* root) {
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(root, 0);
  seen.insert(root);
  while (!stack.empty()) {
    auto& top = stack.back();
    Node* n = top.first;
    if (top.second < n->parents.size()) {
      Node* p = n->parents[top.second].get();
      ++top.second;
      if (p->requires_grad && seen.insert(p).second) {
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }
  return order;  // parents before children; reverse for backprop
}

void Value::backward(double seed) const {
  Node* root = node_.get();
  if (root->size() != 1) {
    throw NumericError("backward: loss must be scalar, got " + std::to_string(root->rows) +
                       "x" + std::to_string(root->cols));
  }
  if (root->backward_ran) {
    throw NumericError("backward: already ran on this graph; rebuild it or zero first");
  }
  root->backward_ran = true;
  if (!root->requires_grad) return;

  std::vector<Node*> order = topo_order(root);
  for (Node* n : order) {
    // Interior nodes get a fresh grad buffer; leaves keep accumulating so a
    // batch of losses can share parameters.
    if (!n->parents.empty() || n->backprop) {
      n->grad.assign(n->size(), 0.0);
    } else if (n->grad.size() != n->size()) {
      n->grad.assign(n->size(), 0.0);
    }
  }
  root->grad.assign(1, seed);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backprop) n->backprop(*n);
  }
}

void release_graph(const Value& root) {
  if (!root.defined()) return;
  std::vector<std::shared_ptr<Node>> all;
  std::unordered_set<Node*> seen;
  std::vector<std::shared_ptr<Node>> stack{root.ptr()};
  seen.insert(root.node());
  while (!stack.empty()) {
    std::shared_ptr<Node> n = std::move(stack.back());
    stack.pop_back();
    for (auto& p : n->parents) {
      if (seen.insert(p.get()).second) stack.push_back(p);
    }
    all.push_back(std::move(n));
  }
  for (auto& n : all) {
    n->parents.clear();
    n->backprop = nullptr;
  }
}

}  // namespace mlbinet::ad
