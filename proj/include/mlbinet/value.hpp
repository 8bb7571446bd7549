#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace mlbinet::ad {

// One node of the computation graph. Matrices are row-major; vectors are
// 1xN rows and scalars 1x1. `backprop`, when set, reads this node's grad
// and accumulates into the parents' grads.
struct Node {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
  std::vector<double> grad;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backprop;
  const char* op = "leaf";
  bool requires_grad = false;
  bool backward_ran = false;

  std::size_t size() const { return rows * cols; }
};

// Cheap shared handle to a Node. Copying a Value aliases the same storage.
class Value {
 public:
  Value() = default;
  explicit Value(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  static Value zeros(std::size_t rows, std::size_t cols);
  static Value full(std::size_t rows, std::size_t cols, double fill);
  static Value from(std::size_t rows, std::size_t cols, std::vector<double> data);
  static Value scalar(double v);
  // Leaf with requires_grad set; grad buffer allocated and zeroed.
  static Value leaf(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return node_->rows; }
  std::size_t cols() const { return node_->cols; }
  std::size_t size() const { return node_->size(); }

  const std::vector<double>& data() const { return node_->data; }
  std::vector<double>& data() { return node_->data; }
  const std::vector<double>& grad() const { return node_->grad; }
  std::vector<double>& grad() { return node_->grad; }

  double at(std::size_t r, std::size_t c) const { return node_->data[r * node_->cols + c]; }
  double item() const;

  bool requires_grad() const { return node_->requires_grad; }
  bool defined() const { return node_ != nullptr; }

  void zero_grad() const;

  // Reverse pass from this scalar. `seed` is the incoming gradient, 1 by
  // default. Throws NumericError on a non-scalar value or a second call on
  // the same node.
  void backward(double seed = 1.0) const;

  Node* node() const { return node_.get(); }
  const std::shared_ptr<Node>& ptr() const { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

// Topological order of the subgraph below `root` restricted to nodes that
// require gradients (root first after reversal; used by backward()).
std::vector<Node*> topo_order(Node* root);

// Drops edges and closures of the whole graph below `root` iteratively.
// Leaf data and grads are untouched. Call after a training/inference pass
// so deep graphs never unwind recursively through shared_ptr chains.
void release_graph(const Value& root);

}  // namespace mlbinet::ad
