#include "mlbinet/ops.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>

#include "mlbinet/errors.hpp"

namespace mlbinet::ad {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapC = Eigen::Map<const EMat>;
using MapM = Eigen::Map<EMat>;

MapC map(const Node& n) { return MapC(n.data.data(), n.rows, n.cols); }
MapC map_grad_c(const Node& n) { return MapC(n.grad.data(), n.rows, n.cols); }
MapM map_grad(Node& n) { return MapM(n.grad.data(), n.rows, n.cols); }

Value make_node(const char* op, std::size_t rows, std::size_t cols,
                std::vector<double> data, std::vector<Value> inputs,
                std::function<void(Node&)> backprop) {
  auto node = std::make_shared<Node>();
  node->rows = rows;
  node->cols = cols;
  node->data = std::move(data);
  node->op = op;
  bool needs_grad = false;
  for (const auto& in : inputs) needs_grad = needs_grad || in.requires_grad();
  if (needs_grad) {
    node->requires_grad = true;
    node->parents.reserve(inputs.size());
    for (auto& in : inputs) node->parents.push_back(in.ptr());
    node->backprop = std::move(backprop);
  }
  return Value(std::move(node));
}

std::pair<std::size_t, std::size_t> shape_of(const Value& v) {
  return {v.rows(), v.cols()};
}

}  // namespace

Value matmul(const Value& a, const Value& b) {
  if (a.cols() != b.rows()) throw ShapeError("matmul", shape_of(a), shape_of(b));
  std::size_t r = a.rows(), c = b.cols();
  std::vector<double> out(r * c);
  MapM(out.data(), r, c).noalias() = map(*a.node()) * map(*b.node());
  Node* an = a.node();
  Node* bn = b.node();
  return make_node("matmul", r, c, std::move(out), {a, b}, [an, bn](Node& self) {
    if (an->requires_grad)
      map_grad(*an).noalias() += map_grad_c(self) * map(*bn).transpose();
    if (bn->requires_grad)
      map_grad(*bn).noalias() += map(*an).transpose() * map_grad_c(self);
  });
}

Value matmul_nt(const Value& a, const Value& b) {
  if (a.cols() != b.cols()) throw ShapeError("matmul_nt", shape_of(a), shape_of(b));
  std::size_t r = a.rows(), c = b.rows();
  std::vector<double> out(r * c);
  MapM(out.data(), r, c).noalias() = map(*a.node()) * map(*b.node()).transpose();
  Node* an = a.node();
  Node* bn = b.node();
  return make_node("matmul_nt", r, c, std::move(out), {a, b}, [an, bn](Node& self) {
    if (an->requires_grad)
      map_grad(*an).noalias() += map_grad_c(self) * map(*bn);
    if (bn->requires_grad)
      map_grad(*bn).noalias() += map_grad_c(self).transpose() * map(*an);
  });
}

Value add(const Value& a, const Value& b) {
  std::size_t r = a.rows(), c = a.cols();
  const auto& ad = a.data();
  const auto& bd = b.data();
  std::vector<double> out(r * c);
  enum class Mode { full, row, scalar } mode;
  if (b.rows() == r && b.cols() == c) {
    mode = Mode::full;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ad[i] + bd[i];
  } else if (b.rows() == 1 && b.cols() == c) {
    mode = Mode::row;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) out[i * c + j] = ad[i * c + j] + bd[j];
  } else if (b.size() == 1) {
    mode = Mode::scalar;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ad[i] + bd[0];
  } else {
    throw ShapeError("add", shape_of(a), shape_of(b));
  }
  Node* an = a.node();
  Node* bn = b.node();
  return make_node("add", r, c, std::move(out), {a, b}, [an, bn, mode, r, c](Node& self) {
    if (an->requires_grad)
      for (std::size_t i = 0; i < self.grad.size(); ++i) an->grad[i] += self.grad[i];
    if (!bn->requires_grad) return;
    switch (mode) {
      case Mode::full:
        for (std::size_t i = 0; i < self.grad.size(); ++i) bn->grad[i] += self.grad[i];
        break;
      case Mode::row:
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < c; ++j) bn->grad[j] += self.grad[i * c + j];
        break;
      case Mode::scalar:
        for (double g : self.grad) bn->grad[0] += g;
        break;
    }
  });
}

Value mul(const Value& a, const Value& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("mul", shape_of(a), shape_of(b));
  std::vector<double> out(a.size());
  const auto& ad = a.data();
  const auto& bd = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ad[i] * bd[i];
  Node* an = a.node();
  Node* bn = b.node();
  return make_node("mul", a.rows(), a.cols(), std::move(out), {a, b}, [an, bn](Node& self) {
    if (an->requires_grad)
      for (std::size_t i = 0; i < self.grad.size(); ++i)
        an->grad[i] += self.grad[i] * bn->data[i];
    if (bn->requires_grad)
      for (std::size_t i = 0; i < self.grad.size(); ++i)
        bn->grad[i] += self.grad[i] * an->data[i];
  });
}

Value concat_cols(const std::vector<Value>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols", "no inputs");
  std::size_t r = parts[0].rows(), c = 0;
  for (const auto& p : parts) {
    if (p.rows() != r) throw ShapeError("concat_cols", shape_of(parts[0]), shape_of(p));
    c += p.cols();
  }
  std::vector<double> out(r * c);
  std::size_t off = 0;
  for (const auto& p : parts) {
    std::size_t pc = p.cols();
    for (std::size_t i = 0; i < r; ++i)
      std::copy_n(p.data().begin() + i * pc, pc, out.begin() + i * c + off);
    off += pc;
  }
  std::vector<Node*> nodes;
  for (const auto& p : parts) nodes.push_back(p.node());
  return make_node("concat_cols", r, c, std::move(out), parts, [nodes, r, c](Node& self) {
    std::size_t off = 0;
    for (Node* p : nodes) {
      std::size_t pc = p->cols;
      if (p->requires_grad)
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < pc; ++j)
            p->grad[i * pc + j] += self.grad[i * c + off + j];
      off += pc;
    }
  });
}

Value concat_rows(const std::vector<Value>& parts) {
  if (parts.empty()) throw ShapeError("concat_rows", "no inputs");
  std::size_t c = parts[0].cols(), r = 0;
  for (const auto& p : parts) {
    if (p.cols() != c) throw ShapeError("concat_rows", shape_of(parts[0]), shape_of(p));
    r += p.rows();
  }
  std::vector<double> out;
  out.reserve(r * c);
  for (const auto& p : parts) out.insert(out.end(), p.data().begin(), p.data().end());
  std::vector<Node*> nodes;
  for (const auto& p : parts) nodes.push_back(p.node());
  return make_node("concat_rows", r, c, std::move(out), parts, [nodes](Node& self) {
    std::size_t off = 0;
    for (Node* p : nodes) {
      std::size_t n = p->size();
      if (p->requires_grad)
        for (std::size_t i = 0; i < n; ++i) p->grad[i] += self.grad[off + i];
      off += n;
    }
  });
}

Value slice_cols(const Value& a, std::size_t lo, std::size_t hi) {
  if (lo >= hi || hi > a.cols())
    throw ShapeError("slice_cols", "range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                       ") out of " + std::to_string(a.cols()) + " columns");
  std::size_t r = a.rows(), c = hi - lo, ac = a.cols();
  std::vector<double> out(r * c);
  for (std::size_t i = 0; i < r; ++i)
    std::copy_n(a.data().begin() + i * ac + lo, c, out.begin() + i * c);
  Node* an = a.node();
  return make_node("slice_cols", r, c, std::move(out), {a}, [an, lo, r, c, ac](Node& self) {
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) an->grad[i * ac + lo + j] += self.grad[i * c + j];
  });
}

Value slice_rows(const Value& a, std::size_t lo, std::size_t hi) {
  if (lo >= hi || hi > a.rows())
    throw ShapeError("slice_rows", "range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                       ") out of " + std::to_string(a.rows()) + " rows");
  std::size_t r = hi - lo, c = a.cols();
  std::vector<double> out(a.data().begin() + lo * c, a.data().begin() + hi * c);
  Node* an = a.node();
  return make_node("slice_rows", r, c, std::move(out), {a}, [an, lo, c, r](Node& self) {
    for (std::size_t i = 0; i < r * c; ++i) an->grad[lo * c + i] += self.grad[i];
  });
}

namespace {

template <class Fwd, class Dfn>
Value unary(const char* op, const Value& a, Fwd f, Dfn dfdy) {
  std::vector<double> out(a.size());
  const auto& ad = a.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(ad[i]);
  Node* an = a.node();
  return make_node(op, a.rows(), a.cols(), std::move(out), {a}, [an, dfdy](Node& self) {
    for (std::size_t i = 0; i < self.grad.size(); ++i)
      an->grad[i] += self.grad[i] * dfdy(self.data[i], an->data[i]);
  });
}

}  // namespace

Value tanh(const Value& a) {
  return unary("tanh", a, [](double x) { return std::tanh(x); },
               [](double y, double) { return 1.0 - y * y; });
}

Value sigmoid(const Value& a) {
  return unary("sigmoid", a, [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
               [](double y, double) { return y * (1.0 - y); });
}

Value log(const Value& a) {
  return unary("log", a, [](double x) { return std::log(x); },
               [](double, double x) { return 1.0 / x; });
}

Value softmax_rows(const Value& a) {
  std::size_t r = a.rows(), c = a.cols();
  std::vector<double> out(r * c);
  const auto& ad = a.data();
  for (std::size_t i = 0; i < r; ++i) {
    const double* row = ad.data() + i * c;
    double mx = *std::max_element(row, row + c);
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      double e = std::exp(row[j] - mx);
      out[i * c + j] = e;
      z += e;
    }
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] /= z;
  }
  Node* an = a.node();
  return make_node("softmax_rows", r, c, std::move(out), {a}, [an, r, c](Node& self) {
    for (std::size_t i = 0; i < r; ++i) {
      const double* y = self.data.data() + i * c;
      const double* dy = self.grad.data() + i * c;
      double dot = 0.0;
      for (std::size_t j = 0; j < c; ++j) dot += y[j] * dy[j];
      for (std::size_t j = 0; j < c; ++j) an->grad[i * c + j] += y[j] * (dy[j] - dot);
    }
  });
}

Value gather_rows(const Value& table, const std::vector<int>& indices) {
  std::size_t v = table.rows(), d = table.cols(), n = indices.size();
  if (n == 0) throw ShapeError("gather_rows", "empty index list");
  for (int idx : indices)
    if (idx < 0 || static_cast<std::size_t>(idx) >= v)
      throw ShapeError("gather_rows", "index " + std::to_string(idx) + " out of " +
                                          std::to_string(v) + " rows");
  std::vector<double> out(n * d);
  for (std::size_t i = 0; i < n; ++i)
    std::copy_n(table.data().begin() + indices[i] * d, d, out.begin() + i * d);
  Node* tn = table.node();
  std::vector<int> idx = indices;
  return make_node("gather_rows", n, d, std::move(out), {table},
                   [tn, idx = std::move(idx), d](Node& self) {
                     for (std::size_t i = 0; i < idx.size(); ++i)
                       for (std::size_t j = 0; j < d; ++j)
                         tn->grad[idx[i] * d + j] += self.grad[i * d + j];
                   });
}

Value dropout(const Value& a, double p, bool train, Rng& rng) {
  if (p < 0.0 || p >= 1.0) throw ConfigError("dropout rate must be in [0, 1)");
  if (!train || p == 0.0) return a;
  double keep_scale = 1.0 / (1.0 - p);
  std::vector<double> mask(a.size());
  for (auto& m : mask) m = rng.bernoulli(p) ? 0.0 : keep_scale;
  std::vector<double> out(a.size());
  const auto& ad = a.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ad[i] * mask[i];
  Node* an = a.node();
  return make_node("dropout", a.rows(), a.cols(), std::move(out), {a},
                   [an, mask = std::move(mask)](Node& self) {
                     for (std::size_t i = 0; i < self.grad.size(); ++i)
                       an->grad[i] += self.grad[i] * mask[i];
                   });
}

Value sum(const Value& a) {
  double s = 0.0;
  for (double x : a.data()) s += x;
  Node* an = a.node();
  return make_node("sum", 1, 1, {s}, {a}, [an](Node& self) {
    for (double& g : an->grad) g += self.grad[0];
  });
}

Value mean(const Value& a) {
  double s = 0.0;
  for (double x : a.data()) s += x;
  double inv = 1.0 / static_cast<double>(a.size());
  Node* an = a.node();
  return make_node("mean", 1, 1, {s * inv}, {a}, [an, inv](Node& self) {
    for (double& g : an->grad) g += self.grad[0] * inv;
  });
}

Value scale(const Value& a, double c) {
  std::vector<double> out(a.size());
  const auto& ad = a.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ad[i] * c;
  Node* an = a.node();
  return make_node("scale", a.rows(), a.cols(), std::move(out), {a}, [an, c](Node& self) {
    for (std::size_t i = 0; i < self.grad.size(); ++i) an->grad[i] += self.grad[i] * c;
  });
}

Value broadcast_rows(const Value& row, std::size_t n) {
  if (row.rows() != 1) throw ShapeError("broadcast_rows", shape_of(row), {1, row.cols()});
  if (n == 1) return row;
  std::size_t c = row.cols();
  std::vector<double> out(n * c);
  for (std::size_t i = 0; i < n; ++i) std::copy_n(row.data().begin(), c, out.begin() + i * c);
  Node* rn = row.node();
  return make_node("broadcast_rows", n, c, std::move(out), {row}, [rn, n, c](Node& self) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < c; ++j) rn->grad[j] += self.grad[i * c + j];
  });
}

std::vector<int> argmax_rows(const Value& a) {
  std::size_t r = a.rows(), c = a.cols();
  std::vector<int> out(r);
  for (std::size_t i = 0; i < r; ++i) {
    const double* row = a.data().data() + i * c;
    std::size_t best = 0;
    for (std::size_t j = 1; j < c; ++j)
      if (row[j] > row[best]) best = j;
    out[i] = static_cast<int>(best);
  }
  return out;
}

}  // namespace mlbinet::ad
