/* Copyright (c) 2026 The hinforge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

namespace hinforge::ad {

/// Dense row-major matrix of doubles with an optional gradient buffer.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0);
  Tensor(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Tensor row_vector(std::initializer_list<double> values);
  static Tensor row_vector(std::span<const double> values);
  static Tensor scalar(double v) { return Tensor(1, 1, v); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_vector() const noexcept { return rows_ == 1 || cols_ == 1; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool requires_grad() const noexcept { return requires_grad_; }
  void set_requires_grad(bool on);
  std::span<double> grad() noexcept { return grad_; }
  std::span<const double> grad() const noexcept { return grad_; }
  void zero_grad();

  /// Value equality (shape + bit-identical entries); gradients are ignored.
  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
  std::vector<double> grad_;
  bool requires_grad_ = false;
};

/// Compressed sparse row matrix used as a constant left operand.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
};

/// Handle to a value recorded on a Tape.
struct Var {
  std::size_t id = 0;
};

enum class OpKind {
  Leaf,
  Constant,
  MatMul,
  MatVec,
  SparseMatMul,
  Add,
  Scale,
  Concat,
  StackRows,
  GatherRows,
  Relu,
  Tanh,
  Log,
  Cosine,
  Softmax,
  Nll,
  Sum,
};

/// Append-only record of forward operations. Values are computed eagerly;
/// `backward` walks the record in reverse and accumulates into the grad
/// buffers of leaf tensors.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Registers a parameter. The tensor must outlive the tape.
  Var leaf(Tensor& param);
  Var constant(Tensor value);

  const Tensor& value(Var v) const { return nodes_.at(v.id).value; }
  double scalar(Var v) const;
  bool requires_grad(Var v) const { return nodes_.at(v.id).requires_grad; }
  std::size_t size() const noexcept { return nodes_.size(); }
  void clear() { nodes_.clear(); }

  Var matmul(Var a, Var b);
  /// (r x c) times a c-element vector of either orientation; yields r x 1.
  Var matvec(Var m, Var x);
  Var sparse_matmul(std::shared_ptr<const CsrMatrix> a, Var b);
  Var add(Var a, Var b);
  Var scale(Var a, double s);
  /// Column-wise splicing of operands with equal row counts.
  Var concat(std::span<const Var> parts);
  Var concat(std::initializer_list<Var> parts) { return concat(std::span<const Var>(parts.begin(), parts.size())); }
  Var stack_rows(std::span<const Var> parts);
  Var gather_rows(Var a, std::span<const std::size_t> rows);
  Var row(Var a, std::size_t r) { return gather_rows(a, std::span<const std::size_t>(&r, 1)); }
  Var relu(Var a);
  Var tanh(Var a);
  Var log(Var a);
  /// Cosine of two equally sized vectors; 0 (with zero gradient) when either
  /// norm is below 1e-12.
  Var cosine_similarity(Var u, Var v);
  /// Softmax over all entries of a vector, max-subtracted.
  Var softmax(Var a);
  /// -sum_r log_probs[r, targets[r]].
  Var nll(Var log_probs, std::span<const std::size_t> targets);
  Var sum(Var a);

  void backward(Var loss);

 private:
  struct Node {
    OpKind op = OpKind::Constant;
    Tensor value;
    std::vector<double> grad;
    std::vector<std::size_t> inputs;
    std::vector<std::size_t> indices;
    double scalar = 0.0;
    std::shared_ptr<const CsrMatrix> sparse;
    Tensor* param = nullptr;
    bool requires_grad = false;
  };

  Var push(Node node);
  bool any_requires_grad(std::initializer_list<Var> vs) const;
  void propagate(Node& node);

  std::vector<Node> nodes_;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t worst_tensor = 0;
  std::size_t worst_entry = 0;
  double analytic_at_worst = 0.0;
  double numeric_at_worst = 0.0;
  std::size_t entries_checked = 0;
  bool passed = true;
};

using Objective = std::function<Var(Tape&)>;

/// Compares backward() against central differences for every entry of every
/// tensor in `params`. Relative error is |a-n| / max(1e-8, |a|+|n|).
/// Throws NonDeterministicFunction if two evaluations at the same point differ.
GradCheckReport finite_difference_check(const Objective& f, std::span<Tensor* const> params, double eps,
                                        double tol);

}  // namespace hinforge::ad
