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

#include "hinforge/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hinforge/error.hpp"

namespace hinforge::ad {

namespace {

constexpr double kCosineEps = 1e-12;

std::string shape_str(const Tensor& t) { return std::to_string(t.rows()) + "x" + std::to_string(t.cols()); }

void require_finite(const Tensor& t, const char* op) {
  for (double v : t.data()) {
    if (!std::isfinite(v)) raise(ErrorCode::NonFiniteValue, std::string(op) + " produced a non-finite value");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != rows * cols) {
    raise(ErrorCode::ShapeMismatch, "buffer of " + std::to_string(data_.size()) + " for shape " +
                                        std::to_string(rows) + "x" + std::to_string(cols));
  }
}

Tensor Tensor::row_vector(std::initializer_list<double> values) { return Tensor(1, values.size(), values); }

Tensor Tensor::row_vector(std::span<const double> values) {
  return Tensor(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

void Tensor::set_requires_grad(bool on) {
  requires_grad_ = on;
  if (on) {
    grad_.assign(data_.size(), 0.0);
  } else {
    grad_.clear();
  }
}

void Tensor::zero_grad() { std::fill(grad_.begin(), grad_.end(), 0.0); }

Var Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var{nodes_.size() - 1};
}

bool Tape::any_requires_grad(std::initializer_list<Var> vs) const {
  return std::any_of(vs.begin(), vs.end(), [&](Var v) { return nodes_.at(v.id).requires_grad; });
}

Var Tape::leaf(Tensor& param) {
  Node n;
  n.op = OpKind::Leaf;
  n.value = Tensor(param.rows(), param.cols(), std::vector<double>(param.data().begin(), param.data().end()));
  require_finite(n.value, "leaf");
  n.param = &param;
  n.requires_grad = param.requires_grad();
  return push(std::move(n));
}

Var Tape::constant(Tensor value) {
  require_finite(value, "constant");
  Node n;
  n.op = OpKind::Constant;
  n.value = std::move(value);
  return push(std::move(n));
}

double Tape::scalar(Var v) const {
  const auto& t = value(v);
  if (t.size() != 1) raise(ErrorCode::NonScalarLoss, "expected 1x1, got " + shape_str(t));
  return t[0];
}

Var Tape::matmul(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  if (A.cols() != B.rows()) raise(ErrorCode::ShapeMismatch, "matmul " + shape_str(A) + " * " + shape_str(B));
  Tensor C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t k = 0; k < A.cols(); ++k) {
      const double aik = A(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < B.cols(); ++j) C(i, j) += aik * B(k, j);
    }
  }
  require_finite(C, "matmul");
  Node n;
  n.op = OpKind::MatMul;
  n.value = std::move(C);
  n.inputs = {a.id, b.id};
  n.requires_grad = any_requires_grad({a, b});
  return push(std::move(n));
}

Var Tape::matvec(Var m, Var x) {
  const Tensor& M = value(m);
  const Tensor& X = value(x);
  if (!X.is_vector() || X.size() != M.cols()) {
    raise(ErrorCode::ShapeMismatch, "matvec " + shape_str(M) + " * " + shape_str(X));
  }
  Tensor y(M.rows(), 1);
  for (std::size_t i = 0; i < M.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < M.cols(); ++j) s += M(i, j) * X[j];
    y[i] = s;
  }
  require_finite(y, "matvec");
  Node n;
  n.op = OpKind::MatVec;
  n.value = std::move(y);
  n.inputs = {m.id, x.id};
  n.requires_grad = any_requires_grad({m, x});
  return push(std::move(n));
}

Var Tape::sparse_matmul(std::shared_ptr<const CsrMatrix> a, Var b) {
  const Tensor& B = value(b);
  if (a->cols != B.rows()) {
    raise(ErrorCode::ShapeMismatch, "sparse_matmul " + std::to_string(a->rows) + "x" + std::to_string(a->cols) +
                                        " * " + shape_str(B));
  }
  Tensor C(a->rows, B.cols());
  for (std::size_t i = 0; i < a->rows; ++i) {
    for (std::size_t p = a->row_ptr[i]; p < a->row_ptr[i + 1]; ++p) {
      const std::size_t k = a->col_idx[p];
      const double w = a->values[p];
      for (std::size_t j = 0; j < B.cols(); ++j) C(i, j) += w * B(k, j);
    }
  }
  require_finite(C, "sparse_matmul");
  Node n;
  n.op = OpKind::SparseMatMul;
  n.value = std::move(C);
  n.inputs = {b.id};
  n.sparse = std::move(a);
  n.requires_grad = any_requires_grad({b});
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    raise(ErrorCode::ShapeMismatch, "add " + shape_str(A) + " + " + shape_str(B));
  }
  Tensor C = A;
  for (std::size_t i = 0; i < C.size(); ++i) C[i] += B[i];
  require_finite(C, "add");
  Node n;
  n.op = OpKind::Add;
  n.value = std::move(C);
  n.inputs = {a.id, b.id};
  n.requires_grad = any_requires_grad({a, b});
  return push(std::move(n));
}

Var Tape::scale(Var a, double s) {
  Tensor C = value(a);
  for (double& v : C.data()) v *= s;
  require_finite(C, "scale");
  Node n;
  n.op = OpKind::Scale;
  n.value = std::move(C);
  n.inputs = {a.id};
  n.scalar = s;
  n.requires_grad = any_requires_grad({a});
  return push(std::move(n));
}

Var Tape::concat(std::span<const Var> parts) {
  if (parts.empty()) raise(ErrorCode::EmptyInput, "concat of nothing");
  const std::size_t rows = value(parts[0]).rows();
  std::size_t cols = 0;
  for (Var p : parts) {
    if (value(p).rows() != rows) raise(ErrorCode::ShapeMismatch, "concat row counts differ");
    cols += value(p).cols();
  }
  Tensor C(rows, cols);
  std::size_t offset = 0;
  Node n;
  for (Var p : parts) {
    const Tensor& P = value(p);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < P.cols(); ++c) C(r, offset + c) = P(r, c);
    }
    offset += P.cols();
    n.inputs.push_back(p.id);
    n.requires_grad = n.requires_grad || nodes_[p.id].requires_grad;
  }
  n.op = OpKind::Concat;
  n.value = std::move(C);
  return push(std::move(n));
}

Var Tape::stack_rows(std::span<const Var> parts) {
  if (parts.empty()) raise(ErrorCode::EmptyInput, "stack_rows of nothing");
  const std::size_t cols = value(parts[0]).cols();
  std::vector<double> data;
  std::size_t rows = 0;
  Node n;
  for (Var p : parts) {
    const Tensor& P = value(p);
    if (P.cols() != cols) raise(ErrorCode::ShapeMismatch, "stack_rows column counts differ");
    data.insert(data.end(), P.data().begin(), P.data().end());
    rows += P.rows();
    n.inputs.push_back(p.id);
    n.requires_grad = n.requires_grad || nodes_[p.id].requires_grad;
  }
  n.op = OpKind::StackRows;
  n.value = Tensor(rows, cols, std::move(data));
  return push(std::move(n));
}

Var Tape::gather_rows(Var a, std::span<const std::size_t> rows) {
  const Tensor& A = value(a);
  Tensor C(rows.size(), A.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= A.rows()) raise(ErrorCode::ShapeMismatch, "gather row " + std::to_string(rows[k]) + " of " + shape_str(A));
    std::copy_n(A.data().begin() + static_cast<std::ptrdiff_t>(rows[k] * A.cols()), A.cols(),
                C.data().begin() + static_cast<std::ptrdiff_t>(k * A.cols()));
  }
  Node n;
  n.op = OpKind::GatherRows;
  n.value = std::move(C);
  n.inputs = {a.id};
  n.indices.assign(rows.begin(), rows.end());
  n.requires_grad = any_requires_grad({a});
  return push(std::move(n));
}

Var Tape::relu(Var a) {
  Tensor C = value(a);
  for (double& v : C.data()) v = v > 0.0 ? v : 0.0;
  Node n;
  n.op = OpKind::Relu;
  n.value = std::move(C);
  n.inputs = {a.id};
  n.requires_grad = any_requires_grad({a});
  return push(std::move(n));
}

Var Tape::tanh(Var a) {
  Tensor C = value(a);
  for (double& v : C.data()) v = std::tanh(v);
  Node n;
  n.op = OpKind::Tanh;
  n.value = std::move(C);
  n.inputs = {a.id};
  n.requires_grad = any_requires_grad({a});
  return push(std::move(n));
}

Var Tape::log(Var a) {
  Tensor C = value(a);
  for (double& v : C.data()) v = std::log(v);
  require_finite(C, "log");
  Node n;
  n.op = OpKind::Log;
  n.value = std::move(C);
  n.inputs = {a.id};
  n.requires_grad = any_requires_grad({a});
  return push(std::move(n));
}

Var Tape::cosine_similarity(Var u, Var v) {
  const Tensor& U = value(u);
  const Tensor& V = value(v);
  if (!U.is_vector() || !V.is_vector() || U.size() != V.size()) {
    raise(ErrorCode::ShapeMismatch, "cosine " + shape_str(U) + " vs " + shape_str(V));
  }
  const double nu = std::sqrt(dot(U.data(), U.data()));
  const double nv = std::sqrt(dot(V.data(), V.data()));
  double c = 0.0;
  if (nu >= kCosineEps && nv >= kCosineEps) c = dot(U.data(), V.data()) / (nu * nv);
  Node n;
  n.op = OpKind::Cosine;
  n.value = Tensor::scalar(c);
  n.inputs = {u.id, v.id};
  n.requires_grad = any_requires_grad({u, v});
  return push(std::move(n));
}

Var Tape::softmax(Var a) {
  const Tensor& A = value(a);
  if (A.size() == 0) raise(ErrorCode::EmptyInput, "softmax of an empty vector");
  if (!A.is_vector()) raise(ErrorCode::ShapeMismatch, "softmax expects a vector, got " + shape_str(A));
  require_finite(A, "softmax input");
  Tensor C = A;
  const double mx = *std::max_element(C.data().begin(), C.data().end());
  double total = 0.0;
  for (double& v : C.data()) {
    v = std::exp(v - mx);
    total += v;
  }
  for (double& v : C.data()) v /= total;
  Node n;
  n.op = OpKind::Softmax;
  n.value = std::move(C);
  n.inputs = {a.id};
  n.requires_grad = any_requires_grad({a});
  return push(std::move(n));
}

Var Tape::nll(Var log_probs, std::span<const std::size_t> targets) {
  const Tensor& P = value(log_probs);
  if (targets.size() != P.rows()) raise(ErrorCode::ShapeMismatch, "nll target count vs " + shape_str(P));
  double total = 0.0;
  for (std::size_t r = 0; r < P.rows(); ++r) {
    if (targets[r] >= P.cols()) raise(ErrorCode::ShapeMismatch, "nll target out of range");
    total -= P(r, targets[r]);
  }
  Node n;
  n.op = OpKind::Nll;
  n.value = Tensor::scalar(total);
  require_finite(n.value, "nll");
  n.inputs = {log_probs.id};
  n.indices.assign(targets.begin(), targets.end());
  n.requires_grad = any_requires_grad({log_probs});
  return push(std::move(n));
}

Var Tape::sum(Var a) {
  double total = 0.0;
  for (double v : value(a).data()) total += v;
  Node n;
  n.op = OpKind::Sum;
  n.value = Tensor::scalar(total);
  require_finite(n.value, "sum");
  n.inputs = {a.id};
  n.requires_grad = any_requires_grad({a});
  return push(std::move(n));
}

void Tape::backward(Var loss) {
  if (value(loss).size() != 1) raise(ErrorCode::NonScalarLoss, "loss has shape " + shape_str(value(loss)));
  for (auto& node : nodes_) node.grad.assign(node.requires_grad ? node.value.size() : 0, 0.0);
  if (!nodes_[loss.id].requires_grad) return;
  nodes_[loss.id].grad[0] = 1.0;
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (!node.requires_grad) continue;
    propagate(node);
  }
}

void Tape::propagate(Node& node) {
  const auto& g = node.grad;
  auto in_grad = [&](std::size_t k) -> std::vector<double>* {
    Node& in = nodes_[node.inputs[k]];
    return in.requires_grad ? &in.grad : nullptr;
  };
  auto in_value = [&](std::size_t k) -> const Tensor& { return nodes_[node.inputs[k]].value; };

  switch (node.op) {
    case OpKind::Leaf: {
      if (node.param != nullptr && node.param->requires_grad()) {
        auto pg = node.param->grad();
        for (std::size_t i = 0; i < g.size(); ++i) pg[i] += g[i];
      }
      break;
    }
    case OpKind::Constant:
      break;
    case OpKind::MatMul: {
      const Tensor& A = in_value(0);
      const Tensor& B = in_value(1);
      const std::size_t m = A.rows(), inner = A.cols(), p = B.cols();
      if (auto* ga = in_grad(0)) {
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t k = 0; k < inner; ++k) {
            double s = 0.0;
            for (std::size_t j = 0; j < p; ++j) s += g[i * p + j] * B(k, j);
            (*ga)[i * inner + k] += s;
          }
      }
      if (auto* gb = in_grad(1)) {
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t k = 0; k < inner; ++k) {
            const double aik = A(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < p; ++j) (*gb)[k * p + j] += aik * g[i * p + j];
          }
      }
      break;
    }
    case OpKind::MatVec: {
      const Tensor& M = in_value(0);
      const Tensor& X = in_value(1);
      if (auto* gm = in_grad(0)) {
        for (std::size_t i = 0; i < M.rows(); ++i)
          for (std::size_t j = 0; j < M.cols(); ++j) (*gm)[i * M.cols() + j] += g[i] * X[j];
      }
      if (auto* gx = in_grad(1)) {
        for (std::size_t i = 0; i < M.rows(); ++i)
          for (std::size_t j = 0; j < M.cols(); ++j) (*gx)[j] += M(i, j) * g[i];
      }
      break;
    }
    case OpKind::SparseMatMul: {
      if (auto* gb = in_grad(0)) {
        const CsrMatrix& a = *node.sparse;
        const std::size_t p = node.value.cols();
        for (std::size_t i = 0; i < a.rows; ++i)
          for (std::size_t q = a.row_ptr[i]; q < a.row_ptr[i + 1]; ++q) {
            const std::size_t k = a.col_idx[q];
            for (std::size_t j = 0; j < p; ++j) (*gb)[k * p + j] += a.values[q] * g[i * p + j];
          }
      }
      break;
    }
    case OpKind::Add: {
      for (std::size_t k = 0; k < 2; ++k)
        if (auto* gi = in_grad(k))
          for (std::size_t i = 0; i < g.size(); ++i) (*gi)[i] += g[i];
      break;
    }
    case OpKind::Scale: {
      if (auto* gi = in_grad(0))
        for (std::size_t i = 0; i < g.size(); ++i) (*gi)[i] += node.scalar * g[i];
      break;
    }
    case OpKind::Concat: {
      const std::size_t rows = node.value.rows(), cols = node.value.cols();
      std::size_t offset = 0;
      for (std::size_t k = 0; k < node.inputs.size(); ++k) {
        const std::size_t pc = in_value(k).cols();
        if (auto* gi = in_grad(k))
          for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < pc; ++c) (*gi)[r * pc + c] += g[r * cols + offset + c];
        offset += pc;
      }
      break;
    }
    case OpKind::StackRows: {
      std::size_t offset = 0;
      for (std::size_t k = 0; k < node.inputs.size(); ++k) {
        const std::size_t len = in_value(k).size();
        if (auto* gi = in_grad(k))
          for (std::size_t i = 0; i < len; ++i) (*gi)[i] += g[offset + i];
        offset += len;
      }
      break;
    }
    case OpKind::GatherRows: {
      if (auto* gi = in_grad(0)) {
        const std::size_t cols = node.value.cols();
        for (std::size_t k = 0; k < node.indices.size(); ++k)
          for (std::size_t c = 0; c < cols; ++c) (*gi)[node.indices[k] * cols + c] += g[k * cols + c];
      }
      break;
    }
    case OpKind::Relu: {
      if (auto* gi = in_grad(0)) {
        const Tensor& X = in_value(0);
        for (std::size_t i = 0; i < g.size(); ++i)
          if (X[i] > 0.0) (*gi)[i] += g[i];
      }
      break;
    }
    case OpKind::Tanh: {
      if (auto* gi = in_grad(0))
        for (std::size_t i = 0; i < g.size(); ++i) (*gi)[i] += g[i] * (1.0 - node.value[i] * node.value[i]);
      break;
    }
    case OpKind::Log: {
      if (auto* gi = in_grad(0)) {
        const Tensor& X = in_value(0);
        for (std::size_t i = 0; i < g.size(); ++i) (*gi)[i] += g[i] / X[i];
      }
      break;
    }
    case OpKind::Cosine: {
      const Tensor& U = in_value(0);
      const Tensor& V = in_value(1);
      const double nu = std::sqrt(dot(U.data(), U.data()));
      const double nv = std::sqrt(dot(V.data(), V.data()));
      if (nu < kCosineEps || nv < kCosineEps) break;
      const double c = node.value[0];
      if (auto* gu = in_grad(0))
        for (std::size_t i = 0; i < U.size(); ++i) (*gu)[i] += g[0] * (V[i] / (nu * nv) - c * U[i] / (nu * nu));
      if (auto* gv = in_grad(1))
        for (std::size_t i = 0; i < V.size(); ++i) (*gv)[i] += g[0] * (U[i] / (nu * nv) - c * V[i] / (nv * nv));
      break;
    }
    case OpKind::Softmax: {
      if (auto* gi = in_grad(0)) {
        const double gy = dot(g, node.value.data());
        for (std::size_t i = 0; i < g.size(); ++i) (*gi)[i] += node.value[i] * (g[i] - gy);
      }
      break;
    }
    case OpKind::Nll: {
      if (auto* gi = in_grad(0)) {
        const std::size_t cols = in_value(0).cols();
        for (std::size_t r = 0; r < node.indices.size(); ++r) (*gi)[r * cols + node.indices[r]] -= g[0];
      }
      break;
    }
    case OpKind::Sum: {
      if (auto* gi = in_grad(0))
        for (double& v : *gi) v += g[0];
      break;
    }
  }
}

GradCheckReport finite_difference_check(const Objective& f, std::span<Tensor* const> params, double eps,
                                        double tol) {
  if (!(eps >= 1e-7 && eps <= 1e-3)) raise(ErrorCode::ConfigError, "finite-difference step must lie in [1e-7, 1e-3]");

  auto evaluate = [&]() {
    Tape tape;
    return tape.scalar(f(tape));
  };

  const double base = evaluate();
  const double again = evaluate();
  if (base != again) raise(ErrorCode::NonDeterministicFunction, "objective differs between two evaluations");

  std::vector<bool> had_grad;
  for (Tensor* p : params) {
    had_grad.push_back(p->requires_grad());
    p->set_requires_grad(true);
    p->zero_grad();
  }
  {
    Tape tape;
    Var loss = f(tape);
    tape.backward(loss);
  }
  std::vector<std::vector<double>> analytic;
  for (Tensor* p : params) analytic.emplace_back(p->grad().begin(), p->grad().end());

  GradCheckReport report;
  for (std::size_t t = 0; t < params.size(); ++t) {
    Tensor& p = *params[t];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double original = p[i];
      p[i] = original + eps;
      const double up = evaluate();
      p[i] = original - eps;
      const double down = evaluate();
      p[i] = original;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic[t][i];
      const double rel = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
      ++report.entries_checked;
      if (rel > report.max_relative_error || report.entries_checked == 1) {
        report.max_relative_error = rel;
        report.worst_tensor = t;
        report.worst_entry = i;
        report.analytic_at_worst = a;
        report.numeric_at_worst = numeric;
      }
    }
  }
  for (std::size_t t = 0; t < params.size(); ++t) {
    if (!had_grad[t]) params[t]->set_requires_grad(false);
  }
  report.passed = report.max_relative_error < tol;
  return report;
}

}  // namespace hinforge::ad
