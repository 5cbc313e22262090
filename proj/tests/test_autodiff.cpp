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

#include <gtest/gtest.h>

#include <cmath>

#include "hinforge/autodiff.hpp"
#include "hinforge/error.hpp"
#include "hinforge/rng.hpp"

using namespace hinforge;
using namespace hinforge::ad;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::ConfigError;
}

Tensor random_tensor(std::size_t r, std::size_t c, Rng& rng, double scale = 1.0) {
  Tensor t(r, c);
  for (auto& v : t.data()) v = uniform(rng, -scale, scale);
  return t;
}

}  // namespace

TEST(Ops, Concat) {
  Tape t;
  const auto v = t.concat({t.constant(Tensor::row_vector({1, 2})), t.constant(Tensor::row_vector({3}))});
  EXPECT_EQ(t.value(v), Tensor::row_vector({1, 2, 3}));
}

TEST(Ops, CosineOfSelfIsOne) {
  Rng rng = make_rng(1, "t");
  Tape t;
  for (int k = 0; k < 20; ++k) {
    const auto u = t.constant(random_tensor(1, 7, rng));
    EXPECT_NEAR(t.scalar(t.cosine_similarity(u, u)), 1.0, 1e-12);
  }
}

TEST(Ops, CosineScaleInvariant) {
  Rng rng = make_rng(2, "t");
  Tape t;
  for (int k = 0; k < 50; ++k) {
    const auto u = random_tensor(1, 5, rng), v = random_tensor(1, 5, rng);
    const double a = uniform(rng, 0.01, 100), b = uniform(rng, 0.01, 100);
    const double base = t.scalar(t.cosine_similarity(t.constant(u), t.constant(v)));
    const double scaled = t.scalar(t.cosine_similarity(t.scale(t.constant(u), a), t.scale(t.constant(v), b)));
    EXPECT_NEAR(base, scaled, 1e-9);
  }
}

TEST(Ops, CosineZeroNormIsZero) {
  Tape t;
  Tensor u = Tensor::row_vector({0, 0});
  u.set_requires_grad(true);
  const auto c = t.cosine_similarity(t.leaf(u), t.constant(Tensor::row_vector({1, 2})));
  EXPECT_EQ(t.scalar(c), 0.0);
  t.backward(c);
  EXPECT_EQ(u.grad()[0], 0.0);
  EXPECT_EQ(u.grad()[1], 0.0);
}

TEST(Ops, SoftmaxHandValues) {
  Tape t;
  const auto s = t.value(t.softmax(t.constant(Tensor::row_vector({0, std::log(2.0)}))));
  EXPECT_NEAR(s[0], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(s[1], 2.0 / 3.0, 1e-12);
  const auto u = t.value(t.softmax(t.constant(Tensor::row_vector({4.2, 4.2, 4.2}))));
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(u[k], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(t.value(t.softmax(t.constant(Tensor::row_vector({-7.5}))))[0], 1.0);
  const auto big = t.value(t.softmax(t.constant(Tensor::row_vector({1000, 0}))));
  EXPECT_NEAR(big[0], 1.0, 1e-15);
  EXPECT_GE(big[1], 0.0);
  EXPECT_FALSE(std::isnan(big[1]));
}

TEST(Ops, SoftmaxEmpty) {
  Tape t;
  EXPECT_EQ(code_of([&] { t.softmax(t.constant(Tensor(1, 0))); }), ErrorCode::EmptyInput);
}

TEST(Ops, SoftmaxPropertyExtremeMagnitudes) {
  Rng rng = make_rng(3, "t");
  Tape t;
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = 1 + uniform_index(rng, 12);
    const double scale = std::pow(10.0, uniform(rng, -3, 300));
    const auto s = t.value(t.softmax(t.constant(random_tensor(1, n, rng, scale))));
    double total = 0.0;
    for (double v : s.data()) {
      EXPECT_FALSE(std::isnan(v));
      EXPECT_GE(v, 0.0);
      total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(Ops, ShapeMismatch) {
  Tape t;
  const auto a = t.constant(Tensor(2, 3)), b = t.constant(Tensor(2, 3));
  EXPECT_EQ(code_of([&] { t.matmul(a, b); }), ErrorCode::ShapeMismatch);
  EXPECT_EQ(code_of([&] { t.add(a, t.constant(Tensor(3, 2))); }), ErrorCode::ShapeMismatch);
}

TEST(Ops, NonFiniteIsAnError) {
  Tape t;
  EXPECT_EQ(code_of([&] { t.log(t.constant(Tensor::row_vector({0.0}))); }), ErrorCode::NonFiniteValue);
  EXPECT_EQ(code_of([&] { t.constant(Tensor::row_vector({std::nan("")})); }), ErrorCode::NonFiniteValue);
}

TEST(Backward, SumOfMatmulGivesBroadcastInput) {
  Tensor W(3, 2, std::vector<double>{1, 2, 3, 4, 5, 6});
  W.set_requires_grad(true);
  Tape t;
  const auto x = t.constant(Tensor::row_vector({0.5, -1, 2}));
  t.backward(t.sum(t.matmul(x, t.leaf(W))));
  const double expected[3] = {0.5, -1, 2};
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 2; ++c) EXPECT_DOUBLE_EQ(W.grad()[r * 2 + c], expected[r]);
  }
}

TEST(Backward, IndependentParameterHasZeroGrad) {
  Tensor W(2, 2, 1.0), V(1, 2, 3.0);
  W.set_requires_grad(true);
  V.set_requires_grad(true);
  Tape t;
  t.leaf(W);
  t.backward(t.sum(t.leaf(V)));
  for (double g : W.grad()) EXPECT_EQ(g, 0.0);
}

TEST(Backward, CosineGradientOrthogonalToInput) {
  Tensor u = Tensor::row_vector({1, 0, 0});
  u.set_requires_grad(true);
  Tape t;
  const auto c = t.cosine_similarity(t.leaf(u), t.constant(Tensor::row_vector({1, 0, 0})));
  t.backward(c);
  EXPECT_NEAR(u.grad()[0], 0.0, 1e-15);

  // Same at a generic point against a detached copy of itself.
  Tensor w = Tensor::row_vector({0.3, -1.2, 2.0});
  w.set_requires_grad(true);
  Tape t2;
  t2.backward(t2.cosine_similarity(t2.leaf(w), t2.constant(Tensor::row_vector({0.3, -1.2, 2.0}))));
  double dot = 0.0;
  for (std::size_t k = 0; k < 3; ++k) dot += w.grad()[k] * w[k];
  EXPECT_NEAR(dot, 0.0, 1e-12);
}

TEST(Backward, TwiceAccumulates) {
  Rng rng = make_rng(4, "t");
  Tensor W = random_tensor(3, 3, rng);
  W.set_requires_grad(true);
  Tape t;
  const auto loss = t.sum(t.tanh(t.matmul(t.constant(random_tensor(1, 3, rng)), t.leaf(W))));
  t.backward(loss);
  const std::vector<double> once(W.grad().begin(), W.grad().end());
  t.backward(loss);
  for (std::size_t k = 0; k < once.size(); ++k) EXPECT_DOUBLE_EQ(W.grad()[k], 2.0 * once[k]);
}

TEST(Backward, NonScalarLoss) {
  Tensor W(2, 2, 1.0);
  W.set_requires_grad(true);
  Tape t;
  const auto v = t.leaf(W);
  EXPECT_EQ(code_of([&] { t.backward(v); }), ErrorCode::NonScalarLoss);
}

TEST(GradCheck, Quadratic) {
  Tensor theta = Tensor::scalar(3.0);
  std::vector<Tensor*> params{&theta};
  // f = theta^2 via a 1x1 matmul
  const auto report = finite_difference_check(
      [&](Tape& t) {
        const auto x = t.leaf(theta);
        return t.matmul(x, x);
      },
      params, 1e-5, 1e-6);
  EXPECT_NEAR(report.analytic_at_worst, 6.0, 1e-12);
  EXPECT_NEAR(report.numeric_at_worst, 6.0, 1e-8);
  EXPECT_TRUE(report.passed);
}

TEST(GradCheck, ConstantFunction) {
  Tensor theta(2, 2, 1.0);
  std::vector<Tensor*> params{&theta};
  const auto report = finite_difference_check(
      [&](Tape& t) {
        t.leaf(theta);
        return t.constant(Tensor::scalar(2.5));
      },
      params, 1e-5, 1e-6);
  EXPECT_EQ(report.max_relative_error, 0.0);
  EXPECT_TRUE(report.passed);
}

TEST(GradCheck, AllOpsComposite) {
  Rng rng = make_rng(5, "t");
  Tensor A = random_tensor(4, 3, rng), B = random_tensor(3, 3, rng), v = random_tensor(1, 3, rng);
  auto csr = std::make_shared<CsrMatrix>();
  csr->rows = 2;
  csr->cols = 4;
  csr->row_ptr = {0, 2, 3};
  csr->col_idx = {0, 3, 1};
  csr->values = {0.5, 0.5, 1.0};
  std::vector<Tensor*> params{&A, &B, &v};
  const std::vector<std::size_t> targets{1, 0};
  const auto report = finite_difference_check(
      [&](Tape& t) {
        const auto a = t.leaf(A), b = t.leaf(B), x = t.leaf(v);
        const auto projected = t.sparse_matmul(csr, a);             // 2 x 3
        const auto h = t.relu(t.matmul(projected, b));              // 2 x 3
        const auto r0 = t.row(h, 0), r1 = t.row(projected, 1);
        const auto cos = t.cosine_similarity(r0, t.add(r1, x));
        const auto cat = t.concat({t.tanh(r0), t.scale(cos, 2.0)});  // 1 x 4
        const auto p0 = t.log(t.softmax(cat));
        const auto p1 = t.log(t.softmax(t.matvec(b, x)));  // 3 x 1
        const auto row1 = t.concat({t.row(p1, 0), t.row(p1, 1), t.row(p1, 2), t.constant(Tensor::scalar(-1.0))});
        const auto probs = t.stack_rows(std::vector<Var>{p0, row1});
        return t.add(t.nll(probs, targets), t.sum(t.scale(x, 0.1)));
      },
      params, 1e-6, 1e-6);
  EXPECT_TRUE(report.passed) << report.max_relative_error;
}

TEST(GradCheck, EpsilonRange) {
  Tensor theta = Tensor::scalar(1.0);
  std::vector<Tensor*> params{&theta};
  auto f = [&](Tape& t) { return t.sum(t.leaf(theta)); };
  EXPECT_EQ(code_of([&] { finite_difference_check(f, params, 1e-2, 1e-4); }), ErrorCode::ConfigError);
}

TEST(GradCheck, DetectsNonDeterminism) {
  Tensor theta = Tensor::scalar(1.0);
  std::vector<Tensor*> params{&theta};
  int calls = 0;
  auto f = [&](Tape& t) { return t.add(t.sum(t.leaf(theta)), t.constant(Tensor::scalar(++calls))); };
  EXPECT_EQ(code_of([&] { finite_difference_check(f, params, 1e-5, 1e-4); }), ErrorCode::NonDeterministicFunction);
}
