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

#include "hinforge/metrics.hpp"

#include <cmath>
#include <map>
#include <set>
#include <string>

#include "hinforge/error.hpp"

namespace hinforge {

F1Scores f1_scores(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    raise(ErrorCode::LengthMismatch, std::to_string(predicted.size()) + " predictions for " +
                                         std::to_string(truth.size()) + " labels");
  }
  if (truth.empty()) return {};
  std::map<int, long> tp, fp, fn;
  std::set<int> classes;
  long total_tp = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    classes.insert(truth[i]);
    classes.insert(predicted[i]);
    if (predicted[i] == truth[i]) {
      ++tp[truth[i]];
      ++total_tp;
    } else {
      ++fp[predicted[i]];
      ++fn[truth[i]];
    }
  }
  // Every error is one FP and one FN, so micro precision == recall == accuracy.
  const double n = static_cast<double>(truth.size());
  F1Scores out;
  out.micro = static_cast<double>(2 * total_tp) / (2.0 * static_cast<double>(total_tp) + 2.0 * (n - static_cast<double>(total_tp)));
  double sum = 0.0;
  for (int c : classes) {
    const double t = static_cast<double>(tp[c]);
    const double denom = 2.0 * t + static_cast<double>(fp[c]) + static_cast<double>(fn[c]);
    sum += denom > 0.0 ? 2.0 * t / denom : 0.0;
  }
  out.macro = sum / static_cast<double>(classes.size());
  return out;
}

double nmi(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    raise(ErrorCode::UniverseMismatch, std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " elements");
  }
  if (a.empty()) raise(ErrorCode::UniverseMismatch, "empty universe");
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  const double n = static_cast<double>(a.size());
  double numer = 0.0;
  for (const auto& [key, m] : joint) numer += m * std::log(m * n / (rows[key.first] * cols[key.second]));
  numer *= -2.0;
  double denom = 0.0;
  for (const auto& [k, m] : rows) denom += m * std::log(m / n);
  for (const auto& [k, m] : cols) denom += m * std::log(m / n);
  if (denom == 0.0) return 1.0;  // both partitions are a single cluster
  return numer / denom;
}

}  // namespace hinforge
