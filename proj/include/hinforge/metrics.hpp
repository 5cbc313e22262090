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

#include <span>
#include <vector>

namespace hinforge {

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
};

/// Single-label multiclass F1. Classes absent from both vectors are left out
/// of the macro average.
F1Scores f1_scores(std::span<const int> predicted, std::span<const int> truth);

/// Normalized mutual information between two flat clusterings of the same
/// universe, given as one cluster id per element. Natural log; 0 log 0 = 0.
/// Two single-cluster partitions score 1.
double nmi(std::span<const int> a, std::span<const int> b);

}  // namespace hinforge
