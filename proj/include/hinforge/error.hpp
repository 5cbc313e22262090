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

#include <stdexcept>
#include <string>
#include <string_view>

namespace hinforge {

enum class ErrorCode {
  // hin-graph
  DanglingEdge,
  DuplicateNodeId,
  TypeMismatch,
  UnknownType,
  WrongStartType,
  InvalidMetaPath,
  ParseError,
  // autodiff
  ShapeMismatch,
  NonFiniteValue,
  EmptyInput,
  NonScalarLoss,
  NonDeterministicFunction,
  // model
  EmptyNeighborhood,
  UnlabeledNodeInBatch,
  EmptyTrainingSet,
  ClassMissingFromTrainingSet,
  // fed
  UnknownWorker,
  MissingWorkerUpdate,
  InvalidPartition,
  // influence
  EmptyGraph,
  KTooLarge,
  // teams / metrics
  EmptyAfterFilter,
  MissingEmbedding,
  MissingInfluence,
  UniverseMismatch,
  LengthMismatch,
  // workbench
  InfeasibleConfig,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// All library failures surface as this exception; `code()` identifies the
/// contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& what);

}  // namespace hinforge
