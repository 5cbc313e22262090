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

#include "hinforge/error.hpp"

namespace hinforge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DanglingEdge: return "DanglingEdge";
    case ErrorCode::DuplicateNodeId: return "DuplicateNodeId";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::WrongStartType: return "WrongStartType";
    case ErrorCode::InvalidMetaPath: return "InvalidMetaPath";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonScalarLoss: return "NonScalarLoss";
    case ErrorCode::NonDeterministicFunction: return "NonDeterministicFunction";
    case ErrorCode::EmptyNeighborhood: return "EmptyNeighborhood";
    case ErrorCode::UnlabeledNodeInBatch: return "UnlabeledNodeInBatch";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::ClassMissingFromTrainingSet: return "ClassMissingFromTrainingSet";
    case ErrorCode::UnknownWorker: return "UnknownWorker";
    case ErrorCode::MissingWorkerUpdate: return "MissingWorkerUpdate";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::EmptyAfterFilter: return "EmptyAfterFilter";
    case ErrorCode::MissingEmbedding: return "MissingEmbedding";
    case ErrorCode::MissingInfluence: return "MissingInfluence";
    case ErrorCode::UniverseMismatch: return "UniverseMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InfeasibleConfig: return "InfeasibleConfig";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace hinforge
