/*
Copyright 2026 The gbnlearn Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "gbnlearn/error.hpp"

namespace gbnlearn {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NotEnoughEdges: return "NotEnoughEdges";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::StructureMismatch: return "StructureMismatch";
    case ErrorCode::NoParents: return "NoParents";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::BatchTooSmall: return "BatchTooSmall";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::CholeskyFailed: return "CholeskyFailed";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::RankDeficient:
    case ErrorCode::CholeskyFailed:
    case ErrorCode::NonPositiveVariance:
      return true;
    default:
      return false;
  }
}

}  // namespace gbnlearn
