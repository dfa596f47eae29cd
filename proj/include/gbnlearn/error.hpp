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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gbnlearn {

enum class ErrorCode {
  InvalidIndex,
  SelfLoop,
  DuplicateEdge,
  CycleDetected,
  InvalidSize,
  InvalidParameter,
  NotEnoughEdges,
  InvalidRange,
  NonPositiveVariance,
  DimensionMismatch,
  StructureMismatch,
  NoParents,
  NotPositiveDefinite,
  RankDeficient,
  BatchTooSmall,
  InsufficientSamples,
  CholeskyFailed,
  InvalidSpec,
  ConfigInvalid,
  EmptyInput,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for failures that come from the numbers rather than from the
/// caller's input (singular systems, failed factorizations).
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix, for callers that add context and rethrow.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace gbnlearn
