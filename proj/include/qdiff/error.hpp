// Copyright 2026 The qdiff Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>

namespace qdiff {

enum class ErrorCode {
    ZeroVector,
    BadLength,
    WireOutOfRange,
    BadSplit,
    ZeroShots,
    BadShape,
    StepOutOfRange,
    NonFiniteLoss,
    BadKind,
    AllZero,
    LengthMismatch,
    BadMagic,
    TruncatedFile,
    CountMismatch,
    ConfigInvalid,
    BadCheckpoint,
    Io,
};

inline const char *to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::ZeroVector:
        return "ZeroVector";
    case ErrorCode::BadLength:
        return "BadLength";
    case ErrorCode::WireOutOfRange:
        return "WireOutOfRange";
    case ErrorCode::BadSplit:
        return "BadSplit";
    case ErrorCode::ZeroShots:
        return "ZeroShots";
    case ErrorCode::BadShape:
        return "BadShape";
    case ErrorCode::StepOutOfRange:
        return "StepOutOfRange";
    case ErrorCode::NonFiniteLoss:
        return "NonFiniteLoss";
    case ErrorCode::BadKind:
        return "BadKind";
    case ErrorCode::AllZero:
        return "AllZero";
    case ErrorCode::LengthMismatch:
        return "LengthMismatch";
    case ErrorCode::BadMagic:
        return "BadMagic";
    case ErrorCode::TruncatedFile:
        return "TruncatedFile";
    case ErrorCode::CountMismatch:
        return "CountMismatch";
    case ErrorCode::ConfigInvalid:
        return "ConfigInvalid";
    case ErrorCode::BadCheckpoint:
        return "BadCheckpoint";
    case ErrorCode::Io:
        return "Io";
    }
    return "Unknown";
}

/**
 * @brief Exception type thrown by every qdiff routine. The code identifies
 * the failure class; the message carries the details.
 */
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) {
    throw Error(code, what);
}

} // namespace qdiff
