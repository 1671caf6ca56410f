// Copyright 2026  The sem-augment Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SEM_ERROR_HPP_
#define SEM_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sem {

enum class ErrorCode {
  kUnsupportedFormat,
  kMalformedHeader,
  kEmptyAudio,
  kInvalidDuration,
  kLengthTooSmall,
  kTooShort,
  kFrameTooLong,
  kTooManyChannels,
  kInvalidConfig,
  kSampleRateMismatch,
  kEmptyCorpus,
  kEmptyMatrix,
  kShapeMismatch,
  kNonPositivePeak,
  kAllMaskedSignal,
  kInvalidRate,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sem

#endif  // SEM_ERROR_HPP_
