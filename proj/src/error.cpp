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

#include "sem/error.hpp"

namespace sem {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kInvalidDuration: return "InvalidDuration";
    case ErrorCode::kLengthTooSmall: return "LengthTooSmall";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kFrameTooLong: return "FrameTooLong";
    case ErrorCode::kTooManyChannels: return "TooManyChannels";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kSampleRateMismatch: return "SampleRateMismatch";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonPositivePeak: return "NonPositivePeak";
    case ErrorCode::kAllMaskedSignal: return "AllMaskedSignal";
    case ErrorCode::kInvalidRate: return "InvalidRate";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace sem
