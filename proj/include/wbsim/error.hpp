// Copyright 2026 The wbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WBSIM_ERROR_HPP
#define WBSIM_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace wbsim {

/// Every failure the library reports carries one of these codes.
enum class Errc {
  // frame codec
  Truncated,
  UnknownKind,
  NonUnicastTarget,
  BadSsid,
  BadChannel,
  BadAddress,
  // task codec
  Malformed,
  // medium
  RadioOff,
  UnknownNode,
  // handler
  UnknownTarget,
  NoTarget,
  // scenario / outputs
  ParseError,
  ValidationError,
  Io,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::Truncated: return "Truncated";
    case Errc::UnknownKind: return "UnknownKind";
    case Errc::NonUnicastTarget: return "NonUnicastTarget";
    case Errc::BadSsid: return "BadSsid";
    case Errc::BadChannel: return "BadChannel";
    case Errc::BadAddress: return "BadAddress";
    case Errc::Malformed: return "Malformed";
    case Errc::RadioOff: return "RadioOff";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::UnknownTarget: return "UnknownTarget";
    case Errc::NoTarget: return "NoTarget";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace wbsim

#endif  // WBSIM_ERROR_HPP
