/*
 * Copyright 2026 rgbt-toolkit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef RGBT_CORE_COMMON_HPP
#define RGBT_CORE_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rgbt {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr int kManifestSchemaVersion = 1;
inline constexpr int kEmbeddingFileVersion = 1;
inline constexpr int kSummarySchemaVersion = 1;

enum class ErrorCode {
  InvalidArgument,  // bad parameters, failed validation, schema violations
  Io,               // file cannot be read/written
  Parse,            // malformed file contents
  Domain,           // value outside an operation's mathematical domain
  Unsupported,      // e.g. projecting through a distorted model
  Numeric,          // divergence, undefined result
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

// All raster math rounds half away from zero so that two implementations
// of the same formula are bit-comparable.
inline int round_half_away(double v) { return static_cast<int>(std::llround(v)); }

inline std::uint8_t round_to_u8(double v) {
  long r = std::lround(v);
  if (r < 0) r = 0;
  if (r > 255) r = 255;
  return static_cast<std::uint8_t>(r);
}

}  // namespace rgbt

#endif
