//
// Copyright 2026 The EDDA Toolkit Authors
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
//

// UTF-8 helpers shared by the library sources. Not installed.

#ifndef EDDA_SRC_UTF8_H_
#define EDDA_SRC_UTF8_H_

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace edda::internal {

struct CodePoint {
  size_t begin;
  size_t end;
  UChar32 value;  // negative for an invalid byte sequence
};

inline std::vector<CodePoint> Decode(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t begin = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back({static_cast<size_t>(begin), static_cast<size_t>(i), c});
  }
  return out;
}

inline void AppendCodePoint(std::string& out, UChar32 c) {
  char buffer[U8_MAX_LENGTH];
  int32_t n = 0;
  U8_APPEND_UNSAFE(reinterpret_cast<uint8_t*>(buffer), n, c);
  out.append(buffer, static_cast<size_t>(n));
}

// Applies `map` to every valid code point; invalid bytes pass through.
template <typename Map>
std::string MapCodePoints(std::string_view text, Map map) {
  std::string out;
  out.reserve(text.size());
  for (const CodePoint& cp : Decode(text)) {
    if (cp.value < 0) {
      out.append(text.substr(cp.begin, cp.end - cp.begin));
    } else {
      AppendCodePoint(out, map(cp.value));
    }
  }
  return out;
}

}  // namespace edda::internal

#endif  // EDDA_SRC_UTF8_H_
