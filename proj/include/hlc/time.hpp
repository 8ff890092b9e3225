/*
 * Copyright 2026 The Highlight Curator Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <chrono>
#include <cstdint>

namespace hlc {

// Offset from the start of a broadcast stream. Millisecond resolution is
// fine enough for 1 fps frames and 6 s audio windows alike.
using StreamTime = std::chrono::duration<std::int64_t, std::milli>;
using Millis = StreamTime;

inline constexpr StreamTime kAudioWindow{6000};
inline constexpr StreamTime kFrameInterval{1000};

// Closed-interval intersection test: touching endpoints count as overlap.
constexpr bool intervals_intersect(StreamTime a0, StreamTime a1, StreamTime b0,
                                   StreamTime b1) {
  return a0 <= b1 && b0 <= a1;
}

}  // namespace hlc
