// Copyright 2026 The mfchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>

namespace mfc {

/// Worker count: MFC_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads. Each
/// index runs exactly once; results must be written to per-index slots. If
/// any body throws, the exception of the lowest failing index is rethrown
/// after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace mfc
