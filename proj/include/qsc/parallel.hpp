// Copyright 2026 The qsc Authors
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

#ifndef QSC_PARALLEL_HPP
#define QSC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace qsc {

/// Worker cap for parallel_for. Defaults to $QSC_THREADS, else the hardware
/// concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t n);

/// Calls body(i) for i in [0, n). Each index must only write state owned by
/// that index. Nested calls run serially on the calling thread. The first
/// exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qsc

#endif  // QSC_PARALLEL_HPP
