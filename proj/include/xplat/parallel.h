// Copyright 2026 The xplat Authors
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

#ifndef XPLAT_PARALLEL_H
#define XPLAT_PARALLEL_H

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

namespace xplat {

/// Sets the worker count used by parallel_for. Values < 1 reset to the
/// OpenMP default.
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, n) across the worker pool. Each index must write
/// only to its own output slot. The exception thrown by the lowest failing
/// index is rethrown after all workers finish.
template <typename Body>
void parallel_for(size_t n, Body &&body) {
    std::vector<std::exception_ptr> errors(n);
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (long long i = 0; i < count; i++) {
        try {
            body(static_cast<size_t>(i));
        } catch (...) {
            errors[static_cast<size_t>(i)] = std::current_exception();
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

/// Pairwise (tree) summation in a fixed order, so the result depends only on
/// the values and never on how they were produced.
double pairwise_sum(std::span<const double> values);

}  // namespace xplat

#endif
