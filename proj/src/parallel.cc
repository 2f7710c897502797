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

#include "xplat/parallel.h"

#include <omp.h>

namespace xplat {

namespace {
int g_threads = 0;
}

void set_thread_count(int threads) {
    g_threads = threads < 1 ? 0 : threads;
}

int thread_count() {
    return g_threads > 0 ? g_threads : omp_get_max_threads();
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0;
        for (double v : values) {
            s += v;
        }
        return s;
    }
    size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace xplat
