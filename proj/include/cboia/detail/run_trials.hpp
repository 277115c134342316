// SPDX-License-Identifier: Apache-2.0
//
// cboia: codebook-based opportunistic interference alignment simulator
// Copyright (C) 2026 The cboia authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CBOIA_DETAIL_RUN_TRIALS_HPP
#define CBOIA_DETAIL_RUN_TRIALS_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace cboia {

template <class T>
std::vector<T> run_trials(int trials, int workers, const std::function<T(int)>& fn) {
    std::vector<T> results(static_cast<std::size_t>(std::max(0, trials)));
    const int pool = std::clamp(workers, 1, std::max(1, trials));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (int t = next++; t < trials; t = next++) {
            try {
                results[static_cast<std::size_t>(t)] = fn(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = trials;
            }
        }
    };
    if (pool == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(pool));
        for (int w = 0; w < pool; ++w) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

} // namespace cboia

#endif
