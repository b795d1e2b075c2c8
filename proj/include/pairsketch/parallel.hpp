// Copyright 2026 The pairsketch Authors
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

#ifndef PAIRSKETCH_PARALLEL_HPP
#define PAIRSKETCH_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pairsketch {

/// 0 means one worker per hardware thread.
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) {
        return requested;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// out[i] = f(i) for i < count on a bounded pool. Each trial derives its own
/// seed from i, so results do not depend on scheduling.
template <class T, class F>
std::vector<T> run_trials(std::uint64_t count, unsigned threads, F &&f) {
    std::vector<T> out(count);
    threads = std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(count, 1));
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) {
            out[i] = f(i);
        }
        return out;
    }
    constexpr std::uint64_t kChunk = 64;
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        try {
            for (;;) {
                std::uint64_t start = next.fetch_add(kChunk);
                if (start >= count) {
                    return;
                }
                std::uint64_t stop = std::min(count, start + kChunk);
                for (std::uint64_t i = start; i < stop; ++i) {
                    out[i] = f(i);
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) {
                error = std::current_exception();
            }
            next.store(count);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return out;
}

}  // namespace pairsketch

#endif
