// SPDX-License-Identifier: Apache-2.0
//
// nfchan - near-field MIMO channel modelling with rough-surface reflections
// Copyright (C) 2026 The nfchan Authors
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

#ifndef NFCHAN_PARALLEL_HPP
#define NFCHAN_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nfchan
{
    // Runs fn(i) for i in [0, n) on up to "threads" workers (0 = hardware concurrency).
    // Work is split into contiguous chunks. Callers write results to index-addressed slots,
    // so the outcome does not depend on the worker count. The first exception is rethrown.
    template <typename Fn>
    void parallel_for(std::size_t n, unsigned threads, Fn &&fn)
    {
        if (threads == 0)
            threads = std::max(1u, std::thread::hardware_concurrency());
        const std::size_t workers = std::min<std::size_t>(threads, n);
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }

        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
        {
            const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
            pool.emplace_back([&, lo, hi]
                              {
                try
                {
                    for (std::size_t i = lo; i < hi; ++i)
                        fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                } });
        }
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }

    // Pairwise (tree) summation in a fixed order
    template <typename T>
    T pairwise_sum(const T *data, std::size_t n)
    {
        if (n <= 8)
        {
            T acc{};
            for (std::size_t i = 0; i < n; ++i)
                acc += data[i];
            return acc;
        }
        const std::size_t half = n / 2;
        return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
    }
}

#endif
