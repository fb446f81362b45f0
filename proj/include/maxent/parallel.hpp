#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace maxent {

/// Serial runs are the reference path; parallel runs must reproduce them bit for bit.
enum class Execution { serial, parallel };

/// Cap the OpenMP worker count (0 = runtime default). No-op without OpenMP.
void set_worker_count(int workers) noexcept;
int worker_count() noexcept;

/// Apply fn(i) for i in [0, count). Work items must be independent; results
/// are expected to be written to slots indexed by i. The first exception
/// thrown by any item is rethrown after the loop.
template <class Fn>
void for_each_index(Execution exec, std::size_t count, Fn&& fn) {
    if (exec == Execution::serial || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto total = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < total; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace maxent
