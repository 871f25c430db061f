#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace msym {

inline std::atomic<int>& default_jobs_ref() {
    static std::atomic<int> jobs{0};
    return jobs;
}

inline void set_default_jobs(int jobs) { default_jobs_ref() = jobs; }

inline int resolve_jobs(int jobs) {
    if (jobs <= 0) jobs = default_jobs_ref();
    if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return jobs;
}

// fn(i) for i in [0, n); indices are handed out dynamically. The first exception is rethrown.
template <class F>
void parallel_for(long n, int jobs, F&& fn) {
    jobs = std::min<long>(resolve_jobs(jobs), std::max(1L, n));
    if (jobs <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            long i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                next = n;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace msym
