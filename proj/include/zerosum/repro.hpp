#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace zerosum {

struct ReproOptions {
    std::uint64_t seed = 42;
    int jobs = 1;
};

struct CriterionResult {
    std::string id;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;
    /// Wall-clock allowance in seconds.
    double limit = 0;
};

/// Suites: cyclic, d6, main-theorem, dgm, all.
std::vector<std::string> suite_names();
std::vector<std::string> suite_criteria(std::string_view suite);

/// Ids 1..7, 9, 10, plus the scoped parts 1-cyclic, 1-d6, 10-cyclic, 10-d6
/// and 4-as-written (the n2 = 7 check on s = 13).
CriterionResult run_criterion(std::string_view id, const ReproOptions & options);
std::vector<CriterionResult> run_suite(std::string_view suite, const ReproOptions & options);

/// One line without timing: `PASS 4 title: detail`, or key=value records.
std::string format_result(const CriterionResult & r, bool records);

/// Runs fn(i) for i in [0, count) over `jobs` threads with stride sharding.
template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn && fn);

} // namespace zerosum

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

template <class Fn>
void zerosum::parallel_for(std::size_t count, int jobs, Fn && fn)
{
    const std::size_t workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex lock;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers)
                    fn(i);
            } catch (...) {
                std::lock_guard guard(lock);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    for (auto & t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}
