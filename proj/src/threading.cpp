#include "utb/threading.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace utb {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int num_tasks, int num_threads, const std::function<void(int)>& fn) {
    if (num_tasks <= 0) return;
    num_threads = std::min(resolve_threads(num_threads), num_tasks);
    if (num_threads <= 1) {
        for (int t = 0; t < num_tasks; ++t) fn(t);
        return;
    }

    std::vector<std::thread> workers;
    workers.reserve(num_threads);
    std::vector<std::exception_ptr> errors(num_threads);
    const int chunk = (num_tasks + num_threads - 1) / num_threads;
    for (int w = 0; w < num_threads; ++w) {
        const int begin = w * chunk;
        const int end = std::min(num_tasks, begin + chunk);
        workers.emplace_back([&, w, begin, end] {
            try {
                for (int t = begin; t < end; ++t) fn(t);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace utb
