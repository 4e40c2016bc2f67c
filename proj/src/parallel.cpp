#include "gbe/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace gbe {

unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GBELAB_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
    workers = resolve_workers(workers);
    if (count == 0) return;
    if (workers <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    if (workers > count) workers = static_cast<unsigned>(count);

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count || failed.load(std::memory_order_relaxed)) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

double pairwise_sum_range(const double* xs, std::size_t n) {
    if (n <= 8) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) s += xs[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum_range(xs, half) + pairwise_sum_range(xs + half, n - half);
}

} // namespace

double pairwise_sum(std::span<const double> xs) { return pairwise_sum_range(xs.data(), xs.size()); }

double pairwise_mean(std::span<const double> xs) {
    if (xs.empty()) return 0;
    return pairwise_sum(xs) / static_cast<double>(xs.size());
}

CentralMoments central_moments(std::span<const double> xs, double center) {
    CentralMoments out;
    if (xs.empty()) return out;
    std::vector<double> d2(xs.size()), d3(xs.size()), d4(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double d = xs[i] - center;
        d2[i] = d * d;
        d3[i] = d2[i] * d;
        d4[i] = d2[i] * d2[i];
    }
    double n = static_cast<double>(xs.size());
    out.m2 = pairwise_sum(d2) / n;
    out.m3 = pairwise_sum(d3) / n;
    out.m4 = pairwise_sum(d4) / n;
    return out;
}

} // namespace gbe
