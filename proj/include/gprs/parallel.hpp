#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gprs {

/// Contiguous block [begin, end) of `n` items assigned to `part` of `parts`.
struct Block {
    std::size_t begin = 0, end = 0;
};

inline Block block_of(std::size_t n, std::size_t parts, std::size_t part) {
    const std::size_t base = n / parts, extra = n % parts;
    const std::size_t begin = part * base + (part < extra ? part : extra);
    return {begin, begin + base + (part < extra ? 1 : 0)};
}

/// Runs fn(begin, end) over a static partition of [0, n). The partition only
/// decides who computes what; callers keep results independent of it.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    const std::size_t parts = workers > 1 ? std::min<std::size_t>(static_cast<std::size_t>(workers), n) : 1;
    if (parts <= 1) {
        if (n) fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(parts - 1);
    for (std::size_t p = 1; p < parts; ++p) {
        const Block b = block_of(n, parts, p);
        threads.emplace_back([&fn, b] { fn(b.begin, b.end); });
    }
    const Block b0 = block_of(n, parts, 0);
    fn(b0.begin, b0.end);
    for (auto& t : threads) t.join();
}

/// Persistent pool for per-time-step work: run() blocks until every worker has
/// executed the task on its block.
class WorkerPool {
public:
    explicit WorkerPool(int workers);
    ~WorkerPool();
    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    int size() const { return static_cast<int>(threads_.size()) + 1; }
    void run(std::size_t n, const std::function<void(std::size_t, std::size_t)>& task);

private:
    void loop(std::size_t index);

    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable start_cv_, done_cv_;
    const std::function<void(std::size_t, std::size_t)>* task_ = nullptr;
    std::size_t n_ = 0;
    std::size_t generation_ = 0;
    std::size_t pending_ = 0;
    bool stop_ = false;
};

}  // namespace gprs
