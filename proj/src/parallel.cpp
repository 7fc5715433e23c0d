#include "gprs/parallel.hpp"

namespace gprs {

WorkerPool::WorkerPool(int workers) {
    const int extra = workers > 1 ? workers - 1 : 0;
    threads_.reserve(extra);
    for (int i = 0; i < extra; ++i) threads_.emplace_back([this, i] { loop(static_cast<std::size_t>(i) + 1); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lk(mutex_);
        stop_ = true;
    }
    start_cv_.notify_all();
    for (auto& t : threads_) t.join();
}

void WorkerPool::run(std::size_t n, const std::function<void(std::size_t, std::size_t)>& task) {
    const std::size_t parts = static_cast<std::size_t>(size());
    if (parts == 1) {
        if (n) task(0, n);
        return;
    }
    {
        std::lock_guard lk(mutex_);
        task_ = &task;
        n_ = n;
        pending_ = parts - 1;
        ++generation_;
    }
    start_cv_.notify_all();
    const Block b = block_of(n, parts, 0);
    if (b.end > b.begin) task(b.begin, b.end);
    std::unique_lock lk(mutex_);
    done_cv_.wait(lk, [this] { return pending_ == 0; });
    task_ = nullptr;
}

void WorkerPool::loop(std::size_t index) {
    std::size_t seen = 0;
    for (;;) {
        const std::function<void(std::size_t, std::size_t)>* task = nullptr;
        std::size_t n = 0;
        {
            std::unique_lock lk(mutex_);
            start_cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
            task = task_;
            n = n_;
        }
        const Block b = block_of(n, static_cast<std::size_t>(size()), index);
        if (b.end > b.begin) (*task)(b.begin, b.end);
        {
            std::lock_guard lk(mutex_);
            if (--pending_ == 0) done_cv_.notify_one();
        }
    }
}

}  // namespace gprs
