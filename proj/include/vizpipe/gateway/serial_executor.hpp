#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <mutex>
#include <thread>
#include <type_traits>

namespace vizpipe {

/// Runs submitted tasks one at a time, in submission order, on a dedicated
/// thread. Calls made from that thread run inline instead of deadlocking.
class SerialExecutor {
public:
    SerialExecutor() : worker_([this] { loop(); }) {}

    ~SerialExecutor() {
        {
            std::lock_guard lock(mutex_);
            stopping_ = true;
        }
        cv_.notify_one();
        worker_.join();
    }

    SerialExecutor(const SerialExecutor&) = delete;
    SerialExecutor& operator=(const SerialExecutor&) = delete;

    template <typename F>
    auto submit(F&& f) -> std::future<std::invoke_result_t<F&>> {
        using R = std::invoke_result_t<F&>;
        auto task = std::make_shared<std::packaged_task<R()>>(std::forward<F>(f));
        auto result = task->get_future();
        if (std::this_thread::get_id() == worker_.get_id()) {
            (*task)();
            return result;
        }
        {
            std::lock_guard lock(mutex_);
            queue_.emplace_back([task] { (*task)(); });
        }
        cv_.notify_one();
        return result;
    }

    /// Submits and waits; exceptions from `f` propagate to the caller.
    template <typename F>
    auto run(F&& f) -> std::invoke_result_t<F&> {
        return submit(std::forward<F>(f)).get();
    }

private:
    void loop() {
        for (;;) {
            std::function<void()> job;
            {
                std::unique_lock lock(mutex_);
                cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
                if (queue_.empty()) return;
                job = std::move(queue_.front());
                queue_.pop_front();
            }
            job();
        }
    }

    std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<std::function<void()>> queue_;
    bool stopping_ = false;
    std::thread worker_;
};

} // namespace vizpipe
