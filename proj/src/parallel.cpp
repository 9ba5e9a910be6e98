#include "mric/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace mric {

namespace {

thread_local bool g_inside_pool = false;

class Pool {
  public:
    static Pool& instance() {
        static Pool pool;
        return pool;
    }

    int size() const { return static_cast<int>(workers_.size()) + 1; }

    void run(std::size_t begin, std::size_t end,
             const std::function<void(std::size_t)>& fn) {
        const std::size_t n = end - begin;
        const std::size_t lanes = static_cast<std::size_t>(size());
        if (n == 0) return;
        if (lanes == 1 || n == 1 || g_inside_pool) {
            for (std::size_t i = begin; i < end; ++i) fn(i);
            return;
        }
        {
            std::lock_guard<std::mutex> lk(m_);
            fn_ = &fn;
            begin_ = begin;
            end_ = end;
            pending_ = static_cast<int>(workers_.size());
            ++generation_;
        }
        cv_.notify_all();
        g_inside_pool = true;
        run_lane(0); // caller takes lane 0
        g_inside_pool = false;
        std::unique_lock<std::mutex> lk(m_);
        done_cv_.wait(lk, [&] { return pending_ == 0; });
        fn_ = nullptr;
    }

  private:
    Pool() {
        int n = static_cast<int>(std::thread::hardware_concurrency());
        if (const char* env = std::getenv("MRIC_THREADS")) {
            const int v = std::atoi(env);
            if (v > 0) n = v;
        }
        if (n < 1) n = 1;
        for (int lane = 1; lane < n; ++lane) {
            workers_.emplace_back([this, lane] { worker_loop(lane); });
        }
    }

    ~Pool() {
        {
            std::lock_guard<std::mutex> lk(m_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& t : workers_) t.join();
    }

    void run_lane(int lane) {
        const std::size_t lanes = static_cast<std::size_t>(size());
        const std::size_t n = end_ - begin_;
        const std::size_t chunk = (n + lanes - 1) / lanes;
        const std::size_t lo = begin_ + static_cast<std::size_t>(lane) * chunk;
        const std::size_t hi = lo + chunk < end_ ? lo + chunk : end_;
        for (std::size_t i = lo; i < hi; ++i) (*fn_)(i);
    }

    void worker_loop(int lane) {
        g_inside_pool = true;
        uint64_t seen = 0;
        for (;;) {
            {
                std::unique_lock<std::mutex> lk(m_);
                cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
            }
            run_lane(lane);
            {
                std::lock_guard<std::mutex> lk(m_);
                if (--pending_ == 0) done_cv_.notify_all();
            }
        }
    }

    std::vector<std::thread> workers_;
    std::mutex m_;
    std::condition_variable cv_, done_cv_;
    const std::function<void(std::size_t)>* fn_ = nullptr;
    std::size_t begin_ = 0, end_ = 0;
    uint64_t generation_ = 0;
    int pending_ = 0;
    bool stop_ = false;
};

} // namespace

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn) {
    Pool::instance().run(begin, end, fn);
}

int thread_count() { return Pool::instance().size(); }

} // namespace mric
