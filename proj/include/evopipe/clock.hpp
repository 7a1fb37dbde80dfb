#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>

namespace evopipe {

// Time source for a run. Wall mode reports real elapsed seconds; the
// deterministic mode derives time from logical training-cost units
// (1 unit = 0.1 ms) charged per atomic-model fit, so generation-capped runs
// produce byte-identical traces on every re-run.
enum class ClockMode { Wall, Deterministic };

inline constexpr double kSecondsPerCostUnit = 1e-4;

class RunClock {
public:
    explicit RunClock(ClockMode mode) : mode_(mode), start_(std::chrono::steady_clock::now()) {}

    ClockMode mode() const { return mode_; }

    void charge(long long units) { ticks_.fetch_add(units, std::memory_order_relaxed); }

    double elapsed() const {
        if (mode_ == ClockMode::Deterministic) {
            return static_cast<double>(ticks_.load(std::memory_order_relaxed)) * kSecondsPerCostUnit;
        }
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    // Per-pipeline fit time under this clock's convention.
    double fit_seconds(double wall_seconds, long long cost_units) const {
        if (mode_ == ClockMode::Deterministic) {
            return static_cast<double>(cost_units) * kSecondsPerCostUnit;
        }
        return wall_seconds;
    }

private:
    ClockMode mode_;
    std::chrono::steady_clock::time_point start_;
    std::atomic<long long> ticks_{0};
};

}  // namespace evopipe
