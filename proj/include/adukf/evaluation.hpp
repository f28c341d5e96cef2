#pragma once

#include <chrono>
#include <span>
#include <utility>
#include <vector>

#include "adukf/types.hpp"

namespace adukf::eval {

/// sum (est - truth)^2 / sum truth^2. Note: no square root is taken, the
/// ratio of error energy to signal energy is returned as is.
/// Throws ZeroNormalizer if the truth series has zero energy.
double nrmse(std::span<const double> est, std::span<const double> truth);

/// Per-state nrmse over a trajectory of state vectors, one entry per state.
Vector per_state_nrmse(const std::vector<Vector>& est, const std::vector<Vector>& truth);

/// Mean of the per-state nrmse over `indices` (0-based state indices).
double group_nrmse(const std::vector<Vector>& est, const std::vector<Vector>& truth,
                   std::span<const Index> indices);

/// States without a measurement (X_ch, X_pr, X_li) and measured ones (S_ch4, S_co2, X_bac).
inline constexpr Index kUnmeasured[] = {2, 3, 4};
inline constexpr Index kMeasured[] = {0, 1, 5};

/// Runs `fn` and returns its result with the elapsed monotonic wall time in seconds.
template <typename Fn>
auto timed_run(Fn&& fn) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    auto result = std::forward<Fn>(fn)();
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return std::pair{std::move(result), seconds};
}

}  // namespace adukf::eval
