#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kelly/matrix.hpp"
#include "kelly/weights.hpp"

namespace kelly {

// Account path of a constant-mix strategy. When a step drives wealth to or
// below zero the series stops at that value and `ruined` is set; every value
// before the last is positive.
struct Trajectory {
    std::vector<double> v;               // account values V(0..N)
    std::vector<double> period_returns;  // realized per-period returns, length N
    bool ruined = false;
};

struct BacktestReport {
    double avg_excess_return = 0.0;
    double std_excess = 0.0;             // sample standard deviation (N-1 divisor)
    std::optional<double> sharpe_n;      // sqrt(N) * mean/std; empty when std == 0
    double cumulative_return = 0.0;
    double log_growth = 0.0;
    double max_drawdown = 0.0;
    double terminal_value = 0.0;
};

namespace backtest {

// Simulate V(k+1) = V(k)(1 + sum_i K_i * adj_i(k)) where the fee c_i lowers
// the return of a long position and raises the cost of a short one.
// Throws std::invalid_argument on bad sizes, v0 <= 0, or costs outside [0,1).
Trajectory run(const Matrix& returns, const Weights& weights, const std::vector<double>& costs,
               double v0);

// Largest peak-to-trough loss fraction, one pass over a running peak.
// At least 0 by convention; 1 for a ruined trajectory.
double max_drawdown(const Trajectory& traj);

// Performance metrics with a constant per-period risk-free rate. Requires a
// surviving trajectory with at least two periods; throws SolveError when the
// trajectory was ruined (metrics would need logs of non-positive wealth).
BacktestReport report(const Trajectory& traj, double risk_free);

// Sample average over paths of the smallest partial log-growth sum, equal
// path-by-path to log(1 - drawdown) by the telescoping identity; the
// implementation cross-checks that identity and throws std::logic_error if
// it fails beyond 1e-9.
double drawdown_surrogate(const Weights& weights, const std::vector<Matrix>& paths);

}  // namespace backtest
}  // namespace kelly
