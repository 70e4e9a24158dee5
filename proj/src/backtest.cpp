#include "kelly/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "kelly/errors.hpp"

namespace kelly::backtest {

Trajectory run(const Matrix& returns, const Weights& weights, const std::vector<double>& costs,
               double v0) {
    const std::size_t n = returns.cols();
    const std::size_t periods = returns.rows();
    if (weights.k.size() != n)
        throw std::invalid_argument("weights length differs from the asset count");
    weights.validate();
    if (costs.size() != n)
        throw std::invalid_argument("costs length differs from the asset count");
    for (double c : costs)
        if (!(c >= 0.0 && c < 1.0))
            throw std::invalid_argument("transaction costs must lie in [0, 1)");
    if (!(v0 > 0.0)) throw std::invalid_argument("initial wealth must be positive");

    Trajectory traj;
    traj.v.reserve(periods + 1);
    traj.period_returns.reserve(periods);
    traj.v.push_back(v0);
    for (std::size_t k = 0; k < periods; ++k) {
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double adj =
                weights.k[i] >= 0.0 ? returns(k, i) - costs[i] : returns(k, i) + costs[i];
            r += weights.k[i] * adj;
        }
        const double next = traj.v.back() * (1.0 + r);
        traj.period_returns.push_back(r);
        traj.v.push_back(next);
        if (next <= 0.0) {
            traj.ruined = true;
            break;
        }
    }
    return traj;
}

double max_drawdown(const Trajectory& traj) {
    if (traj.ruined) return 1.0;
    if (traj.v.empty()) throw std::invalid_argument("empty trajectory");
    double peak = traj.v.front();
    double worst = 0.0;
    for (double value : traj.v) {
        if (!(value > 0.0)) throw std::invalid_argument("non-positive wealth in trajectory");
        peak = std::max(peak, value);
        worst = std::max(worst, (peak - value) / peak);
    }
    return worst;
}

BacktestReport report(const Trajectory& traj, double risk_free) {
    if (traj.ruined)
        throw SolveError("trajectory was ruined: wealth reached zero, metrics are undefined");
    const std::size_t periods = traj.period_returns.size();
    if (periods < 2) throw std::invalid_argument("report needs at least two periods");
    if (traj.v.size() != periods + 1)
        throw std::invalid_argument("trajectory lengths are inconsistent");
    if (!std::isfinite(risk_free)) throw std::invalid_argument("risk-free rate must be finite");

    BacktestReport out;
    double mean = 0.0;
    for (double r : traj.period_returns) mean += r - risk_free;
    mean /= static_cast<double>(periods);
    double ss = 0.0;
    for (double r : traj.period_returns) {
        const double d = (r - risk_free) - mean;
        ss += d * d;
    }
    out.avg_excess_return = mean;
    out.std_excess = std::sqrt(ss / static_cast<double>(periods - 1));
    if (out.std_excess > 0.0)
        out.sharpe_n = std::sqrt(static_cast<double>(periods)) * mean / out.std_excess;
    out.cumulative_return = (traj.v.back() - traj.v.front()) / traj.v.front();
    out.log_growth = std::log(traj.v.back() / traj.v.front());
    out.max_drawdown = max_drawdown(traj);
    out.terminal_value = traj.v.back();
    return out;
}

double drawdown_surrogate(const Weights& weights, const std::vector<Matrix>& paths) {
    if (paths.empty()) throw std::invalid_argument("drawdown surrogate needs at least one path");
    double total = 0.0;
    for (std::size_t t = 0; t < paths.size(); ++t) {
        const Matrix& path = paths[t];
        if (path.cols() != weights.k.size())
            throw std::invalid_argument("path " + std::to_string(t) +
                                        ": asset count differs from weights");
        if (path.rows() == 0)
            throw std::invalid_argument("path " + std::to_string(t) + ": no periods");

        // min over l <= k of (C_k - C_l) where C_k is the k-step log-growth
        // prefix sum; the empty window contributes 0, matching the
        // at-least-zero drawdown convention on rising paths.
        double prefix = 0.0;
        double max_prefix = 0.0;
        double best = 0.0;
        // Parallel direct drawdown for the identity cross-check.
        double wealth = 1.0;
        double peak_before = 1.0;
        double min_ratio = 1.0;
        for (std::size_t k = 0; k < path.rows(); ++k) {
            double r = 0.0;
            for (std::size_t i = 0; i < path.cols(); ++i) r += weights.k[i] * path(k, i);
            if (r <= -1.0)
                throw std::invalid_argument("non-survival on path " + std::to_string(t) +
                                            " at step " + std::to_string(k));
            prefix += std::log1p(r);
            best = std::min(best, prefix - max_prefix);
            max_prefix = std::max(max_prefix, prefix);

            wealth *= 1.0 + r;
            min_ratio = std::min(min_ratio, wealth / peak_before);
            peak_before = std::max(peak_before, wealth);
        }
        if (std::abs(best - std::log(min_ratio)) > 1e-9)
            throw std::logic_error("drawdown surrogate identity violated");
        total += best;
    }
    return total / static_cast<double>(paths.size());
}

}  // namespace kelly::backtest
