#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "kelly/backtest.hpp"
#include "kelly/errors.hpp"
#include "kelly/matrix.hpp"
#include "oracles.hpp"

using kelly::BacktestReport;
using kelly::Matrix;
using kelly::SolveError;
using kelly::Trajectory;
using kelly::Weights;
namespace backtest = kelly::backtest;

namespace {

Weights weights_of(std::vector<double> k) {
    Weights w;
    w.k = std::move(k);
    return w;
}

}  // namespace

TEST_CASE("one long period nets the fee-adjusted return") {
    const Matrix returns{{0.1}, {-0.1}, {0.05}};
    const Trajectory traj = backtest::run(returns, weights_of({0.5}), {0.01}, 1.0);
    REQUIRE(traj.v.size() == 4);
    CHECK_FALSE(traj.ruined);
    // 1 * (1 + 0.5*(0.10 - 0.01)) is exactly representable.
    CHECK(traj.v[1] == 1.045);
    CHECK(traj.period_returns[0] == doctest::Approx(0.045).epsilon(1e-15));
    CHECK(traj.period_returns[1] == doctest::Approx(-0.055).epsilon(1e-15));
    CHECK(traj.period_returns[2] == doctest::Approx(0.02).epsilon(1e-15));
}

TEST_CASE("short positions pay the fee on the other side") {
    const Matrix returns{{-0.10}};
    const Trajectory traj = backtest::run(returns, weights_of({-0.5}), {0.01}, 1.0);
    // Shorting a 10% drop with a 1% fee: -0.5 * (-0.10 + 0.01) = 0.045.
    CHECK(traj.v[1] == 1.045);
}

TEST_CASE("zero weights hold wealth flat regardless of costs") {
    const Matrix returns{{0.3, -0.4}, {-0.2, 0.5}};
    const Trajectory traj = backtest::run(returns, weights_of({0.0, 0.0}), {0.05, 0.05}, 7.0);
    for (double v : traj.v) CHECK(v == 7.0);
    for (double r : traj.period_returns) CHECK(r == 0.0);
}

TEST_CASE("a wipeout truncates the trajectory") {
    const Matrix returns{{-1.2}, {0.5}, {0.5}};
    const Trajectory traj = backtest::run(returns, weights_of({1.0}), {0.0}, 1.0);
    CHECK(traj.ruined);
    REQUIRE(traj.v.size() == 2);  // the post-ruin periods are never simulated
    CHECK(traj.v[1] == doctest::Approx(-0.2).epsilon(1e-15));
    CHECK(traj.period_returns.size() == 1);
}

TEST_CASE("run validates its inputs") {
    const Matrix returns{{0.1, 0.2}};
    CHECK_THROWS_WITH_AS(backtest::run(returns, weights_of({0.5}), {0.0, 0.0}, 1.0),
                         doctest::Contains("weights length differs"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(backtest::run(returns, weights_of({0.5, 0.5}), {0.0}, 1.0),
                         doctest::Contains("costs length differs"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(backtest::run(returns, weights_of({0.5, 0.5}), {0.0, 1.0}, 1.0),
                         doctest::Contains("costs must lie in [0, 1)"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(backtest::run(returns, weights_of({0.5, 0.5}), {0.0, 0.0}, 0.0),
                         doctest::Contains("initial wealth must be positive"),
                         std::invalid_argument);
}

TEST_CASE("drawdown examples") {
    Trajectory traj;
    traj.v = {1.0, 0.8, 0.9};
    CHECK(backtest::max_drawdown(traj) == doctest::Approx(0.2).epsilon(1e-12));

    traj.v = {1.0, 1.2, 0.9, 1.5};
    CHECK(backtest::max_drawdown(traj) == doctest::Approx(0.25).epsilon(1e-12));

    traj.v = {1.0, 1.1, 1.25};
    CHECK(backtest::max_drawdown(traj) == 0.0);

    traj.v = {5.0};
    CHECK(backtest::max_drawdown(traj) == 0.0);

    Trajectory dead;
    dead.v = {1.0, -0.2};
    dead.ruined = true;
    CHECK(backtest::max_drawdown(dead) == 1.0);

    Trajectory empty;
    CHECK_THROWS_WITH_AS(backtest::max_drawdown(empty), doctest::Contains("empty trajectory"),
                         std::invalid_argument);

    Trajectory broken;
    broken.v = {1.0, 0.0, 0.5};
    CHECK_THROWS_WITH_AS(backtest::max_drawdown(broken),
                         doctest::Contains("non-positive wealth"), std::invalid_argument);
}

TEST_CASE("report on a deterministic two-period run") {
    const Matrix returns{{0.1}, {-0.1}};
    const Trajectory traj = backtest::run(returns, weights_of({1.0}), {0.0}, 1.0);
    const BacktestReport rep = backtest::report(traj, 0.0);

    CHECK(rep.avg_excess_return == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(rep.std_excess == doctest::Approx(0.1 * std::sqrt(2.0)).epsilon(1e-12));
    REQUIRE(rep.sharpe_n.has_value());
    CHECK(*rep.sharpe_n == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.cumulative_return == doctest::Approx(-0.01).epsilon(1e-12));
    CHECK(rep.log_growth == doctest::Approx(std::log(0.99)).epsilon(1e-12));
    CHECK(rep.log_growth == doctest::Approx(std::log1p(rep.cumulative_return)).epsilon(1e-12));
    CHECK(rep.max_drawdown == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(rep.terminal_value == doctest::Approx(0.99).epsilon(1e-12));
}

TEST_CASE("constant excess returns have no dispersion and no ratio") {
    const Matrix returns{{0.1}, {0.1}};
    const Trajectory traj = backtest::run(returns, weights_of({1.0}), {0.0}, 1.0);
    const BacktestReport rep = backtest::report(traj, 0.0);
    CHECK(rep.std_excess == 0.0);
    CHECK_FALSE(rep.sharpe_n.has_value());
    CHECK(rep.avg_excess_return == doctest::Approx(0.1).epsilon(1e-12));

    // The same series against a matching risk-free rate zeroes the mean too.
    const BacktestReport shifted = backtest::report(traj, 0.1);
    CHECK(shifted.avg_excess_return == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_FALSE(shifted.sharpe_n.has_value());
}

TEST_CASE("metrics other than terminal value are scale invariant") {
    const Matrix returns{{0.2}, {-0.1}, {0.05}};
    const Weights w = weights_of({0.8});
    const Trajectory small = backtest::run(returns, w, {0.0}, 1.0);
    const Trajectory large = backtest::run(returns, w, {0.0}, 250.0);
    const BacktestReport a = backtest::report(small, 0.01);
    const BacktestReport b = backtest::report(large, 0.01);
    CHECK(a.avg_excess_return == doctest::Approx(b.avg_excess_return).epsilon(1e-14));
    CHECK(a.std_excess == doctest::Approx(b.std_excess).epsilon(1e-14));
    CHECK(*a.sharpe_n == doctest::Approx(*b.sharpe_n).epsilon(1e-12));
    CHECK(a.cumulative_return == doctest::Approx(b.cumulative_return).epsilon(1e-14));
    CHECK(a.log_growth == doctest::Approx(b.log_growth).epsilon(1e-14));
    CHECK(a.max_drawdown == doctest::Approx(b.max_drawdown).epsilon(1e-14));
    CHECK(b.terminal_value == doctest::Approx(250.0 * a.terminal_value).epsilon(1e-12));
}

TEST_CASE("drawdown is order sensitive where the moments are not") {
    const Weights w = weights_of({1.0});
    const Trajectory gentle = backtest::run(Matrix{{-0.2}, {0.3}, {-0.2}}, w, {0.0}, 1.0);
    const Trajectory harsh = backtest::run(Matrix{{-0.2}, {-0.2}, {0.3}}, w, {0.0}, 1.0);
    const BacktestReport a = backtest::report(gentle, 0.0);
    const BacktestReport b = backtest::report(harsh, 0.0);
    // Same return multiset: identical moments and terminal wealth.
    CHECK(a.avg_excess_return == doctest::Approx(b.avg_excess_return).epsilon(1e-14));
    CHECK(a.std_excess == doctest::Approx(b.std_excess).epsilon(1e-14));
    CHECK(a.terminal_value == doctest::Approx(b.terminal_value).epsilon(1e-14));
    // Different paths: back-to-back losses dig the deeper hole.
    CHECK(a.max_drawdown == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(b.max_drawdown == doctest::Approx(0.36).epsilon(1e-12));
}

TEST_CASE("report refuses ruined or malformed trajectories") {
    const Trajectory dead = backtest::run(Matrix{{-1.5}, {0.1}}, weights_of({1.0}), {0.0}, 1.0);
    CHECK_THROWS_WITH_AS(backtest::report(dead, 0.0), doctest::Contains("trajectory was ruined"),
                         SolveError);

    const Trajectory one = backtest::run(Matrix{{0.1}}, weights_of({1.0}), {0.0}, 1.0);
    CHECK_THROWS_WITH_AS(backtest::report(one, 0.0),
                         doctest::Contains("at least two periods"), std::invalid_argument);

    Trajectory skewed;
    skewed.v = {1.0, 1.1};
    skewed.period_returns = {0.1, 0.05};
    CHECK_THROWS_WITH_AS(backtest::report(skewed, 0.0),
                         doctest::Contains("lengths are inconsistent"), std::invalid_argument);

    const Trajectory fine = backtest::run(Matrix{{0.1}, {0.1}}, weights_of({1.0}), {0.0}, 1.0);
    CHECK_THROWS_WITH_AS(backtest::report(fine, std::numeric_limits<double>::infinity()),
                         doctest::Contains("risk-free rate must be finite"),
                         std::invalid_argument);
}

TEST_CASE("surrogate is zero for flat strategies and rising paths") {
    const Weights zero = weights_of({0.0});
    CHECK(backtest::drawdown_surrogate(zero, {Matrix{{0.3}, {-0.4}}}) == 0.0);

    const Weights full = weights_of({1.0});
    CHECK(backtest::drawdown_surrogate(full, {Matrix{{0.1}, {0.2}}}) == 0.0);
}

TEST_CASE("surrogate equals the log of the retained fraction") {
    // Wealth path 1 -> 0.8 -> 0.9: drawdown 0.2, surrogate log(0.8).
    const Weights w = weights_of({1.0});
    const double s = backtest::drawdown_surrogate(w, {Matrix{{-0.2}, {0.125}}});
    CHECK(s == doctest::Approx(std::log(0.8)).epsilon(1e-12));

    // Two paths average their surrogates.
    const double both =
        backtest::drawdown_surrogate(w, {Matrix{{-0.2}, {0.125}}, Matrix{{0.1}, {0.2}}});
    CHECK(both == doctest::Approx(0.5 * std::log(0.8)).epsilon(1e-12));
}

TEST_CASE("surrogate matches the direct drawdown on random paths") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> len(1, 20);
    std::uniform_real_distribution<double> ret(-0.35, 0.45);
    std::uniform_real_distribution<double> kd(-0.6, 1.0);

    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = static_cast<std::size_t>(len(rng));
        Matrix path(rows, 2);
        for (std::size_t r = 0; r < rows; ++r) {
            path(r, 0) = ret(rng);
            path(r, 1) = ret(rng);
        }
        const Weights w = weights_of({kd(rng) * 0.5, kd(rng) * 0.5});

        const Trajectory traj = backtest::run(path, w, {0.0, 0.0}, 1.0);
        REQUIRE_FALSE(traj.ruined);  // weight caps keep every step above -1
        const double dd = oracle::drawdown(traj.v);
        const double s = backtest::drawdown_surrogate(w, {path});
        CHECK(s == doctest::Approx(std::log1p(-dd)).epsilon(1e-12));
    }
}

TEST_CASE("surrogate validates its inputs") {
    const Weights w = weights_of({1.0});
    CHECK_THROWS_WITH_AS(backtest::drawdown_surrogate(w, {}),
                         doctest::Contains("at least one path"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(backtest::drawdown_surrogate(w, {Matrix{{0.1, 0.2}}}),
                         doctest::Contains("asset count differs"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(backtest::drawdown_surrogate(w, {Matrix(0, 1)}),
                         doctest::Contains("no periods"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(backtest::drawdown_surrogate(w, {Matrix{{-1.0}}}),
                         doctest::Contains("non-survival on path 0"), std::invalid_argument);
}
