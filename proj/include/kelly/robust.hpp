#pragma once

#include <cstddef>
#include <vector>

#include "kelly/ambiguity.hpp"
#include "kelly/hyperplane.hpp"
#include "kelly/lp.hpp"
#include "kelly/scenarios.hpp"
#include "kelly/weights.hpp"

namespace kelly {

// Position limits for one solve. Every solve models the long/short split
// K_i = K_long,i + K_short,i with K_long >= 0 and K_short <= 0.
struct TradingConstraints {
    double leverage = 1.0;       // gross exposure cap, >= 1
    std::vector<double> k_min;   // per-asset net lower bounds
    std::vector<double> k_max;   // per-asset net upper bounds

    // Throws std::invalid_argument unless sized for n assets with
    // leverage >= 1, finite entries, and k_min <= k_max componentwise.
    void validate(std::size_t n_assets) const;
};

struct WorstCasePrimal {
    double value = 0.0;
    std::vector<double> p_star;  // minimizing distribution, inside the set
};

struct WorstCaseDual {
    double value = 0.0;
    std::vector<double> v;       // equality-block multipliers, free
    std::vector<double> lambda;  // inequality-block multipliers, >= 0
};

struct ReturnRange {
    double x_min = 0.0;
    double x_max = 0.0;
};

struct RobustSolution {
    Weights weights;                 // net weights plus the long/short split
    double lp_value = 0.0;           // surrogate optimum: w - v*d0 - lambda*d1
    double nominal_elg = 0.0;        // exact growth under the nominal distribution
    double worst_case_elg = 0.0;     // exact growth under the worst distribution
    std::vector<double> v;           // equality multipliers at the optimum
    std::vector<double> lambda;      // inequality multipliers at the optimum
    double w = 0.0;                  // worst-scenario surrogate bound
    std::vector<double> z;           // per-scenario surrogate growth values
    hyperplane::HyperplaneSet hyperplanes_used;  // envelope the solve ran with
    lp::LpStatus status = lp::LpStatus::Optimal;
};

// Exact expected log-growth sum_j p_j log(1 + K.x_j).
// Throws std::invalid_argument on size mismatch; SolveError on a
// non-survival scenario (the log is undefined there).
double elg(const ScenarioSet& scenarios, const std::vector<double>& p, const Weights& weights);

// Per-scenario log-growth vector q_j = log(1 + K.x_j); same error policy.
std::vector<double> log_growth_vector(const ScenarioSet& scenarios, const Weights& weights);

// Minimize p.q(K) over the ambiguity set (exact, no hyperplanes).
WorstCasePrimal worst_case_elg(const ScenarioSet& scenarios, const AmbiguitySet& ambiguity,
                               const Weights& weights);

// Same value through the dual program in (v, lambda, w); agrees with the
// primal within 1e-8 by strong duality.
WorstCaseDual worst_case_dual(const ScenarioSet& scenarios, const AmbiguitySet& ambiguity,
                              const Weights& weights);

// Attainable range of the one-period portfolio return K.x_j over the
// constraint polytope, from two LPs per scenario. Throws SolveError when the
// polytope is empty or the range touches -1.
ReturnRange portfolio_return_range(const ScenarioSet& scenarios,
                                   const TradingConstraints& constraints);

// Full robust solve against an explicit tangent envelope.
RobustSolution solve_robust(const ScenarioSet& scenarios, const AmbiguitySet& ambiguity,
                            const TradingConstraints& constraints, const hyperplane::HyperplaneSet& envelope);

// Convenience overload: build the envelope at accuracy epsilon over the
// attainable return range padded by 1e-9 (widened to include 0).
RobustSolution solve_robust(const ScenarioSet& scenarios, const AmbiguitySet& ambiguity,
                            const TradingConstraints& constraints, double epsilon);

}  // namespace kelly
