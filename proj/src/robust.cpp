#include "kelly/robust.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kelly/errors.hpp"

namespace kelly {

namespace {

void require_matching(const ScenarioSet& scenarios, const AmbiguitySet& ambiguity) {
    if (ambiguity.m() != scenarios.m)
        throw std::invalid_argument("ambiguity scenario count differs from the scenario set");
}

// Shared constraint block over (k_long, k_short): net bounds, gross leverage,
// and the survival cap that keeps every attainable portfolio return > -1.
lp::LpProblem position_polytope(const ScenarioSet& scenarios,
                                const TradingConstraints& constraints) {
    const std::size_t n = scenarios.n;
    lp::LpProblem prob;
    prob.objective.assign(2 * n, 0.0);
    prob.lo.assign(2 * n, 0.0);
    prob.hi.assign(2 * n, lp::kInf);
    for (std::size_t i = 0; i < n; ++i) {
        prob.lo[n + i] = -lp::kInf;
        prob.hi[n + i] = 0.0;
    }
    prob.ub_a = Matrix(2 * n + 2, 2 * n);
    prob.ub_b.assign(2 * n + 2, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prob.ub_a(i, i) = 1.0;
        prob.ub_a(i, n + i) = 1.0;
        prob.ub_b[i] = constraints.k_max[i];
        prob.ub_a(n + i, i) = -1.0;
        prob.ub_a(n + i, n + i) = -1.0;
        prob.ub_b[n + i] = -constraints.k_min[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        prob.ub_a(2 * n, i) = 1.0;
        prob.ub_a(2 * n, n + i) = -1.0;
    }
    prob.ub_b[2 * n] = constraints.leverage;
    for (std::size_t i = 0; i < n; ++i) {
        prob.ub_a(2 * n + 1, i) = std::abs(std::min(scenarios.per_asset_min[i], 0.0));
        prob.ub_a(2 * n + 1, n + i) = -std::max(0.0, scenarios.per_asset_max[i]);
    }
    prob.ub_b[2 * n + 1] = 1.0;
    return prob;
}

}  // namespace

void TradingConstraints::validate(std::size_t n_assets) const {
    if (!(std::isfinite(leverage) && leverage >= 1.0))
        throw std::invalid_argument("constraints: leverage must be finite and at least 1");
    if (k_min.size() != n_assets || k_max.size() != n_assets)
        throw std::invalid_argument("constraints: bound vectors must match the asset count");
    for (std::size_t i = 0; i < n_assets; ++i) {
        if (!std::isfinite(k_min[i]) || !std::isfinite(k_max[i]))
            throw std::invalid_argument("constraints: non-finite weight bound");
        if (k_min[i] > k_max[i])
            throw std::invalid_argument("constraints: k_min exceeds k_max for asset " +
                                        std::to_string(i));
    }
}

std::vector<double> log_growth_vector(const ScenarioSet& scenarios, const Weights& weights) {
    if (weights.k.size() != scenarios.n)
        throw std::invalid_argument("weights length differs from the asset count");
    weights.validate();
    std::vector<double> q(scenarios.m);
    for (std::size_t j = 0; j < scenarios.m; ++j) {
        double r = 0.0;
        for (std::size_t i = 0; i < scenarios.n; ++i)
            r += weights.k[i] * scenarios.returns(j, i);
        if (r <= -1.0)
            throw SolveError("non-survival at scenario " + std::to_string(j) +
                             ": portfolio return " + std::to_string(r));
        q[j] = std::log1p(r);
    }
    return q;
}

double elg(const ScenarioSet& scenarios, const std::vector<double>& p, const Weights& weights) {
    if (p.size() != scenarios.m)
        throw std::invalid_argument("probability length differs from the scenario count");
    const std::vector<double> q = log_growth_vector(scenarios, weights);
    double g = 0.0;
    for (std::size_t j = 0; j < scenarios.m; ++j) g += p[j] * q[j];
    return g;
}

WorstCasePrimal worst_case_elg(const ScenarioSet& scenarios, const AmbiguitySet& ambiguity,
                               const Weights& weights) {
    require_matching(scenarios, ambiguity);
    const std::vector<double> q = log_growth_vector(scenarios, weights);
    const std::size_t m = scenarios.m;

    lp::LpProblem prob;
    prob.objective.resize(m);
    for (std::size_t j = 0; j < m; ++j) prob.objective[j] = -q[j];
    prob.lo.assign(m, 0.0);
    prob.hi.assign(m, lp::kInf);
    prob.eq_a = Matrix(1 + ambiguity.a0().rows(), m);
    prob.eq_b.assign(1 + ambiguity.a0().rows(), 0.0);
    for (std::size_t j = 0; j < m; ++j) prob.eq_a(0, j) = 1.0;
    prob.eq_b[0] = 1.0;
    for (std::size_t r = 0; r < ambiguity.a0().rows(); ++r) {
        for (std::size_t j = 0; j < m; ++j) prob.eq_a(r + 1, j) = ambiguity.a0()(r, j);
        prob.eq_b[r + 1] = ambiguity.d0()[r];
    }
    prob.ub_a = ambiguity.a1();
    prob.ub_b = ambiguity.d1();

    const lp::LpSolution sol = lp::solve(prob);
    if (sol.status != lp::LpStatus::Optimal)
        throw SolveError(std::string("worst-case distribution solve failed: ") +
                         lp::to_string(sol.status));
    return {-sol.objective_value, sol.x};
}

WorstCaseDual worst_case_dual(const ScenarioSet& scenarios, const AmbiguitySet& ambiguity,
                              const Weights& weights) {
    require_matching(scenarios, ambiguity);
    const std::vector<double> q = log_growth_vector(scenarios, weights);
    const std::size_t m = scenarios.m;
    const std::size_t m0 = ambiguity.a0().rows();
    const std::size_t m1 = ambiguity.a1().rows();
    const std::size_t w_col = m0 + m1;

    lp::LpProblem prob;
    prob.objective.assign(m0 + m1 + 1, 0.0);
    for (std::size_t r = 0; r < m0; ++r) prob.objective[r] = -ambiguity.d0()[r];
    for (std::size_t r = 0; r < m1; ++r) prob.objective[m0 + r] = -ambiguity.d1()[r];
    prob.objective[w_col] = 1.0;
    prob.lo.assign(m0 + m1 + 1, -lp::kInf);
    prob.hi.assign(m0 + m1 + 1, lp::kInf);
    for (std::size_t r = 0; r < m1; ++r) prob.lo[m0 + r] = 0.0;

    prob.ub_a = Matrix(m, m0 + m1 + 1);
    prob.ub_b = q;
    for (std::size_t j = 0; j < m; ++j) {
        prob.ub_a(j, w_col) = 1.0;
        for (std::size_t r = 0; r < m0; ++r) prob.ub_a(j, r) = -ambiguity.a0()(r, j);
        for (std::size_t r = 0; r < m1; ++r) prob.ub_a(j, m0 + r) = -ambiguity.a1()(r, j);
    }

    const lp::LpSolution sol = lp::solve(prob);
    if (sol.status != lp::LpStatus::Optimal)
        throw SolveError(std::string("worst-case dual solve failed: ") +
                         lp::to_string(sol.status));
    WorstCaseDual out;
    out.value = sol.objective_value;
    out.v.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(m0));
    out.lambda.assign(sol.x.begin() + static_cast<std::ptrdiff_t>(m0),
                      sol.x.begin() + static_cast<std::ptrdiff_t>(m0 + m1));
    return out;
}

ReturnRange portfolio_return_range(const ScenarioSet& scenarios,
                                   const TradingConstraints& constraints) {
    constraints.validate(scenarios.n);
    const std::size_t n = scenarios.n;
    lp::LpProblem prob = position_polytope(scenarios, constraints);

    ReturnRange range;
    bool first = true;
    for (std::size_t j = 0; j < scenarios.m; ++j) {
        for (int sign : {-1, +1}) {
            for (std::size_t i = 0; i < n; ++i) {
                prob.objective[i] = sign * scenarios.returns(j, i);
                prob.objective[n + i] = sign * scenarios.returns(j, i);
            }
            const lp::LpSolution sol = lp::solve(prob);
            if (sol.status == lp::LpStatus::Infeasible)
                throw SolveError("empty constraint polytope");
            if (sol.status != lp::LpStatus::Optimal)
                throw SolveError(std::string("return-range solve failed: ") +
                                 lp::to_string(sol.status));
            const double extreme = sign * sol.objective_value;
            if (sign < 0) {
                if (first || extreme < range.x_min) range.x_min = extreme;
            } else {
                if (first || extreme > range.x_max) range.x_max = extreme;
            }
        }
        first = false;
    }
    if (range.x_min <= -1.0)
        throw SolveError("attainable portfolio return reaches -1; the survival cap does not bind");
    return range;
}

RobustSolution solve_robust(const ScenarioSet& scenarios, const AmbiguitySet& ambiguity,
                            const TradingConstraints& constraints,
                            const hyperplane::HyperplaneSet& envelope) {
    require_matching(scenarios, ambiguity);
    constraints.validate(scenarios.n);
    if (envelope.count() == 0) throw std::invalid_argument("hyperplane envelope is empty");

    const std::size_t n = scenarios.n;
    const std::size_t m = scenarios.m;
    const std::size_t m0 = ambiguity.a0().rows();
    const std::size_t m1 = ambiguity.a1().rows();
    const std::size_t planes = envelope.count();

    // Variable layout: k_long(n) >= 0, k_short(n) <= 0, v(m0) free,
    // lambda(m1) >= 0, w free, z(m) free.
    const std::size_t k_long0 = 0;
    const std::size_t k_short0 = n;
    const std::size_t v0 = 2 * n;
    const std::size_t lambda0 = v0 + m0;
    const std::size_t w_col = lambda0 + m1;
    const std::size_t z0 = w_col + 1;
    const std::size_t total = z0 + m;

    lp::LpProblem prob;
    prob.objective.assign(total, 0.0);
    prob.objective[w_col] = 1.0;
    for (std::size_t r = 0; r < m0; ++r) prob.objective[v0 + r] = -ambiguity.d0()[r];
    for (std::size_t r = 0; r < m1; ++r) prob.objective[lambda0 + r] = -ambiguity.d1()[r];
    prob.lo.assign(total, -lp::kInf);
    prob.hi.assign(total, lp::kInf);
    for (std::size_t i = 0; i < n; ++i) {
        prob.lo[k_long0 + i] = 0.0;
        prob.hi[k_short0 + i] = 0.0;
    }
    for (std::size_t r = 0; r < m1; ++r) prob.lo[lambda0 + r] = 0.0;

    prob.names.resize(total);
    for (std::size_t i = 0; i < n; ++i) {
        prob.names[k_long0 + i] = "k_long_" + std::to_string(i);
        prob.names[k_short0 + i] = "k_short_" + std::to_string(i);
    }
    for (std::size_t r = 0; r < m0; ++r) prob.names[v0 + r] = "v_" + std::to_string(r);
    for (std::size_t r = 0; r < m1; ++r) prob.names[lambda0 + r] = "lambda_" + std::to_string(r);
    prob.names[w_col] = "w";
    for (std::size_t j = 0; j < m; ++j) prob.names[z0 + j] = "z_" + std::to_string(j);

    // Rows: net upper (n), net lower (n), leverage, survival,
    // envelope (m * planes), coupling (m).
    const std::size_t rows = 2 * n + 2 + m * planes + m;
    prob.ub_a = Matrix(rows, total);
    prob.ub_b.assign(rows, 0.0);
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i, ++r) {
        prob.ub_a(r, k_long0 + i) = 1.0;
        prob.ub_a(r, k_short0 + i) = 1.0;
        prob.ub_b[r] = constraints.k_max[i];
    }
    for (std::size_t i = 0; i < n; ++i, ++r) {
        prob.ub_a(r, k_long0 + i) = -1.0;
        prob.ub_a(r, k_short0 + i) = -1.0;
        prob.ub_b[r] = -constraints.k_min[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        prob.ub_a(r, k_long0 + i) = 1.0;
        prob.ub_a(r, k_short0 + i) = -1.0;
    }
    prob.ub_b[r] = constraints.leverage;
    ++r;
    for (std::size_t i = 0; i < n; ++i) {
        prob.ub_a(r, k_long0 + i) = std::abs(std::min(scenarios.per_asset_min[i], 0.0));
        prob.ub_a(r, k_short0 + i) = -std::max(0.0, scenarios.per_asset_max[i]);
    }
    prob.ub_b[r] = 1.0;
    ++r;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t l = 0; l < planes; ++l, ++r) {
            const hyperplane::Hyperplane& h = envelope.planes[l];
            prob.ub_a(r, z0 + j) = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double c = -h.a * scenarios.returns(j, i);
                prob.ub_a(r, k_long0 + i) = c;
                prob.ub_a(r, k_short0 + i) = c;
            }
            prob.ub_b[r] = h.b;
        }
    }
    for (std::size_t j = 0; j < m; ++j, ++r) {
        prob.ub_a(r, w_col) = 1.0;
        prob.ub_a(r, z0 + j) = -1.0;
        for (std::size_t rr = 0; rr < m0; ++rr) prob.ub_a(r, v0 + rr) = -ambiguity.a0()(rr, j);
        for (std::size_t rr = 0; rr < m1; ++rr)
            prob.ub_a(r, lambda0 + rr) = -ambiguity.a1()(rr, j);
    }

    const lp::LpSolution sol = lp::solve(prob);
    if (sol.status != lp::LpStatus::Optimal)
        throw SolveError(std::string("robust solve failed: ") + lp::to_string(sol.status));

    RobustSolution out;
    out.weights.k_long.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
    out.weights.k_short.assign(sol.x.begin() + static_cast<std::ptrdiff_t>(n),
                               sol.x.begin() + static_cast<std::ptrdiff_t>(2 * n));
    out.weights.k.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.weights.k[i] = out.weights.k_long[i] + out.weights.k_short[i];
    out.lp_value = sol.objective_value;
    out.v.assign(sol.x.begin() + static_cast<std::ptrdiff_t>(v0),
                 sol.x.begin() + static_cast<std::ptrdiff_t>(v0 + m0));
    out.lambda.assign(sol.x.begin() + static_cast<std::ptrdiff_t>(lambda0),
                      sol.x.begin() + static_cast<std::ptrdiff_t>(lambda0 + m1));
    out.w = sol.x[w_col];
    out.z.assign(sol.x.begin() + static_cast<std::ptrdiff_t>(z0), sol.x.end());
    out.hyperplanes_used = envelope;
    out.status = sol.status;
    out.nominal_elg = elg(scenarios, scenarios.nominal, out.weights);
    out.worst_case_elg = worst_case_elg(scenarios, ambiguity, out.weights).value;
    return out;
}

RobustSolution solve_robust(const ScenarioSet& scenarios, const AmbiguitySet& ambiguity,
                            const TradingConstraints& constraints, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    const ReturnRange range = portfolio_return_range(scenarios, constraints);
    if (!(range.x_min < range.x_max))
        throw std::invalid_argument("degenerate hyperplane interval: attainable portfolio "
                                    "returns have no spread");
    const double lo = std::min(range.x_min, 0.0) - 1e-9;
    const double hi = std::max(range.x_max, 0.0) + 1e-9;
    return solve_robust(scenarios, ambiguity, constraints,
                        hyperplane::generate(lo, hi, epsilon));
}

}  // namespace kelly
