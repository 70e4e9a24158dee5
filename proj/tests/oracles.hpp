#pragma once

// Brute-force reference implementations for tests. Deliberately independent
// of the library's algorithms: vertex enumeration instead of simplex pivots,
// dense grids instead of closed-form gap formulas, quadratic scans instead
// of one-pass recurrences. Slow on purpose; test-only.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

struct DenseLp {
    std::vector<double> objective;            // maximize objective . x
    std::vector<std::vector<double>> eq;      // eq[r] . x == eq_b[r]
    std::vector<double> eq_b;
    std::vector<std::vector<double>> ub;      // ub[r] . x <= ub_b[r]
    std::vector<double> ub_b;
    std::vector<double> lo;                   // finite or -inf
    std::vector<double> hi;                   // finite or +inf
};

namespace detail {

// Unique solution of the stacked rows*x = rhs system via Gaussian
// elimination with partial pivoting; empty on rank deficiency or
// inconsistency.
inline std::optional<std::vector<double>> solve_exact(std::vector<std::vector<double>> aug,
                                                      std::size_t n) {
    const double tol = 1e-11;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < n && rank < aug.size(); ++col) {
        std::size_t piv = rank;
        for (std::size_t r = rank + 1; r < aug.size(); ++r)
            if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
        if (std::abs(aug[piv][col]) <= tol) continue;
        std::swap(aug[rank], aug[piv]);
        const double d = aug[rank][col];
        for (std::size_t j = col; j <= n; ++j) aug[rank][j] /= d;
        for (std::size_t r = 0; r < aug.size(); ++r) {
            if (r == rank) continue;
            const double f = aug[r][col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j <= n; ++j) aug[r][j] -= f * aug[rank][j];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    if (rank < n) return std::nullopt;
    for (std::size_t r = rank; r < aug.size(); ++r)
        if (std::abs(aug[r][n]) > 1e-9) return std::nullopt;
    std::vector<double> x(n, 0.0);
    for (std::size_t r = 0; r < rank; ++r) x[pivot_col[r]] = aug[r][n];
    return x;
}

inline bool feasible(const DenseLp& lp, const std::vector<double>& x, double tol) {
    const std::size_t n = lp.objective.size();
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] < lp.lo[i] - tol || x[i] > lp.hi[i] + tol) return false;
    for (std::size_t r = 0; r < lp.eq.size(); ++r) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += lp.eq[r][i] * x[i];
        if (std::abs(dot - lp.eq_b[r]) > tol) return false;
    }
    for (std::size_t r = 0; r < lp.ub.size(); ++r) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += lp.ub[r][i] * x[i];
        if (dot > lp.ub_b[r] + tol) return false;
    }
    return true;
}

}  // namespace detail

// Maximize over a bounded polytope by enumerating every candidate vertex:
// all equality rows are taken active (they must be linearly independent),
// completed with each subset of the inequality/bound rows that pins a unique
// point. Empty result means no feasible vertex was found. Only valid for
// polytopes whose optimum is attained at a vertex, i.e. bounded feasible
// sets, which is all the tests use it for.
inline std::optional<std::pair<double, std::vector<double>>> enumerate_max(const DenseLp& lp) {
    const std::size_t n = lp.objective.size();
    if (lp.eq.size() > n) return std::nullopt;

    std::vector<std::vector<double>> base;
    for (std::size_t r = 0; r < lp.eq.size(); ++r) {
        std::vector<double> row = lp.eq[r];
        row.push_back(lp.eq_b[r]);
        base.push_back(std::move(row));
    }
    std::vector<std::vector<double>> pool;
    for (std::size_t r = 0; r < lp.ub.size(); ++r) {
        std::vector<double> row = lp.ub[r];
        row.push_back(lp.ub_b[r]);
        pool.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isfinite(lp.lo[i])) {
            std::vector<double> row(n + 1, 0.0);
            row[i] = 1.0;
            row[n] = lp.lo[i];
            pool.push_back(std::move(row));
        }
        if (std::isfinite(lp.hi[i])) {
            std::vector<double> row(n + 1, 0.0);
            row[i] = 1.0;
            row[n] = lp.hi[i];
            pool.push_back(std::move(row));
        }
    }

    const std::size_t need = n - lp.eq.size();
    if (need > pool.size()) return std::nullopt;

    std::optional<std::pair<double, std::vector<double>>> best;
    std::vector<std::size_t> pick(need);
    for (std::size_t i = 0; i < need; ++i) pick[i] = i;
    for (;;) {
        std::vector<std::vector<double>> aug = base;
        for (std::size_t i : pick) aug.push_back(pool[i]);
        if (auto x = detail::solve_exact(std::move(aug), n)) {
            if (detail::feasible(lp, *x, 1e-9)) {
                double value = 0.0;
                for (std::size_t i = 0; i < n; ++i) value += lp.objective[i] * (*x)[i];
                if (!best || value > best->first) best = {value, *x};
            }
        }
        if (need == 0) break;
        bool advanced = false;
        std::size_t i = need;
        while (i-- > 0) {
            if (pick[i] + (need - i) < pool.size()) {
                ++pick[i];
                for (std::size_t r = i + 1; r < need; ++r) pick[r] = pick[r - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
    return best;
}

// Worst-case expectation of q over a box around the nominal distribution,
// by vertex enumeration of {p >= 0, sum p = 1, |p - nominal| <= radii}.
// Returns the minimizing value; empty when the box misses the simplex.
inline std::optional<double> box_worst_expectation(const std::vector<double>& q,
                                                   const std::vector<double>& nominal,
                                                   const std::vector<double>& radii) {
    const std::size_t m = q.size();
    DenseLp lp;
    lp.objective.resize(m);
    for (std::size_t j = 0; j < m; ++j) lp.objective[j] = -q[j];
    lp.eq.push_back(std::vector<double>(m, 1.0));
    lp.eq_b.push_back(1.0);
    lp.lo.resize(m);
    lp.hi.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        lp.lo[j] = std::max(0.0, nominal[j] - radii[j]);
        lp.hi[j] = nominal[j] + radii[j];
    }
    const auto best = enumerate_max(lp);
    if (!best) return std::nullopt;
    return -best->first;
}

// Quadratic-time drawdown: max over l <= k of (v[l] - v[k]) / v[l].
inline double drawdown(const std::vector<double>& v) {
    double worst = 0.0;
    for (std::size_t l = 0; l < v.size(); ++l)
        for (std::size_t k = l; k < v.size(); ++k)
            worst = std::max(worst, (v[l] - v[k]) / v[l]);
    return worst;
}

// Largest and smallest gap between the lower envelope of tangent lines
// (a, b pairs) and log(1+x) over a uniform grid on [x_min, x_max].
struct GapRange {
    double max_gap;
    double min_gap;
};

inline GapRange envelope_gap(const std::vector<std::pair<double, double>>& lines, double x_min,
                             double x_max, std::size_t grid_points) {
    GapRange out{-std::numeric_limits<double>::infinity(),
                 std::numeric_limits<double>::infinity()};
    for (std::size_t g = 0; g < grid_points; ++g) {
        const double t = static_cast<double>(g) / static_cast<double>(grid_points - 1);
        const double x = x_min + t * (x_max - x_min);
        double env = std::numeric_limits<double>::infinity();
        for (const auto& [a, b] : lines) env = std::min(env, a * x + b);
        const double gap = env - std::log1p(x);
        out.max_gap = std::max(out.max_gap, gap);
        out.min_gap = std::min(out.min_gap, gap);
    }
    return out;
}

}  // namespace oracle
