#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "kelly/matrix.hpp"

namespace kelly::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// maximize   objective . x
// subject to eq_a x  = eq_b
//            ub_a x <= ub_b
//            lo <= x <= hi   (entries may be +-inf)
struct LpProblem {
    std::vector<double> objective;
    Matrix eq_a;
    std::vector<double> eq_b;
    Matrix ub_a;
    std::vector<double> ub_b;
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<std::string> names;  // optional labels, used only by to_lp_text

    std::size_t num_vars() const { return objective.size(); }

    // Throws std::invalid_argument on dimension mismatch, non-finite
    // coefficients, or lo > hi.
    void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;  // populated only when Optimal
    double objective_value = 0.0;
    std::size_t iterations = 0;
};

struct SimplexOptions {
    // Pivot / feasibility tolerance of the tableau arithmetic.
    double tol = 1e-9;
    // 0 means the default cap of 50 * (num_vars + constraint rows).
    std::size_t max_iterations = 0;
};

// Two-phase dense tableau simplex with Bland's rule (lowest eligible index
// enters; ratio-test ties break toward the lowest basic index), so results
// are deterministic and cycling is impossible. Free variables are split into
// positive/negative parts internally; the split never shows in LpSolution.
LpSolution solve(const LpProblem& problem, const SimplexOptions& opts = {});

// Phase one only: true iff the constraint system admits any feasible point.
bool check_feasibility(const LpProblem& problem, const SimplexOptions& opts = {});

// Plain-text rendering of a problem for external cross-checking. Grammar is
// documented in the README ("LP text format").
std::string to_lp_text(const LpProblem& problem);

// Seam for swapping in an external solver behind the same contract. The
// built-in simplex is the reference implementation and the default.
class Backend {
  public:
    virtual ~Backend() = default;
    virtual LpSolution solve(const LpProblem& problem) const = 0;
};

const Backend& simplex_backend();

}  // namespace kelly::lp
