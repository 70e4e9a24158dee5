#include "kelly/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "kelly/errors.hpp"

namespace kelly::lp {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// How one user-facing variable maps onto nonnegative internal columns.
struct VarMap {
    enum class Kind { kShift, kNegated, kSplit } kind;
    std::size_t col0 = kNone;
    std::size_t col1 = kNone;  // negative part, kSplit only
    double offset = 0.0;       // lo for kShift, hi for kNegated
};

void check_finite_matrix(const Matrix& a, std::size_t cols, const char* label) {
    if (a.rows() == 0) return;
    if (a.cols() != cols)
        throw std::invalid_argument(std::string("lp: ") + label + " column count mismatch");
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!std::isfinite(a(i, j)))
                throw std::invalid_argument(std::string("lp: non-finite coefficient in ") + label);
}

std::string fmt(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Two-phase tableau simplex over the standardized problem. All internal
// variables are nonnegative; every row carries a slack or an artificial so
// the initial basis is explicit.
class Simplex {
  public:
    Simplex(const LpProblem& p, const SimplexOptions& opts) : problem_(p), tol_(opts.tol) {
        standardize();
        max_iter_ = opts.max_iterations != 0
                        ? opts.max_iterations
                        : 50 * (n_cols_ + tab_.size());
    }

    LpSolution run(bool phase_one_only) {
        LpSolution sol;
        if (n_art_ > 0) {
            if (!optimize(cost1_, /*allow_unbounded=*/false)) {
                sol.status = LpStatus::IterationLimit;
                sol.iterations = iterations_;
                return sol;
            }
            // cost1_ back cell holds -(sum of artificials) at the optimum.
            if (cost1_.back() < -feas_tol_) {
                sol.status = LpStatus::Infeasible;
                sol.iterations = iterations_;
                return sol;
            }
            evict_artificials();
        }
        if (phase_one_only) {
            sol.status = LpStatus::Optimal;
            sol.iterations = iterations_;
            return sol;
        }

        if (!optimize(cost2_, /*allow_unbounded=*/true)) {
            sol.status = unbounded_ ? LpStatus::Unbounded : LpStatus::IterationLimit;
            sol.iterations = iterations_;
            return sol;
        }

        sol.status = LpStatus::Optimal;
        sol.iterations = iterations_;
        sol.x = recover();
        sol.objective_value = 0.0;
        for (std::size_t j = 0; j < problem_.num_vars(); ++j)
            sol.objective_value += problem_.objective[j] * sol.x[j];
        return sol;
    }

  private:
    void standardize() {
        const std::size_t q = problem_.num_vars();
        vmap_.resize(q);
        std::size_t col = 0;
        std::size_t n_bound_rows = 0;
        for (std::size_t j = 0; j < q; ++j) {
            const double lo = problem_.lo[j], hi = problem_.hi[j];
            if (lo > -kInf) {
                vmap_[j] = {VarMap::Kind::kShift, col++, kNone, lo};
                if (hi < kInf) ++n_bound_rows;
            } else if (hi < kInf) {
                vmap_[j] = {VarMap::Kind::kNegated, col++, kNone, hi};
            } else {
                vmap_[j] = {VarMap::Kind::kSplit, col, col + 1, 0.0};
                col += 2;
            }
        }
        n_struct_ = col;

        const std::size_t n_eq = problem_.eq_b.size();
        const std::size_t n_ub = problem_.ub_b.size();
        const std::size_t rows = n_eq + n_ub + n_bound_rows;
        n_slack_ = n_ub + n_bound_rows;

        // Column layout: [structural | slacks | artificials]; artificials are
        // appended lazily below. Width is fixed up after counting them.
        std::vector<std::vector<double>> structural(rows, std::vector<double>(n_struct_, 0.0));
        std::vector<double> rhs(rows, 0.0);

        auto emit_row = [&](std::size_t r, const double* coeffs, double b) {
            rhs[r] = b;
            for (std::size_t j = 0; j < q; ++j) {
                const double a = coeffs[j];
                if (a == 0.0) continue;
                const VarMap& vm = vmap_[j];
                switch (vm.kind) {
                    case VarMap::Kind::kShift:
                        structural[r][vm.col0] += a;
                        rhs[r] -= a * vm.offset;
                        break;
                    case VarMap::Kind::kNegated:
                        structural[r][vm.col0] -= a;
                        rhs[r] -= a * vm.offset;
                        break;
                    case VarMap::Kind::kSplit:
                        structural[r][vm.col0] += a;
                        structural[r][vm.col1] -= a;
                        break;
                }
            }
        };

        std::size_t r = 0;
        for (std::size_t i = 0; i < n_eq; ++i, ++r) emit_row(r, problem_.eq_a.row(i), problem_.eq_b[i]);
        for (std::size_t i = 0; i < n_ub; ++i, ++r) emit_row(r, problem_.ub_a.row(i), problem_.ub_b[i]);
        for (std::size_t j = 0; j < q; ++j) {
            const double lo = problem_.lo[j], hi = problem_.hi[j];
            if (lo > -kInf && hi < kInf) {
                structural[r][vmap_[j].col0] = 1.0;
                rhs[r] = hi - lo;
                ++r;
            }
        }

        double rhs_scale = 1.0;
        for (double b : rhs) rhs_scale = std::max(rhs_scale, std::abs(b));
        feas_tol_ = tol_ * rhs_scale;

        // Slack/artificial assignment. Rows are sign-normalized to rhs >= 0;
        // a flipped inequality row loses its basis-eligible slack and an
        // equality row never had one, so both get an artificial.
        std::vector<bool> negate(rows, false);
        std::vector<bool> needs_art(rows, false);
        for (std::size_t i = 0; i < rows; ++i) {
            negate[i] = rhs[i] < 0.0;
            needs_art[i] = i < n_eq || negate[i];
            if (needs_art[i]) ++n_art_;
        }

        n_cols_ = n_struct_ + n_slack_ + n_art_;
        tab_.assign(rows, std::vector<double>(n_cols_ + 1, 0.0));
        basis_.assign(rows, kNone);

        std::size_t slack = n_struct_;
        std::size_t art = n_struct_ + n_slack_;
        for (std::size_t i = 0; i < rows; ++i) {
            const double sgn = negate[i] ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_struct_; ++j) tab_[i][j] = sgn * structural[i][j];
            tab_[i][n_cols_] = sgn * rhs[i];
            if (i >= n_eq) {
                tab_[i][slack] = sgn;  // flipped rows keep a -1 slack: not basis-eligible
                basis_[i] = slack;
                ++slack;
            }
            if (needs_art[i]) {
                tab_[i][art] = 1.0;
                basis_[i] = art;
                ++art;
            }
        }

        // Internal phase-2 objective: maximize c_int . y.
        std::vector<double> c_int(n_cols_, 0.0);
        for (std::size_t j = 0; j < q; ++j) {
            const double c = problem_.objective[j];
            const VarMap& vm = vmap_[j];
            switch (vm.kind) {
                case VarMap::Kind::kShift: c_int[vm.col0] += c; break;
                case VarMap::Kind::kNegated: c_int[vm.col0] -= c; break;
                case VarMap::Kind::kSplit:
                    c_int[vm.col0] += c;
                    c_int[vm.col1] -= c;
                    break;
            }
        }

        // Reduced-cost rows hold z_j - c_j, with the running objective in the
        // back cell; basic columns are eliminated so both start consistent.
        cost2_.assign(n_cols_ + 1, 0.0);
        for (std::size_t j = 0; j < n_cols_; ++j) cost2_[j] = -c_int[j];
        cost1_.assign(n_cols_ + 1, 0.0);
        for (std::size_t j = n_struct_ + n_slack_; j < n_cols_; ++j) cost1_[j] = 1.0;
        for (std::size_t i = 0; i < rows; ++i) {
            if (basis_[i] >= n_struct_ + n_slack_) {
                for (std::size_t j = 0; j <= n_cols_; ++j) cost1_[j] -= tab_[i][j];
            }
        }
        art_start_ = n_struct_ + n_slack_;
    }

    // Bland's rule on the given reduced-cost row until optimal, unbounded, or
    // the iteration cap. Returns false on unbounded/cap (caller disambiguates
    // via unbounded_).
    bool optimize(std::vector<double>& cost, bool allow_unbounded) {
        for (;;) {
            std::size_t enter = kNone;
            for (std::size_t j = 0; j < art_start_; ++j) {
                if (cost[j] < -tol_) {
                    enter = j;
                    break;
                }
            }
            if (enter == kNone) return true;

            const std::size_t leave = ratio_test(enter);
            if (leave == kNone) {
                unbounded_ = allow_unbounded;
                return false;
            }
            if (iterations_ >= max_iter_) return false;
            pivot(leave, enter);
            ++iterations_;
        }
    }

    std::size_t ratio_test(std::size_t col) const {
        std::size_t best = kNone;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            const double a = tab_[i][col];
            if (a <= tol_) continue;
            const double ratio = std::max(tab_[i][n_cols_], 0.0) / a;
            if (best == kNone || ratio < best_ratio - 1e-12 * (1.0 + best_ratio)) {
                best = i;
                best_ratio = ratio;
            } else if (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio) &&
                       basis_[i] < basis_[best]) {
                best = i;  // tie: lowest basic index leaves (anti-cycling)
            }
        }
        return best;
    }

    void pivot(std::size_t r, std::size_t c) {
        std::vector<double>& prow = tab_[r];
        const double p = prow[c];
        for (double& v : prow) v /= p;
        prow[c] = 1.0;
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            if (i == r) continue;
            eliminate(tab_[i], prow, c);
        }
        eliminate(cost1_, prow, c);
        eliminate(cost2_, prow, c);
        basis_[r] = c;
        // Roundoff guard: basic values are nonnegative by construction.
        if (tab_[r][n_cols_] < 0.0 && tab_[r][n_cols_] > -1e-11) tab_[r][n_cols_] = 0.0;
    }

    static void eliminate(std::vector<double>& row, const std::vector<double>& prow,
                          std::size_t c) {
        const double f = row[c];
        if (f == 0.0) return;
        const std::size_t n = row.size();
        for (std::size_t j = 0; j < n; ++j) row[j] -= f * prow[j];
        row[c] = 0.0;
    }

    // Post-phase-1 cleanup: no artificial may stay basic. A degenerate basic
    // artificial is pivoted onto any real column; an all-zero row is a
    // redundant constraint and is removed outright.
    void evict_artificials() {
        for (std::size_t i = 0; i < tab_.size();) {
            if (basis_[i] < art_start_) {
                ++i;
                continue;
            }
            std::size_t c = kNone;
            for (std::size_t j = 0; j < art_start_; ++j) {
                if (std::abs(tab_[i][j]) > tol_) {
                    c = j;
                    break;
                }
            }
            if (c != kNone) {
                pivot(i, c);
                ++i;
            } else {
                if (i + 1 != tab_.size()) {
                    tab_[i] = std::move(tab_.back());
                    basis_[i] = basis_.back();
                }
                tab_.pop_back();
                basis_.pop_back();
            }
        }
    }

    std::vector<double> recover() const {
        std::vector<double> y(n_cols_, 0.0);
        for (std::size_t i = 0; i < tab_.size(); ++i)
            y[basis_[i]] = std::max(tab_[i][n_cols_], 0.0);
        std::vector<double> x(problem_.num_vars(), 0.0);
        for (std::size_t j = 0; j < x.size(); ++j) {
            const VarMap& vm = vmap_[j];
            switch (vm.kind) {
                case VarMap::Kind::kShift: x[j] = vm.offset + y[vm.col0]; break;
                case VarMap::Kind::kNegated: x[j] = vm.offset - y[vm.col0]; break;
                case VarMap::Kind::kSplit: x[j] = y[vm.col0] - y[vm.col1]; break;
            }
        }
        return x;
    }

    const LpProblem& problem_;
    double tol_;
    double feas_tol_ = 1e-9;
    std::size_t max_iter_ = 0;
    std::size_t iterations_ = 0;
    bool unbounded_ = false;

    std::vector<VarMap> vmap_;
    std::vector<std::vector<double>> tab_;
    std::vector<double> cost1_, cost2_;
    std::vector<std::size_t> basis_;
    std::size_t n_struct_ = 0, n_slack_ = 0, n_art_ = 0, n_cols_ = 0, art_start_ = 0;
};

class SimplexBackend final : public Backend {
  public:
    LpSolution solve(const LpProblem& problem) const override { return lp::solve(problem); }
};

}  // namespace

void LpProblem::validate() const {
    const std::size_t q = num_vars();
    if (q == 0) throw std::invalid_argument("lp: problem has no variables");
    for (double c : objective)
        if (!std::isfinite(c)) throw std::invalid_argument("lp: non-finite objective");
    if (eq_a.rows() != eq_b.size())
        throw std::invalid_argument("lp: equality row count mismatch");
    if (ub_a.rows() != ub_b.size())
        throw std::invalid_argument("lp: inequality row count mismatch");
    check_finite_matrix(eq_a, q, "eq_a");
    check_finite_matrix(ub_a, q, "ub_a");
    for (double b : eq_b)
        if (!std::isfinite(b)) throw std::invalid_argument("lp: non-finite equality rhs");
    for (double b : ub_b)
        if (!std::isfinite(b)) throw std::invalid_argument("lp: non-finite inequality rhs");
    if (lo.size() != q || hi.size() != q)
        throw std::invalid_argument("lp: bound vector size mismatch");
    for (std::size_t j = 0; j < q; ++j) {
        if (std::isnan(lo[j]) || std::isnan(hi[j]) || lo[j] == kInf || hi[j] == -kInf)
            throw std::invalid_argument("lp: invalid bound");
        if (lo[j] > hi[j]) throw std::invalid_argument("lp: lower bound exceeds upper bound");
    }
    if (!names.empty() && names.size() != q)
        throw std::invalid_argument("lp: name count mismatch");
}

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::IterationLimit: return "iteration_limit";
    }
    return "unknown";
}

LpSolution solve(const LpProblem& problem, const SimplexOptions& opts) {
    problem.validate();
    Simplex simplex(problem, opts);
    return simplex.run(/*phase_one_only=*/false);
}

bool check_feasibility(const LpProblem& problem, const SimplexOptions& opts) {
    problem.validate();
    Simplex simplex(problem, opts);
    const LpSolution sol = simplex.run(/*phase_one_only=*/true);
    if (sol.status == LpStatus::IterationLimit)
        throw SolveError("lp: feasibility check hit the iteration cap");
    return sol.status != LpStatus::Infeasible;
}

std::string to_lp_text(const LpProblem& problem) {
    problem.validate();
    const std::size_t q = problem.num_vars();
    auto name = [&](std::size_t j) {
        return problem.names.empty() ? "x" + std::to_string(j) : problem.names[j];
    };
    auto terms = [&](const double* coeffs) {
        std::string out;
        for (std::size_t j = 0; j < q; ++j) {
            const double a = coeffs[j];
            if (a == 0.0) continue;
            out += (a < 0.0 ? " - " : " + ") + fmt(std::abs(a)) + " " + name(j);
        }
        if (out.empty()) out = " 0";
        return out;
    };

    std::ostringstream os;
    os << "maximize\n obj:" << terms(problem.objective.data()) << "\n";
    os << "subject to\n";
    for (std::size_t i = 0; i < problem.eq_b.size(); ++i)
        os << " e" << i << ":" << terms(problem.eq_a.row(i)) << " = " << fmt(problem.eq_b[i])
           << "\n";
    for (std::size_t i = 0; i < problem.ub_b.size(); ++i)
        os << " u" << i << ":" << terms(problem.ub_a.row(i)) << " <= " << fmt(problem.ub_b[i])
           << "\n";
    os << "bounds\n";
    for (std::size_t j = 0; j < q; ++j)
        os << " " << fmt(problem.lo[j]) << " <= " << name(j) << " <= " << fmt(problem.hi[j])
           << "\n";
    os << "end\n";
    return os.str();
}

const Backend& simplex_backend() {
    static const SimplexBackend backend;
    return backend;
}

}  // namespace kelly::lp
