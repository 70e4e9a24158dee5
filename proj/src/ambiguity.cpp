#include "kelly/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kelly/lp.hpp"

namespace kelly {

namespace {

void require_simplex(const std::vector<double>& p, const char* what) {
    if (p.empty()) throw std::invalid_argument(std::string(what) + ": empty probability vector");
    double sum = 0.0;
    for (double v : p) {
        if (v < -1e-9) throw std::invalid_argument(std::string(what) + ": negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(what) + ": probabilities do not sum to 1");
}

// Unique solution of the stacked linear system rows*p = rhs if one exists.
// Gaussian elimination with partial pivoting; returns false when the system
// is rank-deficient or inconsistent within tol.
bool solve_square(std::vector<std::vector<double>>& aug, std::size_t m, double tol,
                  std::vector<double>& out) {
    const std::size_t rows = aug.size();
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < m && rank < rows; ++col) {
        std::size_t piv = rank;
        for (std::size_t r = rank + 1; r < rows; ++r)
            if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
        if (std::abs(aug[piv][col]) <= tol) continue;
        std::swap(aug[rank], aug[piv]);
        const double d = aug[rank][col];
        for (std::size_t j = col; j <= m; ++j) aug[rank][j] /= d;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank) continue;
            const double f = aug[r][col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j <= m; ++j) aug[r][j] -= f * aug[rank][j];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    if (rank < m) return false;
    for (std::size_t r = rank; r < rows; ++r)
        if (std::abs(aug[r][m]) > tol) return false;  // inconsistent subset
    out.assign(m, 0.0);
    for (std::size_t r = 0; r < rank; ++r) out[pivot_col[r]] = aug[r][m];
    return true;
}

}  // namespace

AmbiguitySet::AmbiguitySet(Matrix a0, std::vector<double> d0, Matrix a1, std::vector<double> d1)
    : a0_(std::move(a0)), d0_(std::move(d0)), a1_(std::move(a1)), d1_(std::move(d1)) {
    if (a0_.rows() != d0_.size())
        throw std::invalid_argument("ambiguity: equality row count mismatch");
    if (a1_.rows() != d1_.size())
        throw std::invalid_argument("ambiguity: inequality row count mismatch");
    m_ = a0_.rows() > 0 ? a0_.cols() : a1_.cols();
    if (m_ == 0) throw std::invalid_argument("ambiguity: no scenario dimension");
    if ((a0_.rows() > 0 && a0_.cols() != m_) || (a1_.rows() > 0 && a1_.cols() != m_))
        throw std::invalid_argument("ambiguity: column counts differ between blocks");
    for (const Matrix* mat : {&a0_, &a1_})
        for (std::size_t i = 0; i < mat->rows(); ++i)
            for (std::size_t j = 0; j < mat->cols(); ++j)
                if (!std::isfinite((*mat)(i, j)))
                    throw std::invalid_argument("ambiguity: non-finite coefficient");
    for (const std::vector<double>* v : {&d0_, &d1_})
        for (double d : *v)
            if (!std::isfinite(d)) throw std::invalid_argument("ambiguity: non-finite bound");

    // Fail fast on an empty set: one phase-one solve at construction beats a
    // confusing infeasibility deep inside a later robust solve.
    lp::LpProblem feas;
    feas.objective.assign(m_, 0.0);
    feas.lo.assign(m_, 0.0);
    feas.hi.assign(m_, lp::kInf);
    feas.eq_a = Matrix(1 + a0_.rows(), m_);
    feas.eq_b.assign(1 + a0_.rows(), 0.0);
    for (std::size_t j = 0; j < m_; ++j) feas.eq_a(0, j) = 1.0;
    feas.eq_b[0] = 1.0;
    for (std::size_t i = 0; i < a0_.rows(); ++i) {
        for (std::size_t j = 0; j < m_; ++j) feas.eq_a(i + 1, j) = a0_(i, j);
        feas.eq_b[i + 1] = d0_[i];
    }
    feas.ub_a = a1_;
    feas.ub_b = d1_;
    if (!lp::check_feasibility(feas))
        throw std::invalid_argument("ambiguity: the distribution set is empty");
}

BoxSpec BoxSpec::absolute(std::vector<double> nominal, std::vector<double> radii) {
    require_simplex(nominal, "box");
    if (radii.size() != nominal.size())
        throw std::invalid_argument("box: radii length differs from nominal length");
    for (double r : radii)
        if (!(r >= 0.0)) throw std::invalid_argument("box: negative radius");
    return {std::move(nominal), std::move(radii)};
}

BoxSpec BoxSpec::relative(std::vector<double> nominal, double gamma) {
    require_simplex(nominal, "box");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("box: relative factor must lie in [0, 1)");
    std::vector<double> radii(nominal.size());
    for (std::size_t j = 0; j < nominal.size(); ++j) radii[j] = gamma * nominal[j];
    return {std::move(nominal), std::move(radii)};
}

AmbiguitySet box_to_polyhedron(const BoxSpec& spec) {
    const std::size_t m = spec.nominal.size();
    if (spec.radii.size() != m)
        throw std::invalid_argument("box: radii length differs from nominal length");
    Matrix a1(2 * m, m);
    std::vector<double> d1(2 * m);
    for (std::size_t j = 0; j < m; ++j) {
        a1(j, j) = 1.0;
        d1[j] = spec.radii[j] + spec.nominal[j];
        a1(m + j, j) = -1.0;
        d1[m + j] = spec.radii[j] - spec.nominal[j];
    }
    return AmbiguitySet(Matrix(), {}, std::move(a1), std::move(d1));
}

bool contains(const AmbiguitySet& set, const std::vector<double>& p, double tol) {
    if (p.size() != set.m())
        throw std::invalid_argument("contains: vector length differs from scenario count");
    double sum = 0.0;
    for (double v : p) {
        if (v < -tol) return false;
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol) return false;
    for (std::size_t i = 0; i < set.a0().rows(); ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < set.m(); ++j) dot += set.a0()(i, j) * p[j];
        if (std::abs(dot - set.d0()[i]) > tol) return false;
    }
    for (std::size_t i = 0; i < set.a1().rows(); ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < set.m(); ++j) dot += set.a1()(i, j) * p[j];
        if (dot > set.d1()[i] + tol) return false;
    }
    return true;
}

std::vector<std::vector<double>> vertex_enumerate(const AmbiguitySet& set) {
    const std::size_t m = set.m();
    if (m > 8)
        throw std::invalid_argument("vertex_enumerate: scenario count exceeds the enumeration cap (8)");
    constexpr double tol = 1e-9;

    // Equality rows: the simplex constraint plus any a0 block.
    std::vector<std::vector<double>> eq_rows;
    {
        std::vector<double> ones(m + 1, 1.0);
        eq_rows.push_back(ones);  // sum p = 1 (rhs cell already 1)
        for (std::size_t i = 0; i < set.a0().rows(); ++i) {
            std::vector<double> row(m + 1);
            for (std::size_t j = 0; j < m; ++j) row[j] = set.a0()(i, j);
            row[m] = set.d0()[i];
            eq_rows.push_back(std::move(row));
        }
    }

    // Rank of the equality block decides how many inequalities must be
    // active to pin a vertex.
    std::size_t eq_rank = 0;
    {
        std::vector<std::vector<double>> aug = eq_rows;
        std::size_t rank = 0;
        for (std::size_t col = 0; col < m && rank < aug.size(); ++col) {
            std::size_t piv = rank;
            for (std::size_t r = rank + 1; r < aug.size(); ++r)
                if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
            if (std::abs(aug[piv][col]) <= tol) continue;
            std::swap(aug[rank], aug[piv]);
            for (std::size_t r = rank + 1; r < aug.size(); ++r) {
                const double f = aug[r][col] / aug[rank][col];
                if (f == 0.0) continue;
                for (std::size_t j = col; j <= m; ++j) aug[r][j] -= f * aug[rank][j];
            }
            ++rank;
        }
        eq_rank = rank;
    }

    // Inequality pool: the a1 rows and the nonnegativity facets.
    std::vector<std::vector<double>> pool;
    for (std::size_t i = 0; i < set.a1().rows(); ++i) {
        std::vector<double> row(m + 1);
        for (std::size_t j = 0; j < m; ++j) row[j] = set.a1()(i, j);
        row[m] = set.d1()[i];
        pool.push_back(std::move(row));
    }
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> row(m + 1, 0.0);
        row[j] = -1.0;
        pool.push_back(std::move(row));
    }

    const std::size_t s = m > eq_rank ? m - eq_rank : 0;
    std::vector<std::vector<double>> found;
    std::vector<double> candidate;

    if (s > pool.size()) return found;  // cannot pin a point; set is degenerate

    std::vector<std::size_t> pick(s);
    for (std::size_t i = 0; i < s; ++i) pick[i] = i;
    for (;;) {
        std::vector<std::vector<double>> aug = eq_rows;
        for (std::size_t i : pick) aug.push_back(pool[i]);
        if (solve_square(aug, m, tol, candidate) && contains(set, candidate, tol))
            found.push_back(candidate);

        // next combination in lexicographic order
        if (s == 0) break;
        bool advanced = false;
        std::size_t i = s;
        while (i-- > 0) {
            if (pick[i] + (s - i) < pool.size()) {
                ++pick[i];
                for (std::size_t r = i + 1; r < s; ++r) pick[r] = pick[r - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }

    std::sort(found.begin(), found.end());
    std::vector<std::vector<double>> unique;
    for (const auto& v : found) {
        bool dup = false;
        if (!unique.empty()) {
            dup = true;
            for (std::size_t j = 0; j < m; ++j)
                if (std::abs(unique.back()[j] - v[j]) > tol) {
                    dup = false;
                    break;
                }
        }
        if (!dup) unique.push_back(v);
    }
    return unique;
}

}  // namespace kelly
