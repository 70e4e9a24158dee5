#include "kelly/hyperplane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kelly::hyperplane {

namespace {

constexpr int kMaxBisection = 200;
// Memory guard only; realistic tolerances produce a few dozen tangents.
constexpr std::size_t kMaxPoints = 10'000'000;

// Bisection on a strictly increasing f with a sign-checked bracket. The
// bracket is widened (doubling the upper end's distance from lo) if the
// initial guess does not straddle the root.
template <typename F>
double bisect(F f, double lo, double hi, const char* what) {
    double flo = f(lo);
    if (flo > 0.0) throw std::invalid_argument(std::string(what) + ": bracket low end above root");
    double fhi = f(hi);
    for (int i = 0; fhi < 0.0; ++i) {
        if (i >= 64) throw std::runtime_error(std::string(what) + ": bracket widening failed");
        hi = lo + 2.0 * (hi - lo);
        fhi = f(hi);
    }
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < kMaxBisection; ++i) {
        mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0) break;
        if (fmid < 0.0)
            lo = mid;
        else
            hi = mid;
        // Run to interval exhaustion: residual-based stops are badly
        // conditioned where f flattens near the root.
        if (hi - lo <= std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid)))
            break;
    }
    return mid;
}

}  // namespace

double HyperplaneSet::envelope(double x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Hyperplane& h : planes) best = std::min(best, h.a * x + h.b);
    return best;
}

Hyperplane tangent_at(double z) {
    if (!(z > -1.0)) throw std::invalid_argument("tangent_at: tangent point must exceed -1");
    const double a = 1.0 / (1.0 + z);
    return {z, a, std::log1p(z) - a * z};
}

double pair_error(double x_prev, double x) {
    if (!(x_prev > -1.0)) throw std::invalid_argument("pair_error: x_prev must exceed -1");
    if (!(x > x_prev)) throw std::invalid_argument("pair_error: x must exceed x_prev");
    // The gap at the tangent intersection is u - log(1+u) for
    // u = ((1+x)/(x-x_prev)) * log((1+x)/(1+x_prev)) - 1, which tends to 0 as
    // the points merge; log1p keeps both factors accurate there.
    const double t = (1.0 + x) / (x - x_prev);
    const double r = std::log1p((x - x_prev) / (1.0 + x_prev));
    const double u = t * r - 1.0;
    return std::max(0.0, u - std::log1p(u));
}

double solve_beta(double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("solve_beta: epsilon must be positive");
    // beta - log(beta) - 1 >= (beta-1)^2/(2*beta) near 1, so the root lies
    // below 1 + 2*sqrt(eps) + 2*eps; bisect() re-widens if that ever fails.
    const double hi = 1.0 + 2.0 * std::sqrt(epsilon) + 2.0 * epsilon;
    return bisect([epsilon](double b) { return b - std::log(b) - 1.0 - epsilon; },
                  1.0 + 1e-15, hi, "solve_beta");
}

double solve_alpha(double beta) {
    if (!(beta > 1.0)) throw std::invalid_argument("solve_alpha: beta must exceed 1");
    const double hi = std::max(2.0 * (beta - 1.0), 1.0);
    return bisect([beta](double a) { return (1.0 + a) / a * std::log1p(a) - beta; }, 1e-18, hi,
                  "solve_alpha");
}

double next_point(double x_i, double epsilon) {
    if (!(x_i > -1.0)) throw std::invalid_argument("next_point: x_i must exceed -1");
    const double alpha = solve_alpha(solve_beta(epsilon));
    return (1.0 + alpha) * x_i + alpha;
}

HyperplaneSet generate(double x_min, double x_max, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("generate: epsilon must be positive");
    if (!(x_min > -1.0)) throw std::invalid_argument("generate: x_min must exceed -1");
    if (!(x_min <= 0.0 && 0.0 <= x_max))
        throw std::invalid_argument("generate: interval must contain 0");
    if (!(x_min < x_max)) throw std::invalid_argument("generate: degenerate interval");

    const double alpha = solve_alpha(solve_beta(epsilon));
    const double expected = (std::log1p(x_max) - std::log1p(x_min)) / std::log1p(alpha);
    if (expected > static_cast<double>(kMaxPoints))
        throw std::invalid_argument(
            "generate: epsilon is too small for the interval (tangent count guard)");

    HyperplaneSet set;
    set.epsilon = epsilon;
    set.x_min = x_min;
    set.x_max = x_max;
    set.points.push_back(x_min);
    while (set.points.back() < x_max) {
        if (set.points.size() >= kMaxPoints)
            throw std::invalid_argument("generate: tangent count guard exceeded");
        set.points.push_back((1.0 + alpha) * set.points.back() + alpha);
    }
    set.planes.reserve(set.points.size());
    for (double z : set.points) set.planes.push_back(tangent_at(z));
    return set;
}

}  // namespace kelly::hyperplane
