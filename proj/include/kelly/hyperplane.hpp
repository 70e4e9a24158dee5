#pragma once

#include <cstddef>
#include <vector>

namespace kelly::hyperplane {

// Tangent line to log(1+x) at z: y = a*x + b with a = 1/(1+z). Concavity
// makes every tangent an upper bound on the function, so the lower envelope
// of a family of tangents is a piecewise-linear outer approximation.
struct Hyperplane {
    double z;  // tangent point, > -1
    double a;  // slope
    double b;  // intercept
};

// A geometric family of tangents covering [x_min, x_max] whose envelope
// stays within epsilon of log(1+x) on the whole interval. Tangent points
// satisfy (1+z_{i+1}) = (1+alpha)(1+z_i) for the fixed alpha determined by
// epsilon; the final point may overshoot x_max (the iteration stops at the
// first point at or past the right end and keeps it).
struct HyperplaneSet {
    double epsilon = 0.0;
    double x_min = 0.0;
    double x_max = 0.0;
    std::vector<double> points;      // strictly increasing, points[0] == x_min
    std::vector<Hyperplane> planes;  // tangents at the points, same order

    std::size_t count() const { return planes.size(); }

    // min over the family of a*x + b; the piecewise-linear upper envelope.
    double envelope(double x) const;
};

// Tangent coefficients at z. Throws std::invalid_argument for z <= -1.
Hyperplane tangent_at(double z);

// Worst-case gap between log(1+x) and the lower envelope of the tangents at
// x_prev and x, attained where the two tangents intersect. Always >= 0 and
// strictly increasing in x for fixed x_prev.
double pair_error(double x_prev, double x);

// Root beta > 1 of beta - log(beta) - 1 = epsilon. Strictly increasing
// left-hand side, so the root is unique; solved by bracketing bisection run
// to interval exhaustion.
double solve_beta(double epsilon);

// Root alpha > 0 of ((1+alpha)/alpha) * log(1+alpha) = beta. The left-hand
// side decreases to 1 as alpha -> 0+, so a root exists for every beta > 1.
double solve_alpha(double beta);

// The farthest point x' > x_i with pair_error(x_i, x') == epsilon:
// x' = (1+alpha)*x_i + alpha for the alpha matching epsilon.
double next_point(double x_i, double epsilon);

// Minimal tangent family for the interval: start at x_min and take maximal
// steps of pair error exactly epsilon until x_max is reached or passed.
// Requires -1 < x_min <= 0 <= x_max, x_min < x_max, epsilon > 0.
HyperplaneSet generate(double x_min, double x_max, double epsilon);

}  // namespace kelly::hyperplane
