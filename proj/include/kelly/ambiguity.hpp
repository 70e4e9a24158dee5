#pragma once

#include <cstddef>
#include <vector>

#include "kelly/matrix.hpp"

namespace kelly {

// Polyhedral set of scenario distributions: the probability simplex
// intersected with a0 p = d0 and a1 p <= d1. Either block may be empty.
// Construction verifies nonemptiness with a phase-one LP and throws
// std::invalid_argument when the description is inconsistent or the set
// is empty, so downstream solves never see a vacuous inner problem.
class AmbiguitySet {
  public:
    AmbiguitySet(Matrix a0, std::vector<double> d0, Matrix a1, std::vector<double> d1);

    std::size_t m() const { return m_; }
    const Matrix& a0() const { return a0_; }
    const std::vector<double>& d0() const { return d0_; }
    const Matrix& a1() const { return a1_; }
    const std::vector<double>& d1() const { return d1_; }

  private:
    std::size_t m_;
    Matrix a0_;
    std::vector<double> d0_;
    Matrix a1_;
    std::vector<double> d1_;
};

// Per-scenario probability box |p_j - nominal_j| <= radii_j around a nominal
// distribution. Radii are stored absolutely; `relative` derives them from a
// single factor gamma in [0, 1) as radii = gamma * nominal.
struct BoxSpec {
    std::vector<double> nominal;
    std::vector<double> radii;

    static BoxSpec absolute(std::vector<double> nominal, std::vector<double> radii);
    static BoxSpec relative(std::vector<double> nominal, double gamma);
};

// The box as stacked one-sided rows: [I; -I] p <= [radii + nominal;
// radii - nominal], with no equality block.
AmbiguitySet box_to_polyhedron(const BoxSpec& spec);

// Membership within tolerance: on the simplex, equality rows within tol,
// inequality rows within tol of their bounds.
bool contains(const AmbiguitySet& set, const std::vector<double>& p, double tol);

// All vertices of the feasible polytope, deduplicated and sorted
// lexicographically. Exhaustive active-set enumeration, so the scenario
// count is capped at 8; intended as a brute-force optimization oracle.
std::vector<std::vector<double>> vertex_enumerate(const AmbiguitySet& set);

}  // namespace kelly
