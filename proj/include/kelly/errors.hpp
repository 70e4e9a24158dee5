#pragma once

#include <stdexcept>
#include <string>

namespace kelly {

// Optimization-stage failure (infeasible, unbounded, or iteration-limited
// linear program). Input-validation problems use std::invalid_argument
// instead; the CLI maps the two classes to distinct exit codes.
class SolveError : public std::runtime_error {
  public:
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kelly
