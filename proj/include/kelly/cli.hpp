#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kelly/ambiguity.hpp"
#include "kelly/matrix.hpp"
#include "kelly/weights.hpp"

namespace kelly::cli {

// Config field that may be a scalar (broadcast across assets) or a full
// per-asset vector; unset falls back to a caller-supplied default.
struct Broadcastable {
    std::optional<double> scalar;
    std::optional<std::vector<double>> vec;

    std::vector<double> realize(std::size_t n, double fallback) const;
};

// Box ambiguity straight from the config: radii either explicit or as a
// relative factor of the nominal distribution.
struct BoxConfig {
    std::optional<std::vector<double>> nominal;  // unset: the scenario nominal
    std::optional<std::vector<double>> radii;
    std::optional<double> gamma;
};

// Explicit polyhedral ambiguity from the config.
struct PolyConfig {
    Matrix a0;
    std::vector<double> d0;
    Matrix a1;
    std::vector<double> d1;
    std::optional<std::vector<double>> nominal;
};

struct RunConfig {
    std::string prices_path;  // resolved against the config file's directory
    std::optional<BoxConfig> box;
    std::optional<PolyConfig> polyhedron;
    double epsilon = 0.01;
    double leverage = 1.0;
    Broadcastable k_min;           // default 0 per asset
    Broadcastable k_max;           // default leverage/n per asset
    Broadcastable costs;           // default 1e-4 per asset
    double risk_free_total = 0.01; // spread evenly over a segment's periods
    double initial_wealth = 1.0;
    std::optional<std::size_t> split;  // in-sample period count
};

// Parse and validate a config file. Throws std::invalid_argument with a
// field-level message on any problem, including unknown keys.
RunConfig load_config(const std::string& path);

// Net weights from a JSON file holding a "k" array; extra keys are ignored
// so an optimizer output file can be fed back in directly.
Weights load_weights(const std::string& path);

// %.12g with negative zero normalized; every number the CLI emits goes
// through here so reruns are byte-identical.
std::string format_number(double x);
std::string json_array(const std::vector<double>& xs);

// Full command-line entry point. Returns the process exit code:
// 0 success, 2 input or config error, 3 solver or simulation failure.
int run_cli(int argc, const char* const* argv);

}  // namespace kelly::cli
