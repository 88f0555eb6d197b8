#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "frgs/grid.hpp"
#include "frgs/minimizer.hpp"
#include "frgs/nonlinearity.hpp"

namespace frgs {

/// Parse/validation failure; remembers the offending line (0 = whole file).
struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_, const std::string& what_)
        : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what_
                                       : what_),
          line(line_) {}
};

struct RunConfig {
    // [problem]
    int dim = 1;
    double alpha = 1.0;
    int components = 1;
    std::vector<double> masses;
    double box = 40.0;
    int grid_points = 512;

    // [nonlinearity]
    NonlinearitySpec spec;

    // [solver]
    SolverConfig solver;

    // [scan]
    std::vector<double> fractions{0.25, 0.5, 0.75};

    // [dilate]
    std::vector<double> lambdas;          // empty = default dyadic grid
    std::optional<double> dilate_width;   // default box/40

    // [diagnose]
    std::vector<double> radii;            // empty = default ladder
    int snapshots = 8;
    std::optional<double> eps_v;          // absolute; default 0.05 * total
    std::optional<double> eps_d;          // absolute; default 0.10 * total

    // [check]
    long check_samples = 4096;

    Grid make_problem_grid() const { return make_grid(dim, box, grid_points); }
    double subcritical_bound() const { return 2.0 + 4.0 * alpha / dim; }
};

struct ConfigOverride {
    std::string section;
    std::string key;
    std::string value;
};

/// Parses the line-based `key = value` document (sections [problem],
/// [nonlinearity], [solver], [scan], [dilate], [diagnose], [check]; `#`
/// comments; comma-separated lists; repeated `term` lines accumulate).
/// Overrides replace matching keys before validation. Periodic-coefficient
/// tables are loaded relative to `base_dir`. With enforce_subcritical the
/// term growth bound 2 + 4 alpha / dim is checked and violations are parse
/// errors; the `check` subcommand parses with it off.
RunConfig parse_config(const std::string& text,
                       const std::vector<ConfigOverride>& overrides = {},
                       bool enforce_subcritical = true,
                       const std::string& base_dir = ".");

}  // namespace frgs
