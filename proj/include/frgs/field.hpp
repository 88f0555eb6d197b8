#pragma once

#include <array>
#include <vector>

#include "frgs/grid.hpp"

namespace frgs {

/// One real-valued component sampled on a Grid, row-major. Construction
/// checks the value count and rejects non-finite entries.
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    Field(Grid g, std::vector<double> v);

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

/// m components on a shared grid with target masses c_i and the fractional
/// order alpha of the problem they belong to.
struct State {
    std::vector<Field> components;
    std::vector<double> target_masses;
    double alpha = 1.0;

    State() = default;
    State(std::vector<Field> comps, std::vector<double> masses, double alpha);

    int m() const { return static_cast<int>(components.size()); }
    const Grid& grid() const { return components.front().grid; }
};

Field zero_field(const Grid& grid);
Field constant_field(const Grid& grid, double value);

/// Unnormalized Gaussian exp(-|x - center|^2 / (2 width^2)).
Field gaussian_field(const Grid& grid, const std::array<double, 3>& center,
                     double width);

/// Circular shift by whole cells along each axis.
Field translate_cells(const Field& f, const std::array<int, 3>& shift);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& f);

}  // namespace frgs
