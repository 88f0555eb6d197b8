#include "frgs/field.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace frgs {

namespace {

void check_finite(const std::vector<double>& values) {
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("field contains a non-finite value");
}

}  // namespace

Field::Field(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.node_count())
        throw std::invalid_argument("field value count does not match the grid");
    check_finite(values);
}

State::State(std::vector<Field> comps, std::vector<double> masses, double alpha_)
    : components(std::move(comps)), target_masses(std::move(masses)), alpha(alpha_) {
    if (components.empty())
        throw std::invalid_argument("state needs at least one component");
    if (target_masses.size() != components.size())
        throw std::invalid_argument("one target mass per component required");
    for (double c : target_masses)
        if (!(c > 0.0)) throw std::invalid_argument("target masses must be positive");
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    for (const Field& f : components)
        if (!f.grid.same_layout(components.front().grid))
            throw std::invalid_argument("all components must share one grid");
}

Field zero_field(const Grid& grid) {
    return Field(grid, std::vector<double>(grid.node_count(), 0.0));
}

Field constant_field(const Grid& grid, double value) {
    return Field(grid, std::vector<double>(grid.node_count(), value));
}

Field gaussian_field(const Grid& grid, const std::array<double, 3>& center,
                     double width) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be positive");
    std::vector<double> v(grid.node_count());
    const double inv = 1.0 / (2.0 * width * width);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto x = grid.node_coords(i);
        double r2 = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
            const double d = x[a] - center[a];
            r2 += d * d;
        }
        v[i] = std::exp(-r2 * inv);
    }
    return Field(grid, std::move(v));
}

Field translate_cells(const Field& f, const std::array<int, 3>& shift) {
    const Grid& g = f.grid;
    const int n = g.points;
    std::vector<double> out(f.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto idx = g.unflatten(i);
        std::size_t src = 0;
        for (int a = 0; a < g.dim; ++a) {
            int j = (idx[a] - shift[a]) % n;
            if (j < 0) j += n;
            src = src * n + static_cast<std::size_t>(j);
        }
        out[i] = f.values[src];
    }
    return Field(g, std::move(out));
}

Field operator+(const Field& a, const Field& b) {
    if (!a.grid.same_layout(b.grid))
        throw std::invalid_argument("field grids differ");
    std::vector<double> v(a.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values[i] + b.values[i];
    return Field(a.grid, std::move(v));
}

Field operator-(const Field& a, const Field& b) {
    if (!a.grid.same_layout(b.grid))
        throw std::invalid_argument("field grids differ");
    std::vector<double> v(a.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values[i] - b.values[i];
    return Field(a.grid, std::move(v));
}

Field operator*(double s, const Field& f) {
    std::vector<double> v(f.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * f.values[i];
    return Field(f.grid, std::move(v));
}

}  // namespace frgs
