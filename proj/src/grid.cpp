#include "frgs/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace frgs {

std::size_t Grid::node_count() const {
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(points);
    return total;
}

std::array<int, 3> Grid::unflatten(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % points);
        flat /= points;
    }
    return idx;
}

std::array<double, 3> Grid::node_coords(std::size_t flat) const {
    const auto idx = unflatten(flat);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) x[a] = coord(idx[a]);
    return x;
}

double Grid::volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= box;
    return v;
}

double Grid::max_abs_freq() const {
    double m = 0.0;
    for (double f : freqs) m = std::max(m, std::abs(f));
    return m;
}

Grid make_grid(int dim, double box, int points) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("grid dim must be 1, 2 or 3, got " +
                                    std::to_string(dim));
    if (points < 8 || points % 2 != 0)
        throw std::invalid_argument("grid points must be even and >= 8, got " +
                                    std::to_string(points));
    if (!(box > 0.0) || !std::isfinite(box))
        throw std::invalid_argument("grid box must be positive");

    Grid g;
    g.dim = dim;
    g.points = points;
    g.box = box;
    g.spacing = box / points;
    g.freqs.resize(points);
    const double base = 2.0 * M_PI / box;
    for (int k = 0; k < points; ++k) {
        const int k_signed = (k < points / 2) ? k : k - points;
        g.freqs[k] = base * k_signed;
    }
    return g;
}

}  // namespace frgs
