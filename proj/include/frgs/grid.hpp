#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace frgs {

/// Uniform periodic box [-box/2, box/2)^dim with the same even point count
/// per axis. Frequencies are stored in FFT layout order, i.e. index k maps
/// to 2*pi*k'/box with k' = k for k < n/2 and k' = k - n otherwise, so the
/// lattice is {-n/2, ..., n/2 - 1} up to ordering.
struct Grid {
    int dim = 0;
    int points = 0;     // n, per axis
    double box = 0.0;   // edge length, same in every dimension
    double spacing = 0.0;
    std::vector<double> freqs;  // per-axis frequency table, FFT order

    std::size_t node_count() const;

    /// Centered coordinate of a per-axis index: -box/2 + i*spacing.
    double coord(int index) const { return -0.5 * box + index * spacing; }

    /// Decompose a flat row-major node index into per-axis indices.
    std::array<int, 3> unflatten(std::size_t flat) const;

    /// Centered coordinates of a flat node index (unused axes zeroed).
    std::array<double, 3> node_coords(std::size_t flat) const;

    double volume() const;
    double max_abs_freq() const;

    bool same_layout(const Grid& other) const {
        return dim == other.dim && points == other.points && box == other.box;
    }
};

/// Builds a Grid; rejects dim outside {1,2,3}, odd or < 8 point counts and
/// non-positive boxes.
Grid make_grid(int dim, double box, int points);

}  // namespace frgs
