#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "frgs/grid.hpp"
#include "frgs/spectral.hpp"
#include "test_util.hpp"

using namespace frgs;

namespace {

// Independent continuum oracle for |f|_{Hdot^alpha}^2 of a decaying f:
// computes fhat by trapezoid quadrature on a wide fine x-grid, then
// (1/2pi) int |xi|^(2 alpha) |fhat|^2 dxi on a fine xi-grid. Never touches
// the FFT path under test.
double seminorm_oracle_1d(const std::function<double(double)>& f, double alpha,
                          double x_half, int x_pts, double xi_half, int xi_pts) {
    const double hx = 2.0 * x_half / (x_pts - 1);
    const double hxi = 2.0 * xi_half / (xi_pts - 1);
    double total = 0.0;
    for (int i = 0; i < xi_pts; ++i) {
        const double xi = -xi_half + i * hxi;
        double re = 0.0, im = 0.0;
        for (int j = 0; j < x_pts; ++j) {
            const double x = -x_half + j * hx;
            const double w = (j == 0 || j == x_pts - 1) ? 0.5 : 1.0;
            const double v = f(x) * w;
            re += v * std::cos(xi * x);
            im -= v * std::sin(xi * x);
        }
        re *= hx;
        im *= hx;
        const double wxi = (i == 0 || i == xi_pts - 1) ? 0.5 : 1.0;
        total += wxi * std::pow(xi * xi, alpha) * (re * re + im * im);
    }
    return total * hxi / (2.0 * M_PI);
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace

TEST_CASE("make_grid basics and preconditions") {
    Grid g = make_grid(1, 40.0, 512);
    CHECK(g.spacing == doctest::Approx(0.078125).epsilon(1e-15));
    CHECK(g.node_count() == 512);
    CHECK(g.max_abs_freq() == doctest::Approx(2.0 * M_PI * 256.0 / 40.0).epsilon(1e-14));

    // frequency lattice symmetric about 0 except the lone Nyquist entry
    int negatives = 0, positives = 0;
    for (double f : g.freqs) {
        if (f > 0) ++positives;
        if (f < 0) ++negatives;
    }
    CHECK(positives == 255);
    CHECK(negatives == 256);

    CHECK_THROWS_AS(make_grid(1, 40.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 40.0, 6), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, -1.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(4, 40.0, 64), std::invalid_argument);

    Grid g3 = make_grid(3, 10.0, 16);
    CHECK(g3.node_count() == 4096);
}

TEST_CASE("fractional laplacian on lattice eigenfunctions") {
    Grid g = make_grid(1, 40.0, 512);
    // The eigenvalue relation holds to 1e-12 relative as long as the mode
    // does not sit many octaves below Nyquist: roundoff in the other modes
    // is amplified by (xi_max/xi_k)^(2 alpha).
    for (int k : {64, 100, 128, 200}) {
        const double xi = 2.0 * M_PI * k / g.box;
        Field f = testutil::sampled(g, [&](const std::array<double, 3>& x) {
            return std::cos(xi * x[0]);
        });
        for (double alpha : {0.5, 1.0, 2.0}) {
            Field lap = apply_fractional_laplacian(f, alpha);
            const double ev = std::pow(xi * xi, alpha);
            double worst = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i)
                worst = std::max(worst, std::abs(lap[i] - ev * f[i]));
            CHECK(worst / ev <= 1e-12);
        }
    }
    // low modes at moderate alpha
    for (int k : {1, 3, 17}) {
        const double xi = 2.0 * M_PI * k / g.box;
        Field f = testutil::sampled(g, [&](const std::array<double, 3>& x) {
            return std::cos(xi * x[0]);
        });
        Field lap = apply_fractional_laplacian(f, 0.5);
        const double ev = std::pow(xi * xi, 0.5);
        double worst = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            worst = std::max(worst, std::abs(lap[i] - ev * f[i]));
        CHECK(worst / ev <= 1e-12);
    }
    for (int k : {8, 17}) {
        const double xi = 2.0 * M_PI * k / g.box;
        Field f = testutil::sampled(g, [&](const std::array<double, 3>& x) {
            return std::cos(xi * x[0]);
        });
        Field lap = apply_fractional_laplacian(f, 1.0);
        const double ev = xi * xi;
        double worst = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            worst = std::max(worst, std::abs(lap[i] - ev * f[i]));
        CHECK(worst / ev <= 1e-12);
    }

    Field c = constant_field(g, 3.5);
    Field lap = apply_fractional_laplacian(c, 0.7);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(lap[i]) <= 1e-12);
}

TEST_CASE("fractional laplacian in 2d") {
    Grid g = make_grid(2, 20.0, 32);
    const double xi1 = 2.0 * M_PI * 2 / g.box;
    const double xi2 = 2.0 * M_PI * 3 / g.box;
    Field f = testutil::sampled(g, [&](const std::array<double, 3>& x) {
        return std::cos(xi1 * x[0]) * std::cos(xi2 * x[1]);
    });
    const double ev = std::pow(xi1 * xi1 + xi2 * xi2, 0.75);
    Field lap = apply_fractional_laplacian(f, 0.75);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        worst = std::max(worst, std::abs(lap[i] - ev * f[i]));
    CHECK(worst / ev <= 1e-12);
}

TEST_CASE("fractional laplacian in 3d") {
    Grid g = make_grid(3, 10.0, 16);
    const double xi1 = 2.0 * M_PI * 1 / g.box;
    const double xi2 = 2.0 * M_PI * 2 / g.box;
    const double xi3 = 2.0 * M_PI * 3 / g.box;
    Field f = testutil::sampled(g, [&](const std::array<double, 3>& x) {
        return std::cos(xi1 * x[0]) * std::cos(xi2 * x[1]) * std::sin(xi3 * x[2]);
    });
    const double ev = std::pow(xi1 * xi1 + xi2 * xi2 + xi3 * xi3, 0.9);
    Field lap = apply_fractional_laplacian(f, 0.9);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        worst = std::max(worst, std::abs(lap[i] - ev * f[i]));
    CHECK(worst / ev <= 1e-12);

    // Parseval in 3d
    std::mt19937_64 rng(8);
    Field r = testutil::random_smooth(g, rng, 4);
    CHECK(std::abs(l2_norm_sq_spectral(r) - mass(r)) <= 1e-12 * mass(r));
}

TEST_CASE("seminorm: single mode closed form and Gaussian quadrature oracle") {
    Grid g = make_grid(1, 40.0, 512);
    const double A = 1.7;
    const int k = 5;
    const double xi = 2.0 * M_PI * k / g.box;
    Field f = testutil::sampled(g, [&](const std::array<double, 3>& x) {
        return A * std::cos(xi * x[0]);
    });
    for (double alpha : {0.5, 1.0, 1.5}) {
        const double expect = std::pow(xi * xi, alpha) * A * A * g.box / 2.0;
        CHECK(rel_err(sobolev_seminorm_sq(f, alpha), expect) <= 1e-12);
    }

    CHECK(sobolev_seminorm_sq(constant_field(g, 2.0), 1.0) <= 1e-20);

    // Gaussian exp(-x^2/2), alpha = 1: oracle = dense continuum quadrature.
    // Closed form sqrt(pi)/2 pins the oracle itself.
    auto gauss = [](double x) { return std::exp(-0.5 * x * x); };
    const double oracle =
        seminorm_oracle_1d(gauss, 1.0, 15.0, 6001, 40.0, 8001);
    CHECK(rel_err(oracle, std::sqrt(M_PI) / 2.0) <= 1e-10);

    Field fg = testutil::sampled(g, [&](const std::array<double, 3>& x) {
        return gauss(x[0]);
    });
    CHECK(rel_err(sobolev_seminorm_sq(fg, 1.0), oracle) <= 1e-8);
}

TEST_CASE("lebesgue norms") {
    Grid g = make_grid(1, 40.0, 512);

    Field c = constant_field(g, 2.5);
    CHECK(rel_err(lebesgue_norm(c, 3.0), 2.5 * std::pow(g.volume(), 1.0 / 3.0)) <= 1e-13);

    const double target = 0.7;
    Field fc = constant_field(g, std::sqrt(target / g.volume()));
    CHECK(rel_err(mass(fc), target) <= 1e-13);

    // Gaussian exp(-x^2): |f|_2 = (pi/2)^(1/4), tail < 1e-10 inside box 40
    Field fg = testutil::sampled(g, [](const std::array<double, 3>& x) {
        return std::exp(-x[0] * x[0]);
    });
    CHECK(rel_err(lebesgue_norm(fg, 2.0), std::pow(M_PI / 2.0, 0.25)) <= 1e-10);

    CHECK_THROWS_AS(lebesgue_norm(c, 0.5), std::invalid_argument);
}

TEST_CASE("multiplier linearity, self-adjointness, semigroup, Parseval") {
    Grid g = make_grid(1, 40.0, 256);
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 5; ++trial) {
        Field f = testutil::random_smooth(g, rng, 12);
        Field h = testutil::random_smooth(g, rng, 12);
        const double alpha = 0.5 + 0.3 * trial;

        // linearity
        Field lhs = apply_fractional_laplacian(Field(g, [&] {
                                                   std::vector<double> v(f.size());
                                                   for (std::size_t i = 0; i < v.size(); ++i)
                                                       v[i] = 2.0 * f[i] - 3.0 * h[i];
                                                   return v;
										       }()),
                                               alpha);
        Field la = apply_fractional_laplacian(f, alpha);
        Field lb = apply_fractional_laplacian(h, alpha);
        double scale = 0.0, diff = 0.0, in_scale = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double want = 2.0 * la[i] - 3.0 * lb[i];
            diff = std::max(diff, std::abs(lhs[i] - want));
            scale = std::max(scale, std::abs(want));
            in_scale = std::max(in_scale, std::abs(2.0 * f[i] - 3.0 * h[i]));
        }
        // relative to the operator scale (backward-stable measure)
        const double op_scale =
            std::pow(g.max_abs_freq() * g.max_abs_freq(), alpha) * in_scale;
        CHECK(diff <= 1e-12 * std::max(scale, op_scale));

        // self-adjointness
        const double ip1 = inner_product(la, h);
        const double ip2 = inner_product(f, lb);
        CHECK(rel_err(ip1, ip2) <= 1e-12);

        // semigroup
        Field two_step = apply_fractional_laplacian(la, 0.75);
        Field one_step = apply_fractional_laplacian(f, alpha + 0.75);
        double d2 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            d2 = std::max(d2, std::abs(two_step[i] - one_step[i]));
            s2 = std::max(s2, std::abs(one_step[i]));
        }
        CHECK(d2 <= 1e-10 * std::max(1.0, s2));

        // Parseval
        CHECK(rel_err(l2_norm_sq_spectral(f), mass(f)) <= 1e-12);
    }
}

TEST_CASE("resample_scaled reproduces exact dilations of lattice modes") {
    Grid g = make_grid(1, 40.0, 128);
    const double xi4 = 2.0 * M_PI * 4 / g.box;
    const double xi2 = 2.0 * M_PI * 2 / g.box;
    Field f = testutil::sampled(g, [&](const std::array<double, 3>& x) {
        return std::cos(xi4 * x[0]);
    });
    Field r = resample_scaled(f, 0.5);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto x = g.node_coords(i);
        worst = std::max(worst, std::abs(r[i] - std::cos(xi2 * x[0])));
    }
    CHECK(worst <= 1e-12);

    CHECK_THROWS_AS(resample_scaled(f, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(resample_scaled(f, 0.0), std::invalid_argument);
}

TEST_CASE("resample_scaled matches analytic samples of a localized profile") {
    Grid g = make_grid(1, 40.0, 256);
    const double w = 1.5;
    Field f = gaussian_field(g, {0.0, 0.0, 0.0}, w);
    Field r = resample_scaled(f, 0.25);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto x = g.node_coords(i);
        const double want = std::exp(-(0.25 * x[0]) * (0.25 * x[0]) / (2.0 * w * w));
        worst = std::max(worst, std::abs(r[i] - want));
    }
    CHECK(worst <= 1e-9);  // limited only by the profile's periodization tail
}

TEST_CASE("resample_scaled in two dimensions matches analytic samples") {
    Grid g = make_grid(2, 20.0, 64);
    const double w = 1.2;
    Field f = gaussian_field(g, {0.0, 0.0, 0.0}, w);
    Field r = resample_scaled(f, 0.5);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto x = g.node_coords(i);
        const double r2 = 0.25 * (x[0] * x[0] + x[1] * x[1]);
        worst = std::max(worst, std::abs(r[i] - std::exp(-r2 / (2.0 * w * w))));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("dilate_lattice contracts node-exactly") {
    Grid g = make_grid(1, 40.0, 256);
    const double w = 2.0;
    Field f = gaussian_field(g, {0.0, 0.0, 0.0}, w);
    Field d = dilate_lattice(f, 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto x = g.node_coords(i);
        const double want =
            std::abs(2.0 * x[0]) <= 0.5 * g.box
                ? std::sqrt(2.0) * std::exp(-(2.0 * x[0]) * (2.0 * x[0]) / (2.0 * w * w))
                : 0.0;
        worst = std::max(worst, std::abs(d[i] - want));
    }
    CHECK(worst <= 1e-12);

    // mass of a box-supported profile is preserved up to the tail
    CHECK(rel_err(mass(d), mass(f)) <= 1e-8);
}

TEST_CASE("translate_cells rolls periodically") {
    Grid g = make_grid(1, 16.0, 16);
    std::mt19937_64 rng(7);
    Field f = testutil::random_smooth(g, rng, 4);
    Field t = translate_cells(f, {5, 0, 0});
    for (int i = 0; i < 16; ++i) CHECK(t[(i + 5) % 16] == f[i]);
    Field back = translate_cells(t, {-5, 0, 0});
    for (int i = 0; i < 16; ++i) CHECK(back[i] == f[i]);

    // 2d roll round-trips and matches direct indexing
    Grid g2 = make_grid(2, 16.0, 16);
    std::mt19937_64 rng2(9);
    Field f2 = testutil::random_smooth(g2, rng2, 4);
    Field t2 = translate_cells(f2, {3, 7, 0});
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            CHECK(t2[static_cast<std::size_t>((i + 3) % 16) * 16 + (j + 7) % 16] ==
                  f2[static_cast<std::size_t>(i) * 16 + j]);
}
