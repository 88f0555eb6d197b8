#include "frgs/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace frgs {

namespace {

// Forward/backward r2c plans plus work buffers for one (dim, n) layout.
// Plans use FFTW_ESTIMATE: deterministic algorithm choice, so identical
// inputs give bit-identical outputs across runs.
struct PlanSet {
    int dim = 0;
    int n = 0;
    std::size_t real_size = 0;
    std::size_t cplx_size = 0;
    double* rbuf = nullptr;
    fftw_complex* cbuf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    PlanSet(int dim_, int n_) : dim(dim_), n(n_) {
        real_size = 1;
        for (int a = 0; a < dim; ++a) real_size *= static_cast<std::size_t>(n);
        cplx_size = real_size / n * (n / 2 + 1);
        rbuf = fftw_alloc_real(real_size);
        cbuf = fftw_alloc_complex(cplx_size);
        int dims[3] = {n, n, n};
        fwd = fftw_plan_dft_r2c(dim, dims, rbuf, cbuf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r(dim, dims, cbuf, rbuf, FFTW_ESTIMATE);
        if (!fwd || !bwd) throw std::runtime_error("fftw plan creation failed");
    }
    ~PlanSet() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(rbuf);
        fftw_free(cbuf);
    }
    PlanSet(const PlanSet&) = delete;
    PlanSet& operator=(const PlanSet&) = delete;
};

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

PlanSet& plans_for(const Grid& g) {
    static std::map<std::pair<int, int>, std::unique_ptr<PlanSet>> cache;
    const auto key = std::make_pair(g.dim, g.points);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<PlanSet>(g.dim, g.points)).first;
    return *it->second;
}

// Walks the r2c spectrum; fn(flat_complex_index, xi_squared, pair_weight)
// where pair_weight is 2 for coefficients representing a conjugate pair and
// 1 for the self-conjugate last-axis indices 0 and n/2.
template <typename Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
    const int n = g.points;
    const int nc = n / 2 + 1;
    const double base = 2.0 * M_PI / g.box;
    std::size_t count = 1;
    for (int a = 0; a < g.dim - 1; ++a) count *= static_cast<std::size_t>(n);

    std::size_t flat = 0;
    for (std::size_t outer = 0; outer < count; ++outer) {
        double xi_outer_sq = 0.0;
        std::size_t rem = outer;
        for (int a = g.dim - 2; a >= 0; --a) {
            const int k = static_cast<int>(rem % n);
            rem /= n;
            const double xi = g.freqs[k];
            xi_outer_sq += xi * xi;
        }
        for (int k = 0; k < nc; ++k, ++flat) {
            const double xi_last = base * k;  // Nyquist magnitude matches -n/2
            const double xi_sq = xi_outer_sq + xi_last * xi_last;
            const double weight = (k == 0 || k == n / 2) ? 1.0 : 2.0;
            fn(flat, xi_sq, weight);
        }
    }
}

// F^-1[ m(|xi|^2) F[f] ]; multiplier must be real and even by construction.
template <typename Mult>
Field apply_multiplier(const Field& f, Mult&& mult) {
    std::lock_guard<std::mutex> lock(cache_mutex());
    PlanSet& ps = plans_for(f.grid);
    std::memcpy(ps.rbuf, f.values.data(), ps.real_size * sizeof(double));
    fftw_execute(ps.fwd);
    for_each_mode(f.grid, [&](std::size_t i, double xi_sq, double) {
        const double m = mult(xi_sq);
        ps.cbuf[i][0] *= m;
        ps.cbuf[i][1] *= m;
    });
    fftw_execute(ps.bwd);
    const double scale = 1.0 / static_cast<double>(ps.real_size);
    std::vector<double> out(ps.real_size);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ps.rbuf[i] * scale;
    return Field(f.grid, std::move(out));
}

// (h^N / n^N) sum_xi weight * m(|xi|^2) * |fhat(xi)|^2.
template <typename Mult>
double spectral_sum(const Field& f, Mult&& mult) {
    std::lock_guard<std::mutex> lock(cache_mutex());
    PlanSet& ps = plans_for(f.grid);
    std::memcpy(ps.rbuf, f.values.data(), ps.real_size * sizeof(double));
    fftw_execute(ps.fwd);
    double sum = 0.0;
    for_each_mode(f.grid, [&](std::size_t i, double xi_sq, double weight) {
        const double re = ps.cbuf[i][0];
        const double im = ps.cbuf[i][1];
        sum += weight * mult(xi_sq) * (re * re + im * im);
    });
    double norm = 1.0;
    for (int a = 0; a < f.grid.dim; ++a) norm *= f.grid.spacing / f.grid.points;
    return sum * norm;
}

double cell_volume(const Grid& g) {
    double v = 1.0;
    for (int a = 0; a < g.dim; ++a) v *= g.spacing;
    return v;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
}

// Periodic trig-interpolation kernel for even n: sin(n pi z/L) cot(pi z/L)/n.
double dirichlet_kernel(double z, double box, int n) {
    z -= box * std::round(z / box);
    if (z == 0.0) return 1.0;
    const double a = M_PI * z / box;
    return std::sin(n * a) * std::cos(a) / (n * std::sin(a));
}

// Dense per-axis application of an n-by-n resampling matrix.
std::vector<double> apply_axis_matrix(const std::vector<double>& in, int n,
                                      int dim, int axis,
                                      const std::vector<double>& w) {
    std::size_t stride = 1;
    for (int a = dim - 1; a > axis; --a) stride *= static_cast<std::size_t>(n);
    std::size_t blocks = in.size() / (stride * n);
    std::vector<double> out(in.size(), 0.0);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t base = b * stride * n;
        for (int p = 0; p < n; ++p) {
            const double* wrow = w.data() + static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j) {
                const double wv = wrow[j];
                if (wv == 0.0) continue;
                const std::size_t src = base + static_cast<std::size_t>(j) * stride;
                const std::size_t dst = base + static_cast<std::size_t>(p) * stride;
                for (std::size_t s = 0; s < stride; ++s)
                    out[dst + s] += wv * in[src + s];
            }
        }
    }
    return out;
}

}  // namespace

Field apply_fractional_laplacian(const Field& f, double alpha) {
    check_alpha(alpha);
    return apply_multiplier(f, [alpha](double xi_sq) {
        return xi_sq == 0.0 ? 0.0 : std::pow(xi_sq, alpha);
    });
}

Field apply_resolvent(const Field& f, double tau, double alpha) {
    check_alpha(alpha);
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    return apply_multiplier(f, [tau, alpha](double xi_sq) {
        const double lam = xi_sq == 0.0 ? 0.0 : std::pow(xi_sq, alpha);
        return 1.0 / (1.0 + tau * lam);
    });
}

double sobolev_seminorm_sq(const Field& f, double alpha) {
    check_alpha(alpha);
    return spectral_sum(f, [alpha](double xi_sq) {
        return xi_sq == 0.0 ? 0.0 : std::pow(xi_sq, alpha);
    });
}

double l2_norm_sq_spectral(const Field& f) {
    return spectral_sum(f, [](double) { return 1.0; });
}

double lebesgue_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lebesgue_norm requires p >= 1");
    double sum = 0.0;
    if (p == 2.0) {
        for (double v : f.values) sum += v * v;
    } else if (p == 1.0) {
        for (double v : f.values) sum += std::abs(v);
    } else {
        for (double v : f.values) sum += std::pow(std::abs(v), p);
    }
    return std::pow(sum * cell_volume(f.grid), 1.0 / p);
}

double mass(const Field& f) {
    double sum = 0.0;
    for (double v : f.values) sum += v * v;
    return sum * cell_volume(f.grid);
}

double inner_product(const Field& f, const Field& g) {
    if (!f.grid.same_layout(g.grid))
        throw std::invalid_argument("field grids differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        sum += f.values[i] * g.values[i];
    return sum * cell_volume(f.grid);
}

Field resample_scaled(const Field& f, double lambda) {
    if (!(lambda > 0.0) || lambda > 1.0)
        throw std::invalid_argument("resample_scaled requires lambda in (0, 1]");
    const Grid& g = f.grid;
    if (lambda == 1.0) return f;
    const int n = g.points;
    std::vector<double> w(static_cast<std::size_t>(n) * n);
    for (int p = 0; p < n; ++p) {
        const double y = lambda * g.coord(p);
        for (int j = 0; j < n; ++j)
            w[static_cast<std::size_t>(p) * n + j] =
                dirichlet_kernel(y - g.coord(j), g.box, n);
    }
    std::vector<double> vals = f.values;
    for (int axis = 0; axis < g.dim; ++axis)
        vals = apply_axis_matrix(vals, n, g.dim, axis, w);
    return Field(g, std::move(vals));
}

Field dilate_lattice(const Field& f, int k) {
    if (k < 1) throw std::invalid_argument("dilate_lattice requires k >= 1");
    const Grid& g = f.grid;
    if (k == 1) return f;
    const int n = g.points;
    const double scale = std::pow(static_cast<double>(k), 0.5 * g.dim);
    std::vector<double> out(f.values.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto idx = g.unflatten(i);
        std::size_t src = 0;
        bool inside = true;
        for (int a = 0; a < g.dim; ++a) {
            const int j = n / 2 + k * (idx[a] - n / 2);
            if (j < 0 || j >= n) {
                inside = false;
                break;
            }
            src = src * n + static_cast<std::size_t>(j);
        }
        if (inside) out[i] = scale * f.values[src];
    }
    return Field(g, std::move(out));
}

}  // namespace frgs
