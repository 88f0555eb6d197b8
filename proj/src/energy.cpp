#include "frgs/energy.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

#include "frgs/spectral.hpp"

namespace frgs {

namespace {

double cell_volume(const Grid& g) {
    double v = 1.0;
    for (int a = 0; a < g.dim; ++a) v *= g.spacing;
    return v;
}

// |x|^-t coefficients are regularized with eps = h/2 at the origin node.
double origin_eps(const Grid& g) { return 0.5 * g.spacing; }

}  // namespace

double potential_integral(const State& state, const NonlinearitySpec& spec) {
    const Grid& g = state.grid();
    const double eps = origin_eps(g);
    const int m = state.m();
    std::vector<double> u(m);
    double sum = 0.0;
    for (std::size_t node = 0; node < g.node_count(); ++node) {
        const auto x = g.node_coords(node);
        for (int i = 0; i < m; ++i) u[i] = state.components[i][node];
        sum += eval_F(spec, std::span<const double>(x.data(), g.dim), u, eps);
    }
    return sum * cell_volume(g);
}

Field sample_dF(const State& state, const NonlinearitySpec& spec, int j) {
    const Grid& g = state.grid();
    const double eps = origin_eps(g);
    const int m = state.m();
    std::vector<double> u(m);
    std::vector<double> out(g.node_count());
    for (std::size_t node = 0; node < g.node_count(); ++node) {
        const auto x = g.node_coords(node);
        for (int i = 0; i < m; ++i) u[i] = state.components[i][node];
        out[node] = eval_dF(spec, j, std::span<const double>(x.data(), g.dim), u, eps);
    }
    return Field(g, std::move(out));
}

EnergyBreakdown energy(const State& state, const NonlinearitySpec& spec) {
    EnergyBreakdown e;
    for (const Field& f : state.components)
        e.kinetic += 0.5 * sobolev_seminorm_sq(f, state.alpha);
    e.potential = potential_integral(state, spec);
    e.total = e.kinetic - e.potential;
    return e;
}

std::vector<Field> l2_gradient(const State& state, const NonlinearitySpec& spec) {
    std::vector<Field> grad;
    grad.reserve(state.m());
    for (int i = 0; i < state.m(); ++i) {
        Field lap = apply_fractional_laplacian(state.components[i], state.alpha);
        Field df = sample_dF(state, spec, i);
        grad.push_back(lap - df);
    }
    return grad;
}

std::vector<double> lagrange_multipliers(const State& state,
                                         const NonlinearitySpec& spec) {
    std::vector<double> lambdas(state.m());
    for (int i = 0; i < state.m(); ++i) {
        const Field df = sample_dF(state, spec, i);
        const double kinetic_i = sobolev_seminorm_sq(state.components[i], state.alpha);
        lambdas[i] =
            (inner_product(df, state.components[i]) - kinetic_i) / state.target_masses[i];
    }
    return lambdas;
}

double el_residual(const State& state, const NonlinearitySpec& spec) {
    const auto lambdas = lagrange_multipliers(state, spec);
    double total = 0.0;
    for (int i = 0; i < state.m(); ++i) {
        Field lap = apply_fractional_laplacian(state.components[i], state.alpha);
        Field df = sample_dF(state, spec, i);
        double sum = 0.0;
        for (std::size_t node = 0; node < lap.size(); ++node) {
            const double r = lap[node] + lambdas[i] * state.components[i][node] - df[node];
            sum += r * r;
        }
        total += sum * cell_volume(state.grid());
    }
    return std::sqrt(total);
}

double gn_quotient(const Field& f, double alpha, double l) {
    const int dim = f.grid.dim;
    if (!(l > 0.0) || !(l < 4.0 * alpha / dim))
        throw std::invalid_argument("gn_quotient requires 0 < l < 4*alpha/N");
    const double semi_sq = sobolev_seminorm_sq(f, alpha);
    const double m2 = mass(f);
    if (semi_sq <= 1e-28 * std::max(1.0, m2))
        throw std::invalid_argument("gn_quotient is undefined for constant or zero fields");
    const double num = std::pow(lebesgue_norm(f, l + 2.0), l + 2.0);
    const double a = (2.0 * alpha * (l + 2.0) - dim * l) / (2.0 * alpha);
    const double b = dim * l / (2.0 * alpha);
    return num / (std::pow(std::sqrt(m2), a) * std::pow(std::sqrt(semi_sq), b));
}

std::vector<double> default_dilation_lambdas() {
    std::vector<double> l;
    double v = 1.0;
    for (int k = 1; k <= 10; ++k) {
        v *= 0.5;
        l.push_back(v);
    }
    return l;
}

DilationTable dilation_test(const std::vector<double>& masses,
                            const NonlinearitySpec& spec, const Grid& grid,
                            double alpha, const Field& profile,
                            const std::vector<double>& lambdas) {
    if (masses.size() != static_cast<std::size_t>(spec.m))
        throw std::invalid_argument("one mass per spec component required");
    if (!profile.grid.same_layout(grid))
        throw std::invalid_argument("profile must live on the given grid");
    const double pm = mass(profile);
    if (std::abs(pm - 1.0) > 1e-6)
        throw std::invalid_argument("dilation profile must have unit mass");

    const double guard = 0.45 * grid.box;
    DilationTable table;
    const double half_dim = 0.5 * grid.dim;

    for (double lambda : lambdas) {
        if (!(lambda > 0.0) || lambda > 1.0)
            throw std::invalid_argument("dilation lambdas must lie in (0, 1]");
        Field p = resample_scaled(profile, lambda);
        const double amp = std::pow(lambda, half_dim);
        for (double& v : p.values) v *= amp;

        double tail = 0.0, total = 0.0;
        for (std::size_t node = 0; node < p.size(); ++node) {
            const auto x = grid.node_coords(node);
            double linf = 0.0;
            for (int a = 0; a < grid.dim; ++a) linf = std::max(linf, std::abs(x[a]));
            const double w = p[node] * p[node];
            total += w;
            if (linf > guard) tail += w;
        }

        DilationPoint point;
        point.lambda = lambda;
        point.admissible = total > 0.0 && tail <= 1e-10 * total;
        if (point.admissible) {
            std::vector<Field> comps;
            comps.reserve(masses.size());
            for (double c : masses) comps.push_back(std::sqrt(c) * p);
            State phi(std::move(comps), masses, alpha);
            // exact re-projection: mass(sqrt(c) p) = c * mass(p) with mass(p)
            // only approximately 1
            for (int i = 0; i < phi.m(); ++i) {
                const double scale = std::sqrt(masses[i] / mass(phi.components[i]));
                for (double& v : phi.components[i].values) v *= scale;
            }
            point.energy = energy(phi, spec).total;
            if (!table.lambda_star && point.energy < 0.0) {
                table.lambda_star = lambda;
                table.energy_star = point.energy;
            }
        } else {
            point.energy = std::numeric_limits<double>::quiet_NaN();
        }
        table.points.push_back(point);
    }

    bool any_admissible = false;
    for (const auto& p : table.points) any_admissible |= p.admissible;
    if (!any_admissible)
        throw std::runtime_error(
            "every requested dilation pushes significant mass outside the box; "
            "enlarge the box or restrict the lambda grid");
    return table;
}

}  // namespace frgs
