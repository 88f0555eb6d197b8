#include "frgs/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

#include "frgs/spectral.hpp"

namespace frgs {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIter: return "max_iter";
        case SolveStatus::Stalled: return "stalled";
    }
    return "unknown";
}

double MinimizerResult::tail_energy_drop() const {
    if (history.size() < 2) return 0.0;
    const std::size_t last = history.size() - 1;
    const std::size_t ref = last >= 100 ? last - 100 : 0;
    return std::abs(history[ref].energy.total - history[last].energy.total);
}

State project_to_constraint(const State& state) {
    State out = state;
    for (int i = 0; i < out.m(); ++i) {
        const double m = mass(out.components[i]);
        if (!(m > 0.0))
            throw std::invalid_argument("cannot project a zero-mass component");
        const double scale = std::sqrt(out.target_masses[i] / m);
        for (double& v : out.components[i].values) v *= scale;
    }
    return out;
}

namespace {

struct Evaluation {
    EnergyBreakdown energy;
    std::vector<double> lambdas;
    std::vector<double> masses;
    double residual = 0.0;
    std::vector<Field> dF;
};

double cell_volume(const Grid& g) {
    double v = 1.0;
    for (int a = 0; a < g.dim; ++a) v *= g.spacing;
    return v;
}

Evaluation evaluate(const State& state, const NonlinearitySpec& spec) {
    Evaluation ev;
    const int m = state.m();
    ev.lambdas.resize(m);
    ev.masses.resize(m);
    ev.dF.reserve(m);
    const double hvol = cell_volume(state.grid());
    double residual_sq = 0.0;
    for (int i = 0; i < m; ++i) {
        ev.dF.push_back(sample_dF(state, spec, i));
        const Field& ui = state.components[i];
        const double kin_i = sobolev_seminorm_sq(ui, state.alpha);
        ev.energy.kinetic += 0.5 * kin_i;
        ev.masses[i] = mass(ui);
        ev.lambdas[i] =
            (inner_product(ev.dF[i], ui) - kin_i) / state.target_masses[i];
        const Field lap = apply_fractional_laplacian(ui, state.alpha);
        double sum = 0.0;
        for (std::size_t node = 0; node < ui.size(); ++node) {
            const double r = lap[node] + ev.lambdas[i] * ui[node] - ev.dF[i][node];
            sum += r * r;
        }
        residual_sq += sum * hvol;
    }
    ev.energy.potential = potential_integral(state, spec);
    ev.energy.total = ev.energy.kinetic - ev.energy.potential;
    ev.residual = std::sqrt(residual_sq);
    return ev;
}

HistoryEntry make_entry(long iter, const Evaluation& ev) {
    HistoryEntry h;
    h.iter = iter;
    h.energy = ev.energy;
    h.residual = ev.residual;
    h.masses = ev.masses;
    h.lambdas = ev.lambdas;
    return h;
}

void check_config(const SolverConfig& c) {
    if (!(c.step > 0.0)) throw std::invalid_argument("solver step must be positive");
    if (!(c.tol > 0.0)) throw std::invalid_argument("solver tol must be positive");
    if (c.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    if (!(c.backtrack > 0.0) || !(c.backtrack < 1.0))
        throw std::invalid_argument("backtrack factor must lie in (0, 1)");
    if (c.multistart < 1) throw std::invalid_argument("multistart must be >= 1");
}

}  // namespace

MinimizerResult minimize(const State& initial, const NonlinearitySpec& spec,
                         const SolverConfig& config,
                         const std::function<void(long, const State&)>& observer) {
    check_config(config);
    if (initial.m() != spec.m)
        throw std::invalid_argument("state and spec component counts differ");
    validate_subcritical(spec, initial.alpha, initial.grid().dim);

    State state = project_to_constraint(initial);
    Evaluation cur = evaluate(state, spec);

    MinimizerResult result;
    result.history.push_back(make_entry(0, cur));
    if (observer) observer(0, state);

    double tau = config.step;
    int accept_streak = 0;
    SolveStatus status = SolveStatus::MaxIter;

    for (long iter = 1; iter <= config.max_iter; ++iter) {
        if (cur.residual <= config.tol) {
            status = SolveStatus::Converged;
            break;
        }

        // Semi-implicit step, backtracking on energy increase.
        bool stalled = false;
        State candidate;
        Evaluation cand;
        while (true) {
            std::vector<Field> comps;
            comps.reserve(state.m());
            for (int i = 0; i < state.m(); ++i) {
                // Explicit part carries dF - lambda u (the constrained
                // gradient), so EL solutions are exact fixed points of the
                // step at any tau; without the multiplier term the fixed
                // point is biased by O(tau) and the residual plateaus.
                Field rhs = state.components[i];
                const double lam = cur.lambdas[i];
                for (std::size_t node = 0; node < rhs.size(); ++node)
                    rhs.values[node] +=
                        tau * (cur.dF[i][node] - lam * rhs.values[node]);
                comps.push_back(apply_resolvent(rhs, tau, state.alpha));
            }
            candidate = project_to_constraint(
                State(std::move(comps), state.target_masses, state.alpha));
            cand = evaluate(candidate, spec);
            if (cand.energy.total <= cur.energy.total + 1e-12) break;
            accept_streak = 0;
            tau *= config.backtrack;
            if (tau < 1e-12) {
                stalled = true;
                break;
            }
        }
        if (stalled) {
            status = SolveStatus::Stalled;
            break;
        }

        state = std::move(candidate);
        cur = std::move(cand);
        result.history.push_back(make_entry(iter, cur));
        if (observer) observer(iter, state);

        if (++accept_streak >= 10) {
            tau = std::min(2.0 * tau, config.step);
            accept_streak = 0;
        }
    }
    if (status == SolveStatus::MaxIter && cur.residual <= config.tol)
        status = SolveStatus::Converged;

    result.state = std::move(state);
    result.energy = cur.energy;
    result.multipliers = cur.lambdas;
    result.residual = cur.residual;
    result.status = status;
    return result;
}

std::pair<double, MinimizerResult> ground_state_energy(
    const std::vector<double>& masses, const NonlinearitySpec& spec,
    const Grid& grid, double alpha, const SolverConfig& config) {
    check_config(config);
    if (masses.size() != static_cast<std::size_t>(spec.m))
        throw std::invalid_argument("one mass per spec component required");

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    // Seeded Gaussian starts: canonical centered width box/10 first, then
    // jittered widths (x 2^[-1,1]) and centers within box/8.
    struct Start {
        double width;
        std::array<double, 3> center;
    };
    std::vector<Start> starts;
    starts.push_back({grid.box / 10.0, {0.0, 0.0, 0.0}});
    for (int s = 1; s < config.multistart; ++s) {
        Start st;
        st.width = grid.box / 10.0 * std::pow(2.0, unit(rng));
        st.center = {0.0, 0.0, 0.0};
        for (int a = 0; a < grid.dim; ++a) st.center[a] = grid.box / 16.0 * unit(rng);
        starts.push_back(st);
    }

    std::vector<State> initials;
    for (const Start& st : starts) {
        std::vector<Field> comps(masses.size(),
                                 gaussian_field(grid, st.center, st.width));
        initials.push_back(project_to_constraint(State(comps, masses, alpha)));
    }

    // Dilation start: append the certified dilated profile when the
    // dilation scan finds negative energy.
    try {
        Field profile = gaussian_field(grid, {0.0, 0.0, 0.0}, grid.box / 40.0);
        const double scale = std::sqrt(1.0 / mass(profile));
        for (double& v : profile.values) v *= scale;
        DilationTable table = dilation_test(masses, spec, grid, alpha, profile,
                                            default_dilation_lambdas());
        if (table.lambda_star) {
            Field p = resample_scaled(profile, *table.lambda_star);
            const double amp = std::pow(*table.lambda_star, 0.5 * grid.dim);
            for (double& v : p.values) v *= amp;
            std::vector<Field> comps;
            for (double c : masses) comps.push_back(std::sqrt(c) * p);
            initials.push_back(
                project_to_constraint(State(std::move(comps), masses, alpha)));
        }
    } catch (const std::exception&) {
        // no admissible dilation on this grid; the Gaussian starts stand alone
    }

    std::optional<std::size_t> best;
    std::vector<MinimizerResult> results;
    results.reserve(initials.size());
    for (const State& init : initials) {
        results.push_back(minimize(init, spec, config));
        const MinimizerResult& r = results.back();
        if (r.status == SolveStatus::Stalled) continue;
        if (!best || r.energy.total < results[*best].energy.total - 1e-12)
            best = results.size() - 1;
    }
    if (!best)
        throw std::runtime_error("every multistart solve stalled");
    return {results[*best].energy.total, std::move(results[*best])};
}

}  // namespace frgs
