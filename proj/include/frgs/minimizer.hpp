#pragma once

#include <functional>
#include <string>
#include <vector>

#include "frgs/energy.hpp"
#include "frgs/field.hpp"
#include "frgs/nonlinearity.hpp"

namespace frgs {

struct SolverConfig {
    double step = 0.5;        // initial pseudo-time step tau
    double tol = 1e-8;        // Euler-Lagrange residual tolerance
    long max_iter = 200000;
    double backtrack = 0.5;   // step-shrink factor in (0, 1)
    int multistart = 4;
    unsigned seed = 1;
};

enum class SolveStatus { Converged, MaxIter, Stalled };

std::string to_string(SolveStatus s);

struct HistoryEntry {
    long iter = 0;
    EnergyBreakdown energy;
    double residual = 0.0;
    std::vector<double> masses;
    std::vector<double> lambdas;
};

struct MinimizerResult {
    State state;
    EnergyBreakdown energy;
    std::vector<double> multipliers;
    double residual = 0.0;
    std::vector<HistoryEntry> history;
    SolveStatus status = SolveStatus::MaxIter;

    /// |energy drop over the last 100 iterations| - the per-solve error bar
    /// used by the sub-additivity tables.
    double tail_energy_drop() const;
};

/// Rescales component i by sqrt(c_i / mass(u_i)); rejects zero-mass
/// components.
State project_to_constraint(const State& state);

/// Normalized gradient flow with spectral semi-implicit stepping:
///   w_i = (I + tau (-Laplace)^alpha)^{-1} (u_i + tau (dF/du_i - lambda_i u_i)),
/// followed by re-projection onto the mass constraint. The multiplier term
/// makes constrained critical points exact fixed points of the update at
/// any step size. Steps that would
/// raise the energy by more than 1e-12 shrink tau by `backtrack`; tau
/// recovers by doubling (capped at the initial step) after 10 consecutive
/// accepts. Deterministic for fixed (initial, spec, config).
MinimizerResult minimize(
    const State& initial, const NonlinearitySpec& spec,
    const SolverConfig& config,
    const std::function<void(long, const State&)>& observer = nullptr);

/// Multistart estimate of the constrained infimum I_c: seeded Gaussian
/// starts (widths box/10 jittered by 2^[-1,1], centers within box/8), plus
/// the dilated profile from dilation_test when that finds negative energy.
/// Lowest energy wins; ties within 1e-12 go to the earlier start.
std::pair<double, MinimizerResult> ground_state_energy(
    const std::vector<double>& masses, const NonlinearitySpec& spec,
    const Grid& grid, double alpha, const SolverConfig& config);

}  // namespace frgs
