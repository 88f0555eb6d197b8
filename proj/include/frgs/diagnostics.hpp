#pragma once

#include <array>
#include <string>
#include <vector>

#include "frgs/field.hpp"
#include "frgs/minimizer.hpp"
#include "frgs/nonlinearity.hpp"

namespace frgs {

/// Levy concentration function Q(r) = sup_y sum_i mass of u_i inside the
/// minimum-image ball |x - y| < r, with the best center per radius.
struct ConcentrationProfile {
    std::vector<double> radii;
    std::vector<double> q;
    std::vector<std::array<double, 3>> centers;
};

/// Center search is exhaustive over grid nodes at stride max(1, n/64), then
/// refined over the surrounding stride-wide neighborhood. Radii must be
/// positive, increasing and <= box/2.
ConcentrationProfile concentration_function(const State& state,
                                            const std::vector<double>& radii);

enum class Classification { Compactness, Vanishing, Dichotomy, Undetermined };

std::string to_string(Classification c);

/// Concentration-compactness trichotomy label for a sequence of states on one grid
/// with equal target masses. thresholds = (eps_v, eps_d) as absolute masses.
Classification classify_sequence(const std::vector<State>& states,
                                 std::pair<double, double> thresholds);

struct SubadditivityRow {
    double fraction = 0.0;
    std::vector<double> a;     // split masses a = f * c
    double I_a = 0.0;
    double I_cma = 0.0;        // I_{c-a}
    double I_c = 0.0;
    double slack = 0.0;        // I_a + I_{c-a} - I_c
    double I_inf_cma = 0.0;    // I^inf_{c-a}
    double mixed_slack = 0.0;  // I_a + I^inf_{c-a} - I_c
    double error_bar = 0.0;    // solver-slack estimate for the row
};

struct SubadditivityTable {
    std::vector<double> masses;
    double I_c = 0.0;
    double I_c_error = 0.0;
    std::vector<SubadditivityRow> rows;
};

/// Scans the sub-additivity slack I_a + I_{c-a} - I_c and the mixed
/// comparison I_a + I^inf_{c-a} - I_c against the asymptotic problem over a = f * c for fractions f strictly inside
/// (0,1). Every infimum comes from ground_state_energy with the shared
/// config; error bars add each constituent solve's tail energy drop plus its
/// residual tolerance.
SubadditivityTable subadditivity_scan(const std::vector<double>& masses,
                                      const std::vector<double>& fractions,
                                      const NonlinearitySpec& spec,
                                      const Grid& grid, double alpha,
                                      const SolverConfig& config);

/// Bounded iterate recorder for classify_sequence on solver runs: keeps at
/// most `capacity` states, doubling the sampling interval when full.
class SnapshotBuffer {
  public:
    explicit SnapshotBuffer(std::size_t capacity = 64);
    void offer(long iter, const State& state);
    /// Up to `count` evenly spaced snapshots (always includes the last).
    std::vector<State> pick(std::size_t count) const;
    const std::vector<std::pair<long, State>>& entries() const { return entries_; }

  private:
    std::size_t capacity_;
    long interval_ = 1;
    std::vector<std::pair<long, State>> entries_;
};

}  // namespace frgs
