#include "frgs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "frgs/spectral.hpp"

namespace frgs {

std::string to_string(Classification c) {
    switch (c) {
        case Classification::Compactness: return "compactness";
        case Classification::Vanishing: return "vanishing";
        case Classification::Dichotomy: return "dichotomy";
        case Classification::Undetermined: return "undetermined";
    }
    return "?";
}

namespace {

double cell_volume(const Grid& g) {
    double v = 1.0;
    for (int a = 0; a < g.dim; ++a) v *= g.spacing;
    return v;
}

// Offsets (flattened relative node shifts) whose minimum-image distance is
// below r.
std::vector<std::size_t> ball_offsets(const Grid& g, double r) {
    const int n = g.points;
    std::vector<std::size_t> out;
    const double r2 = r * r;
    const std::size_t count = g.node_count();
    for (std::size_t flat = 0; flat < count; ++flat) {
        auto idx = g.unflatten(flat);
        double d2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const int d = std::min(idx[a], n - idx[a]);
            d2 += static_cast<double>(d) * d * g.spacing * g.spacing;
        }
        if (d2 < r2) out.push_back(flat);
    }
    return out;
}

std::size_t offset_node(const Grid& g, const std::array<int, 3>& center,
                        std::size_t offset_flat) {
    auto off = g.unflatten(offset_flat);
    std::size_t flat = 0;
    for (int a = 0; a < g.dim; ++a)
        flat = flat * g.points + static_cast<std::size_t>((center[a] + off[a]) % g.points);
    return flat;
}

double ball_sum(const Grid& g, const std::vector<double>& rho,
                const std::array<int, 3>& center,
                const std::vector<std::size_t>& offsets) {
    double s = 0.0;
    for (std::size_t off : offsets) s += rho[offset_node(g, center, off)];
    return s;
}

}  // namespace

ConcentrationProfile concentration_function(const State& state,
                                            const std::vector<double>& radii) {
    const Grid& g = state.grid();
    double prev = 0.0;
    for (double r : radii) {
        if (!(r > 0.0) || r > 0.5 * g.box + 1e-12 || r <= prev)
            throw std::invalid_argument(
                "radii must be positive, increasing and <= box/2");
        prev = r;
    }

    // combined density sum_i u_i^2
    std::vector<double> rho(g.node_count(), 0.0);
    for (const Field& f : state.components)
        for (std::size_t i = 0; i < rho.size(); ++i) rho[i] += f[i] * f[i];

    const int n = g.points;
    const int stride = std::max(1, n / 64);

    ConcentrationProfile profile;
    profile.radii = radii;

    std::array<int, 3> carry{0, 0, 0};  // best center so far (keeps Q monotone)
    bool have_carry = false;

    for (double r : radii) {
        const auto offsets = ball_offsets(g, r);

        double best = -1.0;
        std::array<int, 3> best_center{0, 0, 0};
        auto consider = [&](const std::array<int, 3>& center) {
            const double s = ball_sum(g, rho, center, offsets);
            if (s > best) {
                best = s;
                best_center = center;
            }
        };

        // coarse strided pass
        std::array<int, 3> idx{0, 0, 0};
        const int per_axis = (n + stride - 1) / stride;
        std::size_t coarse_count = 1;
        for (int a = 0; a < g.dim; ++a) coarse_count *= per_axis;
        for (std::size_t c = 0; c < coarse_count; ++c) {
            std::size_t rem = c;
            for (int a = g.dim - 1; a >= 0; --a) {
                idx[a] = static_cast<int>(rem % per_axis) * stride;
                rem /= per_axis;
            }
            consider(idx);
        }
        // refine the surrounding stride-wide neighborhood
        const std::array<int, 3> coarse_best = best_center;
        std::size_t refine_count = 1;
        const int w = 2 * stride + 1;
        for (int a = 0; a < g.dim; ++a) refine_count *= w;
        for (std::size_t c = 0; c < refine_count; ++c) {
            std::size_t rem = c;
            std::array<int, 3> center{0, 0, 0};
            for (int a = g.dim - 1; a >= 0; --a) {
                const int d = static_cast<int>(rem % w) - stride;
                rem /= w;
                center[a] = ((coarse_best[a] + d) % n + n) % n;
            }
            consider(center);
        }
        if (have_carry) consider(carry);

        carry = best_center;
        have_carry = true;
        profile.q.push_back(best * cell_volume(g));
        std::array<double, 3> xc{0.0, 0.0, 0.0};
        for (int a = 0; a < g.dim; ++a) xc[a] = g.coord(best_center[a]);
        profile.centers.push_back(xc);
    }
    return profile;
}

Classification classify_sequence(const std::vector<State>& states,
                                 std::pair<double, double> thresholds) {
    if (states.size() < 3)
        throw std::invalid_argument("classification needs at least 3 states");
    const Grid& g = states.front().grid();
    const auto& masses = states.front().target_masses;
    for (const State& s : states) {
        if (!s.grid().same_layout(g))
            throw std::invalid_argument("states must share one grid");
        if (s.target_masses != masses)
            throw std::invalid_argument("states must share target masses");
    }
    const double eps_v = thresholds.first;
    const double eps_d = thresholds.second;
    double c_tot = 0.0;
    for (double c : masses) c_tot += c;

    // ladder of radii up to box/2
    const int K = 48;
    std::vector<double> ladder(K);
    for (int k = 0; k < K; ++k) ladder[k] = 0.5 * g.box * (k + 1) / K;

    std::vector<ConcentrationProfile> profiles;
    profiles.reserve(states.size());
    for (const State& s : states) profiles.push_back(concentration_function(s, ladder));

    const int r_ref = std::max(0, K / 8 - 1);  // ~ box/16
    const std::size_t tail_begin = states.size() / 2;

    // vanishing: Q_n(r_ref) decays geometrically (or below eps_v)
    {
        bool monotone = true;
        for (std::size_t i = 1; i < profiles.size(); ++i)
            if (profiles[i].q[r_ref] > profiles[i - 1].q[r_ref] * (1.0 + 1e-9))
                monotone = false;
        const double first = profiles.front().q[r_ref];
        const double last = profiles.back().q[r_ref];
        if (monotone && first > 0.0) {
            const double ratio =
                std::pow(last / first, 1.0 / static_cast<double>(profiles.size() - 1));
            if (last <= eps_v || ratio <= 0.85) return Classification::Vanishing;
        }
    }

    // compactness: one radius <= box/8 captures total - eps_v for every
    // tail state (the sup over centers is the recentering)
    {
        const int k_cap = K / 4;  // ladder index of box/8
        for (int k = 0; k < k_cap; ++k) {
            bool all = true;
            for (std::size_t i = tail_begin; i < profiles.size(); ++i)
                if (profiles[i].q[k] < c_tot - eps_v) all = false;
            if (all) return Classification::Compactness;
        }
    }

    // dichotomy: persistent plateau strictly between the thresholds plus a
    // growing 95%-capture radius
    {
        auto capture_index = [&](const ConcentrationProfile& p) {
            for (int k = 0; k < K; ++k)
                if (p.q[k] >= c_tot - eps_v) return k;
            return K;
        };
        auto plateau_level = [&](const ConcentrationProfile& p) -> double {
            int best_len = 0;
            double level = std::numeric_limits<double>::quiet_NaN();
            int i = 0;
            while (i < K) {
                int j = i;
                while (j + 1 < K && p.q[j + 1] - p.q[i] <= 0.5 * eps_v) ++j;
                const double mid = p.q[(i + j) / 2];
                if (j - i + 1 >= 3 && mid > eps_d && mid < c_tot - eps_d &&
                    j - i + 1 > best_len) {
                    best_len = j - i + 1;
                    level = mid;
                }
                i = j + 1;
            }
            return level;
        };

        bool plateaus = true;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i = tail_begin; i < profiles.size(); ++i) {
            const double level = plateau_level(profiles[i]);
            if (std::isnan(level)) {
                plateaus = false;
                break;
            }
            lo = std::min(lo, level);
            hi = std::max(hi, level);
        }
        if (plateaus && hi - lo <= eps_d &&
            capture_index(profiles.back()) >= capture_index(profiles.front()) + 2)
            return Classification::Dichotomy;
    }

    return Classification::Undetermined;
}

SubadditivityTable subadditivity_scan(const std::vector<double>& masses,
                                      const std::vector<double>& fractions,
                                      const NonlinearitySpec& spec,
                                      const Grid& grid, double alpha,
                                      const SolverConfig& config) {
    for (double f : fractions)
        if (!(f > 0.0) || !(f < 1.0))
            throw std::invalid_argument("scan fractions must lie strictly inside (0,1)");

    const NonlinearitySpec inf_spec = asymptotic_spec(spec);

    SubadditivityTable table;
    table.masses = masses;
    auto [ic, best_c] = ground_state_energy(masses, spec, grid, alpha, config);
    table.I_c = ic;
    table.I_c_error = best_c.tail_energy_drop() + config.tol;

    for (double f : fractions) {
        SubadditivityRow row;
        row.fraction = f;
        row.a.resize(masses.size());
        std::vector<double> rest(masses.size());
        for (std::size_t i = 0; i < masses.size(); ++i) {
            row.a[i] = f * masses[i];
            rest[i] = masses[i] - row.a[i];
        }
        auto [ia, best_a] = ground_state_energy(row.a, spec, grid, alpha, config);
        auto [icma, best_cma] = ground_state_energy(rest, spec, grid, alpha, config);
        auto [iinf, best_inf] = ground_state_energy(rest, inf_spec, grid, alpha, config);
        row.I_a = ia;
        row.I_cma = icma;
        row.I_c = table.I_c;
        row.I_inf_cma = iinf;
        row.slack = ia + icma - table.I_c;
        row.mixed_slack = ia + iinf - table.I_c;
        row.error_bar = table.I_c_error + best_a.tail_energy_drop() +
                        best_cma.tail_energy_drop() + best_inf.tail_energy_drop() +
                        3.0 * config.tol;
        table.rows.push_back(std::move(row));
    }
    return table;
}

SnapshotBuffer::SnapshotBuffer(std::size_t capacity)
    : capacity_(std::max<std::size_t>(capacity, 4)) {}

void SnapshotBuffer::offer(long iter, const State& state) {
    if (iter % interval_ != 0) return;
    entries_.emplace_back(iter, state);
    if (entries_.size() > capacity_) {
        std::vector<std::pair<long, State>> kept;
        kept.reserve(entries_.size() / 2 + 1);
        for (std::size_t i = 0; i < entries_.size(); i += 2)
            kept.push_back(std::move(entries_[i]));
        entries_ = std::move(kept);
        interval_ *= 2;
    }
}

std::vector<State> SnapshotBuffer::pick(std::size_t count) const {
    std::vector<State> out;
    if (entries_.empty() || count == 0) return out;
    if (count >= entries_.size()) {
        for (const auto& e : entries_) out.push_back(e.second);
        return out;
    }
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t idx =
            (i == count - 1) ? entries_.size() - 1
                             : i * (entries_.size() - 1) / (count - 1);
        out.push_back(entries_[idx].second);
    }
    return out;
}

}  // namespace frgs
