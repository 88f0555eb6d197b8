#pragma once

#include <optional>
#include <vector>

#include "frgs/field.hpp"
#include "frgs/nonlinearity.hpp"

namespace frgs {

struct EnergyBreakdown {
    double kinetic = 0.0;    // 1/2 sum_i |Lambda^alpha u_i|_2^2
    double potential = 0.0;  // integral of F(x, u)
    double total = 0.0;      // kinetic - potential
};

EnergyBreakdown energy(const State& state, const NonlinearitySpec& spec);

/// Rectangle-rule integral of F(x, u) over the grid.
double potential_integral(const State& state, const NonlinearitySpec& spec);

/// dF/du_j sampled on the grid.
Field sample_dF(const State& state, const NonlinearitySpec& spec, int j);

/// L2 gradient of J: component i equals (-Laplace)^alpha u_i - dF/du_i.
std::vector<Field> l2_gradient(const State& state, const NonlinearitySpec& spec);

/// lambda_i = (<dF/du_i, u_i> - <(-Laplace)^alpha u_i, u_i>) / c_i, so that
/// (-Laplace)^alpha u_i + lambda_i u_i - dF/du_i = 0 at critical points.
std::vector<double> lagrange_multipliers(const State& state,
                                         const NonlinearitySpec& spec);

/// sqrt(sum_i |(-Laplace)^alpha u_i + lambda_i u_i - dF/du_i|_2^2) with the
/// multipliers above.
double el_residual(const State& state, const NonlinearitySpec& spec);

/// Gagliardo-Nirenberg quotient
///   |f|_{l+2}^{l+2} / (|f|_2^{(2a(l+2)-Nl)/(2a)} |f|_{Hdot^a}^{Nl/(2a)}).
/// Requires 0 < l < 4 alpha / N and a nonconstant field.
double gn_quotient(const Field& f, double alpha, double l);

struct DilationPoint {
    double lambda = 0.0;
    double energy = 0.0;
    bool admissible = false;  // dilated profile stayed box-supported
};

struct DilationTable {
    std::vector<DilationPoint> points;
    std::optional<double> lambda_star;   // first admissible lambda with J < 0
    std::optional<double> energy_star;
};

/// Energies of the mass-preserving dilation family Phi_lambda with
/// components sqrt(c_i) lambda^(N/2) profile(lambda x), lambda in (0, 1].
/// Rows whose dilation pushes tail mass above 1e-10 of the total outside
/// |x|_inf > 0.45 box are flagged inadmissible; if every requested lambda is
/// inadmissible the call fails instructing a larger box.
DilationTable dilation_test(const std::vector<double>& masses,
                            const NonlinearitySpec& spec, const Grid& grid,
                            double alpha, const Field& profile,
                            const std::vector<double>& lambdas);

/// Default dyadic lambda grid 2^-1, ..., 2^-10.
std::vector<double> default_dilation_lambdas();

}  // namespace frgs
