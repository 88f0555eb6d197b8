#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace frgs {

enum class CoeffKind {
    Constant,        // kappa
    ExpDecayPlusOne, // kappa * (exp(-|x|) + 1)
    InvOnePlus,      // kappa / (1 + |x|)
    PowerLaw,        // kappa * |x|^(-t), t in [0, 2)
    Periodic,        // kappa-free tabulated profile, lattice vector L
};

/// Spatial coefficient of one term. Periodic coefficients interpolate the
/// table linearly at phase frac((x . L) / (L . L)), so q(x + L) = q(x)
/// exactly for the declared lattice vector L.
struct Coefficient {
    CoeffKind kind = CoeffKind::Constant;
    double kappa = 0.0;
    double exponent = 0.0;            // t, PowerLaw only
    std::vector<double> table;        // Periodic only
    std::vector<double> lattice;      // Periodic only, length = dim

    /// origin_eps regularizes |x|^(-t) at the single node x = 0.
    double eval(std::span<const double> x, double origin_eps) const;

    /// True when the |x| -> infinity limit differs from the coefficient.
    bool transient() const;

    /// Coefficient of the corresponding F-infinity term; nullopt when the
    /// limit is zero and the term drops.
    std::optional<Coefficient> asymptotic() const;

    double min_value() const;  // lower bound over x (|x| >= 1 for InvOnePlus)
};

/// coeff(x) * prod_i |u_i|^{s_i} / (1 + |u_i|)^{d_i}.
struct Term {
    Coefficient coeff;
    std::vector<double> powers;   // s_i >= 0, one per component
    std::vector<double> damping;  // d_i >= 0, one per component

    bool active(int i) const { return powers[i] > 0.0 || damping[i] > 0.0; }
    int active_count() const;
    double total_power() const;          // sum s_i
    double total_growth() const;         // sum (s_i - d_i)
    double growth(int i) const { return powers[i] - damping[i]; }

    double eval(std::span<const double> x, std::span<const double> u,
                double origin_eps) const;
    double eval_derivative(int j, std::span<const double> x,
                           std::span<const double> u, double origin_eps) const;
};

/// Structured term-sum representation of F(x, u). Construction validates the
/// structural term rules (component counts, exponent ranges, the >2 growth
/// rules, a common lattice vector across periodic coefficients); the
/// L2-subcriticality bound needs alpha and dim and lives in
/// validate_subcritical.
struct NonlinearitySpec {
    int m = 0;
    std::vector<Term> terms;
    std::optional<double> sigma;                 // declared H6 exponent
    std::optional<std::vector<double>> period;   // declared lattice vector

    NonlinearitySpec() = default;
    NonlinearitySpec(int m, std::vector<Term> terms,
                     std::optional<double> sigma = std::nullopt,
                     std::optional<std::vector<double>> period = std::nullopt);

    /// Common lattice vector of the periodic coefficients (or the declared
    /// one); nullopt when neither exists.
    std::optional<std::vector<double>> lattice_vector() const;

    bool has_transient_terms() const;
};

double eval_F(const NonlinearitySpec& spec, std::span<const double> x,
              std::span<const double> u, double origin_eps = 0.0);

double eval_dF(const NonlinearitySpec& spec, int j, std::span<const double> x,
               std::span<const double> u, double origin_eps = 0.0);

// brace-list conveniences
inline double eval_F(const NonlinearitySpec& spec, std::initializer_list<double> x,
                     std::initializer_list<double> u, double origin_eps = 0.0) {
    return eval_F(spec, std::span<const double>(x.begin(), x.size()),
                  std::span<const double>(u.begin(), u.size()), origin_eps);
}
inline double eval_F(const NonlinearitySpec& spec, std::span<const double> x,
                     std::initializer_list<double> u, double origin_eps = 0.0) {
    return eval_F(spec, x, std::span<const double>(u.begin(), u.size()), origin_eps);
}
inline double eval_F(const NonlinearitySpec& spec, std::initializer_list<double> x,
                     std::span<const double> u, double origin_eps = 0.0) {
    return eval_F(spec, std::span<const double>(x.begin(), x.size()), u, origin_eps);
}
inline double eval_dF(const NonlinearitySpec& spec, int j,
                      std::initializer_list<double> x,
                      std::initializer_list<double> u, double origin_eps = 0.0) {
    return eval_dF(spec, j, std::span<const double>(x.begin(), x.size()),
                   std::span<const double>(u.begin(), u.size()), origin_eps);
}
inline double eval_dF(const NonlinearitySpec& spec, int j, std::span<const double> x,
                      std::initializer_list<double> u, double origin_eps = 0.0) {
    return eval_dF(spec, j, x, std::span<const double>(u.begin(), u.size()),
                   origin_eps);
}
inline double eval_dF(const NonlinearitySpec& spec, int j,
                      std::initializer_list<double> x, std::span<const double> u,
                      double origin_eps = 0.0) {
    return eval_dF(spec, j, std::span<const double>(x.begin(), x.size()), u,
                   origin_eps);
}

/// Sum of the terms selected by `indices` only (H3/H6 decomposition pieces).
double eval_F_subset(const NonlinearitySpec& spec,
                     std::span<const std::size_t> indices,
                     std::span<const double> x, std::span<const double> u,
                     double origin_eps = 0.0);

/// Replaces every spatial coefficient by its |x| -> infinity limit; terms
/// whose coefficient vanishes in the limit are dropped. Idempotent.
NonlinearitySpec asymptotic_spec(const NonlinearitySpec& spec);

/// Enforces the L2-subcritical growth bound sum_i (s_i - d_i) < 2 + 4 alpha/N
/// for every term; throws std::invalid_argument naming the bound otherwise.
void validate_subcritical(const NonlinearitySpec& spec, double alpha, int dim);

/// Parses one `coeff=<kind>:<params> powers=<s_1,...> damping=<d_1,...>`
/// term line. Periodic tables are read through `load_table`, which maps a
/// filename to samples (the CLI supplies a file reader; tests can inject
/// tables directly).
Term parse_term_line(const std::string& line, int m, int dim,
                     const std::function<std::vector<double>(const std::string&)>& load_table);

}  // namespace frgs
