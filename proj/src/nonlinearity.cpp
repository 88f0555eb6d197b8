#include "frgs/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace frgs {

namespace {

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// |u|^s / (1 + |u|)^d and its derivative
double damped_power(double u, double s, double d) {
    const double a = std::abs(u);
    if (a == 0.0) return s == 0.0 ? 1.0 : 0.0;
    const double num = s == 0.0 ? 1.0 : std::pow(a, s);
    return d == 0.0 ? num : num / std::pow(1.0 + a, d);
}

// d/du [|u|^s / (1+|u|)^d] = sign(u) |u|^(s-1) (s + (s-d)|u|) / (1+|u|)^(d+1)
double damped_power_derivative(double u, double s, double d) {
    const double a = std::abs(u);
    if (a == 0.0) return 0.0;
    const double lead = s == 1.0 ? 1.0 : std::pow(a, s - 1.0);
    return sign(u) * lead * (s + (s - d) * a) / std::pow(1.0 + a, d + 1.0);
}

}  // namespace

double Coefficient::eval(std::span<const double> x, double origin_eps) const {
    switch (kind) {
        case CoeffKind::Constant:
            return kappa;
        case CoeffKind::ExpDecayPlusOne:
            return kappa * (std::exp(-norm2(x)) + 1.0);
        case CoeffKind::InvOnePlus:
            return kappa / (1.0 + norm2(x));
        case CoeffKind::PowerLaw: {
            if (exponent == 0.0) return kappa;
            double r = norm2(x);
            if (r == 0.0) r = origin_eps;
            if (r == 0.0)
                throw std::domain_error("|x|^-t coefficient at x = 0 without regularization");
            return kappa * std::pow(r, -exponent);
        }
        case CoeffKind::Periodic: {
            double dot = 0.0, ll = 0.0;
            for (std::size_t a = 0; a < lattice.size() && a < x.size(); ++a) {
                dot += x[a] * lattice[a];
                ll += lattice[a] * lattice[a];
            }
            double phase = dot / ll;
            phase -= std::floor(phase);
            const double pos = phase * table.size();
            const std::size_t i0 = std::min(static_cast<std::size_t>(pos), table.size() - 1);
            const std::size_t i1 = (i0 + 1) % table.size();
            const double frac = pos - i0;
            return table[i0] * (1.0 - frac) + table[i1] * frac;
        }
    }
    return 0.0;
}

bool Coefficient::transient() const {
    switch (kind) {
        case CoeffKind::Constant:
        case CoeffKind::Periodic:
            return false;
        case CoeffKind::ExpDecayPlusOne:
        case CoeffKind::InvOnePlus:
            return true;
        case CoeffKind::PowerLaw:
            return exponent > 0.0;
    }
    return false;
}

std::optional<Coefficient> Coefficient::asymptotic() const {
    switch (kind) {
        case CoeffKind::Constant:
        case CoeffKind::Periodic:
            return *this;
        case CoeffKind::ExpDecayPlusOne: {
            Coefficient c;
            c.kind = CoeffKind::Constant;
            c.kappa = kappa;
            return c;
        }
        case CoeffKind::InvOnePlus:
            return std::nullopt;
        case CoeffKind::PowerLaw: {
            if (exponent > 0.0) return std::nullopt;
            Coefficient c;
            c.kind = CoeffKind::Constant;
            c.kappa = kappa;
            return c;
        }
    }
    return std::nullopt;
}

double Coefficient::min_value() const {
    switch (kind) {
        case CoeffKind::Constant:
            return kappa;
        case CoeffKind::ExpDecayPlusOne:
            return kappa;  // e^-|x| + 1 >= 1
        case CoeffKind::InvOnePlus:
            return 0.0;
        case CoeffKind::PowerLaw:
            return exponent > 0.0 ? 0.0 : kappa;
        case CoeffKind::Periodic:
            return table.empty() ? 0.0
                                 : *std::min_element(table.begin(), table.end());
    }
    return 0.0;
}

int Term::active_count() const {
    int c = 0;
    for (std::size_t i = 0; i < powers.size(); ++i)
        if (active(static_cast<int>(i))) ++c;
    return c;
}

double Term::total_power() const {
    double s = 0.0;
    for (double p : powers) s += p;
    return s;
}

double Term::total_growth() const {
    double s = 0.0;
    for (std::size_t i = 0; i < powers.size(); ++i) s += powers[i] - damping[i];
    return s;
}

double Term::eval(std::span<const double> x, std::span<const double> u,
                  double origin_eps) const {
    double prod = coeff.eval(x, origin_eps);
    for (std::size_t i = 0; i < powers.size() && prod != 0.0; ++i)
        if (active(static_cast<int>(i)))
            prod *= damped_power(u[i], powers[i], damping[i]);
    return prod;
}

double Term::eval_derivative(int j, std::span<const double> x,
                             std::span<const double> u, double origin_eps) const {
    if (!active(j)) return 0.0;
    double prod = coeff.eval(x, origin_eps);
    for (std::size_t i = 0; i < powers.size() && prod != 0.0; ++i) {
        if (static_cast<int>(i) == j) continue;
        if (active(static_cast<int>(i)))
            prod *= damped_power(u[i], powers[i], damping[i]);
    }
    if (prod == 0.0) return 0.0;
    return prod * damped_power_derivative(u[j], powers[j], damping[j]);
}

NonlinearitySpec::NonlinearitySpec(int m_, std::vector<Term> terms_,
                                   std::optional<double> sigma_,
                                   std::optional<std::vector<double>> period_)
    : m(m_), terms(std::move(terms_)), sigma(sigma_), period(std::move(period_)) {
    if (m < 1) throw std::invalid_argument("component count must be >= 1");
    if (sigma && !(*sigma > 0.0))
        throw std::invalid_argument("sigma must be positive");

    const std::vector<double>* common_lattice =
        period ? &*period : nullptr;
    for (const Term& t : terms) {
        if (t.powers.size() != static_cast<std::size_t>(m) ||
            t.damping.size() != static_cast<std::size_t>(m))
            throw std::invalid_argument("term must carry one power and one damping per component");
        int actives = 0;
        double growth_sum = 0.0;
        for (int i = 0; i < m; ++i) {
            const double s = t.powers[i];
            const double d = t.damping[i];
            if (s < 0.0 || d < 0.0)
                throw std::invalid_argument("powers and damping must be nonnegative");
            if (d > 0.0 && s <= 0.0)
                throw std::invalid_argument("damping requires a positive power on the same component");
            if (s > 0.0 && s < 1.0)
                throw std::invalid_argument("active exponents must satisfy s_i >= 1");
            if (t.active(i)) {
                ++actives;
                growth_sum += s - d;
            }
        }
        if (actives == 0)
            throw std::invalid_argument("term must involve at least one component");
        if (actives == 1) {
            if (!(growth_sum > 2.0))
                throw std::invalid_argument(
                    "single-component terms need s_i - d_i > 2");
        } else if (!(growth_sum > 2.0)) {
            throw std::invalid_argument(
                "multi-component terms need total growth sum_i (s_i - d_i) > 2");
        }
        if (t.coeff.kind != CoeffKind::Periodic && t.coeff.kappa < 0.0)
            throw std::invalid_argument("coefficient scale must be nonnegative");
        if (t.coeff.kind == CoeffKind::PowerLaw &&
            (t.coeff.exponent < 0.0 || t.coeff.exponent >= 2.0))
            throw std::invalid_argument("power-law exponent t must lie in [0, 2)");
        if (t.coeff.kind == CoeffKind::Periodic) {
            if (t.coeff.table.empty())
                throw std::invalid_argument("periodic coefficient needs table samples");
            if (t.coeff.min_value() < 0.0)
                throw std::invalid_argument("periodic coefficient must be nonnegative");
            if (t.coeff.lattice.empty())
                throw std::invalid_argument("periodic coefficient needs a lattice vector");
            if (common_lattice) {
                if (common_lattice->size() != t.coeff.lattice.size())
                    throw std::invalid_argument("periodic coefficients must share one lattice vector");
                for (std::size_t a = 0; a < common_lattice->size(); ++a)
                    if (std::abs((*common_lattice)[a] - t.coeff.lattice[a]) > 1e-12)
                        throw std::invalid_argument(
                            "periodic coefficients must share one lattice vector");
            } else {
                common_lattice = &t.coeff.lattice;
            }
        }
    }
}

std::optional<std::vector<double>> NonlinearitySpec::lattice_vector() const {
    if (period) return period;
    for (const Term& t : terms)
        if (t.coeff.kind == CoeffKind::Periodic) return t.coeff.lattice;
    return std::nullopt;
}

bool NonlinearitySpec::has_transient_terms() const {
    for (const Term& t : terms)
        if (t.coeff.transient() && t.coeff.kappa > 0.0) return true;
    return false;
}

double eval_F(const NonlinearitySpec& spec, std::span<const double> x,
              std::span<const double> u, double origin_eps) {
    double total = 0.0;
    for (const Term& t : spec.terms) total += t.eval(x, u, origin_eps);
    return total;
}

double eval_dF(const NonlinearitySpec& spec, int j, std::span<const double> x,
               std::span<const double> u, double origin_eps) {
    double total = 0.0;
    for (const Term& t : spec.terms) total += t.eval_derivative(j, x, u, origin_eps);
    return total;
}

double eval_F_subset(const NonlinearitySpec& spec,
                     std::span<const std::size_t> indices,
                     std::span<const double> x, std::span<const double> u,
                     double origin_eps) {
    double total = 0.0;
    for (std::size_t i : indices) total += spec.terms.at(i).eval(x, u, origin_eps);
    return total;
}

NonlinearitySpec asymptotic_spec(const NonlinearitySpec& spec) {
    std::vector<Term> terms;
    for (const Term& t : spec.terms) {
        auto limit = t.coeff.asymptotic();
        if (!limit) continue;
        if (limit->kind == CoeffKind::Constant && limit->kappa == 0.0) continue;
        Term out = t;
        out.coeff = *limit;
        terms.push_back(std::move(out));
    }
    return NonlinearitySpec(spec.m, std::move(terms), spec.sigma, spec.period);
}

void validate_subcritical(const NonlinearitySpec& spec, double alpha, int dim) {
    const double bound = 2.0 + 4.0 * alpha / dim;
    for (std::size_t k = 0; k < spec.terms.size(); ++k) {
        const double g = spec.terms[k].total_growth();
        if (!(g < bound)) {
            std::ostringstream os;
            os << "term " << (k + 1) << " has total growth " << g
               << " but (H1) requires growth < 2 + 4*alpha/N = " << bound;
            throw std::invalid_argument(os.str());
        }
    }
}

namespace {

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& what) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number '" + item + "' in " + what);
        }
    }
    if (out.empty()) throw std::invalid_argument("empty list in " + what);
    return out;
}

}  // namespace

Term parse_term_line(const std::string& line, int m, int dim,
                     const std::function<std::vector<double>(const std::string&)>& load_table) {
    std::string coeff_text, powers_text, damping_text;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("term field '" + tok + "' is not key=value");
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "coeff")
            coeff_text = val;
        else if (key == "powers")
            powers_text = val;
        else if (key == "damping")
            damping_text = val;
        else
            throw std::invalid_argument("unknown term field '" + key + "'");
    }
    if (coeff_text.empty()) throw std::invalid_argument("term is missing coeff=");
    if (powers_text.empty()) throw std::invalid_argument("term is missing powers=");

    Term term;
    term.powers = parse_double_list(powers_text, "powers");
    term.damping = damping_text.empty()
                       ? std::vector<double>(term.powers.size(), 0.0)
                       : parse_double_list(damping_text, "damping");
    if (term.powers.size() != static_cast<std::size_t>(m) ||
        term.damping.size() != static_cast<std::size_t>(m))
        throw std::invalid_argument("term needs exactly " + std::to_string(m) +
                                    " powers/damping entries");

    const auto colon = coeff_text.find(':');
    const std::string kind = coeff_text.substr(0, colon);
    const std::string params =
        colon == std::string::npos ? "" : coeff_text.substr(colon + 1);
    if (kind == "const") {
        term.coeff.kind = CoeffKind::Constant;
        term.coeff.kappa = parse_double_list(params, "const coeff").at(0);
    } else if (kind == "expdecayplus1") {
        term.coeff.kind = CoeffKind::ExpDecayPlusOne;
        term.coeff.kappa = parse_double_list(params, "expdecayplus1 coeff").at(0);
    } else if (kind == "invoneplus") {
        term.coeff.kind = CoeffKind::InvOnePlus;
        term.coeff.kappa = parse_double_list(params, "invoneplus coeff").at(0);
    } else if (kind == "powlaw") {
        auto v = parse_double_list(params, "powlaw coeff");
        if (v.size() != 2)
            throw std::invalid_argument("powlaw coeff needs <kappa>,<t>");
        term.coeff.kind = CoeffKind::PowerLaw;
        term.coeff.kappa = v[0];
        term.coeff.exponent = v[1];
    } else if (kind == "periodic") {
        const auto comma = params.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("periodic coeff needs <file>,<L_1,...,L_N>");
        const std::string file = params.substr(0, comma);
        auto lattice = parse_double_list(params.substr(comma + 1), "periodic lattice");
        if (lattice.size() != static_cast<std::size_t>(dim))
            throw std::invalid_argument("periodic lattice needs one entry per dimension");
        if (!load_table)
            throw std::invalid_argument("no table loader available for periodic coefficient");
        term.coeff.kind = CoeffKind::Periodic;
        term.coeff.table = load_table(file);
        term.coeff.lattice = std::move(lattice);
    } else {
        throw std::invalid_argument("unknown coefficient kind '" + kind + "'");
    }
    return term;
}

}  // namespace frgs
