#include "frgs/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

namespace frgs {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::NotApplicable: return "n/a";
    }
    return "?";
}

bool HypothesisReport::all_pass() const {
    for (const auto& r : hypotheses)
        if (r.verdict == Verdict::Fail) return false;
    return true;
}

namespace {

constexpr double kEvalEps = 1e-9;  // |x|^-t regularization for sampling

struct Sampler {
    std::mt19937_64 rng;
    int m;
    int dim;
    double box;

    Sampler(unsigned seed, int m_, int dim_, double box_)
        : rng(seed), m(m_), dim(dim_), box(box_) {}

    std::vector<double> point() {
        std::uniform_real_distribution<double> coord(-0.5 * box, 0.5 * box);
        std::vector<double> x(dim);
        for (double& v : x) v = coord(rng);
        return x;
    }

    /// Point at radius r along a random direction (clipped to the box).
    std::vector<double> point_at_radius(double r) {
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<double> x(dim);
        double n = 0.0;
        for (double& v : x) {
            v = normal(rng);
            n += v * v;
        }
        n = std::sqrt(std::max(n, 1e-30));
        for (double& v : x) v = std::clamp(v / n * r, -0.5 * box, 0.5 * box);
        return x;
    }

    /// Log-spaced magnitude in [1e-6, 1e6], random direction, all
    /// components nonzero, random signs.
    std::vector<double> u_sample(double lo_exp = -6.0, double hi_exp = 6.0) {
        std::uniform_real_distribution<double> ex(lo_exp, hi_exp);
        std::uniform_real_distribution<double> unit(0.05, 1.0);
        std::bernoulli_distribution flip(0.5);
        const double mag = std::pow(10.0, ex(rng));
        std::vector<double> u(m);
        for (double& v : u) v = (flip(rng) ? 1.0 : -1.0) * unit(rng) * mag;
        return u;
    }

    double theta(double hi = 1e3) {
        std::uniform_real_distribution<double> ex(0.0, std::log10(hi));
        return std::pow(10.0, ex(rng));
    }
};

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

Witness make_witness(const std::vector<double>& x, const std::vector<double>& u,
                     double theta, double lhs, double rhs, std::string detail) {
    Witness w;
    w.x = x;
    w.u = u;
    w.theta = theta;
    w.lhs = lhs;
    w.rhs = rhs;
    w.detail = std::move(detail);
    return w;
}

std::vector<std::size_t> terms_with(const NonlinearitySpec& spec, int j) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < spec.terms.size(); ++k)
        if (spec.terms[k].active(j)) out.push_back(k);
    return out;
}

std::vector<std::size_t> terms_without(const NonlinearitySpec& spec, int j) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < spec.terms.size(); ++k)
        if (!spec.terms[k].active(j)) out.push_back(k);
    return out;
}

// Per-component growth exponents l_i from term metadata: for the H1-style
// bound, each product term is split by weighted AM-GM, so component i sees
// the term's total effective growth.
std::vector<double> growth_exponents(const NonlinearitySpec& spec, double fallback) {
    std::vector<double> l(spec.m, fallback);
    for (int i = 0; i < spec.m; ++i) {
        double g = 0.0;
        bool any = false;
        for (const Term& t : spec.terms)
            if (t.active(i)) {
                g = std::max(g, t.total_growth());
                any = true;
            }
        if (any) l[i] = g - 2.0;
    }
    return l;
}

// Growth/derivative bound check shared by H1 and H5. `low_exps` supplies
// the small-|u| exponents (H5's beta'_i + 2; H1 uses the plain quadratic).
struct GrowthCheckResult {
    bool diverges = false;
    double A = 0.0;
    double B = 0.0;
    Witness witness;
};

GrowthCheckResult growth_ratio_check(const NonlinearitySpec& spec, Sampler& s,
                                     long budget,
                                     const std::vector<double>& high_exps,
                                     const std::vector<double>& low_exps) {
    GrowthCheckResult res;
    double fit_A = 0.0;  // over samples with |u| <= 1e3
    struct Extreme {
        double ratio = 0.0;
        std::vector<double> x, u;
    } top;
    for (long it = 0; it < budget; ++it) {
        const auto x = s.point();
        const auto u = s.u_sample();
        double denom_f = 0.0, denom_df = 0.0;
        for (int i = 0; i < spec.m; ++i) {
            const double a = std::abs(u[i]);
            denom_f += std::pow(a, low_exps[i]) + std::pow(a, high_exps[i] + 2.0);
            denom_df += std::pow(a, low_exps[i] - 1.0) + std::pow(a, high_exps[i] + 1.0);
        }
        const double f = eval_F(spec, x, u, kEvalEps);
        const double rf = f / denom_f;
        double rdf = 0.0;
        for (int j = 0; j < spec.m; ++j)
            rdf = std::max(rdf, std::abs(eval_dF(spec, j, x, u, kEvalEps)) / denom_df);
        if (max_abs(u) <= 1e3) {
            fit_A = std::max(fit_A, rf);
        } else if (rf > top.ratio) {
            top = {rf, x, u};
        }
        res.A = std::max(res.A, rf);
        res.B = std::max(res.B, rdf);
    }
    if (fit_A > 0.0 && top.ratio > 1.5 * fit_A) {
        res.diverges = true;
        res.witness = make_witness(
            top.x, top.u, 0.0, top.ratio, 1.5 * fit_A,
            "growth ratio F/denominator exceeds 1.5x the |u|<=1e3 fit");
    }
    return res;
}

void put_vector(std::map<std::string, double>& c, const std::string& base,
                const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        c[base + "_" + std::to_string(i + 1)] = v[i];
}

}  // namespace

HypothesisReport check_hypotheses(const NonlinearitySpec& spec, double alpha,
                                  int dim, long sample_budget, unsigned seed,
                                  double box) {
    if (sample_budget < 1000)
        throw std::invalid_argument("sample_budget must be at least 1e3");
    if (!(alpha > 0.0) || dim < 1 || dim > 3)
        throw std::invalid_argument("need alpha > 0 and dim in {1,2,3}");

    HypothesisReport report;
    const double crit = 4.0 * alpha / dim;
    const NonlinearitySpec inf_spec = asymptotic_spec(spec);

    // ---------------------------------------------------------------- H1
    {
        HypothesisResult& r = report.h(1);
        Sampler s(seed ^ 0x1111u, spec.m, dim, box);
        auto l1 = growth_exponents(spec, 0.5 * crit);
        bool exponent_ok = true;
        for (double l : l1) exponent_ok = exponent_ok && l > 0.0 && l < crit;
        std::vector<double> capped = l1;
        for (double& l : capped) l = std::min(l, crit * (1.0 - 1e-9));
        std::vector<double> low(spec.m, 2.0);  // the plain |u|^2 floor of (H1)
        auto g = growth_ratio_check(spec, s, sample_budget, capped, low);
        put_vector(r.constants, "l1", l1);
        r.constants["A"] = g.A;
        r.constants["B"] = g.B;
        if (!exponent_ok || g.diverges) {
            r.verdict = Verdict::Fail;
            if (g.diverges) r.witness = g.witness;
        } else {
            r.verdict = Verdict::Pass;
        }
    }

    // ---------------------------------------------------------------- H2
    {
        HypothesisResult& r = report.h(2);
        Sampler s(seed ^ 0x2222u, spec.m, dim, box);
        const double S = 1.0;
        const double R = box / 8.0;
        r.constants["S"] = S;
        r.constants["R"] = R;

        // candidate: term active in every component with a positive
        // |x|^-t coefficient floor, smallest total power
        auto coeff_floor = [](const Coefficient& c) -> std::pair<double, double> {
            switch (c.kind) {
                case CoeffKind::Constant:
                case CoeffKind::ExpDecayPlusOne:
                case CoeffKind::Periodic:
                    return {c.min_value(), 0.0};
                case CoeffKind::InvOnePlus:
                    return {0.5 * c.kappa, 1.0};  // 1/(1+r) >= r^-1/2 for r >= 1
                case CoeffKind::PowerLaw:
                    return {c.kappa, c.exponent};
            }
            return {0.0, 0.0};
        };
        const Term* cand = nullptr;
        double beta = 0.0, t_exp = 0.0;
        for (const Term& t : spec.terms) {
            if (t.active_count() != spec.m) continue;
            const auto [b, te] = coeff_floor(t.coeff);
            if (!(b > 0.0)) continue;
            if (!cand || t.total_power() < cand->total_power()) {
                cand = &t;
                beta = b;
                t_exp = te;
            }
        }
        if (!cand) {
            r.verdict = Verdict::Fail;
            r.constants["candidates"] = 0.0;
            auto x = s.point_at_radius(R + 1.0);
            std::vector<double> u(spec.m, 0.5);
            const double f = eval_F(spec, x, u, kEvalEps);
            if (f <= 0.0)
                r.witness = make_witness(x, u, 0.0, f, 0.0,
                                         "no term activates every component; F "
                                         "is not strictly positive at this point");
        } else {
            double damp = 0.0;
            for (double d : cand->damping) damp += d;
            beta *= std::pow(2.0, -damp);  // (1+|u_i|)^d < 2^d for |u_i| < 1

            const double stotal = cand->total_power();
            const double t_bound = dim * (1.0 - stotal / (2.0 * alpha)) + 2.0;
            r.constants["beta"] = beta;
            r.constants["t"] = t_exp;
            r.constants["s"] = stotal;
            r.constants["t_bound"] = t_bound;
            put_vector(r.constants, "s", cand->powers);

            if (!(beta > 0.0) || !(t_exp < t_bound)) {
                r.verdict = Verdict::Fail;
            } else {
                r.verdict = Verdict::Pass;
                std::uniform_real_distribution<double> rad(R, 0.5 * box);
                for (long it = 0; it < sample_budget; ++it) {
                    auto x = s.point_at_radius(rad(s.rng));
                    auto u = s.u_sample(-6.0, 0.0);
                    double uu = 0.0;
                    for (double v : u) uu += v * v;
                    if (uu >= S) continue;
                    double rx = 0.0;
                    for (double v : x) rx += v * v;
                    rx = std::sqrt(rx);
                    if (rx < R) continue;
                    double rhs = beta * std::pow(rx, -t_exp);
                    for (int i = 0; i < spec.m; ++i)
                        rhs *= std::pow(std::abs(u[i]), cand->powers[i]);
                    const double f = eval_F(spec, x, u, kEvalEps);
                    if (!(f > rhs * (1.0 - 1e-9))) {
                        r.verdict = Verdict::Fail;
                        r.witness = make_witness(x, u, 0.0, f, rhs,
                                                 "F fails the (H2) lower bound");
                        break;
                    }
                }
            }
        }
    }

    // ------------------------------------------------------- H3 (and H6)
    // theta-scaling of the term-tag decompositions.
    auto scaling_check = [&](const NonlinearitySpec& sp, int j,
                             const std::vector<std::size_t>& idx, double exponent,
                             const std::string& label, Sampler& s, long budget,
                             std::optional<Witness>& witness) -> bool {
        if (idx.empty()) return true;
        for (long it = 0; it < budget; ++it) {
            auto x = s.point();
            auto u = s.u_sample(-3.0, 3.0);
            const double theta = s.theta();
            auto scaled = u;
            scaled[j] *= theta;
            const double base = eval_F_subset(sp, idx, x, u, kEvalEps);
            const double lift = eval_F_subset(sp, idx, x, scaled, kEvalEps);
            const double want = std::pow(theta, exponent) * base;
            if (lift < want * (1.0 - 1e-9) - 1e-300) {
                witness = make_witness(x, u, theta, lift, want,
                                       "scaling inequality violated on " + label +
                                           std::to_string(j + 1));
                return false;
            }
        }
        return true;
    };

    {
        HypothesisResult& r = report.h(3);
        Sampler s(seed ^ 0x3333u, spec.m, dim, box);
        r.verdict = Verdict::Pass;
        const long budget = std::max<long>(200, sample_budget / std::max(1, spec.m));
        for (int j = 0; j < spec.m && r.verdict == Verdict::Pass; ++j) {
            const auto f1 = terms_with(spec, j);
            std::optional<Witness> w;
            if (!scaling_check(spec, j, f1, 2.0, "F_1", s, budget, w)) {
                r.verdict = Verdict::Fail;
                r.witness = w;
                break;
            }
            // F_2j must be x-periodic: constant or tabulated-periodic coeffs
            for (std::size_t k : terms_without(spec, j)) {
                const Coefficient& c = spec.terms[k].coeff;
                const bool periodic = !c.transient() || c.kappa == 0.0;
                if (!periodic) {
                    r.verdict = Verdict::Fail;
                    auto x = s.point_at_radius(box / 16.0);
                    auto u = s.u_sample(-1.0, 1.0);
                    auto xL = x;
                    xL[0] += box / 4.0;
                    std::vector<std::size_t> one{k};
                    r.witness = make_witness(
                        x, u, 0.0, eval_F_subset(spec, one, xL, u, kEvalEps),
                        eval_F_subset(spec, one, x, u, kEvalEps),
                        "F_2" + std::to_string(j + 1) +
                            " contains a non-periodic coefficient (term " +
                            std::to_string(k + 1) + "); values at x and x+L differ");
                    break;
                }
            }
        }
    }

    // ---------------------------------------------------------------- H4
    {
        HypothesisResult& r = report.h(4);
        Sampler s(seed ^ 0x4444u, spec.m, dim, box);
        auto l2 = growth_exponents(spec, 0.5 * crit);
        put_vector(r.constants, "l2", l2);
        const int shells = 8;
        const long per_shell = std::max<long>(64, sample_budget / shells);
        std::vector<double> shell_ratio(shells, 0.0);
        for (int k = 0; k < shells; ++k) {
            const double rad = box / 16.0 + (0.49 * box - box / 16.0) * k / (shells - 1);
            for (long it = 0; it < per_shell; ++it) {
                auto x = s.point_at_radius(rad);
                auto u = s.u_sample(-3.0, 3.0);
                double denom = 0.0;
                for (int i = 0; i < spec.m; ++i) {
                    const double a = std::abs(u[i]);
                    denom += a * a + std::pow(a, l2[i] + 2.0);
                }
                const double diff = std::abs(eval_F(spec, x, u, kEvalEps) -
                                             eval_F(inf_spec, x, u, kEvalEps));
                shell_ratio[k] = std::max(shell_ratio[k], diff / denom);
            }
        }
        r.constants["ratio_inner"] = shell_ratio.front();
        r.constants["ratio_outer"] = shell_ratio.back();
        bool ok = true;
        for (int k = 1; k < shells; ++k)
            if (shell_ratio[k] > 1.1 * shell_ratio[k - 1]) ok = false;
        if (shell_ratio.front() > 0.0 && shell_ratio.back() > 0.6 * shell_ratio.front())
            ok = false;
        r.verdict = ok ? Verdict::Pass : Verdict::Fail;
        if (!ok)
            r.witness = make_witness({}, {}, 0.0, shell_ratio.back(),
                                     0.6 * shell_ratio.front(),
                                     "(F - Finf)/denominator does not decay "
                                     "toward the box edge");
    }

    // ---------------------------------------------------------------- H5
    {
        HypothesisResult& r = report.h(5);
        Sampler s(seed ^ 0x5555u, inf_spec.m, dim, box);
        if (inf_spec.terms.empty()) {
            r.verdict = Verdict::Fail;
            auto x = s.point();
            std::vector<double> u(spec.m, 1.0);
            r.witness = make_witness(x, u, 0.0, 0.0, 0.0,
                                     "F-infinity vanishes identically; no "
                                     "positive lower structure for (H2)/(H5)");
        } else {
            auto l3 = growth_exponents(inf_spec, 0.5 * crit);
            std::vector<double> beta_p(inf_spec.m, 0.0);
            for (int i = 0; i < inf_spec.m; ++i) {
                double small = l3[i] + 2.0;
                for (const Term& t : inf_spec.terms)
                    if (t.active(i)) small = std::min(small, t.total_power());
                beta_p[i] = std::min(small - 2.0, l3[i] * (1.0 - 1e-9));
            }
            bool exponent_ok = true;
            for (int i = 0; i < inf_spec.m; ++i)
                exponent_ok = exponent_ok && beta_p[i] > 0.0 && beta_p[i] < l3[i] &&
                              l3[i] < crit;
            std::vector<double> capped = l3;
            for (double& l : capped) l = std::min(l, crit * (1.0 - 1e-9));
            std::vector<double> low(inf_spec.m);
            for (int i = 0; i < inf_spec.m; ++i) low[i] = beta_p[i] + 2.0;
            auto g = growth_ratio_check(inf_spec, s, sample_budget, capped, low);
            put_vector(r.constants, "l3", l3);
            put_vector(r.constants, "beta_prime", beta_p);
            r.constants["A_prime"] = g.A;
            r.constants["B_prime"] = g.B;
            if (!exponent_ok || g.diverges) {
                r.verdict = Verdict::Fail;
                if (g.diverges) r.witness = g.witness;
            } else {
                r.verdict = Verdict::Pass;
            }
        }
    }

    // ---------------------------------------------------------------- H6
    {
        HypothesisResult& r = report.h(6);
        Sampler s(seed ^ 0x6666u, inf_spec.m, dim, box);
        r.verdict = Verdict::Pass;
        const long budget = std::max<long>(200, sample_budget / std::max(1, inf_spec.m));

        // Tag the decomposition: growth > 2 -> F^inf_1j, == 2 -> F^inf_2j,
        // in (0,2) -> no admissible slot.
        double sigma_auto = std::numeric_limits<double>::infinity();
        std::vector<std::vector<std::size_t>> f1(inf_spec.m), f2(inf_spec.m);
        for (int j = 0; j < inf_spec.m && r.verdict == Verdict::Pass; ++j) {
            for (std::size_t k = 0; k < inf_spec.terms.size(); ++k) {
                const Term& t = inf_spec.terms[k];
                if (!t.active(j)) continue;
                const double e = t.growth(j);
                if (e > 2.0 + 1e-12) {
                    f1[j].push_back(k);
                    sigma_auto = std::min(sigma_auto, e - 2.0);
                } else if (e >= 2.0 - 1e-12) {
                    f2[j].push_back(k);
                } else {
                    r.verdict = Verdict::Fail;
                    auto x = s.point();
                    auto u = s.u_sample(-1.0, 2.0);
                    auto scaled = u;
                    scaled[j] *= 1e3;
                    std::vector<std::size_t> one{k};
                    r.witness = make_witness(
                        x, u, 1e3, eval_F_subset(inf_spec, one, x, scaled, kEvalEps),
                        1e6 * eval_F_subset(inf_spec, one, x, u, kEvalEps),
                        "term " + std::to_string(k + 1) + " grows slower than "
                        "theta^2 in component " + std::to_string(j + 1));
                }
            }
        }

        if (r.verdict == Verdict::Pass) {
            double sigma = spec.sigma ? *spec.sigma
                          : std::isfinite(sigma_auto) ? sigma_auto
                                                      : 0.0;
            r.constants["sigma"] = sigma;
            bool any_f1 = false;
            for (const auto& v : f1) any_f1 = any_f1 || !v.empty();
            if (!(sigma > 0.0) && any_f1) r.verdict = Verdict::Fail;

            for (int j = 0; j < inf_spec.m && r.verdict == Verdict::Pass; ++j) {
                std::optional<Witness> w;
                if (!scaling_check(inf_spec, j, f1[j], 2.0 + sigma, "Finf_1", s,
                                   budget, w) ||
                    !scaling_check(inf_spec, j, f2[j], 2.0, "Finf_2", s, budget, w)) {
                    r.verdict = Verdict::Fail;
                    r.witness = w;
                }
            }

            // domination F^inf <= C sum_j F^inf_1j
            if (r.verdict == Verdict::Pass) {
                double C = 0.0;
                for (long it = 0; it < sample_budget; ++it) {
                    auto x = s.point();
                    auto u = s.u_sample(-3.0, 3.0);
                    const double f = eval_F(inf_spec, x, u, kEvalEps);
                    double denom = 0.0;
                    for (int j = 0; j < inf_spec.m; ++j)
                        denom += eval_F_subset(inf_spec, f1[j], x, u, kEvalEps);
                    if (denom <= 0.0) {
                        if (f > 1e-300) {
                            r.verdict = Verdict::Fail;
                            r.witness = make_witness(x, u, 0.0, f, 0.0,
                                                     "sum_j F^inf_1j vanishes but "
                                                     "F^inf does not; no domination "
                                                     "constant exists");
                            break;
                        }
                        continue;
                    }
                    C = std::max(C, f / denom);
                }
                r.constants["C"] = C;
            }
        }
    }

    // ---------------------------------------------------------------- H7
    {
        HypothesisResult& r = report.h(7);
        Sampler s(seed ^ 0x7777u, spec.m, dim, box);
        if (!spec.has_transient_terms()) {
            r.verdict = Verdict::NotApplicable;  // F == F-infinity structurally
            r.constants["strict_fraction"] = 0.0;
        } else {
            long strict = 0;
            r.verdict = Verdict::Pass;
            for (long it = 0; it < sample_budget; ++it) {
                auto x = s.point();
                auto u = s.u_sample(-3.0, 3.0);
                const double f = eval_F(spec, x, u, kEvalEps);
                const double fi = eval_F(inf_spec, x, u, kEvalEps);
                if (fi > f * (1.0 + 1e-12) + 1e-300) {
                    r.verdict = Verdict::Fail;
                    r.witness = make_witness(x, u, 0.0, fi, f,
                                             "F^inf exceeds F at this point");
                    break;
                }
                if (f - fi > 1e-14 * std::max(1.0, f)) {
                    ++strict;
                    if (!r.witness)
                        r.witness = make_witness(x, u, 0.0, fi, f,
                                                 "strictness witness: F^inf < F");
                }
            }
            r.constants["strict_fraction"] =
                static_cast<double>(strict) / static_cast<double>(sample_budget);
            if (r.verdict == Verdict::Pass && strict == 0) r.verdict = Verdict::Fail;
        }
    }

    return report;
}

std::string format_report(const HypothesisReport& report) {
    std::ostringstream os;
    for (int k = 1; k <= 7; ++k) {
        const HypothesisResult& r = report.h(k);
        os << "H" << k << ": " << to_string(r.verdict) << "; constants:";
        if (r.constants.empty()) {
            os << " none";
        } else {
            bool first = true;
            for (const auto& [name, value] : r.constants) {
                os << (first ? " " : ",") << name << "=";
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g", value);
                os << buf;
                first = false;
            }
        }
        os << "; witness: ";
        if (!r.witness) {
            os << "none";
        } else {
            auto join = [&os](const std::vector<double>& v) {
                for (std::size_t i = 0; i < v.size(); ++i) {
                    char buf[40];
                    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
                    os << (i ? "," : "") << buf;
                }
            };
            join(r.witness->x);
            os << ";";
            join(r.witness->u);
            os << ";";
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", r.witness->theta);
            os << buf;
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace frgs
