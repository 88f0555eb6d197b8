#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frgs/nonlinearity.hpp"

namespace frgs {

enum class Verdict { Pass, Fail, NotApplicable };

std::string to_string(Verdict v);

/// Concrete sample at which a sampled inequality re-evaluates to a
/// violation; lhs/rhs record the two sides as observed.
struct Witness {
    std::vector<double> x;
    std::vector<double> u;
    double theta = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string detail;
};

struct HypothesisResult {
    Verdict verdict = Verdict::NotApplicable;
    std::map<std::string, double> constants;  // fitted A, B, beta, sigma, ...
    std::optional<Witness> witness;
};

/// Verdicts and fitted constants for (H1)-(H7); index 0 is H1.
struct HypothesisReport {
    std::array<HypothesisResult, 7> hypotheses;

    const HypothesisResult& h(int k) const { return hypotheses.at(k - 1); }
    HypothesisResult& h(int k) { return hypotheses.at(k - 1); }
    bool all_pass() const;
};

/// Seeded sampled verification of (H1)-(H7) for the given spec. A pass is
/// "no counterexample within budget", not a proof; sampling uses |u_i|
/// log-spaced in [1e-6, 1e6] and |x| up to box/2.
HypothesisReport check_hypotheses(const NonlinearitySpec& spec, double alpha,
                                  int dim, long sample_budget, unsigned seed,
                                  double box = 40.0);

/// One line per hypothesis:
/// `H<k>: pass|fail|n/a; constants: <name=value,...>; witness: <x;u;theta|none>`
std::string format_report(const HypothesisReport& report);

}  // namespace frgs
