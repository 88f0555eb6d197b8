#include "frgs/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "frgs/config.hpp"
#include "frgs/diagnostics.hpp"
#include "frgs/energy.hpp"
#include "frgs/hypotheses.hpp"
#include "frgs/io.hpp"
#include "frgs/minimizer.hpp"
#include "frgs/spectral.hpp"

namespace frgs {
namespace cli {

namespace {

std::vector<ConfigOverride> parse_sets(const std::vector<std::string>& sets) {
    std::vector<ConfigOverride> out;
    for (const std::string& s : sets) {
        const auto eq = s.find('=');
        const auto dot = s.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            throw ConfigError(0, "--set expects section.key=value, got '" + s + "'");
        out.push_back({s.substr(0, dot), s.substr(dot + 1, eq - dot - 1),
                       s.substr(eq + 1)});
    }
    return out;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& sets,
                      bool enforce_subcritical) {
    if (!std::filesystem::exists(path))
        throw ConfigError(0, "config file not found: " + path);
    const std::string base =
        std::filesystem::path(path).parent_path().string();
    return parse_config(io::read_text_file(path), parse_sets(sets),
                        enforce_subcritical, base.empty() ? "." : base);
}

void ensure_outdir(const std::string& dir) {
    std::filesystem::create_directories(dir);
}

int cmd_solve(const RunConfig& cfg, const std::string& out) {
    const Grid grid = cfg.make_problem_grid();
    auto [estimate, best] =
        ground_state_energy(cfg.masses, cfg.spec, grid, cfg.alpha, cfg.solver);

    ensure_outdir(out);
    io::write_file(out + "/history.csv",
                   io::history_csv(best.history, cfg.components));
    io::write_file(out + "/state.f64", io::encode_state(best.state));

    std::ostringstream sum;
    sum << "status = " << to_string(best.status) << "\n";
    sum << "energy = " << io::fmt(best.energy.total) << "\n";
    sum << "kinetic = " << io::fmt(best.energy.kinetic) << "\n";
    sum << "potential = " << io::fmt(best.energy.potential) << "\n";
    for (std::size_t i = 0; i < best.multipliers.size(); ++i)
        sum << "lambda_" << (i + 1) << " = " << io::fmt(best.multipliers[i]) << "\n";
    sum << "residual = " << io::fmt(best.residual) << "\n";
    sum << "I_estimate = " << io::fmt(estimate) << "\n";
    io::write_file(out + "/summary.txt", sum.str());
    std::cout << sum.str();
    return best.status == SolveStatus::Stalled ? 3 : 0;
}

int cmd_scan(const RunConfig& cfg, const std::string& out) {
    const Grid grid = cfg.make_problem_grid();
    SubadditivityTable table = subadditivity_scan(cfg.masses, cfg.fractions,
                                                  cfg.spec, grid, cfg.alpha,
                                                  cfg.solver);
    ensure_outdir(out);
    io::write_file(out + "/scan.csv", io::scan_csv(table, cfg.components));

    std::ostringstream sum;
    sum << "I_c = " << io::fmt(table.I_c) << "\n";
    sum << "I_c_error = " << io::fmt(table.I_c_error) << "\n";
    for (const SubadditivityRow& r : table.rows)
        sum << "f = " << io::fmt(r.fraction) << ": slack = " << io::fmt(r.slack)
            << ", mixed_slack = " << io::fmt(r.mixed_slack)
            << ", error_bar = " << io::fmt(r.error_bar) << "\n";
    io::write_file(out + "/summary.txt", sum.str());
    std::cout << sum.str();
    return 0;
}

int cmd_check(const RunConfig& cfg, const std::string& out) {
    HypothesisReport report =
        check_hypotheses(cfg.spec, cfg.alpha, cfg.dim, cfg.check_samples,
                         cfg.solver.seed, cfg.box);
    const std::string text = format_report(report);
    ensure_outdir(out);
    io::write_file(out + "/hypotheses.txt", text);
    std::cout << text;
    return 0;  // verdicts are results, not failures
}

int cmd_dilate(const RunConfig& cfg, const std::string& out) {
    const Grid grid = cfg.make_problem_grid();
    const double width = cfg.dilate_width.value_or(cfg.box / 40.0);
    Field profile = gaussian_field(grid, {0.0, 0.0, 0.0}, width);
    const double scale = std::sqrt(1.0 / mass(profile));
    for (double& v : profile.values) v *= scale;

    const std::vector<double> lambdas =
        cfg.lambdas.empty() ? default_dilation_lambdas() : cfg.lambdas;
    DilationTable table =
        dilation_test(cfg.masses, cfg.spec, grid, cfg.alpha, profile, lambdas);

    ensure_outdir(out);
    io::write_file(out + "/dilate.csv", io::dilate_csv(table));
    std::ostringstream sum;
    if (table.lambda_star)
        sum << "lambda_star = " << io::fmt(*table.lambda_star)
            << ", energy = " << io::fmt(*table.energy_star) << "\n";
    else
        sum << "lambda_star = none\n";
    io::write_file(out + "/summary.txt", sum.str());
    std::cout << sum.str();
    return 0;
}

int cmd_diagnose(const RunConfig& cfg, const std::string& out) {
    const Grid grid = cfg.make_problem_grid();

    SnapshotBuffer buffer(64);
    std::vector<Field> comps(cfg.masses.size(),
                             gaussian_field(grid, {0.0, 0.0, 0.0}, cfg.box / 10.0));
    State initial = project_to_constraint(State(comps, cfg.masses, cfg.alpha));
    minimize(initial, cfg.spec, cfg.solver,
             [&buffer](long iter, const State& s) { buffer.offer(iter, s); });

    std::vector<State> snapshots = buffer.pick(cfg.snapshots);

    std::vector<double> radii = cfg.radii;
    if (radii.empty())
        for (int k = 1; k <= 16; ++k) radii.push_back(0.5 * cfg.box * k / 16.0);

    std::vector<ConcentrationProfile> profiles;
    for (const State& s : snapshots)
        profiles.push_back(concentration_function(s, radii));

    double c_tot = 0.0;
    for (double c : cfg.masses) c_tot += c;
    std::string label = "undetermined";
    if (snapshots.size() >= 3) {
        const Classification cls = classify_sequence(
            snapshots, {cfg.eps_v.value_or(0.05 * c_tot), cfg.eps_d.value_or(0.1 * c_tot)});
        label = to_string(cls);
    }

    ensure_outdir(out);
    io::write_file(out + "/qfun.csv", io::qfun_csv(profiles, cfg.dim));
    std::ostringstream sum;
    sum << "classification = " << label << "\n";
    io::write_file(out + "/summary.txt", sum.str());
    std::cout << sum.str();
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"normalized ground states of coupled fractional Schrodinger systems"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> sets;

    struct Sub {
        CLI::App* app;
        const char* name;
    };
    std::vector<Sub> subs;
    for (const char* name : {"solve", "scan-subadd", "check", "dilate", "diagnose"}) {
        CLI::App* s = app.add_subcommand(name);
        s->add_option("--config", config_path, "run configuration file")->required();
        s->add_option("--out", out_dir, "output directory");
        s->add_option("--set", sets, "override: section.key=value");
        subs.push_back({s, name});
    }

    std::vector<const char*> argv;
    argv.push_back("frgs");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    std::string command;
    for (const Sub& s : subs)
        if (s.app->parsed()) command = s.name;

    try {
        const bool strict = command != "check";
        const RunConfig cfg = load_config(config_path, sets, strict);
        if (command == "solve") return cmd_solve(cfg, out_dir);
        if (command == "scan-subadd") return cmd_scan(cfg, out_dir);
        if (command == "check") return cmd_check(cfg, out_dir);
        if (command == "dilate") return cmd_dilate(cfg, out_dir);
        if (command == "diagnose") return cmd_diagnose(cfg, out_dir);
        std::cerr << "unknown subcommand\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace cli
}  // namespace frgs
