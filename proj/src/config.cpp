#include "frgs/config.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace frgs {

namespace {

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line;
};

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

const std::vector<std::string> kSections = {"problem", "nonlinearity", "solver",
                                            "scan",    "dilate",       "diagnose",
                                            "check"};

std::vector<Entry> tokenize(const std::string& text) {
    std::vector<Entry> entries;
    std::istringstream is(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (std::find(kSections.begin(), kSections.end(), section) ==
                kSections.end())
                throw ConfigError(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, "expected key = value");
        if (section.empty())
            throw ConfigError(line, "key outside of any [section]");
        entries.push_back(
            {section, trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line});
    }
    return entries;
}

double to_double(const Entry& e) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument(e.value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(e.line, "bad number '" + e.value + "' for " + e.key);
    }
}

long to_long(const Entry& e) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument(e.value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(e.line, "bad integer '" + e.value + "' for " + e.key);
    }
}

std::vector<double> to_list(const Entry& e) {
    std::vector<double> out;
    std::istringstream is(e.value);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(e.line, "bad list entry '" + item + "' for " + e.key);
        }
    }
    if (out.empty()) throw ConfigError(e.line, "empty list for " + e.key);
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& text,
                       const std::vector<ConfigOverride>& overrides,
                       bool enforce_subcritical, const std::string& base_dir) {
    std::vector<Entry> entries = tokenize(text);

    for (const ConfigOverride& o : overrides) {
        if (o.key == "term")
            throw ConfigError(0, "term lines cannot be overridden from the command line");
        if (std::find(kSections.begin(), kSections.end(), o.section) == kSections.end())
            throw ConfigError(0, "unknown section '" + o.section + "' in override");
        bool replaced = false;
        for (Entry& e : entries)
            if (e.section == o.section && e.key == o.key) {
                e.value = o.value;
                replaced = true;
            }
        if (!replaced) entries.push_back({o.section, o.key, o.value, 0});
    }

    RunConfig cfg;
    std::vector<Entry> term_entries;
    std::optional<Entry> sigma_entry, period_entry;

    // duplicate detection for everything except repeated term lines
    std::vector<std::pair<std::string, std::string>> seen;
    for (const Entry& e : entries) {
        if (e.section == "nonlinearity" && e.key == "term") {
            term_entries.push_back(e);
            continue;
        }
        const auto id = std::make_pair(e.section, e.key);
        if (std::find(seen.begin(), seen.end(), id) != seen.end())
            throw ConfigError(e.line, "duplicate key '" + e.key + "' in [" +
                                          e.section + "]");
        seen.push_back(id);
    }

    bool have_dim = false, have_alpha = false, have_components = false,
         have_masses = false, have_box = false, have_grid = false;
    std::vector<double> masses;

    for (const Entry& e : entries) {
        if (e.section == "problem") {
            if (e.key == "dim") {
                cfg.dim = static_cast<int>(to_long(e));
                have_dim = true;
            } else if (e.key == "alpha") {
                cfg.alpha = to_double(e);
                have_alpha = true;
            } else if (e.key == "components") {
                cfg.components = static_cast<int>(to_long(e));
                have_components = true;
            } else if (e.key == "masses") {
                masses = to_list(e);
                have_masses = true;
            } else if (e.key == "box") {
                cfg.box = to_double(e);
                have_box = true;
            } else if (e.key == "grid") {
                cfg.grid_points = static_cast<int>(to_long(e));
                have_grid = true;
            } else {
                throw ConfigError(e.line, "unknown key '" + e.key + "' in [problem]");
            }
        } else if (e.section == "nonlinearity") {
            if (e.key == "sigma")
                sigma_entry = e;
            else if (e.key == "period")
                period_entry = e;
            else if (e.key != "term")
                throw ConfigError(e.line,
                                  "unknown key '" + e.key + "' in [nonlinearity]");
        } else if (e.section == "solver") {
            if (e.key == "step")
                cfg.solver.step = to_double(e);
            else if (e.key == "tol")
                cfg.solver.tol = to_double(e);
            else if (e.key == "max_iter")
                cfg.solver.max_iter = to_long(e);
            else if (e.key == "backtrack")
                cfg.solver.backtrack = to_double(e);
            else if (e.key == "multistart")
                cfg.solver.multistart = static_cast<int>(to_long(e));
            else if (e.key == "seed")
                cfg.solver.seed = static_cast<unsigned>(to_long(e));
            else
                throw ConfigError(e.line, "unknown key '" + e.key + "' in [solver]");
        } else if (e.section == "scan") {
            if (e.key == "fractions")
                cfg.fractions = to_list(e);
            else
                throw ConfigError(e.line, "unknown key '" + e.key + "' in [scan]");
        } else if (e.section == "dilate") {
            if (e.key == "lambdas")
                cfg.lambdas = to_list(e);
            else if (e.key == "width")
                cfg.dilate_width = to_double(e);
            else
                throw ConfigError(e.line, "unknown key '" + e.key + "' in [dilate]");
        } else if (e.section == "diagnose") {
            if (e.key == "radii")
                cfg.radii = to_list(e);
            else if (e.key == "snapshots")
                cfg.snapshots = static_cast<int>(to_long(e));
            else if (e.key == "eps_v")
                cfg.eps_v = to_double(e);
            else if (e.key == "eps_d")
                cfg.eps_d = to_double(e);
            else
                throw ConfigError(e.line, "unknown key '" + e.key + "' in [diagnose]");
        } else if (e.section == "check") {
            if (e.key == "samples")
                cfg.check_samples = to_long(e);
            else
                throw ConfigError(e.line, "unknown key '" + e.key + "' in [check]");
        }
    }

    if (!have_dim) throw ConfigError(0, "[problem] dim is required");
    if (!have_alpha) throw ConfigError(0, "[problem] alpha is required");
    if (!have_components) throw ConfigError(0, "[problem] components is required");
    if (!have_masses) throw ConfigError(0, "[problem] masses is required");
    if (!have_box) throw ConfigError(0, "[problem] box is required");
    if (!have_grid) throw ConfigError(0, "[problem] grid is required");

    try {
        (void)make_grid(cfg.dim, cfg.box, cfg.grid_points);
    } catch (const std::invalid_argument& err) {
        throw ConfigError(0, err.what());
    }
    if (!(cfg.alpha > 0.0)) throw ConfigError(0, "alpha must be positive");
    if (cfg.components < 1) throw ConfigError(0, "components must be >= 1");
    if (masses.size() != static_cast<std::size_t>(cfg.components))
        throw ConfigError(0, "masses must list exactly one value per component");
    for (double c : masses)
        if (!(c > 0.0)) throw ConfigError(0, "masses must be positive");
    cfg.masses = masses;

    // nonlinearity block
    auto load_table = [&base_dir](const std::string& file) {
        const std::filesystem::path p = std::filesystem::path(base_dir) / file;
        std::ifstream is(p);
        if (!is)
            throw std::invalid_argument("periodic table file not found: " + p.string());
        std::vector<double> table;
        double v;
        while (is >> v) table.push_back(v);
        if (table.empty())
            throw std::invalid_argument("periodic table file is empty: " + p.string());
        return table;
    };

    std::vector<Term> terms;
    for (const Entry& e : term_entries) {
        try {
            terms.push_back(parse_term_line(e.value, cfg.components, cfg.dim, load_table));
        } catch (const std::exception& err) {
            throw ConfigError(e.line, err.what());
        }
    }
    std::optional<double> sigma;
    if (sigma_entry) {
        sigma = to_double(*sigma_entry);
        if (!(*sigma > 0.0)) throw ConfigError(sigma_entry->line, "sigma must be positive");
    }
    std::optional<std::vector<double>> period;
    if (period_entry) {
        period = to_list(*period_entry);
        if (period->size() != static_cast<std::size_t>(cfg.dim))
            throw ConfigError(period_entry->line,
                              "period needs one entry per dimension");
    }
    try {
        cfg.spec = NonlinearitySpec(cfg.components, std::move(terms), sigma, period);
    } catch (const std::exception& err) {
        throw ConfigError(term_entries.empty() ? 0 : term_entries.front().line,
                          err.what());
    }

    if (enforce_subcritical) {
        for (std::size_t k = 0; k < cfg.spec.terms.size(); ++k) {
            const double g = cfg.spec.terms[k].total_growth();
            if (!(g < cfg.subcritical_bound())) {
                std::ostringstream os;
                os << "term has total growth " << g
                   << " violating the (H1) subcriticality bound 2 + 4*alpha/N = "
                   << cfg.subcritical_bound();
                throw ConfigError(term_entries[k].line, os.str());
            }
        }
    }

    // solver / command-block validation
    if (!(cfg.solver.step > 0.0)) throw ConfigError(0, "solver step must be positive");
    if (!(cfg.solver.tol > 0.0)) throw ConfigError(0, "solver tol must be positive");
    if (cfg.solver.max_iter < 1) throw ConfigError(0, "max_iter must be >= 1");
    if (!(cfg.solver.backtrack > 0.0) || !(cfg.solver.backtrack < 1.0))
        throw ConfigError(0, "backtrack must lie in (0, 1)");
    if (cfg.solver.multistart < 1) throw ConfigError(0, "multistart must be >= 1");
    for (double f : cfg.fractions)
        if (!(f > 0.0) || !(f < 1.0))
            throw ConfigError(0, "scan fractions must lie strictly inside (0, 1)");
    for (double l : cfg.lambdas)
        if (!(l > 0.0) || l > 1.0)
            throw ConfigError(0, "dilation lambdas must lie in (0, 1]");
    if (cfg.dilate_width && !(*cfg.dilate_width > 0.0))
        throw ConfigError(0, "dilate width must be positive");
    double prev_r = 0.0;
    for (double r : cfg.radii) {
        if (!(r > 0.0) || r <= prev_r || r > 0.5 * cfg.box)
            throw ConfigError(0, "diagnose radii must be positive, increasing and <= box/2");
        prev_r = r;
    }
    if (cfg.snapshots < 3) throw ConfigError(0, "diagnose snapshots must be >= 3");
    if (cfg.check_samples < 1000)
        throw ConfigError(0, "check samples must be >= 1000");

    return cfg;
}

}  // namespace frgs
