#include "frgs/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace frgs {
namespace io {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string history_csv(const std::vector<HistoryEntry>& history, int m) {
    std::ostringstream os;
    os << "iter,energy,kinetic,potential,residual";
    for (int i = 1; i <= m; ++i) os << ",mass_" << i;
    for (int i = 1; i <= m; ++i) os << ",lambda_" << i;
    os << "\n";
    for (const HistoryEntry& h : history) {
        os << h.iter << "," << fmt(h.energy.total) << "," << fmt(h.energy.kinetic)
           << "," << fmt(h.energy.potential) << "," << fmt(h.residual);
        for (double v : h.masses) os << "," << fmt(v);
        for (double v : h.lambdas) os << "," << fmt(v);
        os << "\n";
    }
    return os.str();
}

std::string scan_csv(const SubadditivityTable& table, int m) {
    std::ostringstream os;
    os << "f";
    for (int i = 1; i <= m; ++i) os << ",a_" << i;
    os << ",I_a,I_cma,I_c,slack,I_inf_cma,mixed_slack\n";
    for (const SubadditivityRow& r : table.rows) {
        os << fmt(r.fraction);
        for (double v : r.a) os << "," << fmt(v);
        os << "," << fmt(r.I_a) << "," << fmt(r.I_cma) << "," << fmt(r.I_c) << ","
           << fmt(r.slack) << "," << fmt(r.I_inf_cma) << "," << fmt(r.mixed_slack)
           << "\n";
    }
    return os.str();
}

std::string dilate_csv(const DilationTable& table) {
    std::ostringstream os;
    os << "lambda,energy\n";
    for (const DilationPoint& p : table.points)
        os << fmt(p.lambda) << "," << fmt(p.energy) << "\n";
    return os.str();
}

std::string qfun_csv(const std::vector<ConcentrationProfile>& profiles, int dim) {
    std::ostringstream os;
    os << "snapshot,r,Q";
    for (int a = 1; a <= dim; ++a) os << ",center_" << a;
    os << "\n";
    for (std::size_t s = 0; s < profiles.size(); ++s) {
        const ConcentrationProfile& p = profiles[s];
        for (std::size_t k = 0; k < p.radii.size(); ++k) {
            os << s << "," << fmt(p.radii[k]) << "," << fmt(p.q[k]);
            for (int a = 0; a < dim; ++a) os << "," << fmt(p.centers[k][a]);
            os << "\n";
        }
    }
    return os.str();
}

namespace {

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int b = 3; b >= 0; --b) v = (v << 8) | p[b];
    return v;
}

}  // namespace

std::vector<unsigned char> encode_state(const State& state) {
    std::vector<unsigned char> out;
    const Grid& g = state.grid();
    out.reserve(32 + sizeof(double) * state.m() * g.node_count());
    out.push_back('F');
    out.push_back('R');
    out.push_back('G');
    out.push_back('S');
    put_u32(out, 1);  // version
    put_u32(out, static_cast<std::uint32_t>(g.dim));
    put_u32(out, static_cast<std::uint32_t>(g.points));
    put_u32(out, static_cast<std::uint32_t>(state.m()));
    double alpha = state.alpha;
    unsigned char ab[8];
    std::memcpy(ab, &alpha, 8);  // little-endian host assumed; documented format
    out.insert(out.end(), ab, ab + 8);
    put_u32(out, 0);  // pad to 32 bytes
    for (const Field& f : state.components) {
        const unsigned char* p =
            reinterpret_cast<const unsigned char*>(f.values.data());
        out.insert(out.end(), p, p + f.values.size() * sizeof(double));
    }
    return out;
}

State decode_state(const std::vector<unsigned char>& bytes) {
    if (bytes.size() < 32 || std::memcmp(bytes.data(), "FRGS", 4) != 0)
        throw std::runtime_error("not a FRGS state file");
    const std::uint32_t version = get_u32(bytes.data() + 4);
    if (version != 1) throw std::runtime_error("unsupported state version");
    const int dim = static_cast<int>(get_u32(bytes.data() + 8));
    const int n = static_cast<int>(get_u32(bytes.data() + 12));
    const int m = static_cast<int>(get_u32(bytes.data() + 16));
    double alpha = 0.0;
    std::memcpy(&alpha, bytes.data() + 20, 8);

    // the header does not carry the box; decode onto a unit-spacing box
    Grid g = make_grid(dim, static_cast<double>(n), n);
    const std::size_t nodes = g.node_count();
    if (bytes.size() != 32 + sizeof(double) * nodes * m)
        throw std::runtime_error("state payload size mismatch");
    std::vector<Field> comps;
    comps.reserve(m);
    for (int i = 0; i < m; ++i) {
        std::vector<double> v(nodes);
        std::memcpy(v.data(), bytes.data() + 32 + sizeof(double) * nodes * i,
                    nodes * sizeof(double));
        comps.emplace_back(g, std::move(v));
    }
    return State(std::move(comps), std::vector<double>(m, 1.0), alpha);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
}

void write_file(const std::string& path, const std::vector<unsigned char>& bytes) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace io
}  // namespace frgs
