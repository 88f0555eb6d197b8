#pragma once

#include <string>
#include <vector>

#include "frgs/diagnostics.hpp"
#include "frgs/energy.hpp"
#include "frgs/minimizer.hpp"

namespace frgs {
namespace io {

/// 17-significant-digit float formatting used by every emitted file.
std::string fmt(double v);

/// header: iter,energy,kinetic,potential,residual,mass_1..m,lambda_1..m
std::string history_csv(const std::vector<HistoryEntry>& history, int m);

/// header: f,a_1..a_m,I_a,I_cma,I_c,slack,I_inf_cma,mixed_slack
std::string scan_csv(const SubadditivityTable& table, int m);

/// header: lambda,energy  (inadmissible rows report energy nan)
std::string dilate_csv(const DilationTable& table);

/// header: snapshot,r,Q,center_1..center_N
std::string qfun_csv(const std::vector<ConcentrationProfile>& profiles, int dim);

/// Raw little-endian doubles, components concatenated, preceded by the
/// 32-byte header: magic "FRGS", u32 version, u32 dim, u32 n, u32 m,
/// f64 alpha, 4 zero pad bytes.
std::vector<unsigned char> encode_state(const State& state);
State decode_state(const std::vector<unsigned char>& bytes);

void write_file(const std::string& path, const std::string& text);
void write_file(const std::string& path, const std::vector<unsigned char>& bytes);
std::string read_text_file(const std::string& path);

}  // namespace io
}  // namespace frgs
