#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qtraj/config.hpp"
#include "qtraj/ensemble.hpp"

namespace qtraj {

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    int workers = 1;
    bool resume = false;
    std::optional<std::string> output_dir;
};

struct BuiltSystem {
    SystemModel model;
    StateVector psi0;
    std::vector<NamedOperator> observables;
};

/// Model, initial state and observable set for one (resolved) config.
BuiltSystem build_system(const RunConfig& config);

/// Location of the local potential minimum of the biased SQUID well,
/// in oscillator units, nearest above the static bias point.
double squid_potential_minimum(const SquidPhysicalParams& phys);

/// Execute the config: every sweep point, persisted CSVs, summary table.
/// Returns 0 on success. Output paths resolve against $QTRAJ_OUTPUT_DIR
/// when the configured output_dir is relative.
int run_config(const RunConfig& config, const RunOverrides& overrides);

/// Emit <out_prefix>.dat and a gnuplot script <out_prefix>.gp rendering
/// mean entropy vs. sweep value with error bars, one series per summary.
int emit_plot(const std::vector<std::filesystem::path>& summaries,
              const std::filesystem::path& out_prefix);

/// Full-precision (17 significant digits) decimal formatting.
std::string format_full(double v);

}  // namespace qtraj
