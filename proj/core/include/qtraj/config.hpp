#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qtraj/models.hpp"

namespace qtraj {

enum class ModelKind { duffing_pair, squid_pair, single_mode_test };
enum class RunMethod { qsd, jumps, lindblad_oracle };

struct SquidConfig {
    SquidPhysicalParams phys = SquidPhysicalParams::base();
    double scale_a = 1.0;
    double scale_b = 1.0;
    double mu = 0.2;

    SquidPhysicalParams scaled() const { return apply_scaling(phys, scale_a, scale_b); }
};

struct SingleModeConfig {
    double zeta = 0.25;
    double drive_amp = 1.0;
    double omega = 1.0;
};

struct InitialStateConfig {
    // coherent: per-mode alpha; fock: per-mode level; bias_minimum: coherent
    // state at the static flux bias (SQUID models only)
    std::string type = "coherent";
    std::vector<Complex> alpha;
    std::vector<int> fock_n;
};

struct SweepEntry {
    std::string path;  // e.g. "squid.scale_a", "duffing.beta"
    std::vector<double> values;
};

/// One run configuration. Physical quantities carry explicit units in the
/// file (C_farads, L_henries, ...); dimensionless groups are always derived.
struct RunConfig {
    ModelKind model = ModelKind::squid_pair;
    RunMethod method = RunMethod::qsd;
    int n_levels = 15;
    double dt = 1e-3;
    double t0 = 0.0;
    double t1 = 1.0;
    int n_trajectories = 1;
    std::uint64_t seed = 0;
    int record_every = 1;
    double transient_fraction = 0.25;
    double settle_tolerance = 0.01;
    std::string output_dir = "qtraj_out";

    SquidConfig squid;
    DuffingParams duffing;
    SingleModeConfig single_mode;
    InitialStateConfig initial_state;
    std::vector<SweepEntry> sweep;
};

RunConfig parse_config(const std::filesystem::path& file);
RunConfig parse_config_text(const std::string& json_text);
std::string config_to_json(const RunConfig& config);

/// Full validation; throws std::invalid_argument naming the offending key.
void validate_config(const RunConfig& config);

/// Apply one swept value to a copy of the config.
RunConfig with_sweep_value(const RunConfig& config, const std::string& path, double value);

}  // namespace qtraj
