#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qtraj/observables.hpp"
#include "qtraj/stochastic.hpp"

namespace qtraj {

/// Point-by-point running moments of every recorded series across
/// trajectories. Merge is exact and associative, so aggregation order
/// (and worker count) never changes the result as long as trajectories
/// are merged in index order.
struct EnsembleStats {
    std::vector<double> times;
    std::vector<std::string> names;  // observables, then "entropy", "leakage"
    std::vector<std::vector<RunningStats>> series;  // [name][time]

    void add_trajectory(const TrajectoryRecord& rec);
    void merge(const EnsembleStats& other);
    bool empty() const { return times.empty(); }
};

struct EnsembleConfig {
    int n_trajectories = 1;
    std::uint64_t seed = 0;
    int workers = 1;
    StepperConfig step{};
    double t0 = 0.0;
    double t1 = 1.0;
    int record_every = 1;
    /// Fraction of each trajectory discarded before time averaging.
    double transient_fraction = 0.25;
    double settle_tolerance = 0.01;
    /// Accumulate the ensemble-mean |psi><psi| at the final time.
    bool accumulate_final_rho = false;
    /// When set, completed trajectories are checkpointed here and reloaded
    /// on resume instead of being recomputed.
    std::optional<std::filesystem::path> checkpoint_dir;
};

struct EnsembleResult {
    EnsembleStats stats;
    /// Post-transient time-averaged entanglement entropy per trajectory,
    /// in trajectory-index order (2-mode models only).
    std::vector<double> trajectory_entropy_means;
    SettledMean entropy_summary;  // settled_mean over the above
    DensityMatrix mean_final_rho;
    std::vector<double> jump_times;  // pooled across trajectories, index order
    double max_leakage = 0.0;
    int aborted_count = 0;
    std::vector<std::string> abort_reasons;
};

/// Run n_trajectories seeded (seed, 0..n-1) over a bounded worker pool and
/// aggregate deterministically in index order.
EnsembleResult run_ensemble(const SystemModel& model, const StateVector& psi0,
                            const EnsembleConfig& config,
                            const std::vector<NamedOperator>& observables);

/// Trajectory checkpoint serialization (binary, exact doubles).
void save_trajectory(const std::filesystem::path& file, const TrajectoryRecord& rec);
TrajectoryRecord load_trajectory(const std::filesystem::path& file);

}  // namespace qtraj
