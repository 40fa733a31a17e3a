#include "qtraj/ensemble.hpp"

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <fstream>
#include <memory>
#include <thread>

namespace qtraj {

namespace {

void append_series(EnsembleStats& stats, std::size_t slot, const std::vector<double>& values) {
    for (std::size_t t = 0; t < values.size(); ++t) stats.series[slot][t].add(values[t]);
}

}  // namespace

void EnsembleStats::add_trajectory(const TrajectoryRecord& rec) {
    std::vector<std::string> rec_names = rec.observable_names;
    if (!rec.entropy.empty()) rec_names.push_back("entropy");
    rec_names.push_back("leakage");

    if (empty()) {
        times = rec.times;
        names = rec_names;
        series.assign(names.size(), std::vector<RunningStats>(times.size()));
    } else {
        if (times != rec.times || names != rec_names)
            throw std::invalid_argument("EnsembleStats: trajectory grid mismatch");
    }

    std::size_t slot = 0;
    for (const auto& obs : rec.observables) append_series(*this, slot++, obs);
    if (!rec.entropy.empty()) append_series(*this, slot++, rec.entropy);
    append_series(*this, slot++, rec.leakage);
}

void EnsembleStats::merge(const EnsembleStats& other) {
    if (other.empty()) return;
    if (empty()) {
        *this = other;
        return;
    }
    if (times != other.times || names != other.names)
        throw std::invalid_argument("EnsembleStats::merge: grid mismatch");
    for (std::size_t s = 0; s < series.size(); ++s)
        for (std::size_t t = 0; t < series[s].size(); ++t)
            series[s][t].merge(other.series[s][t]);
}

namespace {

constexpr std::uint64_t kCheckpointMagic = 0x51545241'4a434b31ull;  // "QTRAJCK1"

void write_u64(std::ostream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint64_t read_u64(std::istream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
void write_doubles(std::ostream& os, const double* p, std::size_t n) {
    os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}
void read_doubles(std::istream& is, double* p, std::size_t n) {
    is.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}
void write_vec(std::ostream& os, const std::vector<double>& v) {
    write_u64(os, v.size());
    write_doubles(os, v.data(), v.size());
}
std::vector<double> read_vec(std::istream& is) {
    std::vector<double> v(read_u64(is));
    read_doubles(is, v.data(), v.size());
    return v;
}
void write_string(std::ostream& os, const std::string& s) {
    write_u64(os, s.size());
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}
std::string read_string(std::istream& is) {
    std::string s(read_u64(is), '\0');
    is.read(s.data(), static_cast<std::streamsize>(s.size()));
    return s;
}

}  // namespace

void save_trajectory(const std::filesystem::path& file, const TrajectoryRecord& rec) {
    std::filesystem::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("save_trajectory: cannot open " + tmp.string());
        write_u64(os, kCheckpointMagic);
        write_u64(os, rec.run_seed);
        write_u64(os, rec.trajectory_index);
        write_u64(os, rec.aborted ? 1 : 0);
        write_string(os, rec.abort_reason);
        write_vec(os, rec.times);
        write_u64(os, rec.observable_names.size());
        for (std::size_t i = 0; i < rec.observable_names.size(); ++i) {
            write_string(os, rec.observable_names[i]);
            write_vec(os, rec.observables[i]);
        }
        write_vec(os, rec.entropy);
        write_vec(os, rec.leakage);
        write_vec(os, rec.norm_defect);
        write_vec(os, rec.jump_times);
        write_u64(os, static_cast<std::uint64_t>(rec.final_state.size()));
        write_doubles(os, reinterpret_cast<const double*>(rec.final_state.data()),
                      2 * static_cast<std::size_t>(rec.final_state.size()));
        if (!os) throw std::runtime_error("save_trajectory: write failed");
    }
    std::filesystem::rename(tmp, file);
}

TrajectoryRecord load_trajectory(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw std::runtime_error("load_trajectory: cannot open " + file.string());
    if (read_u64(is) != kCheckpointMagic)
        throw std::runtime_error("load_trajectory: bad magic in " + file.string());
    TrajectoryRecord rec;
    rec.run_seed = read_u64(is);
    rec.trajectory_index = read_u64(is);
    rec.aborted = read_u64(is) != 0;
    rec.abort_reason = read_string(is);
    rec.times = read_vec(is);
    std::size_t n_obs = read_u64(is);
    for (std::size_t i = 0; i < n_obs; ++i) {
        rec.observable_names.push_back(read_string(is));
        rec.observables.push_back(read_vec(is));
    }
    rec.entropy = read_vec(is);
    rec.leakage = read_vec(is);
    rec.norm_defect = read_vec(is);
    rec.jump_times = read_vec(is);
    auto dim = static_cast<Eigen::Index>(read_u64(is));
    rec.final_state.resize(dim);
    read_doubles(is, reinterpret_cast<double*>(rec.final_state.data()),
                 2 * static_cast<std::size_t>(dim));
    if (!is) throw std::runtime_error("load_trajectory: truncated file " + file.string());
    return rec;
}

EnsembleResult run_ensemble(const SystemModel& model, const StateVector& psi0,
                            const EnsembleConfig& config,
                            const std::vector<NamedOperator>& observables) {
    if (config.n_trajectories < 1)
        throw std::invalid_argument("run_ensemble: n_trajectories must be >= 1");
    const int n = config.n_trajectories;
    const int workers = std::max(1, config.workers);

    if (config.checkpoint_dir)
        std::filesystem::create_directories(*config.checkpoint_dir);

    auto checkpoint_file = [&](int i) {
        char name[32];
        std::snprintf(name, sizeof(name), "traj_%06d.bin", i);
        return *config.checkpoint_dir / name;
    };

    std::vector<std::unique_ptr<TrajectoryRecord>> records(n);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                if (config.checkpoint_dir && std::filesystem::exists(checkpoint_file(i))) {
                    records[i] = std::make_unique<TrajectoryRecord>(
                        load_trajectory(checkpoint_file(i)));
                    continue;
                }
                auto rec = std::make_unique<TrajectoryRecord>(run_trajectory(
                    model, psi0, config.step, config.seed, static_cast<std::uint64_t>(i),
                    config.t0, config.t1, config.record_every, observables));
                if (config.checkpoint_dir) save_trajectory(checkpoint_file(i), *rec);
                records[i] = std::move(rec);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failed.store(true);
                failure = e.what();
                return;
            }
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) throw std::runtime_error("run_ensemble: " + failure);

    // deterministic aggregation in trajectory-index order
    EnsembleResult result;
    const double t_cut = config.t0 + config.transient_fraction * (config.t1 - config.t0);
    DensityMatrix rho_sum;
    long long rho_count = 0;

    for (int i = 0; i < n; ++i) {
        const TrajectoryRecord& rec = *records[i];
        if (rec.aborted) {
            ++result.aborted_count;
            result.abort_reasons.push_back(rec.abort_reason);
            continue;
        }
        result.stats.add_trajectory(rec);
        for (double l : rec.leakage) result.max_leakage = std::max(result.max_leakage, l);
        if (!rec.entropy.empty()) {
            RunningStats s;
            for (std::size_t t = 0; t < rec.times.size(); ++t)
                if (rec.times[t] >= t_cut) s.add(rec.entropy[t]);
            result.trajectory_entropy_means.push_back(s.mean);
        }
        for (double jt : rec.jump_times) result.jump_times.push_back(jt);
        if (config.accumulate_final_rho) {
            if (rho_count == 0)
                rho_sum = DensityMatrix::Zero(rec.final_state.size(), rec.final_state.size());
            rho_sum += rec.final_state * rec.final_state.adjoint();
            ++rho_count;
        }
    }
    if (rho_count > 0) result.mean_final_rho = rho_sum / static_cast<double>(rho_count);
    if (result.trajectory_entropy_means.size() >= 2)
        result.entropy_summary =
            settled_mean(result.trajectory_entropy_means, config.settle_tolerance);
    return result;
}

}  // namespace qtraj
