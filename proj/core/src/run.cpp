#include "qtraj/run.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qtraj/lindblad.hpp"

namespace qtraj {

namespace {

namespace fs = std::filesystem;

std::vector<NamedOperator> standard_observables(const FockSpace& space) {
    std::vector<NamedOperator> obs;
    for (int m = 0; m < space.n_modes; ++m) {
        std::string suffix = std::to_string(m + 1);
        obs.push_back({"x" + suffix, position(space, m)});
        obs.push_back({"p" + suffix, momentum(space, m)});
        obs.push_back({"n" + suffix, number_op(space, m)});
    }
    return obs;
}

Eigen::VectorXcd mode_state(const InitialStateConfig& init, int n_levels, int mode,
                            double bias_minimum_x) {
    if (init.type == "fock") {
        int n = mode < static_cast<int>(init.fock_n.size()) ? init.fock_n[mode] : 0;
        return fock_state(n_levels, n);
    }
    Complex alpha(0.0, 0.0);
    if (init.type == "bias_minimum")
        alpha = Complex(bias_minimum_x / std::sqrt(2.0), 0.0);
    else if (mode < static_cast<int>(init.alpha.size()))
        alpha = init.alpha[mode];
    return coherent_state(n_levels, alpha);
}

}  // namespace

double squid_potential_minimum(const SquidPhysicalParams& phys) {
    SquidDimensionlessParams d = squid_dimensionless(phys);
    double josephson = phys.I_c / (2.0 * constants::elem_charge * d.omega0);
    double x_bias = flux_to_x_scale(phys) * constants::flux_quantum * d.phi_x;

    // dV/dx = (x - x_bias) + J Omega sin(Omega x); scan then bisect for the
    // first root with positive curvature at or above the bias point.
    auto grad = [&](double x) {
        return (x - x_bias) + josephson * d.Omega * std::sin(d.Omega * x);
    };
    auto curv = [&](double x) {
        return 1.0 + josephson * d.Omega * d.Omega * std::cos(d.Omega * x);
    };
    if (curv(x_bias) > 0.0 && std::abs(grad(x_bias)) < 1e-12) return x_bias;

    const double span = 3.14159265358979323846 / d.Omega;  // half a Josephson period
    const int n_scan = 4000;
    double prev_x = x_bias, prev_g = grad(prev_x);
    for (int i = 1; i <= n_scan; ++i) {
        double x = x_bias + span * static_cast<double>(i) / n_scan;
        double g = grad(x);
        if (prev_g == 0.0 || (prev_g < 0.0) != (g < 0.0)) {
            double lo = prev_x, hi = x;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                if ((grad(lo) < 0.0) == (grad(mid) < 0.0)) lo = mid;
                else hi = mid;
            }
            double root = 0.5 * (lo + hi);
            if (curv(root) > 0.0) return root;
        }
        prev_x = x;
        prev_g = g;
    }
    // no interior well: the bias point itself is the minimum
    return x_bias;
}

BuiltSystem build_system(const RunConfig& config) {
    validate_config(config);
    int n_modes = config.model == ModelKind::single_mode_test ? 1 : 2;
    FockSpace space(config.n_levels, n_modes);

    SystemModel model = [&] {
        switch (config.model) {
            case ModelKind::duffing_pair:
                return duffing_pair(config.duffing, space);
            case ModelKind::squid_pair:
                return squid_pair(config.squid.scaled(), config.squid.mu, space);
            case ModelKind::single_mode_test:
            default:
                return damped_driven_mode(config.single_mode.zeta,
                                          config.single_mode.drive_amp,
                                          config.single_mode.omega, space);
        }
    }();

    double bias_min = 0.0;
    if (config.initial_state.type == "bias_minimum")
        bias_min = squid_potential_minimum(config.squid.scaled());

    Eigen::VectorXcd psi0 = mode_state(config.initial_state, config.n_levels, 0, bias_min);
    if (n_modes == 2)
        psi0 = product_state(psi0,
                             mode_state(config.initial_state, config.n_levels, 1, bias_min));
    psi0.normalize();

    return BuiltSystem{std::move(model), std::move(psi0), standard_observables(space)};
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

struct SweepPoint {
    RunConfig config;
    std::string label;
    double value = 0.0;  // first swept value, 0 when no sweep
};

void expand_sweep(const RunConfig& base, std::size_t entry, const std::string& label,
                  double first_value, std::vector<SweepPoint>& out) {
    if (entry >= base.sweep.size()) {
        RunConfig point = base;
        point.sweep.clear();
        out.push_back({std::move(point), label.empty() ? "-" : label, first_value});
        return;
    }
    const SweepEntry& e = base.sweep[entry];
    for (double v : e.values) {
        RunConfig next = with_sweep_value(base, e.path, v);
        std::string l = label.empty() ? "" : label + ";";
        l += e.path + "=" + format_full(v);
        expand_sweep(next, entry + 1, l, entry == 0 ? v : first_value, out);
    }
}

void write_series_csv(std::ostream& os, const std::string& name,
                      const std::vector<double>& times, const std::vector<double>& values,
                      const std::vector<double>& errors, long long count) {
    for (std::size_t t = 0; t < times.size(); ++t) {
        os << format_full(times[t]) << ',' << name << ',' << format_full(values[t]) << ','
           << format_full(errors.empty() ? 0.0 : errors[t]) << ',' << count << '\n';
    }
}

void run_oracle_point(const BuiltSystem& sys, const RunConfig& c, std::ostream& csv) {
    DensityMatrix rho0 = sys.psi0 * sys.psi0.adjoint();
    MasterEquationRun run{sys.model, rho0, c.t0, c.t1, c.dt, c.record_every};
    MasterSeries series = integrate_master(run);

    for (const NamedOperator& obs : sys.observables) {
        std::vector<double> values;
        values.reserve(series.rho.size());
        for (const DensityMatrix& rho : series.rho)
            values.push_back((obs.op.matrix() * rho).trace().real());
        write_series_csv(csv, obs.name, series.times, values, {}, 1);
    }
}

}  // namespace

int run_config(const RunConfig& config, const RunOverrides& overrides) {
    RunConfig c = config;
    if (overrides.seed) c.seed = *overrides.seed;
    if (overrides.output_dir) c.output_dir = *overrides.output_dir;
    validate_config(c);

    fs::path out_root = c.output_dir;
    if (out_root.is_relative()) {
        if (const char* env = std::getenv("QTRAJ_OUTPUT_DIR")) out_root = fs::path(env) / out_root;
    }
    fs::create_directories(out_root);
    {
        std::ofstream cfg(out_root / "config.json", std::ios::binary);
        cfg << config_to_json(c) << '\n';
    }

    std::vector<SweepPoint> points;
    expand_sweep(c, 0, "", 0.0, points);

    std::ofstream summary(out_root / "summary.csv", std::ios::binary);
    summary << "sweep_index,sweep_label,sweep_value,mean_entropy_nats,stderr_entropy_nats,"
               "settled,max_leakage,n_trajectories,aborted\n";

    for (std::size_t k = 0; k < points.size(); ++k) {
        const RunConfig& pc = points[k].config;
        char dir_name[32];
        std::snprintf(dir_name, sizeof(dir_name), "sweep_%03zu", k);
        fs::path point_dir = out_root / dir_name;
        fs::create_directories(point_dir);

        BuiltSystem sys = build_system(pc);
        std::ofstream csv(point_dir / "ensemble.csv", std::ios::binary);
        csv << "time,observable,value,stderr,count\n";

        if (pc.method == RunMethod::lindblad_oracle) {
            run_oracle_point(sys, pc, csv);
            summary << k << ',' << points[k].label << ',' << format_full(points[k].value)
                    << ",nan,nan,false,0,0,0\n";
            std::cout << dir_name << ": lindblad oracle done\n";
            continue;
        }

        EnsembleConfig ec;
        ec.n_trajectories = pc.n_trajectories;
        ec.seed = pc.seed;
        ec.workers = overrides.workers;
        ec.step.dt = pc.dt;
        ec.step.unravelling =
            pc.method == RunMethod::jumps ? Unravelling::jumps : Unravelling::qsd;
        ec.t0 = pc.t0;
        ec.t1 = pc.t1;
        ec.record_every = pc.record_every;
        ec.transient_fraction = pc.transient_fraction;
        ec.settle_tolerance = pc.settle_tolerance;
        ec.checkpoint_dir = point_dir / "checkpoints";
        if (!overrides.resume && fs::exists(*ec.checkpoint_dir))
            fs::remove_all(*ec.checkpoint_dir);

        EnsembleResult result = run_ensemble(sys.model, sys.psi0, ec, sys.observables);

        for (std::size_t s = 0; s < result.stats.names.size(); ++s) {
            std::vector<double> values, errors;
            long long count = 0;
            for (const RunningStats& rs : result.stats.series[s]) {
                values.push_back(rs.mean);
                errors.push_back(rs.stderr_mean());
                count = rs.count;
            }
            write_series_csv(csv, result.stats.names[s], result.stats.times, values, errors,
                             count);
        }

        const SettledMean& sm = result.entropy_summary;
        bool has_entropy = !result.trajectory_entropy_means.empty();
        summary << k << ',' << points[k].label << ',' << format_full(points[k].value) << ','
                << (has_entropy ? format_full(sm.mean) : "nan") << ','
                << (has_entropy ? format_full(sm.stderr_mean) : "nan") << ','
                << (sm.settled ? "true" : "false") << ',' << format_full(result.max_leakage)
                << ',' << pc.n_trajectories << ',' << result.aborted_count << '\n';

        std::cout << dir_name << " [" << points[k].label << "]: "
                  << (has_entropy ? "mean S = " + format_full(sm.mean) : "done")
                  << (result.aborted_count ? "  (aborted " +
                                                 std::to_string(result.aborted_count) + ")"
                                           : "")
                  << '\n';
    }
    return 0;
}

int emit_plot(const std::vector<std::filesystem::path>& summaries,
              const std::filesystem::path& out_prefix) {
    if (summaries.empty()) {
        std::cerr << "emit_plot: no summary files given\n";
        return 1;
    }

    struct Series {
        std::string title;
        std::vector<std::array<double, 3>> rows;  // value, mean, stderr
    };
    std::vector<Series> series;

    for (const fs::path& file : summaries) {
        std::ifstream is(file);
        if (!is) {
            std::cerr << "emit_plot: cannot open " << file << '\n';
            return 1;
        }
        Series s;
        s.title = file.parent_path().filename().string();
        if (s.title.empty()) s.title = file.stem().string();
        std::string line;
        std::getline(is, line);  // header
        while (std::getline(is, line)) {
            std::stringstream ss(line);
            std::string field;
            std::vector<std::string> fields;
            while (std::getline(ss, field, ',')) fields.push_back(field);
            if (fields.size() < 5) continue;
            double value = std::atof(fields[2].c_str());
            double mean = std::atof(fields[3].c_str());
            double err = std::atof(fields[4].c_str());
            if (std::isnan(mean)) continue;
            s.rows.push_back({value, mean, err});
        }
        if (s.rows.empty()) {
            std::cerr << "emit_plot: summary " << file << " has no entropy rows\n";
            return 1;
        }
        series.push_back(std::move(s));
    }

    fs::path dat = out_prefix;
    dat += ".dat";
    fs::path gp = out_prefix;
    gp += ".gp";

    {
        std::ofstream os(dat, std::ios::binary);
        for (std::size_t i = 0; i < series.size(); ++i) {
            os << "# " << series[i].title << "\n";
            for (const auto& r : series[i].rows)
                os << format_full(r[0]) << ' ' << format_full(r[1]) << ' '
                   << format_full(r[2]) << '\n';
            if (i + 1 < series.size()) os << "\n\n";
        }
    }
    {
        std::ofstream os(gp, std::ios::binary);
        os << "set terminal pngcairo size 900,600\n";
        os << "set output '" << out_prefix.filename().string() << ".png'\n";
        os << "set xlabel 'sweep value (quantum limit on the left for capacitance sweeps)'\n";
        os << "set ylabel 'mean entanglement entropy [nats]'\n";
        os << "set logscale x\n";
        os << "set key top left\n";
        os << "plot ";
        for (std::size_t i = 0; i < series.size(); ++i) {
            if (i) os << ", \\\n     ";
            os << "'" << dat.filename().string() << "' index " << i
               << " using 1:2:3 with yerrorlines title '" << series[i].title << "'";
        }
        os << '\n';
    }
    std::cout << "wrote " << dat.string() << " and " << gp.string() << '\n';
    return 0;
}

}  // namespace qtraj
