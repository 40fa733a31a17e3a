#include "qtraj/lindblad.hpp"

#include <cmath>

namespace qtraj {

DensityMatrix lindblad_rhs(const DensityMatrix& rho, const SystemModel& model, double tau) {
    if (rho.rows() != model.space.dim() || rho.cols() != model.space.dim())
        throw std::invalid_argument("lindblad_rhs: dimension mismatch");

    SparseOperator h = model.hamiltonian_at(tau);
    DensityMatrix hrho = h.matrix() * rho;
    DensityMatrix out = Complex(0.0, -1.0) * (hrho - hrho.adjoint());

    for (const SparseOperator& l : model.lindblad_ops) {
        DensityMatrix lrho = l.matrix() * rho;
        out += lrho * l.matrix().adjoint();
        DensityMatrix ldag_lrho = l.matrix().adjoint() * lrho;
        out -= 0.5 * (ldag_lrho + ldag_lrho.adjoint());
    }
    return out;
}

MasterSeries integrate_master(const MasterEquationRun& run) {
    const int d = run.model.space.dim();
    if (d > 4096) throw std::invalid_argument("integrate_master: dimension above 4096");
    if (run.dt <= 0.0) throw std::invalid_argument("integrate_master: dt must be positive");

    DensityMatrix rho = run.rho0;
    MasterSeries out;
    out.times.push_back(run.t0);
    out.rho.push_back(rho);

    const long long n_steps =
        static_cast<long long>(std::ceil((run.t1 - run.t0) / run.dt - 1e-12));
    for (long long step = 0; step < n_steps; ++step) {
        double tau = run.t0 + static_cast<double>(step) * run.dt;
        double h = run.dt;
        DensityMatrix k1 = lindblad_rhs(rho, run.model, tau);
        DensityMatrix k2 = lindblad_rhs(rho + 0.5 * h * k1, run.model, tau + 0.5 * h);
        DensityMatrix k3 = lindblad_rhs(rho + 0.5 * h * k2, run.model, tau + 0.5 * h);
        DensityMatrix k4 = lindblad_rhs(rho + h * k3, run.model, tau + h);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        double trace_drift = std::abs(rho.trace() - Complex(1.0, 0.0));
        if (trace_drift > 1e-6)
            throw std::runtime_error("integrate_master: trace drift above 1e-6");
        rho = 0.5 * (rho + rho.adjoint()).eval();
        rho /= rho.trace().real();

        if ((step + 1) % run.record_every == 0 || step + 1 == n_steps) {
            out.times.push_back(run.t0 + static_cast<double>(step + 1) * run.dt);
            out.rho.push_back(rho);
        }
    }
    return out;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    DensityMatrix d = a - b;
    d = 0.5 * (d + d.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(d, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qtraj
