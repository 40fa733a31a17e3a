#pragma once

#include <vector>

#include "qtraj/models.hpp"

namespace qtraj {

/// drho/dtau = -i[H(tau), rho] + sum_j (L rho L^dag - 1/2 {L^dag L, rho}).
DensityMatrix lindblad_rhs(const DensityMatrix& rho, const SystemModel& model, double tau);

struct MasterEquationRun {
    const SystemModel& model;
    DensityMatrix rho0;
    double t0;
    double t1;
    double dt;
    int record_every = 1;
};

struct MasterSeries {
    std::vector<double> times;
    std::vector<DensityMatrix> rho;
};

/// Fixed-step RK4 on the density matrix. Each recorded rho is re-Hermitized
/// and trace-renormalized; raises on trace drift beyond 1e-6 or joint
/// dimension above 4096.
MasterSeries integrate_master(const MasterEquationRun& run);

/// 1/2 ||A - B||_1.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace qtraj
