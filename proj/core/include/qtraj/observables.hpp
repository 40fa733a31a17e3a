#pragma once

#include <vector>

#include "qtraj/hilbert.hpp"

namespace qtraj {

/// <psi|A|psi>.
Complex expectation(const StateVector& psi, const SparseOperator& a);

/// Von Neumann entropy -sum lambda ln lambda in nats. Eigenvalues below
/// 1e-12 contribute zero; below -1e-8 the matrix is treated as corrupt.
double entropy_of(const DensityMatrix& rho);

/// Entanglement entropy of a 2-mode pure state, S(rho_0) in nats.
double entanglement_entropy(const StateVector& psi, const FockSpace& space);

/// Welford running moments with exact associative merge.
struct RunningStats {
    long long count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x);
    void merge(const RunningStats& other);
    double variance() const;        // sample variance (n-1)
    double stderr_mean() const;     // sqrt(variance/count)
};

struct SettledMean {
    double mean = 0.0;
    double stderr_mean = 0.0;
    bool settled = false;
};

/// Mean and standard error of a sample sequence, with a doubling-block
/// settling criterion: settled when the first-half mean and the full mean
/// agree within tol relatively and the standard error is below tol*|mean|.
SettledMean settled_mean(const std::vector<double>& samples, double tol = 0.01);

}  // namespace qtraj
