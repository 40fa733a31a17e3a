#include "qtraj/observables.hpp"

#include <cmath>

namespace qtraj {

Complex expectation(const StateVector& psi, const SparseOperator& a) {
    if (psi.size() != a.dim())
        throw std::invalid_argument("expectation: dimension mismatch");
    return psi.dot(a.matrix() * psi);
}

double entropy_of(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (double lam : es.eigenvalues()) {
        if (lam < -1e-8)
            throw std::runtime_error("entropy_of: eigenvalue below -1e-8, matrix corrupt");
        if (lam > 1e-12) s -= lam * std::log(lam);
    }
    return s;
}

double entanglement_entropy(const StateVector& psi, const FockSpace& space) {
    return entropy_of(partial_trace(psi, space, 0));
}

void RunningStats::add(double x) {
    ++count;
    double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
}

void RunningStats::merge(const RunningStats& other) {
    if (other.count == 0) return;
    if (count == 0) {
        *this = other;
        return;
    }
    long long n = count + other.count;
    double delta = other.mean - mean;
    double nd = static_cast<double>(n);
    m2 += other.m2 + delta * delta * static_cast<double>(count) *
                         static_cast<double>(other.count) / nd;
    mean += delta * static_cast<double>(other.count) / nd;
    count = n;
}

double RunningStats::variance() const {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
}

double RunningStats::stderr_mean() const {
    return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

SettledMean settled_mean(const std::vector<double>& samples, double tol) {
    if (samples.size() < 2)
        throw std::invalid_argument("settled_mean: need at least 2 samples");

    RunningStats half, full;
    std::size_t n_half = samples.size() / 2;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i < n_half) half.add(samples[i]);
        full.add(samples[i]);
    }

    SettledMean out;
    out.mean = full.mean;
    out.stderr_mean = full.stderr_mean();
    double scale = std::max(std::abs(full.mean), 1e-300);
    bool blocks_agree = std::abs(half.mean - full.mean) / scale < tol;
    bool error_small = out.stderr_mean <= tol * std::abs(full.mean);
    out.settled = blocks_agree && error_small;
    return out;
}

}  // namespace qtraj
