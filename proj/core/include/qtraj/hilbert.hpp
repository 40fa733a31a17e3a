#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qtraj {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using StateVector = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;

/// Truncated Fock space with n_levels per mode, one or two modes.
/// Joint basis index for two modes is n0 * n_levels + n1 (mode 0 slow).
struct FockSpace {
    int n_levels;
    int n_modes;

    FockSpace(int levels, int modes) : n_levels(levels), n_modes(modes) {
        if (levels < 2) throw std::invalid_argument("FockSpace: n_levels must be >= 2");
        if (modes != 1 && modes != 2) throw std::invalid_argument("FockSpace: n_modes must be 1 or 2");
    }

    int dim() const {
        int d = 1;
        for (int m = 0; m < n_modes; ++m) d *= n_levels;
        return d;
    }
};

/// Sparse complex operator. Entries below 1e-15 in magnitude are dropped.
/// When the Hermitian flag is set, A = A^dag is enforced within 1e-12
/// at construction.
class SparseOperator {
public:
    static constexpr double kDropTolerance = 1e-15;
    static constexpr double kHermitianTolerance = 1e-12;

    SparseOperator() = default;
    SparseOperator(SparseMatrix mat, bool hermitian);

    int dim() const { return static_cast<int>(mat_.rows()); }
    bool hermitian() const { return hermitian_; }
    const SparseMatrix& matrix() const { return mat_; }

    SparseOperator adjoint() const;
    StateVector apply(const StateVector& psi) const;

    friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);
    friend SparseOperator operator-(const SparseOperator& a, const SparseOperator& b);
    friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
    friend SparseOperator operator*(Complex s, const SparseOperator& a);
    friend SparseOperator operator*(double s, const SparseOperator& a);

private:
    SparseMatrix mat_;
    bool hermitian_ = false;
};

/// Largest elementwise deviation from Hermiticity, max|A - A^dag|.
double hermiticity_defect(const SparseMatrix& m);

SparseOperator identity_op(const FockSpace& space);

/// Single-mode annihilation operator embedded on the requested mode.
SparseOperator annihilation(const FockSpace& space, int mode);
SparseOperator creation(const FockSpace& space, int mode);
SparseOperator number_op(const FockSpace& space, int mode);

/// x = (a + a^dag)/sqrt(2), p = i(a^dag - a)/sqrt(2).
SparseOperator position(const FockSpace& space, int mode);
SparseOperator momentum(const FockSpace& space, int mode);

/// cos(Omega x) on one mode, via eigendecomposition of the truncated x.
SparseOperator cos_position(const FockSpace& space, int mode, double omega_scale);

/// Embed a single-mode operator on the given mode by tensoring identities.
SparseOperator embed(const FockSpace& space, int mode, const SparseMatrix& single_mode);

/// Reduced density matrix of the kept mode of a two-mode pure state.
DensityMatrix partial_trace(const StateVector& psi, const FockSpace& space, int keep);

/// Population in the top 10% of levels (at least the top level), maximized
/// over modes. Diagnoses truncation validity.
double leakage(const StateVector& psi, const FockSpace& space);

/// Truncated coherent state |alpha> on a single mode, renormalized.
Eigen::VectorXcd coherent_state(int n_levels, Complex alpha);
Eigen::VectorXcd fock_state(int n_levels, int n);
/// Joint state |a> (x) |b>.
StateVector product_state(const Eigen::VectorXcd& mode0, const Eigen::VectorXcd& mode1);

/// Throws unless rho is Hermitian (1e-10), unit trace (1e-8) and
/// positive semidefinite (eigenvalues >= -1e-8).
void validate_density_matrix(const DensityMatrix& rho);

}  // namespace qtraj
