// states.hpp
// Density matrices, qubit Bloch vectors and purifications.

#pragma once

#include "numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace cpphase {

/// Hermitian, unit-trace, positive-semidefinite operator on an N-dim space.
class DensityMatrix {
public:
    explicit DensityMatrix(const ComplexMatrix& m, double tol = Tolerances{}.equality) {
        require_square(m, "DensityMatrix");
        require_finite(m, "DensityMatrix");
        const double herm = hermiticity_residual(m);
        if (herm > tol)
            throw std::domain_error("DensityMatrix: not Hermitian (max |rho - rho^dagger| = " + format_number(herm) +
                                    ")");
        const cplx tr = m.trace();
        if (std::abs(tr - 1.0) > tol)
            throw std::domain_error("DensityMatrix: trace is " + format_number(tr.real()) + " " +
                                    format_number(tr.imag()) + "i, expected 1");
        matrix_ = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
        const double lowest = solver.eigenvalues().minCoeff();
        if (lowest < -tol)
            throw std::domain_error("DensityMatrix: not positive semidefinite (smallest eigenvalue " +
                                    format_number(lowest) + ")");
    }

    Eigen::Index dim() const { return matrix_.rows(); }
    const ComplexMatrix& matrix() const { return matrix_; }

private:
    ComplexMatrix matrix_;
};

class BlochVector {
public:
    explicit BlochVector(const Vec3& r, double tol = Tolerances{}.equality) : r_(r) {
        if (!r.allFinite()) throw std::invalid_argument("BlochVector: non-finite component");
        if (r.norm() > 1.0 + tol)
            throw std::domain_error("BlochVector: length " + format_number(r.norm()) + " exceeds 1");
    }
    BlochVector(double x, double y, double z) : BlochVector(Vec3(x, y, z)) {}

    const Vec3& vector() const { return r_; }
    double x() const { return r_.x(); }
    double y() const { return r_.y(); }
    double z() const { return r_.z(); }
    double length() const { return r_.norm(); }

private:
    Vec3 r_;
};

class PureState {
public:
    explicit PureState(ComplexVector amplitudes, double tol = Tolerances{}.equality)
        : amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() == 0) throw std::invalid_argument("PureState: empty amplitude vector");
        const double n = amplitudes_.norm();
        if (std::abs(n - 1.0) > tol)
            throw std::domain_error("PureState: norm is " + format_number(n) + ", expected 1");
    }

    Eigen::Index dim() const { return amplitudes_.size(); }
    const ComplexVector& amplitudes() const { return amplitudes_; }
    ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

private:
    ComplexVector amplitudes_;
};

/// rho = (I + x sigma_x + y sigma_y + z sigma_z) / 2
inline DensityMatrix density_from_bloch(const BlochVector& r) {
    return DensityMatrix(0.5 * (identity(2) + pauli_dot(r.vector())));
}

/// r_a = Tr(rho sigma_a)
inline BlochVector bloch_from_density(const DensityMatrix& rho) {
    if (rho.dim() != 2)
        throw std::invalid_argument("bloch_from_density: expected a qubit, got dimension " +
                                    std::to_string(rho.dim()));
    const ComplexMatrix& m = rho.matrix();
    const Vec3 r((m * sigma_x()).trace().real(), (m * sigma_y()).trace().real(), (m * sigma_z()).trace().real());
    // Renormalize rounding overshoot on the surface of the ball.
    return BlochVector(r.norm() > 1.0 ? Vec3(r / r.norm()) : r);
}

/// Spectral data of a density matrix: rho = sum_k weights(k) |k><k| with
/// |k> = basis.col(k), weights descending.
struct StateEigenbasis {
    RealVector weights;
    ComplexMatrix basis;
    bool degenerate = false;
};

inline StateEigenbasis eigenbasis(const DensityMatrix& rho, double degeneracy_tol = Tolerances{}.structural) {
    HermitianEigen eig = hermitian_eig(rho.matrix());
    StateEigenbasis out{eig.values.cwiseMax(0.0), std::move(eig.vectors), false};
    out.degenerate = HermitianEigen{out.weights, out.basis}.degenerate(degeneracy_tol);
    return out;
}

/// |Psi> = sum_k sqrt(w_k) |k_i>|0_e>|k_a> on system (x) environment (x)
/// ancilla, ancilla dimension equal to the system dimension. Zero-weight
/// eigenvectors keep their slot with zero amplitude.
inline PureState purify(const DensityMatrix& rho, Eigen::Index env_dim) {
    if (env_dim < 1) throw std::invalid_argument("purify: env_dim must be at least 1");
    const Eigen::Index n = rho.dim();
    const StateEigenbasis eig = eigenbasis(rho);
    const ComplexVector env_ref = ComplexVector::Unit(env_dim, 0);
    ComplexVector psi = ComplexVector::Zero(n * env_dim * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const ComplexVector ket_k = eig.basis.col(k);
        psi += std::sqrt(eig.weights(k)) * tensor(tensor(ket_k, env_ref), ComplexVector(ComplexVector::Unit(n, k)));
    }
    // Clamping tiny negative weights can leave the norm off by a rounding error.
    psi /= psi.norm();
    return PureState(std::move(psi));
}

/// Reduced system state of a vector on system (x) rest, rest of dimension
/// `rest_dim`.
inline ComplexMatrix reduce_to_system(const PureState& psi, Eigen::Index sys_dim, Eigen::Index rest_dim) {
    return partial_trace_env(psi.projector(), sys_dim, rest_dim);
}

}  // namespace cpphase
