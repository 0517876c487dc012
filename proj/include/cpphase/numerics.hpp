// numerics.hpp
// Dense complex matrix kernel for the small system/environment spaces used by
// the interferometry and geometric-phase code.
//
// Composite spaces are system-major: |i>|mu> lives at index i*K + mu.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <locale>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpphase {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx imag_unit{0.0, 1.0};

/// Numerical thresholds shared by the library. Every check that takes a
/// tolerance defaults to one of these.
struct Tolerances {
    double structural = 1e-10;  // completeness, unitarity, co-diagonality
    double equality = 1e-12;    // Hermiticity, trace, reconstruction
    double phase = 1e-9;        // below this visibility the phase is undefined
    double transport = 1e-6;    // acceptable parallel-transport residual
};

inline std::string format_number(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// Elementary helpers

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

inline ComplexMatrix sigma_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

inline ComplexMatrix sigma_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, -imag_unit, imag_unit, 0.0;
    return m;
}

inline ComplexMatrix sigma_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

/// n . sigma for a real 3-vector n.
inline ComplexMatrix pauli_dot(const Vec3& n) {
    return n.x() * sigma_x() + n.y() * sigma_y() + n.z() * sigma_z();
}

inline double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const cplx z = m.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

inline void require_finite(const ComplexMatrix& m, const char* what) {
    if (!all_finite(m)) throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
}

inline void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw std::invalid_argument(std::string(what) + ": expected a non-empty square matrix, got " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

inline double hermiticity_residual(const ComplexMatrix& m) { return max_abs(m - m.adjoint()); }

/// max |U^dagger U - I|
inline double unitarity_residual(const ComplexMatrix& u) {
    if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
    return max_abs(u.adjoint() * u - identity(u.rows()));
}

inline bool is_unitary(const ComplexMatrix& u, double tol = Tolerances{}.structural) {
    return u.rows() == u.cols() && unitarity_residual(u) <= tol;
}

// ---------------------------------------------------------------------------
// Tensor products and partial traces

/// Kronecker product, system-major: (i, mu) -> i * b.rows() + mu.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

/// Trace out the trailing (environment) factor of a dim_i*dim_e square matrix.
inline ComplexMatrix partial_trace_env(const ComplexMatrix& m, Eigen::Index dim_i, Eigen::Index dim_e) {
    if (dim_i <= 0 || dim_e <= 0)
        throw std::invalid_argument("partial_trace_env: dimensions must be positive");
    if (m.rows() != dim_i * dim_e || m.cols() != dim_i * dim_e)
        throw std::invalid_argument("partial_trace_env: matrix is " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + ", expected side " +
                                    std::to_string(dim_i * dim_e));
    ComplexMatrix out = ComplexMatrix::Zero(dim_i, dim_i);
    for (Eigen::Index i = 0; i < dim_i; ++i)
        for (Eigen::Index j = 0; j < dim_i; ++j)
            for (Eigen::Index mu = 0; mu < dim_e; ++mu) out(i, j) += m(i * dim_e + mu, j * dim_e + mu);
    return out;
}

/// Trace out the leading (system) factor.
inline ComplexMatrix partial_trace_system(const ComplexMatrix& m, Eigen::Index dim_i, Eigen::Index dim_e) {
    if (m.rows() != dim_i * dim_e || m.cols() != dim_i * dim_e)
        throw std::invalid_argument("partial_trace_system: dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(dim_e, dim_e);
    for (Eigen::Index i = 0; i < dim_i; ++i) out += m.block(i * dim_e, i * dim_e, dim_e, dim_e);
    return out;
}

// ---------------------------------------------------------------------------
// Column canonicalization

namespace detail {

/// Index of the largest-magnitude entry; near-ties go to the lowest index.
inline Eigen::Index dominant_index(const ComplexVector& v) {
    const double peak = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) >= peak - 1e-12 * std::max(1.0, peak)) return i;
    return 0;
}

/// Unit phase that makes the dominant entry of v real and positive.
inline cplx dominant_phase(const ComplexVector& v) {
    const cplx z = v(dominant_index(v));
    const double a = std::abs(z);
    return a == 0.0 ? cplx{1.0, 0.0} : z / a;
}

/// Replace the columns of `vectors` spanning one degenerate cluster by a
/// basis that does not depend on the solver: standard basis vectors are
/// projected onto the cluster and orthonormalized, largest projection first.
inline void canonicalize_cluster(ComplexMatrix& vectors, Eigen::Index first, Eigen::Index count) {
    if (count < 2) return;
    const ComplexMatrix span = vectors.middleCols(first, count);
    // Column j of coeffs holds the coordinates of P e_j in the cluster basis.
    ComplexMatrix coeffs = span.adjoint();
    ComplexMatrix chosen(count, count);
    std::vector<bool> used(static_cast<std::size_t>(coeffs.cols()), false);
    for (Eigen::Index c = 0; c < count; ++c) {
        double best = -1.0;
        for (Eigen::Index j = 0; j < coeffs.cols(); ++j)
            if (!used[static_cast<std::size_t>(j)]) best = std::max(best, coeffs.col(j).norm());
        Eigen::Index pick = 0;
        for (Eigen::Index j = 0; j < coeffs.cols(); ++j) {
            if (!used[static_cast<std::size_t>(j)] && coeffs.col(j).norm() >= best - 1e-12) {
                pick = j;
                break;
            }
        }
        used[static_cast<std::size_t>(pick)] = true;
        ComplexVector q = coeffs.col(pick) / coeffs.col(pick).norm();
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index k = 0; k < c; ++k) q -= chosen.col(k) * chosen.col(k).dot(q);
        q.normalize();
        chosen.col(c) = q;
        for (Eigen::Index j = 0; j < coeffs.cols(); ++j) coeffs.col(j) -= q * q.dot(coeffs.col(j));
    }
    vectors.middleCols(first, count) = span * chosen;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Decompositions

struct HermitianEigen {
    RealVector values;      // descending
    ComplexMatrix vectors;  // orthonormal columns, vectors.col(k) <-> values(k)

    /// True if two eigenvalues lie within tol of each other.
    bool degenerate(double tol = Tolerances{}.structural) const {
        for (Eigen::Index k = 1; k < values.size(); ++k)
            if (values(k - 1) - values(k) <= tol) return true;
        return false;
    }
};

/// Eigendecomposition of a Hermitian matrix with eigenvalues in descending
/// order. Degenerate clusters get a canonical basis and every eigenvector has
/// its largest-magnitude component real and positive, so the output is
/// reproducible for equal inputs.
inline HermitianEigen hermitian_eig(const ComplexMatrix& h, double herm_tol = Tolerances{}.equality) {
    require_square(h, "hermitian_eig");
    require_finite(h, "hermitian_eig");
    const double scale = std::max(1.0, max_abs(h));
    const double resid = hermiticity_residual(h);
    if (resid > herm_tol * scale)
        throw std::domain_error("hermitian_eig: matrix is not Hermitian (max |h - h^dagger| = " +
                                format_number(resid) + ")");

    const ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: solver failed to converge");

    const Eigen::Index n = h.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const RealVector& raw = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return raw(a) > raw(b); });

    HermitianEigen out{RealVector(n), ComplexMatrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = raw(order[static_cast<std::size_t>(k)]);
        out.vectors.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    }

    const double cluster_tol = 1e-13 * std::max(1.0, out.values.cwiseAbs().maxCoeff());
    for (Eigen::Index start = 0; start < n;) {
        Eigen::Index end = start + 1;
        while (end < n && out.values(end - 1) - out.values(end) <= cluster_tol) ++end;
        detail::canonicalize_cluster(out.vectors, start, end - start);
        start = end;
    }
    for (Eigen::Index k = 0; k < n; ++k)
        out.vectors.col(k) *= std::conj(detail::dominant_phase(out.vectors.col(k)));
    return out;
}

/// exp(-i t h) for Hermitian h.
inline ComplexMatrix unitary_exp(const ComplexMatrix& h, double t = 1.0) {
    const HermitianEigen eig = hermitian_eig(h, 1e-10);
    ComplexVector phases(eig.values.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(-imag_unit * (t * eig.values(k)));
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

/// Extend `block` (D x d, orthonormal columns) to a D x D unitary. The first d
/// columns are copied verbatim; the rest come from modified Gram-Schmidt over
/// e_0, e_1, ... skipping candidates with residual norm below 1e-8.
inline ComplexMatrix complete_to_unitary(const ComplexMatrix& block, double tol = Tolerances{}.structural) {
    const Eigen::Index dim = block.rows();
    const Eigen::Index given = block.cols();
    if (dim == 0) throw std::invalid_argument("complete_to_unitary: empty block");
    if (given > dim)
        throw std::invalid_argument("complete_to_unitary: block has more columns (" + std::to_string(given) +
                                    ") than rows (" + std::to_string(dim) + ")");
    require_finite(block, "complete_to_unitary");

    if (given > 0) {
        const ComplexMatrix gram = block.adjoint() * block - identity(given);
        Eigen::Index wi = 0, wj = 0;
        const double worst = gram.cwiseAbs().maxCoeff(&wi, &wj);
        if (worst > tol)
            throw std::domain_error("complete_to_unitary: columns are not orthonormal, Gram entry (" +
                                    std::to_string(wi) + "," + std::to_string(wj) + ") deviates from identity by " +
                                    format_number(worst));
    }

    ComplexMatrix out(dim, dim);
    out.leftCols(given) = block;
    Eigen::Index filled = given;
    for (Eigen::Index j = 0; j < dim && filled < dim; ++j) {
        ComplexVector v = ComplexVector::Unit(dim, j);
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index c = 0; c < filled; ++c) v -= out.col(c) * out.col(c).dot(v);
        const double norm = v.norm();
        if (norm < 1e-8) continue;
        out.col(filled++) = v / norm;
    }
    if (filled != dim) throw std::runtime_error("complete_to_unitary: failed to span the full space");
    return out;
}

struct SingularValueDecomposition {
    ComplexMatrix left;   // W, unitary rows x rows
    RealVector values;    // descending, length min(rows, cols)
    ComplexMatrix right;  // V, unitary cols x cols

    ComplexMatrix sigma() const {
        ComplexMatrix s = ComplexMatrix::Zero(left.cols(), right.cols());
        for (Eigen::Index k = 0; k < values.size(); ++k) s(k, k) = values(k);
        return s;
    }
    ComplexMatrix reconstruct() const { return left * sigma() * right.adjoint(); }
    Eigen::Index rank() const { return (values.array() > 0.0).count(); }
};

/// m = W diag(s) V^dagger. Singular values below 1e-13 * max(1, s_0) are set
/// to zero; the null-space columns of W and V are then filled by
/// complete_to_unitary, which pins the representative for rank-deficient m.
inline SingularValueDecomposition svd(const ComplexMatrix& m) {
    if (m.size() == 0) throw std::invalid_argument("svd: empty matrix");
    require_finite(m, "svd");
    Eigen::JacobiSVD<ComplexMatrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector s = solver.singularValues();
    const double cutoff = 1e-13 * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > cutoff) ++rank;

    ComplexMatrix w_range = solver.matrixU().leftCols(rank);
    ComplexMatrix v_range = solver.matrixV().leftCols(rank);
    for (Eigen::Index k = 0; k < rank; ++k) {
        const cplx ph = std::conj(detail::dominant_phase(v_range.col(k)));
        v_range.col(k) *= ph;
        w_range.col(k) *= ph;
    }

    SingularValueDecomposition out;
    out.left = complete_to_unitary(w_range);
    out.right = complete_to_unitary(v_range);
    out.values = RealVector::Zero(s.size());
    out.values.head(rank) = s.head(rank);
    return out;
}

}  // namespace cpphase
