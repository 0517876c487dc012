// channels.hpp
// Completely positive maps in Kraus form, the preset qubit channels, and the
// system (x) environment unitary dilation.

#pragma once

#include "numerics.hpp"
#include "states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cpphase {

/// max |sum_mu m_mu^dagger m_mu - I|
inline double completeness_residual(const std::vector<ComplexMatrix>& kraus) {
    if (kraus.empty()) return std::numeric_limits<double>::infinity();
    ComplexMatrix sum = ComplexMatrix::Zero(kraus.front().cols(), kraus.front().cols());
    for (const auto& m : kraus) sum += m.adjoint() * m;
    return max_abs(sum - identity(sum.rows()));
}

/// Ordered Kraus list m_0 .. m_{K-1}. The order matters: mu labels both the
/// operator and the environment state the reference beam is flipped to.
/// Zero operators are allowed.
class KrausChannel {
public:
    explicit KrausChannel(std::vector<ComplexMatrix> kraus, double tol = Tolerances{}.structural)
        : kraus_(std::move(kraus)) {
        if (kraus_.empty()) throw std::invalid_argument("KrausChannel: at least one Kraus operator is required");
        const Eigen::Index n = kraus_.front().rows();
        for (std::size_t mu = 0; mu < kraus_.size(); ++mu) {
            const auto& m = kraus_[mu];
            if (m.rows() != n || m.cols() != n || n == 0)
                throw std::invalid_argument("KrausChannel: operator " + std::to_string(mu) + " is " +
                                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                            ", expected " + std::to_string(n) + "x" + std::to_string(n));
            require_finite(m, "KrausChannel");
        }
        const double resid = completeness_residual(kraus_);
        if (resid > tol)
            throw std::domain_error("KrausChannel: completeness residual max|sum m^dagger m - I| = " +
                                    format_number(resid) + " exceeds " + format_number(tol));
    }

    Eigen::Index sys_dim() const { return kraus_.front().rows(); }
    Eigen::Index env_dim() const { return static_cast<Eigen::Index>(kraus_.size()); }
    const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
    const ComplexMatrix& operator[](Eigen::Index mu) const { return kraus_.at(static_cast<std::size_t>(mu)); }

private:
    std::vector<ComplexMatrix> kraus_;
};

inline void require_same_dim(const KrausChannel& c, const DensityMatrix& rho, const char* what) {
    if (c.sys_dim() != rho.dim())
        throw std::invalid_argument(std::string(what) + ": channel acts on dimension " + std::to_string(c.sys_dim()) +
                                    " but the state has dimension " + std::to_string(rho.dim()));
}

/// rho' = sum_mu m_mu rho m_mu^dagger
inline DensityMatrix apply(const KrausChannel& c, const DensityMatrix& rho) {
    require_same_dim(c, rho, "apply");
    ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
    for (const auto& m : c.kraus()) out += m * rho.matrix() * m.adjoint();
    return DensityMatrix(0.5 * (out + out.adjoint()), Tolerances{}.structural);
}

// ---------------------------------------------------------------------------
// Presets

inline void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(what) + ": probability " + std::to_string(p) + " outside [0, 1]");
}

/// K = 1 identity, or the identity in slot 0 padded with zero operators.
inline KrausChannel identity_channel(Eigen::Index sys_dim, Eigen::Index env_dim = 1) {
    if (sys_dim < 1 || env_dim < 1) throw std::invalid_argument("identity_channel: dimensions must be positive");
    std::vector<ComplexMatrix> ops(static_cast<std::size_t>(env_dim), ComplexMatrix::Zero(sys_dim, sys_dim));
    ops[0] = identity(sys_dim);
    return KrausChannel(std::move(ops));
}

/// m_0 = u, m_mu = 0 for mu > 0.
inline KrausChannel unitary_channel(const ComplexMatrix& u, Eigen::Index env_dim = 1) {
    require_square(u, "unitary_channel");
    if (env_dim < 1) throw std::invalid_argument("unitary_channel: env_dim must be positive");
    std::vector<ComplexMatrix> ops(static_cast<std::size_t>(env_dim), ComplexMatrix::Zero(u.rows(), u.rows()));
    ops[0] = u;
    return KrausChannel(std::move(ops));
}

/// sqrt(1-p) I, sqrt(p/3) sigma_x, sqrt(p/3) sigma_y, sqrt(p/3) sigma_z.
/// p > 3/4 is allowed and inverts the Bloch vector.
inline KrausChannel depolarizing(double p) {
    require_probability(p, "depolarizing");
    const double flip = std::sqrt(p / 3.0);
    return KrausChannel({std::sqrt(1.0 - p) * identity(2), flip * sigma_x(), flip * sigma_y(), flip * sigma_z()});
}

/// Decay |1> -> |0> with probability p.
inline KrausChannel amplitude_damping(double p) {
    require_probability(p, "amplitude_damping");
    const ComplexMatrix up = 0.5 * (identity(2) + sigma_z());
    const ComplexMatrix down = 0.5 * (identity(2) - sigma_z());
    return KrausChannel({up + std::sqrt(1.0 - p) * down, 0.5 * std::sqrt(p) * (sigma_x() + imag_unit * sigma_y())});
}

/// m_mu -> m_mu w. Leaves rho' untouched whenever w commutes with rho.
inline KrausChannel compose_unitary(const KrausChannel& c, const ComplexMatrix& w) {
    if (w.rows() != c.sys_dim() || w.cols() != c.sys_dim())
        throw std::invalid_argument("compose_unitary: unitary has wrong dimension");
    const double resid = unitarity_residual(w);
    if (resid > Tolerances{}.structural)
        throw std::domain_error("compose_unitary: matrix is not unitary (residual " + format_number(resid) + ")");
    std::vector<ComplexMatrix> ops;
    ops.reserve(c.kraus().size());
    for (const auto& m : c.kraus()) ops.push_back(m * w);
    return KrausChannel(std::move(ops));
}

// ---------------------------------------------------------------------------
// Dilation

/// Unitary U_ie on system (x) environment with reference environment state
/// |0_e>, so that m_mu = <mu_e| U_ie |0_e>.
class Dilation {
public:
    Dilation(Eigen::Index sys_dim, Eigen::Index env_dim, ComplexMatrix u, double tol = Tolerances{}.structural)
        : Dilation(sys_dim, env_dim, std::move(u), nullptr) {
        const double resid = unitarity_residual(u_);
        if (resid > tol)
            throw std::domain_error("Dilation: U_ie is not unitary (residual " + format_number(resid) + ")");
    }

    /// Skips the unitarity check. Only for negative controls and diagnostics;
    /// kraus_from_dilation still rejects the result.
    static Dilation unchecked(Eigen::Index sys_dim, Eigen::Index env_dim, ComplexMatrix u) {
        return Dilation(sys_dim, env_dim, std::move(u), nullptr);
    }

    Eigen::Index sys_dim() const { return sys_dim_; }
    Eigen::Index env_dim() const { return env_dim_; }
    const ComplexMatrix& unitary() const { return u_; }
    static constexpr Eigen::Index ref_env_index = 0;

    /// <mu_e| U |0_e> as an N x N block, no validation.
    ComplexMatrix block(Eigen::Index mu) const {
        ComplexMatrix m(sys_dim_, sys_dim_);
        for (Eigen::Index i = 0; i < sys_dim_; ++i)
            for (Eigen::Index j = 0; j < sys_dim_; ++j) m(i, j) = u_(i * env_dim_ + mu, j * env_dim_ + ref_env_index);
        return m;
    }

private:
    Dilation(Eigen::Index sys_dim, Eigen::Index env_dim, ComplexMatrix u, std::nullptr_t)
        : sys_dim_(sys_dim), env_dim_(env_dim), u_(std::move(u)) {
        if (sys_dim < 1 || env_dim < 1) throw std::invalid_argument("Dilation: dimensions must be positive");
        if (u_.rows() != sys_dim * env_dim || u_.cols() != sys_dim * env_dim)
            throw std::invalid_argument("Dilation: unitary is " + std::to_string(u_.rows()) + "x" +
                                        std::to_string(u_.cols()) + ", expected side " +
                                        std::to_string(sys_dim * env_dim));
        require_finite(u_, "Dilation");
    }

    Eigen::Index sys_dim_;
    Eigen::Index env_dim_;
    ComplexMatrix u_;
};

/// Stack the Kraus operators into the |0_e> block column and complete it to a
/// unitary. Only that block column is fixed; the others follow the
/// complete_to_unitary convention.
inline Dilation dilate(const KrausChannel& c) {
    const Eigen::Index n = c.sys_dim();
    const Eigen::Index k = c.env_dim();
    ComplexMatrix column(n * k, n);
    for (Eigen::Index mu = 0; mu < k; ++mu)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) column(i * k + mu, j) = c[mu](i, j);

    const ComplexMatrix completed = complete_to_unitary(column);

    // Completed column j < n goes to composite column j*K (environment index
    // 0); the extra columns fill the remaining slots in ascending order.
    ComplexMatrix u(n * k, n * k);
    Eigen::Index extra = n;
    for (Eigen::Index col = 0; col < n * k; ++col) {
        if (col % k == 0)
            u.col(col) = completed.col(col / k);
        else
            u.col(col) = completed.col(extra++);
    }
    return Dilation(n, k, std::move(u));
}

inline KrausChannel kraus_from_dilation(const Dilation& d) {
    const double resid = unitarity_residual(d.unitary());
    if (resid > Tolerances{}.structural)
        throw std::domain_error("kraus_from_dilation: U_ie is not unitary (residual " + format_number(resid) + ")");
    std::vector<ComplexMatrix> ops;
    ops.reserve(static_cast<std::size_t>(d.env_dim()));
    for (Eigen::Index mu = 0; mu < d.env_dim(); ++mu) ops.push_back(d.block(mu));
    return KrausChannel(std::move(ops));
}

}  // namespace cpphase
