// interferometry.hpp
// Interference patterns nu_mu e^{i alpha_mu} of a CP map, computed three
// ways: directly from the Kraus operators, from the dilation with the
// reference-beam environment flipped, and as an overlap of purifications.

#pragma once

#include "channels.hpp"
#include "numerics.hpp"
#include "states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpphase {

struct InterferencePattern {
    Eigen::Index mu = 0;
    cplx value{0.0, 0.0};
    double visibility = 0.0;  // |value|
    double phase = 0.0;       // arg(value) in (-pi, pi]; 0 when undefined
    bool phase_defined = false;

    static InterferencePattern from_value(Eigen::Index mu, cplx z, double phase_tol = Tolerances{}.phase) {
        InterferencePattern p;
        p.mu = mu;
        p.value = z;
        p.visibility = std::abs(z);
        p.phase_defined = p.visibility >= phase_tol;
        if (p.phase_defined) {
            p.phase = std::atan2(z.imag(), z.real());
            if (p.phase <= -pi) p.phase = pi;
        }
        return p;
    }
};

namespace detail {

inline void require_env_index(Eigen::Index env_dim, Eigen::Index mu, const char* what) {
    if (mu < 0 || mu >= env_dim)
        throw std::out_of_range(std::string(what) + ": flip index " + std::to_string(mu) + " outside [0, " +
                                std::to_string(env_dim) + ")");
}

}  // namespace detail

/// Tr(m_mu rho)
inline InterferencePattern pattern(const KrausChannel& c, const DensityMatrix& rho, Eigen::Index mu,
                                   double phase_tol = Tolerances{}.phase) {
    require_same_dim(c, rho, "pattern");
    detail::require_env_index(c.env_dim(), mu, "pattern");
    return InterferencePattern::from_value(mu, (c[mu] * rho.matrix()).trace(), phase_tol);
}

inline std::vector<InterferencePattern> pattern_set(const KrausChannel& c, const DensityMatrix& rho,
                                                    double phase_tol = Tolerances{}.phase) {
    std::vector<InterferencePattern> out;
    out.reserve(static_cast<std::size_t>(c.env_dim()));
    for (Eigen::Index mu = 0; mu < c.env_dim(); ++mu) out.push_back(pattern(c, rho, mu, phase_tol));
    return out;
}

/// Transposition of |0_e> and |mu_e> on a K-dim environment, F|0_e> = +|mu_e>.
inline ComplexMatrix flip_operator(Eigen::Index env_dim, Eigen::Index mu) {
    if (env_dim < 1) throw std::invalid_argument("flip_operator: env_dim must be positive");
    detail::require_env_index(env_dim, mu, "flip_operator");
    ComplexMatrix f = identity(env_dim);
    if (mu != 0) {
        f(0, 0) = 0.0;
        f(mu, mu) = 0.0;
        f(mu, 0) = 1.0;
        f(0, mu) = 1.0;
    }
    return f;
}

/// rho (x) |0_e><0_e|
inline ComplexMatrix attach_environment(const DensityMatrix& rho, Eigen::Index env_dim) {
    ComplexMatrix ref = ComplexMatrix::Zero(env_dim, env_dim);
    ref(0, 0) = 1.0;
    return tensor(rho.matrix(), ref);
}

/// Tr_ie[ U_ie (rho (x) |0_e><0_e|) (I_i (x) F)^dagger ], evaluated on the
/// full system (x) environment space.
inline InterferencePattern pattern_via_dilation(const Dilation& d, const DensityMatrix& rho, Eigen::Index mu,
                                                double phase_tol = Tolerances{}.phase) {
    if (d.sys_dim() != rho.dim())
        throw std::invalid_argument("pattern_via_dilation: dilation acts on dimension " +
                                    std::to_string(d.sys_dim()) + " but the state has dimension " +
                                    std::to_string(rho.dim()));
    detail::require_env_index(d.env_dim(), mu, "pattern_via_dilation");
    const ComplexMatrix flip = tensor(identity(d.sys_dim()), flip_operator(d.env_dim(), mu));
    const ComplexMatrix product = d.unitary() * attach_environment(rho, d.env_dim()) * flip.adjoint();
    return InterferencePattern::from_value(mu, product.trace(), phase_tol);
}

/// <Psi_ref|Psi_tar> with |Psi_tar> = (U_ie (x) I_a)|Psi> and
/// |Psi_ref> = (I_i (x) F (x) I_a)|Psi>, |Psi> the purification of rho with
/// the environment in |0_e>.
inline InterferencePattern pattern_via_purification(const Dilation& d, const DensityMatrix& rho, Eigen::Index mu,
                                                    double phase_tol = Tolerances{}.phase) {
    if (d.sys_dim() != rho.dim())
        throw std::invalid_argument("pattern_via_purification: dimension mismatch between dilation and state");
    detail::require_env_index(d.env_dim(), mu, "pattern_via_purification");
    const Eigen::Index n = d.sys_dim();
    const PureState psi = purify(rho, d.env_dim());
    const ComplexMatrix anc = identity(n);
    const ComplexVector target = tensor(d.unitary(), anc) * psi.amplitudes();
    const ComplexVector reference =
        tensor(tensor(identity(n), flip_operator(d.env_dim(), mu)), anc) * psi.amplitudes();
    return InterferencePattern::from_value(mu, reference.dot(target), phase_tol);
}

/// Purification route using the canonical dilation of c.
inline InterferencePattern pattern_via_purification(const KrausChannel& c, const DensityMatrix& rho, Eigen::Index mu,
                                                    double phase_tol = Tolerances{}.phase) {
    require_same_dim(c, rho, "pattern_via_purification");
    detail::require_env_index(c.env_dim(), mu, "pattern_via_purification");
    return pattern_via_purification(dilate(c), rho, mu, phase_tol);
}

/// Evenly spaced grid including both endpoints.
inline std::vector<double> chi_grid(double start, double stop, std::size_t points) {
    if (points == 0) throw std::invalid_argument("chi_grid: need at least one point");
    std::vector<double> grid(points);
    if (points == 1) {
        grid[0] = start;
        return grid;
    }
    const double step = (stop - start) / static_cast<double>(points - 1);
    for (std::size_t j = 0; j < points; ++j) grid[j] = start + step * static_cast<double>(j);
    grid.back() = stop;
    return grid;
}

/// I(chi) = (1 + nu cos(chi - alpha)) / 2, constant 1/2 when the phase is
/// undefined.
inline std::vector<double> fringe(const InterferencePattern& pat, const std::vector<double>& chis) {
    std::vector<double> out;
    out.reserve(chis.size());
    for (const double chi : chis)
        out.push_back(pat.phase_defined ? 0.5 * (1.0 + pat.visibility * std::cos(chi - pat.phase)) : 0.5);
    return out;
}

}  // namespace cpphase
