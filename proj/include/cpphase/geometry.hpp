// geometry.hpp
// Polar factors of Kraus operators, SU(2) gauge algebra, parallel transport
// along discretized unitary paths, cyclic geometric phases and Bloch-sphere
// solid angles.

#pragma once

#include "channels.hpp"
#include "interferometry.hpp"
#include "numerics.hpp"
#include "states.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cpphase {

// ---------------------------------------------------------------------------
// Polar decomposition

struct PolarFactors {
    ComplexMatrix h;  // Hermitian, positive semidefinite
    ComplexMatrix u;  // unitary
};

/// m = h u from m = W S V^dagger: h = W S W^dagger, u = W V^dagger. For
/// singular m the unitary factor is the one fixed by the svd() completion.
inline PolarFactors polar_decompose(const ComplexMatrix& m) {
    require_square(m, "polar_decompose");
    const SingularValueDecomposition d = svd(m);
    ComplexMatrix h = d.left * d.values.cast<cplx>().asDiagonal() * d.left.adjoint();
    h = 0.5 * (h + h.adjoint());
    return {std::move(h), d.left * d.right.adjoint()};
}

// ---------------------------------------------------------------------------
// SU(2)

/// u = exp(-i theta e.sigma) = cos(theta) I - i sin(theta) e.sigma
struct Su2Params {
    double theta = 0.0;
    Vec3 axis = Vec3::UnitZ();

    void validate(double tol = Tolerances{}.equality) const {
        if (!std::isfinite(theta) || !axis.allFinite()) throw std::invalid_argument("Su2Params: non-finite value");
        if (std::abs(axis.norm() - 1.0) > tol)
            throw std::invalid_argument("Su2Params: axis is not a unit vector (|e| = " + format_number(axis.norm()) +
                                        ")");
    }
};

inline ComplexMatrix su2_exp(const Su2Params& p) {
    p.validate();
    return std::cos(p.theta) * identity(2) - imag_unit * std::sin(p.theta) * pauli_dot(p.axis);
}

/// Tr(rho h u) for rho = (I + r.sigma)/2, h = a + b.sigma, u = exp(-i theta e.sigma):
/// (a + r.b) cos(theta) + (e x r).b sin(theta) - i (e.b + a r.e) sin(theta)
inline cplx qubit_pattern_closed_form(double a, const Vec3& b, double theta, const Vec3& e, const BlochVector& r,
                                      double tol = Tolerances{}.equality) {
    if (a + tol < b.norm())
        throw std::domain_error("qubit_pattern_closed_form: h = a + b.sigma is not positive (a = " + format_number(a) +
                                ", |b| = " + format_number(b.norm()) + ")");
    Su2Params{theta, e}.validate();
    const Vec3& rv = r.vector();
    const double re = (a + rv.dot(b)) * std::cos(theta) + e.cross(rv).dot(b) * std::sin(theta);
    const double im = -(e.dot(b) + a * rv.dot(e)) * std::sin(theta);
    return {re, im};
}

struct GaugeShift {
    Su2Params params;
    bool degenerate_axis = false;  // sin(theta~) ~ 0; axis set to +z
};

/// (theta~, e~) with exp(-i theta e.sigma) exp(-i gamma n.sigma) =
/// exp(-i theta~ e~.sigma), theta~ in [0, pi]:
///   cos theta~    = cos theta cos gamma - e.n sin theta sin gamma
///   e~ sin theta~ = n cos theta sin gamma + e sin theta cos gamma + e x n sin theta sin gamma
inline GaugeShift gauge_shift(double theta, const Vec3& e, double gamma, const Vec3& n) {
    Su2Params{theta, e}.validate();
    Su2Params{gamma, n}.validate();
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sg = std::sin(gamma), cg = std::cos(gamma);
    const double c = ct * cg - e.dot(n) * st * sg;
    const Vec3 s = n * (ct * sg) + e * (st * cg) + e.cross(n) * (st * sg);
    const double sn = s.norm();
    GaugeShift out;
    out.params.theta = std::atan2(sn, c);
    if (sn < 1e-12) {
        out.params.axis = Vec3::UnitZ();
        out.degenerate_axis = true;
    } else {
        out.params.axis = s / sn;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Unitary paths and parallel transport

/// Samples u(t_0) .. u(t_T) with u(t_0) = I and strictly increasing times.
class UnitaryPath {
public:
    UnitaryPath(std::vector<double> times, std::vector<ComplexMatrix> unitaries,
                double tol = Tolerances{}.structural)
        : times_(std::move(times)), unitaries_(std::move(unitaries)) {
        if (times_.empty() || times_.size() != unitaries_.size())
            throw std::invalid_argument("UnitaryPath: need one unitary per time sample");
        const Eigen::Index n = unitaries_.front().rows();
        for (std::size_t j = 0; j < times_.size(); ++j) {
            if (!std::isfinite(times_[j])) throw std::invalid_argument("UnitaryPath: non-finite time");
            if (j > 0 && !(times_[j] > times_[j - 1]))
                throw std::invalid_argument("UnitaryPath: times must be strictly increasing");
            const auto& u = unitaries_[j];
            if (u.rows() != n || u.cols() != n)
                throw std::invalid_argument("UnitaryPath: sample " + std::to_string(j) + " has the wrong shape");
            const double resid = unitarity_residual(u);
            if (resid > tol)
                throw std::domain_error("UnitaryPath: sample " + std::to_string(j) + " is not unitary (residual " +
                                        format_number(resid) + ")");
        }
        const double start = max_abs(unitaries_.front() - identity(n));
        if (start > Tolerances{}.equality)
            throw std::domain_error("UnitaryPath: first sample must be the identity (deviation " +
                                    format_number(start) + ")");
    }

    std::size_t size() const { return times_.size(); }
    Eigen::Index dim() const { return unitaries_.front().rows(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<ComplexMatrix>& unitaries() const { return unitaries_; }
    const ComplexMatrix& operator[](std::size_t j) const { return unitaries_[j]; }
    const ComplexMatrix& back() const { return unitaries_.back(); }

private:
    std::vector<double> times_;
    std::vector<ComplexMatrix> unitaries_;
};

namespace detail {

inline void require_transport_inputs(const UnitaryPath& path, const ComplexMatrix& basis, const char* what) {
    if (path.size() < 3) throw std::invalid_argument(std::string(what) + ": path needs at least 3 samples");
    if (basis.rows() != path.dim() || basis.cols() != path.dim())
        throw std::invalid_argument(std::string(what) + ": basis has the wrong shape");
    const double resid = unitarity_residual(basis);
    if (resid > Tolerances{}.structural)
        throw std::domain_error(std::string(what) + ": basis columns are not orthonormal (residual " +
                                format_number(resid) + ")");
}

/// Second-order central difference of the path at interior sample j
/// (non-uniform spacing allowed).
inline ComplexMatrix central_derivative(const UnitaryPath& path, std::size_t j) {
    const auto& t = path.times();
    const double hm = t[j] - t[j - 1];
    const double hp = t[j + 1] - t[j];
    return (hm * hm * (path[j + 1] - path[j]) + hp * hp * (path[j] - path[j - 1])) / (hm * hp * (hm + hp));
}

}  // namespace detail

/// max over k and interior samples of |<k| u^dagger du/dt |k>|. The
/// finite-difference generator is projected onto its anti-Hermitian part
/// (the exact generator is anti-Hermitian), so only the phase-carrying
/// component is measured.
inline double pt_residual(const UnitaryPath& path, const ComplexMatrix& basis) {
    detail::require_transport_inputs(path, basis, "pt_residual");
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < path.size(); ++j) {
        const ComplexMatrix gen = path[j].adjoint() * detail::central_derivative(path, j);
        const ComplexMatrix in_basis = basis.adjoint() * (0.5 * (gen - gen.adjoint())) * basis;
        worst = std::max(worst, in_basis.diagonal().cwiseAbs().maxCoeff());
    }
    return worst;
}

/// u~(t_j) = u(t_j) d(t_j), d diagonal in `basis` with phases
/// phi_k = i int_0^t <k|u^dagger du/dt|k> dt'. The integral is accumulated
/// step by step as phi_k(t_{j+1}) = phi_k(t_j) - arg <k|u(t_j)^dagger u(t_{j+1})|k>,
/// which makes every overlap <k|u~(t_j)^dagger u~(t_{j+1})|k> real and positive.
inline UnitaryPath pt_correct(const UnitaryPath& path, const ComplexMatrix& basis) {
    detail::require_transport_inputs(path, basis, "pt_correct");
    const Eigen::Index n = path.dim();
    RealVector phi = RealVector::Zero(n);
    std::vector<ComplexMatrix> out;
    out.reserve(path.size());
    out.push_back(identity(n));
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
        const ComplexMatrix step = basis.adjoint() * path[j].adjoint() * path[j + 1] * basis;
        for (Eigen::Index k = 0; k < n; ++k) {
            const cplx overlap = step(k, k);
            if (std::abs(overlap) < 1e-3)
                throw std::domain_error("pt_correct: path is too coarse, overlap between samples " + std::to_string(j) +
                                        " and " + std::to_string(j + 1) + " is " + format_number(std::abs(overlap)));
            phi(k) -= std::arg(overlap);
        }
        ComplexVector phases(n);
        for (Eigen::Index k = 0; k < n; ++k) phases(k) = std::exp(imag_unit * phi(k));
        out.push_back(path[j + 1] * basis * phases.asDiagonal() * basis.adjoint());
    }
    return UnitaryPath(path.times(), std::move(out));
}

// ---------------------------------------------------------------------------
// Cyclic geometric phase

/// nu_mu e^{i Phi_mu} = sum_k w_k <k|h_mu|k> <k|v_mu|k> e^{i beta_k},
/// beta_k = arg <k|u~(T)|k>, for h_mu and rho diagonal in `basis` and u~(T)
/// cyclic in it.
inline std::vector<InterferencePattern> geometric_phase_cyclic(const std::vector<ComplexMatrix>& hs,
                                                               const std::vector<ComplexMatrix>& vs,
                                                               const ComplexMatrix& final_unitary,
                                                               const DensityMatrix& rho, const ComplexMatrix& basis,
                                                               const Tolerances& tol = {}) {
    const Eigen::Index n = rho.dim();
    if (hs.size() != vs.size() || hs.empty())
        throw std::invalid_argument("geometric_phase_cyclic: need matching, non-empty h and v lists");
    if (basis.rows() != n || basis.cols() != n || final_unitary.rows() != n || final_unitary.cols() != n)
        throw std::invalid_argument("geometric_phase_cyclic: dimension mismatch");

    auto off_diagonal = [](const ComplexMatrix& m) {
        ComplexMatrix o = m;
        o.diagonal().setZero();
        return max_abs(o);
    };

    const ComplexMatrix rho_k = basis.adjoint() * rho.matrix() * basis;
    if (const double off = off_diagonal(rho_k); off > tol.structural)
        throw std::domain_error("geometric_phase_cyclic: rho is not diagonal in the given basis (off-diagonal " +
                                format_number(off) + ")");
    const ComplexMatrix u_k = basis.adjoint() * final_unitary * basis;
    if (const double off = off_diagonal(u_k); off > 1e-8)
        throw std::domain_error("geometric_phase_cyclic: final unitary is not cyclic in the basis (off-diagonal " +
                                format_number(off) + ")");

    std::vector<InterferencePattern> out;
    for (std::size_t mu = 0; mu < hs.size(); ++mu) {
        const ComplexMatrix h_k = basis.adjoint() * hs[mu] * basis;
        if (const double off = off_diagonal(h_k); off > tol.structural)
            throw std::domain_error("geometric_phase_cyclic: h_" + std::to_string(mu) +
                                    " and rho do not diagonalize in the same basis (off-diagonal " +
                                    format_number(off) + ")");
        const ComplexMatrix v_k = basis.adjoint() * vs[mu] * basis;
        cplx z{0.0, 0.0};
        for (Eigen::Index k = 0; k < n; ++k) {
            const double beta = std::arg(u_k(k, k));
            z += rho_k(k, k).real() * h_k(k, k).real() * v_k(k, k) * std::exp(imag_unit * beta);
        }
        out.push_back(InterferencePattern::from_value(static_cast<Eigen::Index>(mu), z, tol.phase));
    }
    return out;
}

/// Same, in the eigenbasis of rho.
inline std::vector<InterferencePattern> geometric_phase_cyclic(const std::vector<ComplexMatrix>& hs,
                                                               const std::vector<ComplexMatrix>& vs,
                                                               const ComplexMatrix& final_unitary,
                                                               const DensityMatrix& rho, const Tolerances& tol = {}) {
    return geometric_phase_cyclic(hs, vs, final_unitary, rho, eigenbasis(rho).basis, tol);
}

// ---------------------------------------------------------------------------
// Bloch-sphere loops

struct BlochLoop {
    enum class Kind { geodesic_polygon, discretized };
    Kind kind = Kind::geodesic_polygon;
    // Polygon: vertices in order, closure implied (a repeated first vertex
    // at the end is dropped). Discretized: samples with first == last.
    std::vector<Vec3> points;
};

namespace detail {

inline Vec3 tangent_towards(const Vec3& at, const Vec3& to) {
    const Vec3 t = to - to.dot(at) * at;
    return t / t.norm();
}

inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * pi);
    return a <= -pi ? a + 2.0 * pi : a;
}

inline std::vector<Vec3> polygon_vertices(const std::vector<Vec3>& points) {
    std::vector<Vec3> v = points;
    if (v.size() > 1 && (v.front() - v.back()).norm() < 1e-10) v.pop_back();
    if (v.size() < 3) throw std::invalid_argument("solid_angle: a polygon needs at least 3 distinct vertices");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i].norm() - 1.0) > Tolerances{}.structural)
            throw std::invalid_argument("solid_angle: vertex " + std::to_string(i) + " is not a unit vector");
        const Vec3& next = v[(i + 1) % v.size()];
        if ((v[i] + next).norm() < 1e-10)
            throw std::domain_error("solid_angle: vertices " + std::to_string(i) + " and " +
                                    std::to_string((i + 1) % v.size()) + " are antipodal, geodesic undefined");
        if ((v[i] - next).norm() < 1e-10)
            throw std::domain_error("solid_angle: vertices " + std::to_string(i) + " and " +
                                    std::to_string((i + 1) % v.size()) + " coincide");
    }
    return v;
}

}  // namespace detail

/// Signed solid angle, positive when the loop runs counter-clockwise about
/// the outward normal of the enclosed region.
/// Polygons: spherical excess via Gauss-Bonnet, 2 pi - sum of signed turning
/// angles, reported in (-2 pi, 2 pi]. Discretized loops: the line integral
/// of (1 - cos theta) dphi with unwrapped azimuth, trapezoid rule.
inline double solid_angle(const BlochLoop& loop) {
    if (loop.kind == BlochLoop::Kind::geodesic_polygon) {
        const std::vector<Vec3> v = detail::polygon_vertices(loop.points);
        const std::size_t n = v.size();
        double turning = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3& prev = v[(i + n - 1) % n];
            const Vec3& here = v[i];
            const Vec3& next = v[(i + 1) % n];
            const Vec3 incoming = -detail::tangent_towards(here, prev);
            const Vec3 outgoing = detail::tangent_towards(here, next);
            turning += std::atan2(here.dot(incoming.cross(outgoing)), incoming.dot(outgoing));
        }
        double omega = std::remainder(2.0 * pi - turning, 4.0 * pi);
        if (omega <= -2.0 * pi) omega += 4.0 * pi;
        return omega;
    }

    const auto& s = loop.points;
    if (s.size() < 3) throw std::invalid_argument("solid_angle: a discretized loop needs at least 3 samples");
    if ((s.front() - s.back()).norm() > Tolerances{}.structural)
        throw std::invalid_argument("solid_angle: discretized loop is not closed");
    double omega = 0.0;
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
        if (std::abs(s[j].norm() - 1.0) > Tolerances{}.structural)
            throw std::invalid_argument("solid_angle: sample " + std::to_string(j) + " is not a unit vector");
        if ((s[j] + s[j + 1]).norm() < 1e-10)
            throw std::domain_error("solid_angle: consecutive samples " + std::to_string(j) + " are antipodal");
        const double dphi =
            detail::wrap_angle(std::atan2(s[j + 1].y(), s[j + 1].x()) - std::atan2(s[j].y(), s[j].x()));
        omega += (1.0 - 0.5 * (s[j].z() + s[j + 1].z())) * dphi;
    }
    return omega;
}

/// Samples the closed geodesic polygon (including the closing edge) with
/// `steps_per_edge` segments per edge.
inline BlochLoop sample_geodesic_polygon(const std::vector<Vec3>& vertices, std::size_t steps_per_edge) {
    if (steps_per_edge == 0) throw std::invalid_argument("sample_geodesic_polygon: steps_per_edge must be positive");
    const std::vector<Vec3> v = detail::polygon_vertices(vertices);
    BlochLoop loop{BlochLoop::Kind::discretized, {}};
    for (std::size_t e = 0; e < v.size(); ++e) {
        const Vec3& a = v[e];
        const Vec3& b = v[(e + 1) % v.size()];
        const double angle = std::atan2(a.cross(b).norm(), a.dot(b));
        const Vec3 t = detail::tangent_towards(a, b);
        for (std::size_t j = 0; j < steps_per_edge; ++j) {
            const double s = angle * static_cast<double>(j) / static_cast<double>(steps_per_edge);
            loop.points.push_back(a * std::cos(s) + t * std::sin(s));
        }
    }
    loop.points.push_back(v.front());
    return loop;
}

// ---------------------------------------------------------------------------
// Path builders (qubit)

/// Rotations carrying vertex 0 along the great-circle edges of the polygon
/// and back. Times run uniformly over [0, 1].
inline UnitaryPath geodesic_loop_path(const std::vector<Vec3>& vertices, std::size_t steps_per_edge) {
    if (steps_per_edge == 0) throw std::invalid_argument("geodesic_loop_path: steps_per_edge must be positive");
    const std::vector<Vec3> v = detail::polygon_vertices(vertices);
    const std::size_t total = v.size() * steps_per_edge;
    std::vector<double> times;
    std::vector<ComplexMatrix> us;
    times.reserve(total + 1);
    us.reserve(total + 1);
    times.push_back(0.0);
    us.push_back(identity(2));
    ComplexMatrix done = identity(2);
    for (std::size_t e = 0; e < v.size(); ++e) {
        const Vec3& a = v[e];
        const Vec3& b = v[(e + 1) % v.size()];
        const Vec3 axis = a.cross(b).normalized();
        const double angle = std::atan2(a.cross(b).norm(), a.dot(b));
        for (std::size_t j = 1; j <= steps_per_edge; ++j) {
            const double s = static_cast<double>(j) / static_cast<double>(steps_per_edge);
            us.push_back(su2_exp({0.5 * s * angle, axis}) * done);
            times.push_back(static_cast<double>(e * steps_per_edge + j) / static_cast<double>(total));
        }
        done = us.back();
    }
    return UnitaryPath(std::move(times), std::move(us));
}

/// u(t) = exp(-i (t angle / 2) axis.sigma), t in [0, 1]: a rotation of the
/// Bloch sphere by `angle` about `axis`.
inline UnitaryPath axis_rotation_path(const Vec3& axis, double angle, std::size_t steps) {
    if (steps < 2) throw std::invalid_argument("axis_rotation_path: need at least 2 steps");
    if (!(axis.norm() > 0.0)) throw std::invalid_argument("axis_rotation_path: zero axis");
    const Vec3 e = axis.normalized();
    std::vector<double> times;
    std::vector<ComplexMatrix> us;
    for (std::size_t j = 0; j <= steps; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(steps);
        times.push_back(t);
        us.push_back(j == 0 ? identity(2) : su2_exp({0.5 * t * angle, e}));
    }
    return UnitaryPath(std::move(times), std::move(us));
}

/// Bloch vectors of u(t_j) rho u(t_j)^dagger.
inline std::vector<Vec3> bloch_trajectory(const UnitaryPath& path, const DensityMatrix& rho) {
    if (rho.dim() != 2 || path.dim() != 2) throw std::invalid_argument("bloch_trajectory: qubit only");
    std::vector<Vec3> out;
    out.reserve(path.size());
    for (const auto& u : path.unitaries()) {
        const ComplexMatrix m = u * rho.matrix() * u.adjoint();
        out.emplace_back((m * sigma_x()).trace().real(), (m * sigma_y()).trace().real(),
                         (m * sigma_z()).trace().real());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Time-parametrized channels

/// Per-mu factors of m_mu(t) = h_mu(t) v_mu u~_mu(t).
struct KrausTransportFactors {
    std::vector<ComplexMatrix> h;  // h_mu(t_j)
    ComplexMatrix v;                // v_mu
    UnitaryPath u_tilde;            // u~_mu(t_j), identity at t_0
};

/// Polar-decomposes every Kraus operator along a channel path and factors
/// out v_mu. At t_0 the channel must be unitary in slot 0 and zero in every
/// other slot (h_mu(0) = delta_mu0). Where m_mu is singular its polar factor
/// is not determined by the channel, so v_mu is taken from the first sample
/// with non-singular m_mu and u~_mu is the identity before it.
inline std::vector<KrausTransportFactors> decompose_channel_path(const std::vector<double>& times,
                                                                 const std::vector<KrausChannel>& channels,
                                                                 const Tolerances& tol = {}) {
    if (times.size() != channels.size() || times.empty())
        throw std::invalid_argument("decompose_channel_path: need one channel per time sample");
    const KrausChannel& first = channels.front();
    const Eigen::Index n = first.sys_dim();
    const Eigen::Index k = first.env_dim();
    for (const auto& c : channels)
        if (c.sys_dim() != n || c.env_dim() != k)
            throw std::invalid_argument("decompose_channel_path: channel dimensions change along the path");
    if (const double r = unitarity_residual(first[0]); r > tol.structural)
        throw std::domain_error("decompose_channel_path: m_0(0) is not unitary (residual " + format_number(r) + ")");
    for (Eigen::Index mu = 1; mu < k; ++mu)
        if (const double r = max_abs(first[mu]); r > tol.structural)
            throw std::domain_error("decompose_channel_path: m_" + std::to_string(mu) +
                                    "(0) must vanish, found max entry " + format_number(r));

    std::vector<KrausTransportFactors> out;
    for (Eigen::Index mu = 0; mu < k; ++mu) {
        std::vector<ComplexMatrix> hs, us;
        std::optional<std::size_t> anchor;
        for (std::size_t j = 0; j < channels.size(); ++j) {
            const ComplexMatrix& m = channels[j][mu];
            PolarFactors f = polar_decompose(m);
            if (!anchor && svd(m).rank() == n) anchor = j;
            hs.push_back(std::move(f.h));
            us.push_back(std::move(f.u));
        }
        const ComplexMatrix v = anchor ? us[*anchor] : identity(n);
        std::vector<ComplexMatrix> tilde;
        for (std::size_t j = 0; j < us.size(); ++j)
            tilde.push_back(anchor && j >= *anchor ? ComplexMatrix(v.adjoint() * us[j]) : identity(n));
        out.push_back({std::move(hs), v, UnitaryPath(times, std::move(tilde))});
    }
    return out;
}

/// Tr(rho h_mu(T) v_mu u~_mu(T)) with each u~_mu parallel-transported in `basis`.
inline std::vector<InterferencePattern> transported_patterns(const std::vector<KrausTransportFactors>& factors,
                                                             const DensityMatrix& rho, const ComplexMatrix& basis,
                                                             double phase_tol = Tolerances{}.phase) {
    std::vector<InterferencePattern> out;
    for (std::size_t mu = 0; mu < factors.size(); ++mu) {
        const auto& f = factors[mu];
        const UnitaryPath pt = pt_correct(f.u_tilde, basis);
        const cplx z = (rho.matrix() * f.h.back() * f.v * pt.back()).trace();
        out.push_back(InterferencePattern::from_value(static_cast<Eigen::Index>(mu), z, phase_tol));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Closed-form qubit scenarios (depolarizing channel followed by a
// parallel-transporting rotation)

/// Cyclic transport of the sigma_z eigenstates around a loop of solid angle
/// `solid_angle`, state r along +z.
struct DepolCyclic {
    double p = 0.0;
    double r = 0.0;
    double solid_angle = 0.0;
};

/// Transport exp(-i (pi/2)(cos(phi) sigma_x + sin(phi) sigma_y)) swapping |0> and |1>.
struct DepolBitflip {
    double p = 0.0;
    double r = 0.0;
    double azimuth = 0.0;
};

using Scenario = std::variant<DepolCyclic, DepolBitflip>;

inline std::vector<cplx> predicted_scenario_patterns(const Scenario& scenario) {
    auto check = [](double p, double r) {
        require_probability(p, "predicted_scenario_patterns");
        if (!(r >= 0.0 && r <= 1.0))
            throw std::invalid_argument("predicted_scenario_patterns: r = " + std::to_string(r) + " outside [0, 1]");
    };
    return std::visit(
        [&](const auto& s) -> std::vector<cplx> {
            using T = std::decay_t<decltype(s)>;
            check(s.p, s.r);
            const double flip = std::sqrt(s.p / 3.0);
            if constexpr (std::is_same_v<T, DepolCyclic>) {
                const double c = std::cos(0.5 * s.solid_angle), sn = std::sin(0.5 * s.solid_angle);
                return {std::sqrt(1.0 - s.p) * cplx{c, s.r * sn}, 0.0, 0.0, flip * cplx{s.r * c, sn}};
            } else {
                const double c = std::cos(s.azimuth), sn = std::sin(s.azimuth);
                return {0.0, flip * std::exp(-imag_unit * (pi / 2)) * cplx{c, s.r * sn},
                        flip * std::exp(-imag_unit * pi) * cplx{s.r * c, sn}, 0.0};
            }
        },
        scenario);
}

}  // namespace cpphase
