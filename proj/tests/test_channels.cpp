#include <catch_amalgamated.hpp>

#include "support/random.hpp"

using namespace cpphase;
using Catch::Matchers::ContainsSubstring;

namespace {

// Direct Kraus sum, written independently of apply().
ComplexMatrix kraus_sum(const std::vector<ComplexMatrix>& ops, const ComplexMatrix& rho) {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& m : ops)
        for (Eigen::Index i = 0; i < rho.rows(); ++i)
            for (Eigen::Index j = 0; j < rho.cols(); ++j)
                for (Eigen::Index a = 0; a < rho.rows(); ++a)
                    for (Eigen::Index b = 0; b < rho.cols(); ++b) out(i, j) += m(i, a) * rho(a, b) * std::conj(m(j, b));
    return out;
}

const std::vector<double> p_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

}  // namespace

TEST_CASE("apply", "[channels]") {
    testing::Fixtures fx(31);

    SECTION("identity channel") {
        const DensityMatrix rho(fx.density(3));
        CHECK(max_abs(apply(identity_channel(3), rho).matrix() - rho.matrix()) < 1e-15);
    }

    SECTION("depolarizing shrinks the Bloch vector by 1 - 4p/3") {
        const BlochVector r(0.2, -0.4, 0.6);
        const Vec3 out = bloch_from_density(apply(depolarizing(0.3), density_from_bloch(r))).vector();
        CHECK(std::abs(out.norm() / r.length() - (1 - 4 * 0.3 / 3)) < 1e-14);
    }

    SECTION("full amplitude damping sends everything to |0><0|") {
        ComplexMatrix north = ComplexMatrix::Zero(2, 2);
        north(0, 0) = 1.0;
        for (int trial = 0; trial < 20; ++trial)
            CHECK(max_abs(apply(amplitude_damping(1.0), density_from_bloch(BlochVector(fx.bloch()))).matrix() - north) <
                  1e-15);
    }

    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(apply(depolarizing(0.1), DensityMatrix(identity(3) / 3.0)), std::invalid_argument);
    }
}

TEST_CASE("depolarizing preset", "[channels]") {
    const KrausChannel zero = depolarizing(0.0);
    REQUIRE(zero.env_dim() == 4);
    CHECK(zero[0] == identity(2));
    for (Eigen::Index mu = 1; mu < 4; ++mu) CHECK(max_abs(zero[mu]) == 0.0);

    const KrausChannel c = depolarizing(0.3);
    CHECK(max_abs(c[1] - std::sqrt(0.1) * sigma_x()) < 1e-16);
    CHECK(max_abs(c[2] - std::sqrt(0.1) * sigma_y()) < 1e-16);
    CHECK(max_abs(c[3] - std::sqrt(0.1) * sigma_z()) < 1e-16);

    for (double p = 0.0; p <= 1.0; p += 0.05) CHECK(completeness_residual(depolarizing(p).kraus()) < 1e-12);
    CHECK_THROWS_AS(depolarizing(-0.01), std::invalid_argument);
    CHECK_THROWS_AS(depolarizing(1.01), std::invalid_argument);
}

TEST_CASE("amplitude damping preset", "[channels]") {
    const KrausChannel zero = amplitude_damping(0.0);
    CHECK(max_abs(zero[0] - identity(2)) == 0.0);
    CHECK(max_abs(zero[1]) == 0.0);

    const KrausChannel c = amplitude_damping(0.25);
    CHECK(max_abs(c[1] - 0.25 * (sigma_x() + imag_unit * sigma_y())) < 1e-16);

    // Oracle: sum m^dagger m assembled entry by entry.
    for (double p = 0.0; p <= 1.0; p += 0.05) {
        const KrausChannel ad = amplitude_damping(p);
        ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
        for (const auto& m : ad.kraus())
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int a = 0; a < 2; ++a) sum(i, j) += std::conj(m(a, i)) * m(a, j);
        CHECK(max_abs(sum - identity(2)) < 1e-12);
    }
    CHECK_THROWS_AS(amplitude_damping(2.0), std::invalid_argument);
}

TEST_CASE("KrausChannel validation", "[channels]") {
    CHECK_THROWS_WITH(KrausChannel({1.001 * identity(2)}), ContainsSubstring("completeness residual"));
    CHECK_THROWS_AS(KrausChannel(std::vector<ComplexMatrix>{}), std::invalid_argument);
    CHECK_THROWS_AS(KrausChannel({identity(2), ComplexMatrix::Zero(3, 3)}), std::invalid_argument);
    // Zero operators are legal.
    CHECK_NOTHROW(KrausChannel({identity(2), ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)}));
}

TEST_CASE("compose_unitary", "[channels]") {
    testing::Fixtures fx(32);
    const KrausChannel c = depolarizing(0.3);

    SECTION("identity leaves the channel unchanged") {
        const KrausChannel same = compose_unitary(c, identity(2));
        for (Eigen::Index mu = 0; mu < 4; ++mu) CHECK(same[mu] == c[mu]);
    }

    SECTION("a rotation commuting with rho leaves the output state unchanged") {
        const ComplexMatrix w = unitary_exp(sigma_z(), 0.7);  // exp(-i 0.7 sigma_z)
        const DensityMatrix rho = density_from_bloch(BlochVector(0, 0, 0.4));
        CHECK(max_abs(apply(compose_unitary(c, w), rho).matrix() - apply(c, rho).matrix()) < 1e-15);
    }

    SECTION("completeness survives random unitaries") {
        for (int trial = 0; trial < 100; ++trial) {
            const Eigen::Index n = fx.index(1, 4);
            const KrausChannel r = fx.channel(n, fx.index(1, 6));
            CHECK(completeness_residual(compose_unitary(r, fx.unitary(n)).kraus()) < 1e-12);
        }
    }

    SECTION("non-unitary w is rejected") { CHECK_THROWS_AS(compose_unitary(c, 1.1 * identity(2)), std::domain_error); }
}

TEST_CASE("dilate and kraus_from_dilation", "[channels]") {
    testing::Fixtures fx(33);

    SECTION("single unitary Kraus operator is its own dilation") {
        const ComplexMatrix u = fx.unitary(3);
        CHECK(dilate(KrausChannel({u})).unitary() == u);
    }

    SECTION("presets roundtrip") {
        for (const KrausChannel& c : {depolarizing(0.3), amplitude_damping(0.5), depolarizing(1.0), identity_channel(2)}) {
            const Dilation d = dilate(c);
            CHECK(d.unitary().rows() == 2 * c.env_dim());
            CHECK(unitarity_residual(d.unitary()) < 1e-12);
            const KrausChannel back = kraus_from_dilation(d);
            for (Eigen::Index mu = 0; mu < c.env_dim(); ++mu) CHECK(back[mu] == c[mu]);
        }
    }

    SECTION("depolarizing(1) recovers the scaled Paulis") {
        const KrausChannel back = kraus_from_dilation(dilate(depolarizing(1.0)));
        CHECK(max_abs(back[0]) < 1e-16);
        CHECK(max_abs(back[1] - std::sqrt(1.0 / 3.0) * sigma_x()) < 1e-16);
        CHECK(max_abs(back[2] - std::sqrt(1.0 / 3.0) * sigma_y()) < 1e-16);
        CHECK(max_abs(back[3] - std::sqrt(1.0 / 3.0) * sigma_z()) < 1e-16);
    }

    SECTION("identity channel dilation is the identity") {
        CHECK(dilate(identity_channel(3)).unitary() == identity(3));
        const KrausChannel back = kraus_from_dilation(Dilation(3, 1, identity(3)));
        CHECK(back[0] == identity(3));
    }

    SECTION("tracing out the environment reproduces the Kraus sum") {
        const KrausChannel c = depolarizing(0.3);
        const Dilation d = dilate(c);
        for (int trial = 0; trial < 20; ++trial) {
            const DensityMatrix rho = density_from_bloch(BlochVector(fx.bloch()));
            ComplexMatrix ref = ComplexMatrix::Zero(4, 4);
            ref(0, 0) = 1.0;
            const ComplexMatrix joint = d.unitary() * tensor(rho.matrix(), ref) * d.unitary().adjoint();
            CHECK(max_abs(partial_trace_env(joint, 2, 4) - kraus_sum(c.kraus(), rho.matrix())) < 1e-12);
        }
    }

    SECTION("random dilations: dilation -> Kraus -> dilation agrees on the reference column") {
        for (int trial = 0; trial < 100; ++trial) {
            const Eigen::Index n = fx.index(1, 3), k = fx.index(1, 9);
            const Dilation d = fx.dilation(n, k);
            const Dilation again = dilate(kraus_from_dilation(d));
            for (Eigen::Index j = 0; j < n; ++j) CHECK(again.unitary().col(j * k) == d.unitary().col(j * k));
        }
    }

    SECTION("non-unitary dilations are rejected") {
        ComplexMatrix u = identity(4);
        u(0, 0) = 1.001;
        CHECK_THROWS_AS(Dilation(2, 2, u), std::domain_error);
        CHECK_THROWS_AS(kraus_from_dilation(Dilation::unchecked(2, 2, u)), std::domain_error);
        CHECK_THROWS_AS(Dilation(2, 2, identity(3)), std::invalid_argument);
    }
}

TEST_CASE("channel invariants on random inputs", "[channels][property]") {
    testing::Fixtures fx(34);

    SECTION("trace preservation and positivity") {
        for (int trial = 0; trial < 300; ++trial) {
            const Eigen::Index n = fx.index(1, 4), k = fx.index(1, 8);
            const KrausChannel c = fx.channel(n, k);
            CHECK(completeness_residual(c.kraus()) < 1e-10);
            const DensityMatrix rho(fx.density(n, fx.index(1, n)));
            const ComplexMatrix out = apply(c, rho).matrix();
            CHECK(std::abs(out.trace() - 1.0) < 1e-12);
            CHECK(hermitian_eig(out).values.minCoeff() > -1e-10);
            CHECK(max_abs(out - kraus_sum(c.kraus(), rho.matrix())) < 1e-12);
        }
    }

    SECTION("depolarizing shrink, including Bloch inversion beyond p = 3/4") {
        for (int trial = 0; trial < 100; ++trial) {
            const Vec3 r = fx.bloch();
            for (double p : p_grid) {
                const Vec3 out = bloch_from_density(apply(depolarizing(p), density_from_bloch(BlochVector(r)))).vector();
                CHECK((out - (1.0 - 4.0 * p / 3.0) * r).norm() < 1e-10);
            }
        }
    }

    SECTION("unitary channel embedded with zero operators acts as u rho u^dagger") {
        for (int trial = 0; trial < 50; ++trial) {
            const Eigen::Index n = fx.index(1, 4);
            const ComplexMatrix u = fx.unitary(n);
            const DensityMatrix rho(fx.density(n));
            const ComplexMatrix out = apply(unitary_channel(u, fx.index(1, 5)), rho).matrix();
            CHECK(max_abs(out - u * rho.matrix() * u.adjoint()) < 1e-12);
        }
    }
}
