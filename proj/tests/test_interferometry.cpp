#include <catch_amalgamated.hpp>

#include "support/random.hpp"

using namespace cpphase;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("pattern examples", "[interferometry]") {
    testing::Fixtures fx(41);

    SECTION("depolarizing mu = 0 is sqrt(1 - p) for any state") {
        for (int trial = 0; trial < 10; ++trial) {
            const auto pat = pattern(depolarizing(0.36), density_from_bloch(BlochVector(fx.bloch())), 0);
            CHECK(std::abs(pat.value - 0.8) < 1e-15);
            CHECK(pat.phase == 0.0);
            CHECK(pat.phase_defined);
        }
    }

    SECTION("depolarizing mu = 3 picks the z component") {
        const auto pat = pattern(depolarizing(0.3), density_from_bloch(BlochVector(0, 0, 0.5)), 3);
        CHECK(std::abs(pat.value - std::sqrt(0.1) * 0.5) < 1e-15);
        CHECK(pat.visibility == Catch::Approx(0.158114).margin(1e-6));
    }

    SECTION("amplitude damping mu = 1 follows the x-y projection") {
        const auto pat = pattern(amplitude_damping(0.25), density_from_bloch(BlochVector(0, 1, 0)), 1);
        CHECK(std::abs(pat.value - 0.25 * imag_unit) < 1e-15);
        CHECK(pat.phase == Catch::Approx(pi / 2).margin(1e-15));
    }

    SECTION("flip index out of range") {
        CHECK_THROWS_AS(pattern(depolarizing(0.3), DensityMatrix(identity(2) / 2.0), 4), std::out_of_range);
        CHECK_THROWS_AS(pattern(depolarizing(0.3), DensityMatrix(identity(2) / 2.0), -1), std::out_of_range);
    }
}

TEST_CASE("pattern_set", "[interferometry]") {
    testing::Fixtures fx(42);

    SECTION("unitary channel embedded with K = 4") {
        const ComplexMatrix u = fx.unitary(2);
        const DensityMatrix rho = density_from_bloch(BlochVector(fx.bloch()));
        const auto set = pattern_set(unitary_channel(u, 4), rho);
        REQUIRE(set.size() == 4);
        CHECK(std::abs(set[0].value - (u * rho.matrix()).trace()) < 1e-15);
        for (std::size_t mu = 1; mu < 4; ++mu) {
            CHECK(set[mu].visibility == 0.0);
            CHECK_FALSE(set[mu].phase_defined);
        }
    }

    SECTION("identity channel") {
        const auto set = pattern_set(identity_channel(2), DensityMatrix(identity(2) / 2.0));
        REQUIRE(set.size() == 1);
        CHECK(std::abs(set[0].value - 1.0) < 1e-15);
    }

    SECTION("depolarizing with r = (0.2, 0.4, 0.6)") {
        const auto set = pattern_set(depolarizing(0.3), density_from_bloch(BlochVector(0.2, 0.4, 0.6)));
        const std::vector<double> expected{std::sqrt(0.7), std::sqrt(0.1) * 0.2, std::sqrt(0.1) * 0.4,
                                           std::sqrt(0.1) * 0.6};
        for (std::size_t mu = 0; mu < 4; ++mu) {
            CHECK(set[mu].mu == static_cast<Eigen::Index>(mu));
            CHECK(std::abs(set[mu].value - expected[mu]) < 1e-15);
        }
    }
}

TEST_CASE("flip_operator", "[interferometry]") {
    CHECK(flip_operator(4, 0) == identity(4));
    ComplexMatrix swap(2, 2);
    swap << 0.0, 1.0, 1.0, 0.0;
    CHECK(flip_operator(2, 1) == swap);
    const ComplexMatrix f = flip_operator(4, 2);
    CHECK(f.col(0) == ComplexVector::Unit(4, 2));
    CHECK(f.col(2) == ComplexVector::Unit(4, 0));
    CHECK(f.col(1) == ComplexVector::Unit(4, 1));
    CHECK(f.col(3) == ComplexVector::Unit(4, 3));
    CHECK_THROWS_AS(flip_operator(3, 3), std::out_of_range);
}

TEST_CASE("pattern_via_dilation", "[interferometry]") {
    testing::Fixtures fx(43);

    SECTION("identity dilation") {
        const auto pat = pattern_via_dilation(dilate(identity_channel(2)), DensityMatrix(identity(2) / 2.0), 0);
        CHECK(std::abs(pat.value - 1.0) < 1e-15);
    }

    SECTION("depolarizing, all mu, random states") {
        const KrausChannel c = depolarizing(0.3);
        const Dilation d = dilate(c);
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const DensityMatrix rho = density_from_bloch(BlochVector(fx.bloch()));
            for (Eigen::Index mu = 0; mu < 4; ++mu)
                worst = std::max(worst, std::abs(pattern_via_dilation(d, rho, mu).value - pattern(c, rho, mu).value));
        }
        CHECK(worst < 1e-10);
    }

    SECTION("amplitude damping, mu = 1, r = x") {
        const auto pat = pattern_via_dilation(dilate(amplitude_damping(0.5)), density_from_bloch(BlochVector(1, 0, 0)), 1);
        CHECK(std::abs(pat.value - std::sqrt(0.5) / 2.0) < 1e-15);
    }

    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(pattern_via_dilation(dilate(depolarizing(0.1)), DensityMatrix(identity(3) / 3.0), 0),
                        std::invalid_argument);
    }
}

TEST_CASE("pattern_via_purification", "[interferometry]") {
    testing::Fixtures fx(44);

    SECTION("pure state through the identity channel") {
        const auto pat = pattern_via_purification(identity_channel(2), density_from_bloch(BlochVector(0.6, 0, 0.8)), 0);
        CHECK(std::abs(pat.value - 1.0) < 1e-15);
    }

    SECTION("depolarizing agrees with the Kraus route") {
        const KrausChannel c = depolarizing(0.3);
        for (int trial = 0; trial < 20; ++trial) {
            const DensityMatrix rho = density_from_bloch(BlochVector(fx.bloch()));
            for (Eigen::Index mu = 0; mu < 4; ++mu)
                CHECK(std::abs(pattern_via_purification(c, rho, mu).value - pattern(c, rho, mu).value) < 1e-10);
        }
    }

    SECTION("amplitude damping, mu = 1, r = x") {
        const auto pat = pattern_via_purification(amplitude_damping(0.25), density_from_bloch(BlochVector(1, 0, 0)), 1);
        CHECK(std::abs(pat.value - 0.25) < 1e-15);
    }
}

TEST_CASE("three routes agree on random channels", "[interferometry][property]") {
    testing::Fixtures fx(45);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = fx.index(1, 3), k = fx.index(1, 9);
        const Dilation d = fx.dilation(n, k);
        const KrausChannel c = kraus_from_dilation(d);
        const DensityMatrix rho(fx.density(n, fx.index(1, n)));
        for (Eigen::Index mu = 0; mu < k; ++mu) {
            const cplx a = pattern(c, rho, mu).value;
            const cplx b = pattern_via_dilation(d, rho, mu).value;
            const cplx e = pattern_via_purification(d, rho, mu).value;
            worst = std::max({worst, std::abs(a - b), std::abs(a - e), std::abs(b - e)});
            // nu_mu is bounded by the operator norm of m_mu.
            CHECK(std::abs(a) <= svd(c[mu]).values(0) + 1e-12);
            CHECK(std::abs(a) <= 1.0 + 1e-12);
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("unitary reduction", "[interferometry][property]") {
    testing::Fixtures fx(46);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = fx.index(1, 4);
        const ComplexMatrix u = fx.unitary(n);
        const DensityMatrix rho(fx.density(n));
        CHECK(std::abs(pattern(KrausChannel({u}), rho, 0).value - (u * rho.matrix()).trace()) < 1e-12);
    }
}

TEST_CASE("InterferencePattern phase conventions", "[interferometry]") {
    const auto neg = InterferencePattern::from_value(0, cplx(-0.5, -0.0));
    CHECK(neg.phase == Catch::Approx(pi));
    const auto tiny = InterferencePattern::from_value(0, cplx(1e-10, 1e-10));
    CHECK_FALSE(tiny.phase_defined);
    CHECK(tiny.phase == 0.0);
    const auto z = InterferencePattern::from_value(2, std::polar(0.3, -1.2));
    CHECK(std::abs(std::polar(z.visibility, z.phase) - z.value) < 1e-15);
}

TEST_CASE("fringe", "[interferometry]") {
    const auto full = InterferencePattern::from_value(0, 1.0);
    const auto i = fringe(full, {0.0, pi});
    CHECK(i[0] == Catch::Approx(1.0));
    CHECK(i[1] == Catch::Approx(0.0).margin(1e-15));
    CHECK(fringe(InterferencePattern::from_value(0, 0.8), {pi / 2})[0] == Catch::Approx(0.5));
    CHECK(fringe(InterferencePattern::from_value(0, 0.0), {0.3, 1.0}) == std::vector<double>{0.5, 0.5});

    SECTION("maximum sits at alpha") {
        const auto pat = InterferencePattern::from_value(0, std::polar(0.6, 2.1));
        const auto grid = chi_grid(-pi, pi, 2001);
        const auto values = fringe(pat, grid);
        const auto peak = std::max_element(values.begin(), values.end()) - values.begin();
        CHECK(std::abs(grid[static_cast<std::size_t>(peak)] - 2.1) <= grid[1] - grid[0]);
        for (double v : values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("chi_grid", "[interferometry]") {
    const auto g = chi_grid(0.0, 2 * pi, 5);
    REQUIRE(g.size() == 5);
    CHECK(g[2] == Catch::Approx(pi));
    CHECK(g[4] == 2 * pi);
    CHECK_THROWS_AS(chi_grid(0, 1, 0), std::invalid_argument);
}
