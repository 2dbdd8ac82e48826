#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "telatom/couplings.hpp"
#include "telatom/dynamics.hpp"
#include "telatom/metrics.hpp"
#include "test_util.hpp"

using namespace telatom;
using Catch::Matchers::WithinAbs;

namespace {
CouplingRates rates_at(double r) {
    return coupling_pair(GeometryParams{r, 0.5 * std::numbers::pi, 1.0, 100.0});
}
}  // namespace

TEST_CASE("concurrence of reference states") {
    for (int k = 0; k < 4; ++k) {
        const XState bell = initial_density(static_cast<NamedInitial>(k));
        CHECK_THAT(concurrence(bell.to_matrix()), WithinAbs(1.0, 1e-10));
        CHECK_THAT(concurrence_x_fast(bell), WithinAbs(1.0, 1e-15));
    }
    SECTION("product states are unentangled") {
        std::mt19937 rng(3);
        for (int i = 0; i < 20; ++i) {
            const Vector2c a = testutil::random_qubit_ket(rng);
            const Vector2c b = testutil::random_qubit_ket(rng);
            Matrix4c prod;
            const Matrix2c ra = a * a.adjoint(), rb = b * b.adjoint();
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) prod.block<2, 2>(2 * r, 2 * c) = ra(r, c) * rb;
            // roundoff in the eigenvalues enters C through a square root
            CHECK(concurrence(prod) < 1e-7);
        }
    }
    SECTION("maximally mixed state") {
        XState mixed;
        mixed.p11 = mixed.p22 = mixed.p33 = mixed.p44 = 0.25;
        CHECK(concurrence_x_fast(mixed) == 0.0);
        CHECK(concurrence(mixed.to_matrix()) < 1e-12);
    }
}

TEST_CASE("concurrence along the Bell channel trajectories") {
    const CouplingRates rates = rates_at(0.6737);
    for (double t : {0.15, 0.8, 2.0}) {
        const XState s1 =
            evolve_x_analytic(initial_density(NamedInitial::Bell1), rates, 1.0, 100.0, t);
        CHECK_THAT(concurrence(s1.to_matrix()),
                   WithinAbs(std::exp(-(1.0 + rates.gamma12) * t), 1e-10));
        const XState s2 =
            evolve_x_analytic(initial_density(NamedInitial::Bell2), rates, 1.0, 100.0, t);
        CHECK_THAT(concurrence_x_fast(s2),
                   WithinAbs(std::exp(-(1.0 - rates.gamma12) * t), 1e-13));
    }
}

TEST_CASE("concurrence of the decaying product state") {
    // analytic form: C = e^{-gt} sqrt(sinh^2(g12 t) + sin^2(2 Om12 t))
    const CouplingRates rates = rates_at(0.05);
    for (double t : {0.01, 0.034, 0.1, 0.5}) {
        const XState xt =
            evolve_x_analytic(initial_density(NamedInitial::ProductEG), rates, 1.0, 100.0, t);
        const double expect =
            std::exp(-t) * std::hypot(std::sinh(rates.gamma12 * t),
                                      std::sin(2.0 * rates.omega12 * t));
        // this trajectory keeps |rho23|^2 = rho22 rho33 exactly, so R has
        // eigenvalues at zero whose square roots amplify roundoff to ~1e-8
        CHECK_THAT(concurrence(xt.to_matrix()), WithinAbs(expect, 1e-8));
        CHECK_THAT(concurrence_x_fast(xt), WithinAbs(expect, 1e-13));
    }
}

TEST_CASE("fast path matches the eigenvalue route on random X states") {
    std::mt19937 rng(59);
    for (int i = 0; i < 500; ++i) {
        const XState x = testutil::random_x_state(rng);
        CHECK_THAT(concurrence_x_fast(x), WithinAbs(concurrence(x.to_matrix()), 1e-10));
    }
}

TEST_CASE("purity") {
    SECTION("pure states have unit purity") {
        for (int k = 0; k < 4; ++k) {
            const XState bell = initial_density(static_cast<NamedInitial>(k));
            CHECK_THAT(purity(bell), WithinAbs(1.0, 1e-15));
            CHECK_THAT(purity(bell.to_matrix()), WithinAbs(1.0, 1e-14));
        }
        CHECK_THAT(purity(initial_density(NamedInitial::ProductEG)), WithinAbs(1.0, 1e-15));
    }
    SECTION("Bell channel trajectories") {
        const CouplingRates rates = rates_at(0.6737);
        for (double t : {0.2, 1.0, 3.0}) {
            const XState s1 =
                evolve_x_analytic(initial_density(NamedInitial::Bell1), rates, 1.0, 100.0, t);
            const double u = std::exp(-(1.0 + rates.gamma12) * t);
            CHECK_THAT(purity(s1), WithinAbs(1.0 - 2.0 * u + 2.0 * u * u, 1e-13));
            const XState s2 =
                evolve_x_analytic(initial_density(NamedInitial::Bell2), rates, 1.0, 100.0, t);
            const double v = std::exp(-(1.0 - rates.gamma12) * t);
            CHECK_THAT(purity(s2), WithinAbs(1.0 - 2.0 * v + 2.0 * v * v, 1e-13));
        }
    }
    SECTION("matrix and X-state overloads agree") {
        std::mt19937 rng(61);
        for (int i = 0; i < 100; ++i) {
            const XState x = testutil::random_x_state(rng);
            CHECK_THAT(purity(x), WithinAbs(purity(x.to_matrix()), 1e-14));
        }
    }
}

TEST_CASE("coherence phases affect neither concurrence nor purity") {
    std::mt19937 rng(67);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < 100; ++i) {
        XState x = testutil::random_x_state(rng);
        const double c0 = concurrence_x_fast(x);
        const double p0 = purity(x);
        const double c0_eig = concurrence(x.to_matrix());
        x.c14 *= std::polar(1.0, u(rng));
        x.c23 *= std::polar(1.0, u(rng));
        CHECK_THAT(concurrence_x_fast(x), WithinAbs(c0, 1e-14));
        CHECK_THAT(purity(x), WithinAbs(p0, 1e-14));
        CHECK_THAT(concurrence(x.to_matrix()), WithinAbs(c0_eig, 1e-10));
    }
}

TEST_CASE("metric ranges on random X states") {
    std::mt19937 rng(71);
    for (int i = 0; i < 300; ++i) {
        const XState x = testutil::random_x_state(rng);
        const double c = concurrence_x_fast(x);
        const double p = purity(x);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0 + 1e-12);
        CHECK(p >= 0.25 - 1e-12);
        CHECK(p <= 1.0 + 1e-12);
    }
}

TEST_CASE("general X form reduces to the balanced-population shortcut") {
    // with rho22 = rho33 and rho11 = rho44 the geometric means collapse to
    // the populations themselves
    std::mt19937 rng(73);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        XState x;
        x.p11 = x.p44 = 0.5 * u(rng);
        x.p22 = x.p33 = 0.5 - x.p11;
        x.c14 = std::polar(x.p11 * u(rng), u(rng));
        x.c23 = std::polar(x.p22 * u(rng), u(rng));
        const double general = concurrence_x_fast(x);
        const double balanced = std::max(
            {0.0, 2.0 * (std::abs(x.c14) - x.p22), 2.0 * (std::abs(x.c23) - x.p11)});
        CHECK_THAT(general, WithinAbs(balanced, 1e-14));
    }
}
