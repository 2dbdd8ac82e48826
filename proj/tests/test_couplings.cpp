#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "telatom/couplings.hpp"

using namespace telatom;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = std::numbers::pi;
GeometryParams perp(double r) { return GeometryParams{r, 0.5 * kPi, 1.0, 100.0}; }
}  // namespace

TEST_CASE("collective damping reaches gamma at vanishing separation") {
    CHECK_THAT(collective_damping(perp(1e-8)), WithinAbs(1.0, 1e-12));
    // x = 1e-6 keeps gamma12/gamma inside [1 - 1e-6, 1]
    const double g = collective_damping(perp(1e-6 / (2.0 * kPi)));
    CHECK(g <= 1.0);
    CHECK(g >= 1.0 - 1e-6);
    // the angle dependence collapses in the same limit
    const double g_par = collective_damping(GeometryParams{1e-8, 0.0, 1.0, 100.0});
    CHECK_THAT(g_par, WithinAbs(1.0, 1e-12));
}

TEST_CASE("collective damping minimum at r = 0.6737 lambda, perpendicular dipoles") {
    CHECK_THAT(collective_damping(perp(0.6737)), WithinAbs(-0.3355, 5e-4));
}

TEST_CASE("both rates decay at large separation") {
    CHECK(std::abs(collective_damping(perp(100.0))) < 0.01);
    CHECK(std::abs(dipole_shift(perp(100.0))) < 0.01);
}

TEST_CASE("rates match high-precision evaluations") {
    // frozen from a 30-digit evaluation of the closed-form rates
    CHECK_THAT(collective_damping(perp(0.25)), WithinRel(0.567911245352978144, 1e-14));
    CHECK_THAT(dipole_shift(perp(0.25)), WithinRel(0.303963550927013314, 1e-14));
    CHECK_THAT(collective_damping(perp(0.5)), WithinRel(-0.151981775463506657, 1e-14));
    CHECK_THAT(dipole_shift(perp(0.5)), WithinRel(0.214543763812943387, 1e-14));
}

TEST_CASE("dipole shift blows up at small separation") {
    const double om20 = dipole_shift(perp(1.0 / 20.0));
    CHECK(om20 > 20.0);
    CHECK(dipole_shift(perp(1.0 / 40.0)) > om20);
}

TEST_CASE("coupling_pair bundles the two rates") {
    for (double r : {0.05, 0.3, 0.6737, 2.0, 7.5}) {
        const CouplingRates pair = coupling_pair(perp(r));
        CHECK(pair.gamma12 == collective_damping(perp(r)));
        CHECK(pair.omega12 == dipole_shift(perp(r)));
    }
}

TEST_CASE("series and direct branches agree at the switch point") {
    const double x = detail::kSeriesSwitchX;
    for (double xx : {x * 0.98, x * 0.999, x, x * 1.001, x * 1.02}) {
        const GeometryParams geom = perp(xx / (2.0 * kPi));
        // force each branch by moving the threshold
        const double g_series = collective_damping(geom, 10.0);
        const double g_direct = collective_damping(geom, 0.0);
        CHECK_THAT(g_series, WithinAbs(g_direct, 1e-10));
        const double o_series = dipole_shift(geom, 10.0);
        const double o_direct = dipole_shift(geom, 0.0);
        CHECK_THAT(o_series, WithinAbs(o_direct, 1e-10 * std::abs(o_direct)));
    }
}

TEST_CASE("gamma12 is continuous in x, including across the switchover") {
    double prev = collective_damping(perp(1e-3));
    for (int i = 1; i <= 4000; ++i) {
        const double r = 1e-3 + (2.0 - 1e-3) * i / 4000.0;
        const double cur = collective_damping(perp(r));
        CHECK(std::abs(cur - prev) < 0.01);
        prev = cur;
    }
}

TEST_CASE("|gamma12| <= gamma on a dense grid of x in (0, 100]") {
    for (int i = 1; i <= 20000; ++i) {
        const double x = 100.0 * i / 20000.0;
        const double g = collective_damping(perp(x / (2.0 * kPi)));
        REQUIRE(std::abs(g) <= 1.0 + 1e-12);
    }
}

TEST_CASE("perpendicular gamma12 changes sign and dips where expected") {
    // first zero near r = 0.4367 lambda, minimum near r = 0.6737 lambda
    CHECK(collective_damping(perp(0.42)) > 0.0);
    CHECK(collective_damping(perp(0.45)) < 0.0);
    const double at_min = collective_damping(perp(0.6737));
    CHECK(collective_damping(perp(0.62)) > at_min);
    CHECK(collective_damping(perp(0.73)) > at_min);
}

TEST_CASE("invalid geometry is rejected") {
    CHECK_THROWS_AS(collective_damping(perp(0.0)), std::domain_error);
    CHECK_THROWS_AS(collective_damping(perp(-1.0)), std::domain_error);
    CHECK_THROWS_AS(collective_damping(perp(std::nan(""))), std::domain_error);
    CHECK_THROWS_AS(dipole_shift(perp(-0.5)), std::domain_error);
    GeometryParams bad_gamma{0.5, 0.5 * kPi, -1.0, 100.0};
    CHECK_THROWS_AS(collective_damping(bad_gamma), std::domain_error);
}

TEST_CASE("dipole angle folds into [0, pi/2]") {
    CHECK_THAT(normalize_dipole_angle(0.0), WithinAbs(0.0, 1e-15));
    CHECK_THAT(normalize_dipole_angle(kPi), WithinAbs(0.0, 1e-12));
    CHECK_THAT(normalize_dipole_angle(-0.3), WithinAbs(0.3, 1e-15));
    CHECK_THAT(normalize_dipole_angle(0.75 * kPi), WithinAbs(0.25 * kPi, 1e-12));
    // only cos^2 enters, so folded angles give identical rates
    const double a = collective_damping(GeometryParams{0.4, 0.3, 1.0, 100.0});
    const double b = collective_damping(GeometryParams{0.4, kPi - 0.3, 1.0, 100.0});
    CHECK_THAT(a, WithinAbs(b, 1e-15));
}
