#ifndef TELATOM_COUPLINGS_HPP
#define TELATOM_COUPLINGS_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

// Collective damping rate gamma12 and dipole-dipole shift Omega12 for two
// identical two-level atoms coupled to the same vacuum, as functions of the
// interatomic separation and the dipole orientation. Everything is carried
// in units of the single-atom decay rate gamma; distances in units of the
// resonant wavelength lambda.

namespace telatom {

// Fold an arbitrary dipole angle into [0, pi/2]; only cos^2 of it matters.
inline double normalize_dipole_angle(double angle) {
    double a = std::fmod(std::abs(angle), std::numbers::pi);
    if (a > 0.5 * std::numbers::pi) a = std::numbers::pi - a;
    return a;
}

struct GeometryParams {
    double r_over_lambda;                              // r12/lambda, > 0
    double dipole_angle = 0.5 * std::numbers::pi;      // angle(mu, r12), perpendicular by default
    double gamma = 1.0;                                // spontaneous emission rate
    double omega0 = 100.0;                             // transition frequency, units of gamma

    // kr12 = 2 pi r/lambda
    double x() const { return 2.0 * std::numbers::pi * r_over_lambda; }
    // (mu . r_hat)^2
    double mu_dot_r_sq() const {
        const double c = std::cos(normalize_dipole_angle(dipole_angle));
        return c * c;
    }

    void validate() const {
        if (!std::isfinite(r_over_lambda) || r_over_lambda <= 0.0)
            throw std::domain_error("GeometryParams: r_over_lambda must be finite and > 0, got " +
                                    std::to_string(r_over_lambda));
        if (!std::isfinite(gamma) || gamma <= 0.0)
            throw std::domain_error("GeometryParams: gamma must be finite and > 0");
        if (!std::isfinite(omega0) || omega0 <= 0.0)
            throw std::domain_error("GeometryParams: omega0 must be finite and > 0");
    }
};

struct CouplingRates {
    double gamma12 = 0.0;   // collective damping, |gamma12| <= gamma
    double omega12 = 0.0;   // dipole-dipole shift, diverges as (kr)^-3
};

namespace detail {

// Direct evaluation of the radial kernels loses ~x^-3 digits of accuracy to
// cancellation at small x; below the switch point each kernel is evaluated
// by its series, truncated at x^6 (next term < 1e-16 at x = 0.05).
inline constexpr double kSeriesSwitchX = 0.05;

// j0(x) = sin(x)/x
inline double sinc(double x, double series_switch = kSeriesSwitchX) {
    if (std::abs(x) < series_switch) {
        const double x2 = x * x;
        return 1.0 + x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 - x2 / 5040.0));
    }
    return std::sin(x) / x;
}

// j1(x)/x = sin(x)/x^3 - cos(x)/x^2
inline double j1_over_x(double x, double series_switch = kSeriesSwitchX) {
    if (std::abs(x) < series_switch) {
        const double x2 = x * x;
        return 1.0 / 3.0 + x2 * (-1.0 / 30.0 + x2 * (1.0 / 840.0 - x2 / 45360.0));
    }
    return (std::sin(x) / x - std::cos(x)) / (x * x);
}

// y1(x)/x = -cos(x)/x^3 - sin(x)/x^2
inline double y1_over_x(double x, double series_switch = kSeriesSwitchX) {
    if (std::abs(x) < series_switch) {
        const double x2 = x * x;
        return -1.0 / (x * x2) - 0.5 / x + x * (1.0 / 8.0 + x2 * (-1.0 / 144.0 + x2 / 5760.0));
    }
    return -(std::cos(x) / x + std::sin(x)) / (x * x);
}

}  // namespace detail

// gamma12 = (3/2) gamma { (1-a) sin(x)/x + (1-3a) [cos(x)/x^2 - sin(x)/x^3] },
// a = (mu.r_hat)^2, x = kr. Tends to gamma as x -> 0 for every a.
inline double collective_damping(const GeometryParams& geom,
                                 double series_switch = detail::kSeriesSwitchX) {
    geom.validate();
    const double x = geom.x();
    const double a = geom.mu_dot_r_sq();
    return 1.5 * geom.gamma *
           ((1.0 - a) * detail::sinc(x, series_switch) -
            (1.0 - 3.0 * a) * detail::j1_over_x(x, series_switch));
}

// Omega12 = (3/4) gamma { (a-1) cos(x)/x + (1-3a) [sin(x)/x^2 + cos(x)/x^3] }.
// Grows as x^-3 for x -> 0; callers must treat small separations explicitly.
inline double dipole_shift(const GeometryParams& geom,
                           double series_switch = detail::kSeriesSwitchX) {
    geom.validate();
    const double x = geom.x();
    const double a = geom.mu_dot_r_sq();
    return 0.75 * geom.gamma *
           ((a - 1.0) * std::cos(x) / x -
            (1.0 - 3.0 * a) * detail::y1_over_x(x, series_switch));
}

inline CouplingRates coupling_pair(const GeometryParams& geom,
                                   double series_switch = detail::kSeriesSwitchX) {
    return CouplingRates{collective_damping(geom, series_switch),
                         dipole_shift(geom, series_switch)};
}

}  // namespace telatom

#endif  // TELATOM_COUPLINGS_HPP
