#ifndef TELATOM_DYNAMICS_HPP
#define TELATOM_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <sstream>
#include <stdexcept>

#include "telatom/couplings.hpp"
#include "telatom/states.hpp"

// Time evolution of the two-atom density matrix under the collective-decay
// master equation: a closed-form propagator on the X manifold and an
// independent Runge-Kutta integrator of the full generator. The integrator
// is the ground truth; the closed form is validated against it.

namespace telatom {

// a1 of the closed-form propagator carries (gamma + gamma12)/(gamma - gamma12)
// and blows up when the rates degenerate while the doubly excited level is
// populated. Callers catching this should fall back to the integrator.
struct degenerate_rates_error : std::domain_error {
    using std::domain_error::domain_error;
};

inline constexpr double kDegeneracyThreshold = 1e-6;  // on |gamma - gamma12|/gamma

// The six scalars parameterizing the X-manifold solution.
struct XCoefficients {
    complexd a1, a2, b1, b2, c1, c2;
};

inline XCoefficients x_coefficients(const XState& x0, const CouplingRates& rates, double gamma) {
    if (std::abs(gamma - rates.gamma12) < kDegeneracyThreshold * gamma && x0.p11 > 0.0) {
        std::ostringstream msg;
        msg << "x_coefficients: |gamma - gamma12| = " << std::abs(gamma - rates.gamma12)
            << " below degeneracy threshold with rho11(0) = " << x0.p11
            << "; use the numerical engine or the limit formulas";
        throw degenerate_rates_error(msg.str());
    }
    const complexd c23 = x0.c23, c32 = std::conj(x0.c23);
    XCoefficients k;
    k.a1 = x0.p11 > 0.0 ? 0.5 * x0.p11 * (gamma + rates.gamma12) / (gamma - rates.gamma12)
                        : complexd(0, 0);
    k.a2 = 0.5 * x0.p11 * (gamma - rates.gamma12) / (gamma + rates.gamma12);
    k.b1 = 0.25 * (x0.p22 + x0.p33 + c23 + c32);
    k.b2 = 0.25 * (x0.p22 + x0.p33 - c23 - c32);
    k.c1 = 0.25 * (x0.p22 - x0.p33 + c23 - c32);
    k.c2 = 0.25 * (x0.p22 - x0.p33 - c23 + c32);
    return k;
}

namespace detail {

// expm1(u)/u, smooth through u = 0.
inline double expm1_over(double u) {
    if (std::abs(u) < 1e-8) return 1.0 + 0.5 * u + u * u / 6.0;
    return std::expm1(u) / u;
}

}  // namespace detail

// Closed-form rho(t) for an X-form initial state. The a1/a2 pieces are
// evaluated as a1*(e^{-(gamma+gamma12)t} - e^{-2 gamma t}) =
// (1/2) rho11(0) (gamma+gamma12) e^{-2 gamma t} t * expm1((gamma-gamma12)t)/((gamma-gamma12)t),
// which stays finite through gamma12 -> gamma, so no degeneracy guard is
// needed here.
//
// Coherent cross terms: with q = rho22 - rho33 and z = rho23 - rho32, the
// one-excitation block decouples into d(q+z)/dt = -(gamma - 2i Omega12)(q+z)
// and d(q-z)/dt = -(gamma + 2i Omega12)(q-z), so c1 = (q+z)(0)/4 rides on
// e^{-(gamma-2i Omega12)t} and c2 = (q-z)(0)/4 on e^{-(gamma+2i Omega12)t}.
inline XState evolve_x_analytic(const XState& x0, const CouplingRates& rates, double gamma,
                                double omega0, double t) {
    if (!(t >= 0.0)) throw std::domain_error("evolve_x_analytic: t must be >= 0");

    const double gp = gamma + rates.gamma12;   // superradiant decay
    const double gm = gamma - rates.gamma12;   // subradiant decay
    const double e2 = std::exp(-2.0 * gamma * t);
    const double ep = std::exp(-gp * t);
    const double em = std::exp(-gm * t);

    const complexd c23 = x0.c23, c32 = std::conj(x0.c23);
    const complexd b1 = 0.25 * (x0.p22 + x0.p33 + c23 + c32);
    const complexd b2 = 0.25 * (x0.p22 + x0.p33 - c23 - c32);
    const complexd c1 = 0.25 * (x0.p22 - x0.p33 + c23 - c32);
    const complexd c2 = 0.25 * (x0.p22 - x0.p33 - c23 + c32);

    // a1*(ep - e2) and a2*(em - e2) in product form
    const double a1_term = 0.5 * x0.p11 * gp * e2 * t * detail::expm1_over(gm * t);
    const double a2_term = 0.5 * x0.p11 * gm * e2 * t * detail::expm1_over(gp * t);

    const complexd osc_minus = std::exp(complexd(-gamma * t, 2.0 * rates.omega12 * t));
    const complexd osc_plus = std::exp(complexd(-gamma * t, -2.0 * rates.omega12 * t));

    const complexd pop_common = a1_term + a2_term + b1 * ep + b2 * em;
    const complexd coh_common = a1_term - a2_term + b1 * ep - b2 * em;
    const complexd r22 = pop_common + c1 * osc_minus + c2 * osc_plus;
    const complexd r33 = pop_common - c1 * osc_minus - c2 * osc_plus;
    const complexd r23 = coh_common + c1 * osc_minus - c2 * osc_plus;

    XState out;
    out.p11 = x0.p11 * e2;
    out.p22 = r22.real();
    out.p33 = r33.real();
    out.p44 = 1.0 - out.p11 - out.p22 - out.p33;
    out.c14 = x0.c14 * std::exp(complexd(-gamma * t, -2.0 * omega0 * t));
    out.c23 = r23;
    return out;
}

namespace detail {

using Matrix16c = Eigen::Matrix<complexd, 16, 16>;
using Vector16c = Eigen::Matrix<complexd, 16, 1>;

// Atomic dipole operators as fixed 4x4 matrices, atom 1 = first factor.
inline Matrix4c s_plus(int atom) {
    Matrix4c m = Matrix4c::Zero();
    if (atom == 1) { m(kEE, kGE) = 1; m(kEG, kGG) = 1; }
    else           { m(kEE, kEG) = 1; m(kGE, kGG) = 1; }
    return m;
}

inline Matrix4c s_z(int atom) {
    Matrix4c m = Matrix4c::Zero();
    if (atom == 1) { m(kEE, kEE) = 0.5; m(kEG, kEG) = 0.5; m(kGE, kGE) = -0.5; m(kGG, kGG) = -0.5; }
    else           { m(kEE, kEE) = 0.5; m(kGE, kGE) = 0.5; m(kEG, kEG) = -0.5; m(kGG, kGG) = -0.5; }
    return m;
}

inline Matrix16c kron4(const Matrix4c& a, const Matrix4c& b) {
    Matrix16c out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
    return out;
}

// Superoperator of rho -> A rho B under column-major vec().
inline Matrix16c sandwich(const Matrix4c& a, const Matrix4c& b) {
    return kron4(b.transpose(), a);
}

}  // namespace detail

struct StepControl {
    double dt = 0.0;     // fixed step; 0 selects one from tol and the rate scales
    double tol = 1e-8;   // local error target per unit time (Richardson estimate)
};

// Right-hand side of the master equation precomputed as a 16x16 matrix
// acting on vec(rho), stepped with classical RK4. The generator is
// traceless, so RK4 conserves the trace to roundoff.
class LindbladPropagator {
  public:
    LindbladPropagator(const CouplingRates& rates, double gamma, double omega0)
        : rates_(rates), gamma_(gamma), omega0_(omega0) {
        using detail::sandwich;
        const Matrix4c id = Matrix4c::Identity();
        const Matrix4c s1p = detail::s_plus(1), s2p = detail::s_plus(2);
        const Matrix4c s1m = s1p.adjoint(), s2m = s2p.adjoint();
        const Matrix4c sz = detail::s_z(1) + detail::s_z(2);

        const Matrix4c h =
            omega0 * sz + rates.omega12 * (s1p * s2m + s2p * s1m);
        liouvillian_ = complexd(0, -1) * (sandwich(h, id) - sandwich(id, h));

        const Matrix4c sp[2] = {s1p, s2p};
        const Matrix4c sm[2] = {s1m, s2m};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const double g = (i == j) ? gamma : rates.gamma12;
                const Matrix4c pipj = sp[i] * sm[j];
                liouvillian_ += 0.5 * g *
                                (2.0 * sandwich(sm[j], sp[i]) - sandwich(pipj, id) -
                                 sandwich(id, pipj));
            }
        }
    }

    const detail::Matrix16c& generator() const { return liouvillian_; }

    Matrix4c rhs(const Matrix4c& rho) const {
        detail::Vector16c y = Eigen::Map<const detail::Vector16c>(rho.data());
        detail::Vector16c dy = liouvillian_ * y;
        return Eigen::Map<const Matrix4c>(dy.data());
    }

    // Default step: the coarser of the design cap
    // min(0.05/gamma, 0.02/omega0, 0.05/|Omega12|) and the step meeting the
    // error tolerance for the fastest mode (~2 omega0 on rho14).
    double default_step(const StepControl& sc) const {
        double h = std::min(0.05 / gamma_, 0.02 / omega0_);
        if (rates_.omega12 != 0.0) h = std::min(h, 0.05 / std::abs(rates_.omega12));
        const double s = 2.0 * (omega0_ + std::abs(rates_.omega12)) + 3.0 * gamma_;
        const double h_tol = std::pow(120.0 * sc.tol / std::pow(s, 5), 0.25);
        return std::min(h, h_tol);
    }

    Matrix4c evolve(const Matrix4c& rho0, double t, const StepControl& sc = {}) const {
        if (!(t >= 0.0)) throw std::domain_error("LindbladPropagator::evolve: t must be >= 0");
        if (t == 0.0) return rho0;
        const double h_req = sc.dt > 0.0 ? sc.dt : default_step(sc);
        const long n = std::max(1L, static_cast<long>(std::ceil(t / h_req - 1e-12)));
        const double h = t / static_cast<double>(n);
        if (sc.dt > 0.0) check_step(rho0, h, sc.tol);

        detail::Vector16c y = Eigen::Map<const detail::Vector16c>(rho0.data());
        for (long i = 0; i < n; ++i) rk4_step(y, h);
        return Eigen::Map<const Matrix4c>(y.data());
    }

    // Sequential trajectory through monotonically nondecreasing times.
    void trajectory(const Matrix4c& rho0, std::span<const double> times,
                    const std::function<void(double, const Matrix4c&)>& visit,
                    const StepControl& sc = {}) const {
        const double h_req = sc.dt > 0.0 ? sc.dt : default_step(sc);
        if (sc.dt > 0.0) check_step(rho0, h_req, sc.tol);
        detail::Vector16c y = Eigen::Map<const detail::Vector16c>(rho0.data());
        double now = 0.0;
        for (double t : times) {
            if (!(t >= now))
                throw std::domain_error("LindbladPropagator::trajectory: times must be nondecreasing and >= 0");
            const double dt = t - now;
            if (dt > 0.0) {
                const long n = std::max(1L, static_cast<long>(std::ceil(dt / h_req - 1e-12)));
                const double h = dt / static_cast<double>(n);
                for (long i = 0; i < n; ++i) rk4_step(y, h);
                now = t;
            }
            Matrix4c rho = Eigen::Map<const Matrix4c>(y.data());
            visit(t, rho);
        }
    }

  private:
    void rk4_step(detail::Vector16c& y, double h) const {
        const detail::Vector16c k1 = liouvillian_ * y;
        const detail::Vector16c k2 = liouvillian_ * (y + 0.5 * h * k1);
        const detail::Vector16c k3 = liouvillian_ * (y + 0.5 * h * k2);
        const detail::Vector16c k4 = liouvillian_ * (y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    // Richardson probe: one full step vs two half steps on the initial state.
    void check_step(const Matrix4c& rho0, double h, double tol) const {
        detail::Vector16c full = Eigen::Map<const detail::Vector16c>(rho0.data());
        detail::Vector16c halves = full;
        rk4_step(full, h);
        rk4_step(halves, 0.5 * h);
        rk4_step(halves, 0.5 * h);
        const double err = (halves - full).cwiseAbs().maxCoeff() / 15.0;
        if (err > tol * h) {
            std::ostringstream msg;
            msg << "LindbladPropagator: step " << h << " too coarse for the fastest scale"
                << " (omega0 = " << omega0_ << ", |Omega12| = " << std::abs(rates_.omega12)
                << "): estimated local error " << err << " per step exceeds " << tol * h
                << "; reduce dt below " << default_step(StepControl{0.0, tol});
            throw std::runtime_error(msg.str());
        }
    }

    CouplingRates rates_;
    double gamma_;
    double omega0_;
    detail::Matrix16c liouvillian_;
};

inline Matrix4c evolve_lindblad(const Matrix4c& rho0, const CouplingRates& rates, double gamma,
                                double omega0, double t, const StepControl& sc = {}) {
    return LindbladPropagator(rates, gamma, omega0).evolve(rho0, t, sc);
}

}  // namespace telatom

#endif  // TELATOM_DYNAMICS_HPP
