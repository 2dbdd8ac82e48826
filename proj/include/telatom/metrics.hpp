#ifndef TELATOM_METRICS_HPP
#define TELATOM_METRICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "telatom/states.hpp"

// Entanglement (Wootters concurrence) and purity of the channel state.

namespace telatom {

// C = max{0, l1 - l2 - l3 - l4}, l_i the decreasingly ordered square roots
// of the eigenvalues of R = rho (sy x sy) rho* (sy x sy). R is similar to
// the Hermitian matrix sqrt(rho) rho~ sqrt(rho), which a self-adjoint solver
// handles at full precision even when rho is rank deficient.
inline double concurrence(const Matrix4c& rho) {
    Matrix4c syy = Matrix4c::Zero();
    // sigma_y x sigma_y is the anti-diagonal (-1, 1, 1, -1)
    syy(0, 3) = -1; syy(1, 2) = 1; syy(2, 1) = 1; syy(3, 0) = -1;
    const Matrix4c rho_tilde = syy * rho.conjugate() * syy;

    Eigen::SelfAdjointEigenSolver<Matrix4c> es((rho + rho.adjoint()) / 2.0);
    if (es.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "concurrence: eigensolver failed on rho =\n" << rho;
        throw std::runtime_error(msg.str());
    }
    Eigen::Vector4d vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Matrix4c sqrt_rho =
        es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();

    Eigen::SelfAdjointEigenSolver<Matrix4c> es2(sqrt_rho * rho_tilde * sqrt_rho);
    if (es2.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "concurrence: eigensolver failed on R =\n"
            << (rho * rho_tilde);
        throw std::runtime_error(msg.str());
    }
    std::array<double, 4> lam;
    for (int i = 0; i < 4; ++i)
        lam[i] = std::sqrt(std::max(0.0, es2.eigenvalues()(i)));
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

// X-state shortcut: C = max{0, 2(|rho14| - sqrt(rho22 rho33)),
//                            2(|rho23| - sqrt(rho11 rho44))}.
inline double concurrence_x_fast(const XState& x) {
    const double c1 = 2.0 * (std::abs(x.c14) -
                             std::sqrt(std::max(0.0, x.p22) * std::max(0.0, x.p33)));
    const double c2 = 2.0 * (std::abs(x.c23) -
                             std::sqrt(std::max(0.0, x.p11) * std::max(0.0, x.p44)));
    return std::max({0.0, c1, c2});
}

// P = tr rho^2 = sum_ij |rho_ij|^2
inline double purity(const Matrix4c& rho) {
    return rho.cwiseAbs2().sum();
}

inline double purity(const XState& x) {
    return x.p11 * x.p11 + x.p22 * x.p22 + x.p33 * x.p33 + x.p44 * x.p44 +
           2.0 * std::norm(x.c14) + 2.0 * std::norm(x.c23);
}

}  // namespace telatom

#endif  // TELATOM_METRICS_HPP
