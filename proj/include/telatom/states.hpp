#ifndef TELATOM_STATES_HPP
#define TELATOM_STATES_HPP

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <variant>

// Two-qubit state types. Basis order throughout:
//   0 -> |e1 e2>,  1 -> |e1 g2>,  2 -> |g1 e2>,  3 -> |g1 g2>
// (atom 1 is the first tensor factor; the doubly excited population decays
// at 2*gamma, which fixes the ordering).

namespace telatom {

using complexd = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector2c = Eigen::Vector2cd;
using Vector4c = Eigen::Vector4cd;

using DensityMatrix4 = Matrix4c;

inline constexpr int kEE = 0, kEG = 1, kGE = 2, kGG = 3;

// 2x2 identity and Pauli operators in the (|e>, |g>) basis, indexed 0..3.
inline Matrix2c pauli(int m) {
    Matrix2c s;
    switch (m) {
        case 0: s << 1, 0, 0, 1; break;
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, complexd(0, -1), complexd(0, 1), 0; break;
        case 3: s << 1, 0, 0, -1; break;
        default: throw std::out_of_range("pauli: label must be in 0..3");
    }
    return s;
}

// |Psi^{0,3}> = (|ee> +- |gg>)/sqrt2, |Psi^{1,2}> = (|eg> +- |ge>)/sqrt2.
inline Vector4c bell_ket(int k) {
    const double s = 1.0 / std::numbers::sqrt2;
    Vector4c v = Vector4c::Zero();
    switch (k) {
        case 0: v(kEE) = s; v(kGG) = s; break;
        case 1: v(kEG) = s; v(kGE) = s; break;
        case 2: v(kEG) = s; v(kGE) = -s; break;
        case 3: v(kEE) = s; v(kGG) = -s; break;
        default: throw std::out_of_range("bell_ket: label must be in 0..3");
    }
    return v;
}

// Density matrix with support on the main diagonal and anti-diagonal only.
// c14 = <ee|rho|gg>, c23 = <eg|rho|ge>; rho41 and rho32 are their conjugates.
struct XState {
    double p11 = 0, p22 = 0, p33 = 0, p44 = 0;
    complexd c14{0, 0};
    complexd c23{0, 0};

    Matrix4c to_matrix() const {
        Matrix4c m = Matrix4c::Zero();
        m(0, 0) = p11; m(1, 1) = p22; m(2, 2) = p33; m(3, 3) = p44;
        m(0, 3) = c14; m(3, 0) = std::conj(c14);
        m(1, 2) = c23; m(2, 1) = std::conj(c23);
        return m;
    }

    // Largest off-X entry of a general matrix; used to decide whether a
    // density matrix may be squeezed into this form.
    static double x_form_defect(const Matrix4c& m) {
        double worst = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j && i + j != 3) worst = std::max(worst, std::abs(m(i, j)));
        return worst;
    }

    static XState from_matrix(const Matrix4c& m, double tol = 1e-10) {
        if (x_form_defect(m) > tol)
            throw std::invalid_argument("XState::from_matrix: matrix is not in X form");
        XState x;
        x.p11 = m(0, 0).real(); x.p22 = m(1, 1).real();
        x.p33 = m(2, 2).real(); x.p44 = m(3, 3).real();
        x.c14 = m(0, 3);
        x.c23 = m(1, 2);
        return x;
    }
};

// populations >= -1e-10, unit trace to 1e-12, and the two 2x2 X blocks
// positive semidefinite up to the same slack.
inline bool is_valid_x_state(const XState& x, double pop_tol = 1e-10, double trace_tol = 1e-12) {
    if (x.p11 < -pop_tol || x.p22 < -pop_tol || x.p33 < -pop_tol || x.p44 < -pop_tol) return false;
    if (std::abs(x.p11 + x.p22 + x.p33 + x.p44 - 1.0) > trace_tol) return false;
    if (std::norm(x.c14) > x.p11 * x.p44 + pop_tol) return false;
    if (std::norm(x.c23) > x.p22 * x.p33 + pop_tol) return false;
    return true;
}

inline void validate_x_state(const XState& x) {
    if (!is_valid_x_state(x)) throw std::domain_error("invalid X state");
}

inline double hermiticity_defect(const Matrix4c& rho) {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

inline double trace_defect(const Matrix4c& rho) {
    return std::abs(rho.trace() - complexd(1.0, 0.0));
}

inline double min_eigenvalue(const Matrix4c& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es((rho + rho.adjoint()) / 2.0);
    return es.eigenvalues().minCoeff();
}

inline bool is_physical_density(const Matrix4c& rho, double herm_tol = 1e-12,
                                double trace_tol = 1e-12, double eig_tol = 1e-10) {
    return hermiticity_defect(rho) <= herm_tol && trace_defect(rho) <= trace_tol &&
           min_eigenvalue(rho) >= -eig_tol;
}

// Named initial channel preparations plus an arbitrary X state.
enum class NamedInitial { Bell0, Bell1, Bell2, Bell3, ProductEG };

using InitialState = std::variant<NamedInitial, XState>;

inline XState initial_density(const InitialState& s) {
    if (const XState* x = std::get_if<XState>(&s)) return *x;
    XState x;
    switch (std::get<NamedInitial>(s)) {
        case NamedInitial::Bell0: x.p11 = x.p44 = 0.5; x.c14 = 0.5; break;
        case NamedInitial::Bell1: x.p22 = x.p33 = 0.5; x.c23 = 0.5; break;
        case NamedInitial::Bell2: x.p22 = x.p33 = 0.5; x.c23 = -0.5; break;
        case NamedInitial::Bell3: x.p11 = x.p44 = 0.5; x.c14 = -0.5; break;
        case NamedInitial::ProductEG: x.p22 = 1.0; break;
    }
    return x;
}

}  // namespace telatom

#endif  // TELATOM_STATES_HPP
