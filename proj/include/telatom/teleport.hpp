#ifndef TELATOM_TELEPORT_HPP
#define TELATOM_TELEPORT_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "telatom/states.hpp"

// Standard one-qubit teleportation through a two-qubit channel state:
// Bell measurement on (input, atom 1), Pauli recovery on atom 2. The
// closed-form fidelity path works on the four Bell overlaps chi_n; the
// brute-force path averages the protocol over the Bloch sphere by
// quadrature and accepts arbitrary (not necessarily X-form) channels.

namespace telatom {

// Pure input qubit |phi_in> = cos(theta/2)|e> + e^{i phi} sin(theta/2)|g>.
struct BlochState {
    double theta = 0.0;  // [0, pi]
    double phi = 0.0;    // [0, 2 pi)

    void validate() const {
        if (!(theta >= 0.0 && theta <= std::numbers::pi))
            throw std::domain_error("BlochState: theta outside [0, pi]");
        if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi))
            throw std::domain_error("BlochState: phi outside [0, 2 pi)");
    }

    Vector2c ket() const {
        Vector2c v;
        v(0) = std::cos(0.5 * theta);
        v(1) = std::polar(std::sin(0.5 * theta), phi);
        return v;
    }
};

// Bell-basis diagonal of the channel state.
struct ChiVector {
    std::array<double, 4> chi{};
    double operator[](int n) const { return chi[n]; }
};

// Pauli label Bob applies for each of Alice's four measurement outcomes.
struct RecoveryStrategy {
    std::array<int, 4> m{0, 0, 0, 0};
};

struct TeleportOutcome {
    Matrix2c out_state = Matrix2c::Zero();
    double probability = 0.0;
    bool reachable = true;  // false when the outcome probability underflows
};

// chi_{0,3} = (rho11 + rho44 +- rho14 +- rho41)/2,
// chi_{1,2} = (rho22 + rho33 +- rho23 +- rho32)/2; equals <Psi^n|rho|Psi^n>.
inline ChiVector chi_vector(const XState& x) {
    ChiVector v;
    const double outer = 0.5 * (x.p11 + x.p44);
    const double inner = 0.5 * (x.p22 + x.p33);
    v.chi[0] = outer + x.c14.real();
    v.chi[3] = outer - x.c14.real();
    v.chi[1] = inner + x.c23.real();
    v.chi[2] = inner - x.c23.real();
    return v;
}

// chi_k^{(m)} = chi_{recovery_index(k, m)}: measurement outcome k followed
// by recovery sigma^m picks out this Bell overlap.
inline int recovery_index(int k, int m) {
    static constexpr int table[4][4] = {
        {0, 1, 2, 3},
        {1, 0, 3, 2},
        {2, 3, 0, 1},
        {3, 2, 1, 0},
    };
    if (k < 0 || k > 3 || m < 0 || m > 3)
        throw std::out_of_range("recovery_index: labels must be in 0..3");
    return table[k][m];
}

// <f> = (1/6) sum_k chi_{k}^{(m_k)} + 1/3
inline double average_fidelity(const XState& rho, const RecoveryStrategy& s) {
    const ChiVector v = chi_vector(rho);
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) acc += v[recovery_index(k, s.m[k])];
    return acc / 6.0 + 1.0 / 3.0;
}

inline double fully_entangled_fraction(const XState& rho) {
    const ChiVector v = chi_vector(rho);
    return std::max({v[0], v[1], v[2], v[3]});
}

struct MaxFidelityResult {
    double fidelity = 0.0;
    RecoveryStrategy strategy;
};

// F = (2 max_n chi_n + 1)/3. For each outcome k the strategy takes the
// smallest Pauli label reaching the maximal overlap (the attained value is
// the same for every k).
inline MaxFidelityResult max_average_fidelity(const XState& rho) {
    const ChiVector v = chi_vector(rho);
    const double best = std::max({v[0], v[1], v[2], v[3]});
    MaxFidelityResult res;
    res.fidelity = (2.0 * best + 1.0) / 3.0;
    for (int k = 0; k < 4; ++k) {
        for (int m = 0; m < 4; ++m) {
            if (v[recovery_index(k, m)] == best) {
                res.strategy.m[k] = m;
                break;
            }
        }
    }
    return res;
}

namespace detail {

using Matrix8c = Eigen::Matrix<complexd, 8, 8>;

// Unnormalized post-measurement state of atom 2:
// tr_{A,1} [ (|Psi^k><Psi^k| x 1) (rho_in x rho_chan) ]; its trace is P_k.
inline Matrix2c unnormalized_outcome(const Matrix4c& rho_chan, const BlochState& input, int k) {
    const Vector2c in = input.ket();
    const Matrix2c rho_in = in * in.adjoint();
    Matrix8c tot;  // qubit order (A, 1, 2)
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            tot.block<4, 4>(4 * i, 4 * j) = rho_in(i, j) * rho_chan;

    const Vector4c psi = bell_ket(k);  // acts on (A, 1)
    Matrix2c out = Matrix2c::Zero();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            complexd s(0, 0);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    s += std::conj(psi(a)) * tot(2 * a + i, 2 * b + j) * psi(b);
            out(i, j) = s;
        }
    }
    return out;
}

// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1]
// (Newton iteration on the Legendre recurrence).
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

}  // namespace detail

// Full protocol for one (measurement outcome, recovery) pair.
inline TeleportOutcome teleport_channel(const Matrix4c& rho_chan, const BlochState& input,
                                        int k, int m) {
    if (k < 0 || k > 3) throw std::out_of_range("teleport_channel: outcome label in 0..3");
    const Matrix2c sigma = pauli(m);
    const Matrix2c u = detail::unnormalized_outcome(rho_chan, input, k);
    TeleportOutcome res;
    res.probability = u.trace().real();
    if (res.probability < 1e-14) {
        res.reachable = false;
        return res;
    }
    res.out_state = sigma * u * sigma / res.probability;
    return res;
}

// f_k^{(m)} = (1/4 pi) Int <phi_in| sigma^m U_k(theta, phi) sigma^m |phi_in> dOmega
// for every (k, m); Gauss-Legendre in cos(theta), uniform grid in phi. The
// integrand is a low-degree trigonometric polynomial, so modest orders are
// exact to roundoff.
inline std::array<std::array<double, 4>, 4> oracle_fidelity_table(const Matrix4c& rho_chan,
                                                                  int quadrature_order = 16) {
    if (quadrature_order < 4)
        throw std::invalid_argument("oracle_fidelity_table: quadrature order must be >= 4");
    std::vector<double> nodes, weights;
    detail::gauss_legendre(quadrature_order, nodes, weights);
    const int n_phi = 2 * quadrature_order;

    std::array<Matrix2c, 4> sigmas;
    for (int m = 0; m < 4; ++m) sigmas[m] = pauli(m);

    std::array<std::array<double, 4>, 4> table{};
    for (int iu = 0; iu < quadrature_order; ++iu) {
        const double theta = std::acos(nodes[iu]);
        for (int ip = 0; ip < n_phi; ++ip) {
            const BlochState in{theta, 2.0 * std::numbers::pi * ip / n_phi};
            const Vector2c ket = in.ket();
            const double w = 0.5 * weights[iu] / n_phi;
            for (int k = 0; k < 4; ++k) {
                const Matrix2c u = detail::unnormalized_outcome(rho_chan, in, k);
                for (int m = 0; m < 4; ++m) {
                    const Matrix2c rec = sigmas[m] * u * sigmas[m];
                    table[k][m] += w * (ket.adjoint() * rec * ket)(0).real();
                }
            }
        }
    }
    return table;
}

// Bloch-sphere average of the protocol for one strategy.
inline double average_fidelity_oracle(const Matrix4c& rho_chan, const RecoveryStrategy& s,
                                      int quadrature_order = 16) {
    const auto table = oracle_fidelity_table(rho_chan, quadrature_order);
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) acc += table[k][s.m[k]];
    return acc;
}

}  // namespace telatom

#endif  // TELATOM_TELEPORT_HPP
