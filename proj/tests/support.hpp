#pragma once

// Parameter sets, random generators and independent oracles shared by the
// test binaries. Nothing here calls into the library's generator code.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "tripod/tripod.hpp"

namespace testsupport {

using tripod::complex;
using tripod::Matrix4c;
using tripod::SystemParams;

/// Broad-line map parameters: Gamma_0 = 6, gamma_0 = 30, Omega_p = 1,
/// Omega_c = Omega_A = 10 kHz, ground exchange at Gamma_0/30.
inline SystemParams broad_line_params(double delta = 0.0)
{
    SystemParams p;
    p.omega_c = 10.0;
    p.omega_a = 10.0;
    p.omega_p = 1.0;
    p.delta_c = delta;
    p.delta_a = -delta;
    p.decay.gamma_pop = 6.0;
    p.decay.gamma_opt = {30.0, 30.0, 30.0};
    p.decay.ground_mix = 0.2;
    return p;
}

/// Reference Lambda rates with Omega_c = 10: Omega_p = 0.5, gamma_opt = 2.5,
/// gamma_ground = 1.25, Gamma_0 = 2.5, branching (1/2, 1/2, 0).
inline SystemParams reference_lambda_params(double delta_c = 0.0)
{
    SystemParams p;
    p.omega_c = 10.0;
    p.omega_p = 0.5;
    p.delta_c = delta_c;
    p.decay.gamma_pop = 2.5;
    p.decay.gamma_opt = {2.5, 2.5, 2.5};
    p.decay.gamma_ground = 1.25;
    p.decay.branching = {0.5, 0.5, 0.0};
    return p;
}

inline Matrix4c random_density_matrix(std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix4c a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            a(i, j) = complex(n(rng), n(rng));
    Matrix4c rho = a * a.adjoint();
    return rho / rho.trace();
}

/// Any 4x4 complex matrix, not necessarily a state.
inline Matrix4c random_matrix(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix4c a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            a(i, j) = complex(u(rng), u(rng));
    return a;
}

/// Broad-line rates, Rabi frequencies and detunings each drawn within a
/// factor of 3 of the map values. Ground exchange follows Gamma_0/30.
/// The reference Lambda with the ground coherence left undamped. Ground
/// dephasing pulls the transparency minimum off two-photon resonance, so
/// placement checks use this variant.
inline SystemParams undamped_ground_lambda_params(double delta_c = 0.0)
{
    SystemParams p = reference_lambda_params(delta_c);
    p.decay.gamma_ground = 0.0;
    return p;
}

inline SystemParams random_broad_line_params(std::mt19937_64& rng)
{
    auto within3 = [&](double centre) {
        std::uniform_real_distribution<double> u(std::log(centre / 3.0), std::log(centre * 3.0));
        return std::exp(u(rng));
    };
    std::uniform_real_distribution<double> det(-6.0, 6.0);
    SystemParams p;
    p.omega_c = within3(10.0);
    p.omega_a = within3(10.0);
    p.omega_p = within3(1.0);
    p.delta_c = det(rng);
    p.delta_p = det(rng);
    p.delta_a = det(rng);
    p.decay.gamma_pop = within3(6.0);
    // one optical width for all arms: unequal widths with no ground dephasing
    // are not a valid Lindblad model
    const double g = std::max(within3(30.0), 0.5 * p.decay.gamma_pop);
    p.decay.gamma_opt = {g, g, g};
    p.decay.ground_mix = p.decay.gamma_pop / 30.0;
    return p;
}

/// Master-equation RHS from explicit jump operators:
///   sqrt(beta_i Gamma_0) |i><4|, sqrt(mix) |i><j| for ground i != j,
/// plus pure dephasing that tops optical coherences up to gamma_opt and
/// ground coherences up to gamma_ground.
inline Matrix4c lindblad_oracle(const SystemParams& p, const Matrix4c& rho)
{
    Matrix4c h = Matrix4c::Zero();
    h(0, 0) = -p.delta_c;
    h(1, 1) = -p.delta_p;
    h(2, 2) = -p.delta_a;
    const double om[3] = {p.omega_c, p.omega_p, p.omega_a};
    for (int i = 0; i < 3; ++i)
        h(i, 3) = h(3, i) = -om[i] / 2.0;
    const complex I(0.0, 1.0);
    Matrix4c out = -I * (h * rho - rho * h);

    std::vector<Matrix4c> jumps;
    auto ket_bra = [](int a, int b, double amp) {
        Matrix4c m = Matrix4c::Zero();
        m(a, b) = amp;
        return m;
    };
    for (int i = 0; i < 3; ++i)
        jumps.push_back(ket_bra(i, 3, std::sqrt(p.decay.branching[i] * p.decay.gamma_pop)));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j)
                jumps.push_back(ket_bra(i, j, std::sqrt(p.decay.ground_mix)));
    for (const auto& l : jumps) {
        const Matrix4c ll = l.adjoint() * l;
        out += l * rho * l.adjoint() - 0.5 * (ll * rho + rho * ll);
    }
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
            if (j == k)
                continue;
            double extra = 0.0;
            if (j == 3 || k == 3)
                extra = p.decay.gamma_opt[j == 3 ? k : j] - 0.5 * p.decay.gamma_pop;
            else
                extra = p.decay.gamma_ground;
            out(j, k) -= extra * rho(j, k);
        }
    return out;
}

/// Long-time limit by fixed-step RK4 on the oracle RHS, from the equal
/// ground-state mixture.
inline Matrix4c integrate_oracle(const SystemParams& p, double t_end)
{
    double m = std::max({p.decay.gamma_pop, p.decay.gamma_ground, p.decay.ground_mix});
    for (double v : {p.omega_c, p.omega_p, p.omega_a, std::abs(p.delta_c), std::abs(p.delta_p),
                     std::abs(p.delta_a), p.decay.gamma_opt[0], p.decay.gamma_opt[1], p.decay.gamma_opt[2]})
        m = std::max(m, v);
    const double dt = 0.2 / m;
    const int steps = static_cast<int>(std::ceil(t_end / dt));
    const double h = t_end / steps;
    Matrix4c rho = Matrix4c::Zero();
    for (int i = 0; i < 3; ++i)
        rho(i, i) = 1.0 / 3.0;
    for (int s = 0; s < steps; ++s) {
        const Matrix4c k1 = lindblad_oracle(p, rho);
        const Matrix4c k2 = lindblad_oracle(p, rho + 0.5 * h * k1);
        const Matrix4c k3 = lindblad_oracle(p, rho + 0.5 * h * k2);
        const Matrix4c k4 = lindblad_oracle(p, rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

/// Im <4|rho|2>, the probe absorption, straight from the matrix.
inline double absorption(const Matrix4c& rho)
{
    return rho(3, 1).imag();
}

inline double max_abs_diff(const Matrix4c& a, const Matrix4c& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace testsupport
