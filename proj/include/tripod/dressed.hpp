#pragma once

// Dressed-state picture of the tripod: the analytic dark and bright
// superpositions, the exact eigensystem of the Hamiltonian, and the
// asymptotic splitting formula for symmetric detuning.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "tripod/master_equation.hpp"

namespace tripod {

enum class DressedLabel { D1, D2, BrightPlus, BrightMinus };

inline std::string to_string(DressedLabel l)
{
    switch (l) {
    case DressedLabel::D1: return "d1";
    case DressedLabel::D2: return "d2";
    case DressedLabel::BrightPlus: return "b+";
    case DressedLabel::BrightMinus: return "b-";
    }
    return "?";
}

struct DressedState
{
    DressedLabel label;
    Vector4c amplitudes;              ///< over |1>..|4>, unit norm
    std::optional<double> eigenvalue; ///< of H at zero detuning, hbar*kHz
};

struct EigenSystem
{
    Eigen::Vector4d values;  ///< ascending
    Matrix4c vectors;        ///< column k belongs to values(k)
};

inline double generalized_rabi(double omega_c, double omega_p, double omega_a)
{
    return std::sqrt(omega_c * omega_c + omega_a * omega_a + omega_p * omega_p);
}

/// Degenerate dark states at zero detuning:
///   d1 ~ Omega_A|1> - Omega_c|3>,
///   d2 ~ Omega_p Omega_c|1> + Omega_p Omega_A|3> - (Omega_c^2 + Omega_A^2)|2>.
inline std::pair<DressedState, DressedState> dark_states(double omega_c, double omega_p, double omega_a)
{
    if (omega_c == 0.0 && omega_a == 0.0)
        throw DegenerateFields("dark states need Omega_c or Omega_A to be nonzero");
    Vector4c d1(omega_a, 0.0, -omega_c, 0.0);
    Vector4c d2(omega_p * omega_c, -(omega_c * omega_c + omega_a * omega_a), omega_p * omega_a, 0.0);
    d1.normalize();
    d2.normalize();
    return {DressedState{DressedLabel::D1, d1, 0.0}, DressedState{DressedLabel::D2, d2, 0.0}};
}

/// Bright superpositions (Omega_c|1> + Omega_p|2> + Omega_A|3> +- Omega|4>),
/// normalised to unit length. At zero detuning H b+- = -+(Omega/2) b+-.
inline std::pair<DressedState, DressedState> bright_states(double omega_c, double omega_p, double omega_a)
{
    const double omega = generalized_rabi(omega_c, omega_p, omega_a);
    if (!(omega > 0.0))
        throw DegenerateFields("bright states need a nonzero generalized Rabi frequency");
    const double norm = std::sqrt(2.0) * omega;
    Vector4c plus(omega_c, omega_p, omega_a, omega);
    Vector4c minus(omega_c, omega_p, omega_a, -omega);
    plus /= norm;
    minus /= norm;
    return {DressedState{DressedLabel::BrightPlus, plus, -0.5 * omega},
            DressedState{DressedLabel::BrightMinus, minus, 0.5 * omega}};
}

/// Fix the global phase so the largest-magnitude component is real positive.
inline Vector4c canonical_phase(const Vector4c& v)
{
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(v(i)) > std::abs(v(best)) + 1e-12)
            best = i;
    const complex c = v(best);
    if (std::abs(c) == 0.0)
        return v;
    return v * (std::abs(c) / c);
}

inline EigenSystem eigensystem(const SystemParams& p)
{
    validate(p);
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(build_hamiltonian(p));
    EigenSystem out;
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    for (int k = 0; k < 4; ++k)
        out.vectors.col(k) = canonical_phase(out.vectors.col(k));
    return out;
}

/// Asymptotic bright-level positions for symmetric detuning delta_c = -delta_A = delta:
///   e+- = +-(Omega/sqrt2) * sqrt(1 + 2 (delta/Omega)^2).
inline std::pair<double, double> asymptotic_splitting(double omega, double delta)
{
    if (!(omega > 0.0))
        throw PreconditionError("splitting formula needs omega > 0");
    const double r = delta / omega;
    const double e = omega / std::sqrt(2.0) * std::sqrt(1.0 + 2.0 * r * r);
    return {e, -e};
}

/// Side-by-side comparison of the asymptotic formula with the exact spectrum.
/// Neither number is adjusted to agree with the other.
struct SplittingComparison
{
    double omega = 0.0;
    double delta = 0.0;
    double formula_plus = 0.0;
    double formula_minus = 0.0;
    Eigen::Vector4d exact;            ///< ascending eigenvalues of H
    double exact_outer_plus = 0.0;    ///< largest exact eigenvalue
    double exact_outer_minus = 0.0;   ///< smallest exact eigenvalue
    double ratio = 0.0;               ///< formula_plus / exact_outer_plus
};

/// Compares the asymptotic formula with the exact eigenvalues of H for the
/// given Rabi frequencies at delta_c = delta, delta_A = -delta, delta_p = 0.
inline SplittingComparison compare_splitting(double omega_c, double omega_p, double omega_a, double delta)
{
    SystemParams p;
    p.omega_c = omega_c;
    p.omega_p = omega_p;
    p.omega_a = omega_a;
    p.delta_c = delta;
    p.delta_a = -delta;
    SplittingComparison c;
    c.omega = generalized_rabi(omega_c, omega_p, omega_a);
    c.delta = delta;
    std::tie(c.formula_plus, c.formula_minus) = asymptotic_splitting(c.omega, delta);
    c.exact = eigensystem(p).values;
    c.exact_outer_plus = c.exact(3);
    c.exact_outer_minus = c.exact(0);
    c.ratio = c.formula_plus / c.exact_outer_plus;
    return c;
}

} // namespace tripod
