#pragma once

// Tripod Hamiltonian, master-equation right-hand side and its 16x16 linear
// (superoperator) form.

#include "tripod/types.hpp"

namespace tripod {

/// Interaction-picture Hamiltonian in units of hbar*kHz.
///
/// Diagonal is (-delta_c, -delta_p, -delta_a, 0); each ground state i couples
/// to the excited state with -Omega_i/2. Hermitian by construction.
inline Matrix4c build_hamiltonian(const SystemParams& p)
{
    Matrix4c h = Matrix4c::Zero();
    const auto det = p.detunings();
    const auto rabi = p.rabi();
    for (int i = 0; i < 3; ++i) {
        h(i, i) = -det[i];
        h(i, kExcited) = -0.5 * rabi[i];
        h(kExcited, i) = -0.5 * rabi[i];
    }
    return h;
}

/// Decay rate applied to the off-diagonal element rho_jk (j != k).
///
/// Optical coherences relax at gamma_opt, ground coherences at gamma_ground.
/// Ground-state population exchange adds the dephasing implied by its jump
/// operators: ground_mix on optical coherences, 2*ground_mix on ground ones.
inline double coherence_decay(const DecayModel& d, int j, int k)
{
    if (j == kExcited)
        return d.gamma_opt[k] + d.ground_mix;
    if (k == kExcited)
        return d.gamma_opt[j] + d.ground_mix;
    return d.gamma_ground + 2.0 * d.ground_mix;
}

/// Dissipative part of the generator, applied element by element.
inline Matrix4c decay_rhs(const DecayModel& d, const Matrix4c& rho)
{
    Matrix4c out = Matrix4c::Zero();
    const complex excited = rho(kExcited, kExcited);
    out(kExcited, kExcited) = -d.gamma_pop * excited;
    for (int i = 0; i < 3; ++i) {
        complex pop = d.branching[i] * d.gamma_pop * excited;
        for (int j = 0; j < 3; ++j)
            if (j != i)
                pop += d.ground_mix * (rho(j, j) - rho(i, i));
        out(i, i) = pop;
    }
    for (int j = 0; j < kLevels; ++j)
        for (int k = 0; k < kLevels; ++k)
            if (j != k)
                out(j, k) = -coherence_decay(d, j, k) * rho(j, k);
    return out;
}

/// d(rho)/dt = -i[H, rho] + decay.
inline Matrix4c master_rhs(const SystemParams& p, const Matrix4c& rho)
{
    const Matrix4c h = build_hamiltonian(p);
    const complex i(0.0, 1.0);
    Matrix4c out = -i * (h * rho - rho * h);
    out += decay_rhs(p.decay, rho);
    return out;
}

// Column-major vectorisation, matching Eigen's storage: vec(rho)[j + 4k] = rho(j,k).
inline constexpr int vec_index(int row, int col) { return row + kLevels * col; }

inline Vector16c vectorize(const Matrix4c& m)
{
    return Eigen::Map<const Vector16c>(m.data());
}

inline Matrix4c unvectorize(const Vector16c& v)
{
    return Eigen::Map<const Matrix4c>(v.data());
}

/// Superoperator L with vec(master_rhs(p, rho)) == L * vec(rho).
///
/// Assembled from Kronecker products (vec(A X B) = (B^T (x) A) vec(X)) and the
/// decay bookkeeping rather than by probing master_rhs, so the two routes can
/// be checked against each other.
inline Matrix16c build_superoperator(const SystemParams& p)
{
    const Matrix4c h = build_hamiltonian(p);
    const Matrix4c id = Matrix4c::Identity();
    const complex i(0.0, 1.0);

    Matrix16c l = Matrix16c::Zero();
    for (int a = 0; a < kLevels; ++a) {
        for (int b = 0; b < kLevels; ++b) {
            // -i (I (x) H) + i (H^T (x) I); block (a,b) has size 4x4.
            l.block<4, 4>(4 * a, 4 * b) += -i * id(a, b) * h + i * h(b, a) * id;
        }
    }

    const DecayModel& d = p.decay;
    const int ee = vec_index(kExcited, kExcited);
    l(ee, ee) -= d.gamma_pop;
    for (int g = 0; g < 3; ++g) {
        const int gg = vec_index(g, g);
        l(gg, ee) += d.branching[g] * d.gamma_pop;
        for (int other = 0; other < 3; ++other) {
            if (other == g)
                continue;
            l(gg, vec_index(other, other)) += d.ground_mix;
            l(gg, gg) -= d.ground_mix;
        }
    }
    for (int j = 0; j < kLevels; ++j)
        for (int k = 0; k < kLevels; ++k)
            if (j != k)
                l(vec_index(j, k), vec_index(j, k)) -= coherence_decay(d, j, k);
    return l;
}

// ---------------------------------------------------------------------------
// Density-matrix checks.
// ---------------------------------------------------------------------------

inline double hermiticity_error(const Matrix4c& m)
{
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline double min_eigenvalue(const Matrix4c& rho)
{
    const Matrix4c herm = 0.5 * (rho + rho.adjoint());
    return Eigen::SelfAdjointEigenSolver<Matrix4c>(herm, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

/// Throws PreconditionError unless rho is Hermitian, unit trace and positive
/// semidefinite within the given tolerances.
inline void check_density_matrix(const Matrix4c& rho, double herm_tol = 1e-10, double trace_tol = 1e-9,
                                 double eig_tol = 1e-9)
{
    if (!rho.allFinite())
        throw PreconditionError("density matrix has non-finite entries");
    if (hermiticity_error(rho) > herm_tol)
        throw PreconditionError("density matrix is not Hermitian");
    if (std::abs(rho.trace() - 1.0) > trace_tol)
        throw PreconditionError("density matrix trace differs from 1");
    if (min_eigenvalue(rho) < -eig_tol)
        throw PreconditionError("density matrix has a negative eigenvalue");
}

} // namespace tripod
