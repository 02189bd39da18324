#pragma once

#include <sstream>
#include <vector>

#include "tripod/master_equation.hpp"

namespace tripod {

/// A ground state is isolated when nothing can move population into or out of
/// it: no field, no branching from |4>, no ground-state exchange. Its
/// population is then a conserved quantity and the stationary state is not
/// unique unless the level is left out.
inline bool is_isolated_ground(const SystemParams& p, int level)
{
    return p.rabi()[level] == 0.0 && p.decay.branching[level] == 0.0 && p.decay.ground_mix == 0.0;
}

struct SteadyStateResult
{
    Matrix4c rho;
    double residual = 0.0;          ///< max |master_rhs(rho)|
    std::vector<int> excluded_levels; ///< isolated ground states held at zero population
};

/// Stationary state of the master equation with full diagnostics.
///
/// Solves L vec(rho) = 0 with the first population equation replaced by the
/// trace condition. Isolated ground states (see is_isolated_ground) are
/// removed before the solve; their rows and columns of rho are zero. Throws
/// SingularSystem when the remaining stationary space is degenerate.
inline SteadyStateResult steady_state_detailed(const SystemParams& p)
{
    validate(p);
    for (double g : p.decay.gamma_opt)
        if (!(g > 0.0))
            throw PreconditionError("steady_state requires gamma_opt > 0 on every optical coherence");

    std::vector<int> active;
    std::vector<int> excluded;
    for (int lvl = 0; lvl < kLevels; ++lvl) {
        if (lvl != kExcited && is_isolated_ground(p, lvl))
            excluded.push_back(lvl);
        else
            active.push_back(lvl);
    }

    const Matrix16c full = build_superoperator(p);
    const int n = static_cast<int>(active.size());
    const int dim = n * n;
    std::vector<int> map;   // reduced index -> full vec index
    map.reserve(dim);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            map.push_back(vec_index(active[j], active[k]));

    Eigen::MatrixXcd a(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            a(r, c) = full(map[r], map[c]);

    // Row 0 is the population equation of the first active level; replace it
    // with Tr(rho) = 1.
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);
    a.row(0).setZero();
    for (int j = 0; j < n; ++j)
        a(0, j + n * j) = 1.0;
    rhs(0) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
    lu.setThreshold(1e-11);
    if (!lu.isInvertible()) {
        std::ostringstream msg;
        msg << "stationary state is not unique (null space of the generator has dimension > 1)";
        if (p.decay.ground_mix == 0.0)
            msg << "; set a small decay.ground_mix or exclude the decoupled ground state";
        throw SingularSystem(msg.str());
    }
    Eigen::VectorXcd x = lu.solve(rhs);
    // One step of iterative refinement.
    x += lu.solve(rhs - a * x);

    Matrix4c rho = Matrix4c::Zero();
    for (int r = 0; r < dim; ++r) {
        const int full_idx = map[r];
        rho(full_idx % kLevels, full_idx / kLevels) = x(r);
    }
    rho = 0.5 * (rho + rho.adjoint()).eval();

    SteadyStateResult out;
    out.rho = rho;
    out.residual = master_rhs(p, rho).cwiseAbs().maxCoeff();
    out.excluded_levels = std::move(excluded);
    if (!(out.residual < 1e-9))
        throw SingularSystem("steady-state solve is ill-conditioned (residual " + std::to_string(out.residual) + ")");
    return out;
}

inline Matrix4c steady_state(const SystemParams& p)
{
    return steady_state_detailed(p).rho;
}

} // namespace tripod
