#pragma once

#include <cmath>
#include <vector>

#include "tripod/master_equation.hpp"

namespace tripod {

struct TrajectorySample
{
    double time = 0.0; ///< ms
    Matrix4c rho;
};

using Trajectory = std::vector<TrajectorySample>;

/// Largest step accepted by time_evolve for these parameters.
inline double max_stable_step(const SystemParams& p)
{
    const double m = max_rate(p);
    return m > 0.0 ? 0.1 / m : std::numeric_limits<double>::infinity();
}

/// Fixed-step classical RK4 integration of master_rhs from rho0 to t_end.
///
/// Every `stride`-th step is recorded, plus the initial and final states. The
/// last step is shortened so the final sample lands exactly on t_end.
inline Trajectory time_evolve(const SystemParams& p, const Matrix4c& rho0, double t_end, double dt,
                              std::size_t stride = 1)
{
    validate(p);
    check_density_matrix(rho0);
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
        throw PreconditionError("t_end must be finite and >= 0");
    if (!(dt > 0.0))
        throw PreconditionError("dt must be > 0");
    if (stride == 0)
        throw PreconditionError("stride must be >= 1");
    const double limit = max_stable_step(p);
    if (dt > limit * (1.0 + 1e-12))
        throw StepTooLarge("dt = " + std::to_string(dt) + " exceeds 0.1/max(rate) = " + std::to_string(limit));

    const Matrix4c h = build_hamiltonian(p);
    const complex i(0.0, 1.0);
    auto rhs = [&](const Matrix4c& r) -> Matrix4c {
        Matrix4c out = -i * (h * r - r * h);
        out += decay_rhs(p.decay, r);
        return out;
    };

    Trajectory traj;
    traj.push_back({0.0, rho0});
    if (t_end == 0.0)
        return traj;

    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    Matrix4c rho = rho0;
    for (std::size_t s = 1; s <= steps; ++s) {
        const double t0 = static_cast<double>(s - 1) * dt;
        const double t1 = (s == steps) ? t_end : static_cast<double>(s) * dt;
        const double h_step = t1 - t0;
        const Matrix4c k1 = rhs(rho);
        const Matrix4c k2 = rhs(rho + 0.5 * h_step * k1);
        const Matrix4c k3 = rhs(rho + 0.5 * h_step * k2);
        const Matrix4c k4 = rhs(rho + h_step * k3);
        rho += (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (s % stride == 0 || s == steps)
            traj.push_back({t1, rho});
    }
    return traj;
}

} // namespace tripod
