#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tripod {

using complex = std::complex<double>;
using Matrix4c = Eigen::Matrix<complex, 4, 4>;
using Vector4c = Eigen::Matrix<complex, 4, 1>;
using Matrix16c = Eigen::Matrix<complex, 16, 16>;
using Vector16c = Eigen::Matrix<complex, 16, 1>;

// Basis order is |1>, |2>, |3>, |4>; index 3 is the excited state.
inline constexpr int kExcited = 3;
inline constexpr int kLevels = 4;

// ---------------------------------------------------------------------------
// Errors. Every error carries a stable name and a process exit code so the
// CLI can map failures without string matching.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error
{
public:
    Error(std::string name, int exit_code, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)), exit_code_(exit_code)
    {
    }

    const std::string& name() const noexcept { return name_; }
    int exit_code() const noexcept { return exit_code_; }

private:
    std::string name_;
    int exit_code_;
};

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kUsage = 2;
inline constexpr int kInvalidParams = 3;
inline constexpr int kSingularSystem = 4;
inline constexpr int kStepTooLarge = 5;
inline constexpr int kDegenerateFields = 6;
inline constexpr int kNoFeatures = 7;
inline constexpr int kUnknownPreset = 8;
inline constexpr int kConfig = 9;
inline constexpr int kIo = 10;
inline constexpr int kPrecondition = 11;
} // namespace exit_code

struct InvalidParams : Error
{
    explicit InvalidParams(const std::string& w) : Error("InvalidParams", exit_code::kInvalidParams, w) {}
};

struct PreconditionError : Error
{
    explicit PreconditionError(const std::string& w) : Error("PreconditionError", exit_code::kPrecondition, w) {}
};

struct SingularSystem : Error
{
    explicit SingularSystem(const std::string& w, std::optional<double> delta_p = std::nullopt)
        : Error("SingularSystem", exit_code::kSingularSystem, w), at_delta_p(delta_p)
    {
    }
    std::optional<double> at_delta_p;
};

struct StepTooLarge : Error
{
    explicit StepTooLarge(const std::string& w) : Error("StepTooLarge", exit_code::kStepTooLarge, w) {}
};

struct DegenerateFields : Error
{
    explicit DegenerateFields(const std::string& w) : Error("DegenerateFields", exit_code::kDegenerateFields, w) {}
};

struct NoFeatures : Error
{
    explicit NoFeatures(const std::string& w) : Error("NoFeatures", exit_code::kNoFeatures, w) {}
};

struct UnknownPreset : Error
{
    explicit UnknownPreset(const std::string& w) : Error("UnknownPreset", exit_code::kUnknownPreset, w) {}
};

struct IoError : Error
{
    explicit IoError(const std::string& w) : Error("IoError", exit_code::kIo, w) {}
};

// ---------------------------------------------------------------------------
// Physical configuration. All frequencies and rates are angular quantities in
// kHz; times are in ms (1/kHz). No factors of 2*pi appear anywhere.
// ---------------------------------------------------------------------------

struct DecayModel
{
    double gamma_pop = 0.0;                         ///< excited-state population decay Gamma_0
    std::array<double, 3> branching{1.0 / 3, 1.0 / 3, 1.0 / 3}; ///< |4> -> |1>,|2>,|3>
    std::array<double, 3> gamma_opt{0.0, 0.0, 0.0}; ///< decay of rho_14, rho_24, rho_34
    double gamma_ground = 0.0;                      ///< decay of rho_12, rho_13, rho_23
    double ground_mix = 0.0;                        ///< population exchange between ground states

    static std::array<double, 3> uniform(double g) { return {g, g, g}; }
};

struct SystemParams
{
    double omega_c = 0.0; ///< coupling Rabi frequency, |1> <-> |4>
    double omega_p = 0.0; ///< probe Rabi frequency, |2> <-> |4>
    double omega_a = 0.0; ///< control Rabi frequency, |3> <-> |4>
    double delta_c = 0.0;
    double delta_p = 0.0;
    double delta_a = 0.0;
    DecayModel decay;

    std::array<double, 3> rabi() const { return {omega_c, omega_p, omega_a}; }
    std::array<double, 3> detunings() const { return {delta_c, delta_p, delta_a}; }
};

/// Pure-dephasing rates left over once the Lindblad lifetime contributions are
/// subtracted. Entry (j,k) is the extra decay of rho_jk; the diagonal is zero.
inline Eigen::Matrix4d pure_dephasing_rates(const DecayModel& d)
{
    Eigen::Matrix4d r = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 3; ++i) {
        r(i, kExcited) = r(kExcited, i) = d.gamma_opt[i] - 0.5 * d.gamma_pop;
        for (int j = 0; j < 3; ++j)
            if (i != j)
                r(i, j) = d.gamma_ground;
    }
    return r;
}

/// Smallest eigenvalue of -D restricted to vectors with zero sum. The decay
/// model generates a completely positive semigroup iff this is >= 0.
inline double dephasing_positivity_margin(const DecayModel& d)
{
    const Eigen::Matrix4d dr = pure_dephasing_rates(d);
    // Orthonormal basis of the zero-sum subspace: trailing columns of Q in a
    // QR factorisation of (1,1,1,1).
    const Eigen::Vector4d ones = Eigen::Vector4d::Ones();
    const Eigen::HouseholderQR<Eigen::Vector4d> qr(ones);
    const Eigen::Matrix4d q = qr.householderQ();
    const Eigen::Matrix<double, 4, 3> basis = q.rightCols<3>();
    const Eigen::Matrix3d reduced = basis.transpose() * (-dr) * basis;
    return Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(reduced).eigenvalues().minCoeff();
}

inline void validate(const DecayModel& d)
{
    auto finite_nonneg = [](double v, const char* what) {
        if (!std::isfinite(v) || v < 0.0)
            throw InvalidParams(std::string(what) + " must be finite and >= 0");
    };
    finite_nonneg(d.gamma_pop, "decay.gamma_pop");
    finite_nonneg(d.gamma_ground, "decay.gamma_ground");
    finite_nonneg(d.ground_mix, "decay.ground_mix");
    double sum = 0.0;
    for (double b : d.branching) {
        finite_nonneg(b, "decay.branching");
        sum += b;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw InvalidParams("branching ratios must sum to 1 (got " + std::to_string(sum) + ")");
    for (double g : d.gamma_opt) {
        finite_nonneg(g, "decay.gamma_opt");
        if (g < 0.5 * d.gamma_pop - 1e-12)
            throw InvalidParams("optical coherence decay must be >= gamma_pop/2");
    }
    if (dephasing_positivity_margin(d) < -1e-12 * (1.0 + d.gamma_ground + d.gamma_pop))
        throw InvalidParams("decay rates do not define a completely positive dephasing "
                            "(need gamma_opt - gamma_pop/2 large enough relative to gamma_ground)");
}

inline void validate(const SystemParams& p)
{
    for (double o : p.rabi())
        if (!std::isfinite(o) || o < 0.0)
            throw InvalidParams("Rabi frequencies must be finite and >= 0");
    for (double d : p.detunings())
        if (!std::isfinite(d))
            throw InvalidParams("detunings must be finite");
    validate(p.decay);
}

/// Largest frequency scale in the problem; used for step-size limits.
inline double max_rate(const SystemParams& p)
{
    double m = std::max({p.decay.gamma_pop, p.decay.gamma_ground, p.decay.ground_mix});
    for (double g : p.decay.gamma_opt)
        m = std::max(m, g);
    for (double o : p.rabi())
        m = std::max(m, o);
    for (double d : p.detunings())
        m = std::max(m, std::abs(d));
    return m;
}

} // namespace tripod
