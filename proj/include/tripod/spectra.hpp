#pragma once

// Steady-state sweep engines and the observables derived from them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tripod/parallel.hpp"
#include "tripod/steady_state.hpp"

namespace tripod {

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

/// Observable rho_ij is the expectation of |i><j|, i.e. the matrix element
/// <j|rho|i>. With this reading probe absorption Im rho_24 is positive.
inline complex coherence(const Matrix4c& rho, int i, int j)
{
    return rho(j - 1, i - 1);
}

struct Column
{
    std::string name;
    std::vector<double> values;
};

inline const std::vector<std::string>& standard_columns()
{
    static const std::vector<std::string> names{"im_rho24", "re_rho24", "re_rho12", "re_rho13", "re_rho23", "rho44"};
    return names;
}

struct SpectrumSeries
{
    std::string axis_name = "delta_p_khz";
    std::vector<double> axis;
    std::vector<Column> columns;
    double max_residual = 0.0; ///< worst steady-state residual over the sweep

    const std::vector<double>& column(const std::string& name) const
    {
        for (const auto& c : columns)
            if (c.name == name)
                return c.values;
        throw PreconditionError("series has no column '" + name + "'");
    }
    std::vector<double>& column(const std::string& name)
    {
        return const_cast<std::vector<double>&>(static_cast<const SpectrumSeries&>(*this).column(name));
    }
    bool has_column(const std::string& name) const
    {
        return std::any_of(columns.begin(), columns.end(), [&](const Column& c) { return c.name == name; });
    }
    std::size_t size() const { return axis.size(); }
};

inline SpectrumSeries make_series(std::vector<double> axis)
{
    SpectrumSeries s;
    s.axis = std::move(axis);
    for (const auto& n : standard_columns())
        s.columns.push_back({n, std::vector<double>(s.axis.size(), 0.0)});
    return s;
}

inline void record_observables(SpectrumSeries& s, std::size_t i, const Matrix4c& rho)
{
    s.columns[0].values[i] = coherence(rho, 2, 4).imag();
    s.columns[1].values[i] = coherence(rho, 2, 4).real();
    s.columns[2].values[i] = coherence(rho, 1, 2).real();
    s.columns[3].values[i] = coherence(rho, 1, 3).real();
    s.columns[4].values[i] = coherence(rho, 2, 3).real();
    s.columns[5].values[i] = rho(kExcited, kExcited).real();
}

inline void check_axis(const std::vector<double>& axis, const char* what)
{
    if (axis.empty())
        throw PreconditionError(std::string(what) + " axis is empty");
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (!std::isfinite(axis[i]))
            throw PreconditionError(std::string(what) + " axis has a non-finite value");
        if (i > 0 && !(axis[i] > axis[i - 1]))
            throw PreconditionError(std::string(what) + " axis must be strictly increasing");
    }
}

/// n evenly spaced points over [lo, hi]; both endpoints included.
inline std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

/// 401 points over [-3 Omega_c, +3 Omega_c].
inline std::vector<double> default_probe_axis(double omega_c)
{
    return linspace(-3.0 * omega_c, 3.0 * omega_c, 401);
}

struct SweepOptions
{
    unsigned threads = sweep_threads();
};

inline SingularSystem with_delta_p(const SingularSystem& e, double dp)
{
    return SingularSystem(std::string(e.what()).substr(e.name().size() + 2) + " (at delta_p = " +
                              std::to_string(dp) + " kHz)",
                          dp);
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Steady-state observables at each probe detuning on the axis.
inline SpectrumSeries probe_sweep(const SystemParams& params, const std::vector<double>& dp_axis,
                                  const SweepOptions& opt = {})
{
    check_axis(dp_axis, "probe detuning");
    validate(params);
    SpectrumSeries s = make_series(dp_axis);
    std::vector<double> residuals(dp_axis.size(), 0.0);
    parallel_for(
        dp_axis.size(),
        [&](std::size_t i) {
            SystemParams p = params;
            p.delta_p = dp_axis[i];
            try {
                const auto ss = steady_state_detailed(p);
                record_observables(s, i, ss.rho);
                residuals[i] = ss.residual;
            } catch (const SingularSystem& e) {
                throw with_delta_p(e, dp_axis[i]);
            }
        },
        opt.threads);
    s.max_residual = *std::max_element(residuals.begin(), residuals.end());
    return s;
}

struct Map2D
{
    std::vector<double> d_axis;  ///< rows: delta_c = delta, delta_A = -delta
    std::vector<double> dp_axis; ///< columns
    std::vector<double> im_rho24; ///< row-major, d_axis.size() x dp_axis.size()
    double max_residual = 0.0;

    double at(std::size_t row, std::size_t col) const { return im_rho24[row * dp_axis.size() + col]; }
};

/// Probe absorption over (delta, delta_p) with delta_c = delta, delta_A = -delta.
inline Map2D detuning_map(const SystemParams& params, const std::vector<double>& dp_axis,
                          const std::vector<double>& d_axis, const SweepOptions& opt = {})
{
    check_axis(dp_axis, "probe detuning");
    check_axis(d_axis, "symmetric detuning");
    validate(params);
    Map2D m{d_axis, dp_axis, std::vector<double>(d_axis.size() * dp_axis.size())};
    std::vector<double> residuals(m.im_rho24.size(), 0.0);
    const std::size_t cols = dp_axis.size();
    parallel_for(
        m.im_rho24.size(),
        [&](std::size_t k) {
            SystemParams p = params;
            p.delta_c = d_axis[k / cols];
            p.delta_a = -d_axis[k / cols];
            p.delta_p = dp_axis[k % cols];
            try {
                const auto ss = steady_state_detailed(p);
                m.im_rho24[k] = coherence(ss.rho, 2, 4).imag();
                residuals[k] = ss.residual;
            } catch (const SingularSystem& e) {
                throw with_delta_p(e, p.delta_p);
            }
        },
        opt.threads);
    m.max_residual = *std::max_element(residuals.begin(), residuals.end());
    return m;
}

/// probe_sweep plus the derived column re_rho12_plus_re_rho13.
inline SpectrumSeries coherence_traces(const SystemParams& params, const std::vector<double>& dp_axis,
                                       const SweepOptions& opt = {})
{
    SpectrumSeries s = probe_sweep(params, dp_axis, opt);
    const auto& r12 = s.column("re_rho12");
    const auto& r13 = s.column("re_rho13");
    std::vector<double> sum(s.size());
    for (std::size_t i = 0; i < sum.size(); ++i)
        sum[i] = r12[i] + r13[i];
    s.columns.push_back({"re_rho12_plus_re_rho13", std::move(sum)});
    return s;
}

/// Adds im_rho24_norm: absorption divided by the weak-field two-level peak
/// Omega_p / (2 gamma_24) of the bare probe transition.
inline void add_normalized_column(SpectrumSeries& s, const SystemParams& p)
{
    const double peak = p.omega_p / (2.0 * p.decay.gamma_opt[1]);
    if (!(peak > 0.0))
        throw PreconditionError("normalisation needs Omega_p > 0 and gamma_24 > 0");
    std::vector<double> v = s.column("im_rho24");
    for (double& x : v)
        x /= peak;
    s.columns.push_back({"im_rho24_norm", std::move(v)});
}

// ---------------------------------------------------------------------------
// Reference systems
// ---------------------------------------------------------------------------

/// Swap the roles of |1> and |3>: coupling <-> control field, including their
/// detunings, branching ratios and optical decay rates.
inline SystemParams swap_coupling_and_control(SystemParams p)
{
    std::swap(p.omega_c, p.omega_a);
    std::swap(p.delta_c, p.delta_a);
    std::swap(p.decay.branching[0], p.decay.branching[2]);
    std::swap(p.decay.gamma_opt[0], p.decay.gamma_opt[2]);
    return p;
}

/// Lambda system obtained by removing the control field. The |4> -> |3>
/// branching is redistributed over |1> and |2> in proportion so population
/// is not trapped in the decoupled level.
inline SystemParams lambda_reference(SystemParams p)
{
    p.omega_a = 0.0;
    p.delta_a = 0.0;
    auto& b = p.decay.branching;
    const double kept = b[0] + b[1];
    if (kept > 0.0) {
        b = {b[0] / kept, b[1] / kept, 0.0};
    } else {
        b = {0.5, 0.5, 0.0};
    }
    return p;
}

struct Decomposition
{
    SpectrumSeries tripod;   ///< A
    SpectrumSeries lambda_c; ///< B: Lambda system detuned by delta_c
    SpectrumSeries lambda_a; ///< C: Lambda system detuned by delta_A
    SpectrumSeries average;  ///< pointwise mean of B and C
};

/// Tests whether the tripod spectrum is just the mean of two independent,
/// oppositely detuned Lambda systems.
inline Decomposition decomposition_compare(const SystemParams& tripod, const std::vector<double>& dp_axis,
                                           const SweepOptions& opt = {})
{
    const double scale = std::max({1.0, std::abs(tripod.delta_c), std::abs(tripod.delta_a)});
    if (std::abs(tripod.delta_c + tripod.delta_a) > 1e-12 * scale || tripod.delta_c == 0.0)
        throw PreconditionError("decomposition needs delta_c = -delta_A != 0");
    Decomposition d;
    d.tripod = probe_sweep(tripod, dp_axis, opt);
    d.lambda_c = probe_sweep(lambda_reference(tripod), dp_axis, opt);
    d.lambda_a = probe_sweep(lambda_reference(swap_coupling_and_control(tripod)), dp_axis, opt);
    d.average = make_series(dp_axis);
    d.average.max_residual = std::max(d.lambda_c.max_residual, d.lambda_a.max_residual);
    for (std::size_t c = 0; c < d.average.columns.size(); ++c)
        for (std::size_t i = 0; i < dp_axis.size(); ++i)
            d.average.columns[c].values[i] =
                0.5 * (d.lambda_c.columns[c].values[i] + d.lambda_a.columns[c].values[i]);
    return d;
}

// ---------------------------------------------------------------------------
// Spectral features
// ---------------------------------------------------------------------------

enum class FeatureKind { Dark, Bright };

struct SpectralFeature
{
    FeatureKind kind;
    double position = 0.0;      ///< kHz, sub-grid refined
    double value = 0.0;         ///< refined extremum value
    std::optional<double> fwhm; ///< kHz, bright features only
    std::size_t index = 0;      ///< grid index of the extremum
};

namespace detail {

struct Vertex
{
    double x;
    double y;
};

// Vertex of the parabola through three points, clamped to their span.
inline Vertex parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2)
{
    const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    const double c = (x1 * x2 * (x1 - x2) * y0 + x2 * x0 * (x2 - x0) * y1 + x0 * x1 * (x0 - x1) * y2) / denom;
    if (a == 0.0 || !std::isfinite(a))
        return {x1, y1};
    double xv = -b / (2.0 * a);
    xv = std::clamp(xv, x0, x2);
    return {xv, (a * xv + b) * xv + c};
}

// Width of the peak at index i, measured at half its prominence above the
// higher of the two minima reached by walking downhill on each side.
inline double half_prominence_width(const std::vector<double>& x, const std::vector<double>& y, std::size_t i,
                                    double peak)
{
    std::size_t l = i;
    while (l > 0 && y[l - 1] <= y[l])
        --l;
    std::size_t r = i;
    while (r + 1 < y.size() && y[r + 1] <= y[r])
        ++r;
    const double base = std::max(y[l], y[r]);
    const double level = peak - 0.5 * (peak - base);

    std::size_t a = i;
    while (a > l && y[a] > level)
        --a;
    std::size_t b = i;
    while (b < r && y[b] > level)
        ++b;
    auto cross = [&](std::size_t lo, std::size_t hi) {
        const double t = (level - y[lo]) / (y[hi] - y[lo]);
        return x[lo] + t * (x[hi] - x[lo]);
    };
    const double left = (y[a] > level) ? x[a] : cross(a, a + 1);
    const double right = (y[b] > level) ? x[b] : cross(b - 1, b);
    return right - left;
}

} // namespace detail

/// Local maxima (bright) and minima (dark) by three-point comparison, refined
/// with a parabola through the neighbours. Bright features get a FWHM at half
/// prominence.
inline std::vector<SpectralFeature> find_features(const std::vector<double>& axis, const std::vector<double>& values)
{
    if (axis.size() != values.size())
        throw PreconditionError("axis and values differ in length");
    if (axis.size() < 5)
        throw PreconditionError("feature search needs at least 5 points");
    std::vector<SpectralFeature> out;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        const double prev = values[i - 1], cur = values[i], next = values[i + 1];
        const bool is_max = cur > prev && cur >= next;
        const bool is_min = cur < prev && cur <= next;
        if (!is_max && !is_min)
            continue;
        const auto v = detail::parabola_vertex(axis[i - 1], prev, axis[i], cur, axis[i + 1], next);
        SpectralFeature f{is_max ? FeatureKind::Bright : FeatureKind::Dark, v.x, v.y, std::nullopt, i};
        if (is_max)
            f.fwhm = detail::half_prominence_width(axis, values, i, v.y);
        out.push_back(f);
    }
    if (out.empty())
        throw NoFeatures("series is monotone; no local extrema");
    return out;
}

inline std::vector<SpectralFeature> find_features(const SpectrumSeries& s)
{
    return find_features(s.axis, s.column("im_rho24"));
}

/// Feature of the given kind closest to `position`, if any.
inline std::optional<SpectralFeature> nearest_feature(const std::vector<SpectralFeature>& fs, FeatureKind kind,
                                                      double position)
{
    std::optional<SpectralFeature> best;
    for (const auto& f : fs)
        if (f.kind == kind && (!best || std::abs(f.position - position) < std::abs(best->position - position)))
            best = f;
    return best;
}

// ---------------------------------------------------------------------------
// Switching contrast
// ---------------------------------------------------------------------------

struct ContrastResult
{
    double value = 0.0;       ///< on / off, or +inf when the guard trips
    double on = 0.0;          ///< Im rho_24 with the control on, at the central feature
    double off = 0.0;         ///< Im rho_24 of the resonant Lambda reference at line centre
    double on_delta_p = 0.0;  ///< where `on` was evaluated, kHz
    bool division_guard = false;
};

inline double probe_absorption(SystemParams p, double delta_p)
{
    p.delta_p = delta_p;
    return coherence(steady_state(p), 2, 4).imag();
}

/// Probe detuning of the central bright feature between the two dark
/// resonances at delta_p = delta_c and delta_p = delta_A. Falls back to line
/// centre when there is no interior maximum.
inline double central_feature_position(const SystemParams& p)
{
    const double lo = std::min(p.delta_c, p.delta_a);
    const double hi = std::max(p.delta_c, p.delta_a);
    if (p.omega_a == 0.0 || !(hi > lo))
        return 0.0;
    constexpr int kSamples = 41;
    const auto xs = linspace(lo, hi, kSamples);
    std::vector<double> ys(kSamples);
    for (int i = 0; i < kSamples; ++i)
        ys[i] = probe_absorption(p, xs[i]);
    const auto it = std::max_element(ys.begin() + 1, ys.end() - 1);
    const auto k = static_cast<std::size_t>(it - ys.begin());
    if (!(ys[k] > ys[0] && ys[k] > ys[kSamples - 1]))
        return 0.0;
    // Golden-section refinement inside the bracketing grid cell pair.
    double a = xs[k - 1], b = xs[k + 1];
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = probe_absorption(p, c), fd = probe_absorption(p, d);
    for (int iter = 0; iter < 60 && (b - a) > 1e-10 * (1.0 + std::abs(a)); ++iter) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = probe_absorption(p, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = probe_absorption(p, d);
        }
    }
    return 0.5 * (a + b);
}

/// Absorption switched on by the control field: tripod absorption at its
/// central bright feature divided by the line-centre absorption of the
/// resonant Lambda reference (control removed, coupling detuning zero).
inline ContrastResult switching_contrast(const SystemParams& params)
{
    validate(params);
    const double scale = std::max({1.0, std::abs(params.delta_c), std::abs(params.delta_a)});
    if (std::abs(params.delta_c + params.delta_a) > 1e-12 * scale)
        throw PreconditionError("switching contrast needs delta_c = -delta_A");
    ContrastResult r;
    r.on_delta_p = central_feature_position(params);
    r.on = probe_absorption(params, r.on_delta_p);
    SystemParams off = lambda_reference(params);
    off.delta_c = 0.0;
    r.off = probe_absorption(off, 0.0);
    if (std::abs(r.off) < 1e-15) {
        r.division_guard = true;
        r.value = std::numeric_limits<double>::infinity();
    } else {
        r.value = r.on / r.off;
    }
    return r;
}

} // namespace tripod
