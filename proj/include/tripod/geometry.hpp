#pragma once

// Stripe-geometry calibration and the catalog of named figure scenarios.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tripod/spectra.hpp"

namespace tripod {

// ---------------------------------------------------------------------------
// Stripe layout and length -> detuning calibration
// ---------------------------------------------------------------------------

/// Metamaterial unit cell, all lengths in nm. Only L, L1 and L2 enter the
/// model; the rest is kept for provenance.
struct StripeLayout
{
    double a = 60.0;
    double b = 160.0;
    double l = 118.0;  ///< reference stripe length
    double d = 40.0;
    double w = 30.0;
    double s = 30.0;
    double thickness = 20.0;
    double l1 = 118.0; ///< coupling-side parallel stripes
    double l2 = 118.0; ///< control-side parallel stripes
};

inline void validate(const StripeLayout& g)
{
    for (double v : {g.a, g.b, g.l, g.d, g.w, g.s, g.thickness, g.l1, g.l2})
        if (!(v > 0.0) || !std::isfinite(v))
            throw InvalidParams("stripe lengths must be positive");
}

/// Monotone piecewise-linear map from stripe-length change (nm) to detuning
/// (units of Omega_c). Longer stripes red-shift the resonance, so detuning
/// decreases strictly with length.
struct CalibrationTable
{
    std::vector<std::pair<double, double>> anchors; ///< (delta_L nm, detuning / Omega_c)
};

inline void validate(const CalibrationTable& c)
{
    if (c.anchors.size() < 2)
        throw InvalidParams("calibration needs at least two anchors");
    for (std::size_t i = 1; i < c.anchors.size(); ++i) {
        if (!(c.anchors[i].first > c.anchors[i - 1].first))
            throw InvalidParams("calibration anchors must be strictly increasing in length");
        if (!(c.anchors[i].second < c.anchors[i - 1].second))
            throw InvalidParams("calibration detuning must be strictly decreasing in length");
    }
}

/// Anchors at -8 nm -> +3/8 and +4 nm -> -0.3, the zero baseline, and their
/// odd-symmetric partners at +8 nm and -4 nm.
inline CalibrationTable default_calibration()
{
    return CalibrationTable{{{-8.0, 0.375}, {-4.0, 0.3}, {0.0, 0.0}, {4.0, -0.3}, {8.0, -0.375}}};
}

namespace detail {

inline double lerp_through(double x, double x0, double y0, double x1, double y1)
{
    if (x == x0)
        return y0;
    if (x == x1)
        return y1;
    return y0 + (x - x0) / (x1 - x0) * (y1 - y0);
}

} // namespace detail

/// Piecewise-linear interpolation with linear extrapolation past the ends.
inline double length_to_detuning(const CalibrationTable& c, double delta_l)
{
    validate(c);
    const auto& a = c.anchors;
    std::size_t k = 0;
    while (k + 2 < a.size() && delta_l > a[k + 1].first)
        ++k;
    return detail::lerp_through(delta_l, a[k].first, a[k].second, a[k + 1].first, a[k + 1].second);
}

/// Inverse of length_to_detuning on the same interpolant.
inline double detuning_to_length(const CalibrationTable& c, double detuning)
{
    validate(c);
    const auto& a = c.anchors;
    std::size_t k = 0;
    while (k + 2 < a.size() && detuning < a[k + 1].second)
        ++k;
    return detail::lerp_through(detuning, a[k].second, a[k].first, a[k + 1].second, a[k + 1].first);
}

/// delta_c from L1 - L and delta_A from L2 - L, in kHz via base.omega_c.
inline SystemParams layout_to_params(const StripeLayout& layout, const SystemParams& base,
                                     const CalibrationTable& calib = default_calibration())
{
    validate(layout);
    SystemParams p = base;
    p.delta_c = length_to_detuning(calib, layout.l1 - layout.l) * base.omega_c;
    p.delta_a = length_to_detuning(calib, layout.l2 - layout.l) * base.omega_c;
    return p;
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

struct SweepAxis
{
    double min = 0.0;
    double max = 0.0;
    std::size_t points = 0;

    std::vector<double> values() const { return linspace(min, max, points); }
};

enum class Source { Paper, Default };

struct FieldSource
{
    std::string key;
    Source source;
};

struct Scenario
{
    std::string name;
    std::string description;
    std::string command; ///< natural CLI command for this scenario
    SystemParams params;
    SweepAxis dp_axis;
    std::optional<SweepAxis> d_axis; ///< symmetric-detuning axis for maps
    std::optional<StripeLayout> layout;
    std::vector<FieldSource> provenance;

    std::size_t paper_field_count() const
    {
        return static_cast<std::size_t>(std::count_if(provenance.begin(), provenance.end(),
                                                      [](const FieldSource& f) { return f.source == Source::Paper; }));
    }
    std::optional<Source> source_of(const std::string& key) const
    {
        for (const auto& f : provenance)
            if (f.key == key)
                return f.source;
        return std::nullopt;
    }
};

/// Every key that a scenario's provenance record covers.
inline const std::vector<std::string>& provenance_keys()
{
    static const std::vector<std::string> keys{
        "rabi.omega_c_khz",      "rabi.omega_p_khz",       "rabi.omega_a_khz",     "detuning.delta_c_khz",
        "detuning.delta_a_khz",  "decay.gamma0_khz",       "decay.gamma_opt_khz",  "decay.gamma_ground_khz",
        "decay.ground_mix_khz",  "decay.branching",        "sweep.dp_axis",
    };
    return keys;
}

inline const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names{
        "fig1-lambda", "fig1d-detuned", "fig2-tripod", "fig3-row1",  "fig3-row2",    "fig3-row3",
        "fig3-row4",   "fig3-row5",     "fig4ab-decomposition",      "fig4c-map",    "fig4d-traces",
    };
    return names;
}

/// Coupling Rabi frequency used as the kHz scale for every preset.
inline constexpr double kPresetOmegaC = 10.0;

/// Rates of the reference Lambda figure, in terms of Omega_c:
/// gamma_opt = Omega_c/4, gamma_ground = Omega_c/8 and, by default,
/// Gamma_0 = 2 (gamma_opt - gamma_ground).
inline DecayModel reference_lambda_decay(double omega_c)
{
    DecayModel d;
    const double g_opt = omega_c / 4.0;
    d.gamma_opt = DecayModel::uniform(g_opt);
    d.gamma_ground = omega_c / 8.0;
    d.gamma_pop = 2.0 * (g_opt - d.gamma_ground);
    d.ground_mix = 0.0;
    return d;
}

/// Broad-line tripod rates. gamma_ground defaults to 0 and ground_mix to
/// Gamma_0/30, which keeps the stationary state unique and relaxes ground
/// populations on the same clock as the excited state.
inline DecayModel broad_line_decay(double gamma0, double gamma_opt)
{
    DecayModel d;
    d.gamma_pop = gamma0;
    d.gamma_opt = DecayModel::uniform(gamma_opt);
    d.gamma_ground = 0.0;
    d.ground_mix = gamma0 / 30.0;
    return d;
}

namespace detail {

struct ProvenanceBuilder
{
    std::vector<FieldSource> fields;

    explicit ProvenanceBuilder(std::initializer_list<std::string> paper_keys)
    {
        for (const auto& k : provenance_keys()) {
            const bool paper = std::find(paper_keys.begin(), paper_keys.end(), k) != paper_keys.end();
            fields.push_back({k, paper ? Source::Paper : Source::Default});
        }
    }
};

inline Scenario reference_lambda_scenario(std::string name, std::string description, double delta_c,
                                          double l1_change)
{
    Scenario s;
    s.name = std::move(name);
    s.description = std::move(description);
    s.command = "spectrum";
    s.params.omega_c = kPresetOmegaC;
    s.params.omega_p = kPresetOmegaC / 20.0;
    s.params.omega_a = 0.0;
    s.params.delta_c = delta_c;
    s.params.decay = reference_lambda_decay(kPresetOmegaC);
    s.params.decay.branching = {0.5, 0.5, 0.0};
    s.dp_axis = {-3.0 * kPresetOmegaC, 3.0 * kPresetOmegaC, 401};
    StripeLayout layout;
    layout.l1 = layout.l + l1_change;
    s.layout = layout;
    s.provenance = ProvenanceBuilder({"rabi.omega_p_khz", "rabi.omega_a_khz", "detuning.delta_c_khz",
                                      "decay.gamma_opt_khz", "decay.gamma_ground_khz"})
                       .fields;
    return s;
}

// Tripod on the reference rates; detunings from the calibration unless the
// figure states them (stated_keys).
inline Scenario reference_tripod_scenario(std::string name, std::string description, double l1_change,
                                          double l2_change, std::optional<std::pair<double, double>> stated)
{
    Scenario s;
    s.name = std::move(name);
    s.description = std::move(description);
    s.command = "spectrum";
    s.params.omega_c = kPresetOmegaC;
    s.params.omega_p = kPresetOmegaC / 20.0;
    s.params.omega_a = kPresetOmegaC;
    s.params.decay = reference_lambda_decay(kPresetOmegaC);
    s.dp_axis = {-3.0 * kPresetOmegaC, 3.0 * kPresetOmegaC, 401};
    StripeLayout layout;
    layout.l1 = layout.l + l1_change;
    layout.l2 = layout.l + l2_change;
    s.layout = layout;
    if (stated) {
        s.params.delta_c = stated->first * kPresetOmegaC;
        s.params.delta_a = stated->second * kPresetOmegaC;
        s.provenance = ProvenanceBuilder({"rabi.omega_p_khz", "rabi.omega_a_khz", "detuning.delta_c_khz",
                                          "detuning.delta_a_khz", "decay.gamma_opt_khz", "decay.gamma_ground_khz"})
                           .fields;
    } else {
        s.params = layout_to_params(layout, s.params);
        s.provenance = ProvenanceBuilder({"rabi.omega_p_khz", "rabi.omega_a_khz", "decay.gamma_opt_khz",
                                          "decay.gamma_ground_khz"})
                           .fields;
    }
    return s;
}

inline Scenario broad_line_scenario(std::string name, std::string description, double delta)
{
    Scenario s;
    s.name = std::move(name);
    s.description = std::move(description);
    s.params.omega_c = 10.0;
    s.params.omega_a = 10.0;
    s.params.omega_p = 1.0;
    s.params.delta_c = delta;
    s.params.delta_a = -delta;
    s.params.decay = broad_line_decay(6.0, 30.0);
    s.dp_axis = {-3.0 * s.params.omega_c, 3.0 * s.params.omega_c, 401};
    return s;
}

} // namespace detail

/// Fully resolved scenario for a catalog name; throws UnknownPreset.
inline Scenario preset(const std::string& name)
{
    using detail::ProvenanceBuilder;
    if (name == "fig1-lambda")
        return detail::reference_lambda_scenario(name, "Lambda EIT reference, resonant coupling", 0.0, 0.0);
    if (name == "fig1d-detuned")
        return detail::reference_lambda_scenario(name, "Lambda EIT with coupling detuning 3/8 Omega_c (L0 = L - 8 nm)",
                                                 0.375 * kPresetOmegaC, -8.0);
    if (name == "fig2-tripod")
        return detail::reference_tripod_scenario(name, "tripod, L1 = L - 6 nm, L2 = L + 6 nm", -6.0, 6.0, std::nullopt);
    if (name == "fig3-row1")
        return detail::reference_tripod_scenario(name, "degenerate tripod, L1 = L2 = L", 0.0, 0.0,
                                                 std::pair{0.0, 0.0});
    if (name == "fig3-row2")
        return detail::reference_tripod_scenario(name, "tripod, L1 = L, L2 = L + 4 nm", 0.0, 4.0,
                                                 std::pair{0.0, -0.3});
    if (name == "fig3-row3")
        return detail::reference_tripod_scenario(name, "tripod, L1 = L - 4 nm, L2 = L + 4 nm", -4.0, 4.0,
                                                 std::pair{0.3, -0.3});
    if (name == "fig3-row4")
        return detail::reference_tripod_scenario(name, "tripod, L1 = L - 8 nm, L2 = L + 8 nm", -8.0, 8.0,
                                                 std::nullopt);
    if (name == "fig3-row5")
        return detail::reference_tripod_scenario(name, "tripod, L1 = L - 12 nm, L2 = L + 12 nm", -12.0, 12.0,
                                                 std::nullopt);
    if (name == "fig4ab-decomposition") {
        Scenario s = detail::reference_tripod_scenario(name, "tripod vs two detuned Lambda systems, L1 = 114 nm, "
                                                             "L2 = 122 nm",
                                                       -4.0, 4.0, std::nullopt);
        s.command = "decompose";
        return s;
    }
    if (name == "fig4c-map") {
        Scenario s = detail::broad_line_scenario(name, "probe absorption over (delta, delta_p), broad optical line",
                                                 0.0);
        s.command = "map2d";
        s.dp_axis = {-30.0, 30.0, 301};
        s.d_axis = SweepAxis{-10.0, 10.0, 201};
        s.provenance = ProvenanceBuilder({"rabi.omega_c_khz", "rabi.omega_p_khz", "rabi.omega_a_khz",
                                          "decay.gamma0_khz", "decay.gamma_opt_khz"})
                           .fields;
        return s;
    }
    if (name == "fig4d-traces") {
        Scenario s = detail::broad_line_scenario(name, "coherence traces, delta_c = -delta_A = 2 kHz", 2.0);
        s.command = "traces";
        s.provenance = ProvenanceBuilder({"rabi.omega_c_khz", "rabi.omega_p_khz", "rabi.omega_a_khz",
                                          "detuning.delta_c_khz", "detuning.delta_a_khz", "decay.gamma0_khz",
                                          "decay.gamma_opt_khz"})
                           .fields;
        return s;
    }
    throw UnknownPreset("no preset named '" + name + "'");
}

} // namespace tripod
